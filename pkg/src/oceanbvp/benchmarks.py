"""Published reference results for the b = 2 ocean model.

One table of target values and tolerances shared by the comparison CLI
command and the acceptance tests, so the two always agree on what counts
as a pass.  Shooting entries carry looser tolerances than the relaxation
entries because their iteration counts and costs depend on adaptive
integrator internals.
"""

from dataclasses import dataclass

from .model import BcKind


@dataclass(frozen=True)
class ReferenceRow:
    method: str            # shoot-secant | shoot-newton | fbf | qug
    kind: BcKind
    boundary_label: str    # "xi_inf = 10" | "xi_eps = ..." | "inf"
    grid_points: int       # 0 for shooting
    iterations: int
    iter_tol: int
    beta: float
    beta_tol: float


# Rows mirror the published comparison tables, in their printed order.
COMPARISON_ROWS = [
    ReferenceRow("shoot-secant", BcKind.NO_SLIP, "xi_inf = 10", 0, 12, 2,
                 0.826111, 5e-4),
    ReferenceRow("shoot-newton", BcKind.NO_SLIP, "xi_inf = 10", 0, 7, 2,
                 0.826111, 5e-4),
    ReferenceRow("fbf", BcKind.NO_SLIP, "xi_eps = 13.402219", 2000, 11, 1,
                 0.826142, 2e-5),
    ReferenceRow("fbf", BcKind.NO_SLIP, "xi_eps = 13.402251", 4000, 11, 1,
                 0.826140, 2e-5),
    ReferenceRow("qug", BcKind.NO_SLIP, "inf", 200, 5, 1, 0.826180, 2e-5),
    ReferenceRow("qug", BcKind.NO_SLIP, "inf", 400, 5, 1, 0.826150, 2e-5),
    ReferenceRow("shoot-secant", BcKind.SLIP, "xi_inf = 10", 0, 13, 2,
                 0.528885, 5e-4),
    ReferenceRow("shoot-newton", BcKind.SLIP, "xi_inf = 10", 0, 8, 2,
                 0.528910, 5e-4),
    ReferenceRow("fbf", BcKind.SLIP, "xi_eps = 12.741323", 2000, 11, 1,
                 0.528921, 2e-5),
    ReferenceRow("fbf", BcKind.SLIP, "xi_eps = 12.741353", 4000, 11, 1,
                 0.528921, 2e-5),
    ReferenceRow("qug", BcKind.SLIP, "inf", 200, 4, 1, 0.528927, 2e-5),
    ReferenceRow("qug", BcKind.SLIP, "inf", 400, 4, 1, 0.528922, 2e-5),
]

# Free-boundary runs at J = 2000: eps -> (xi_eps, iterations, beta).
FBF_TABLE = {
    BcKind.NO_SLIP: {
        1e-2: (6.485761, 7, 0.826184),
        1e-3: (8.792991, 8, 0.826141),
        1e-4: (11.098635, 10, 0.826141),
        1e-5: (13.402219, 11, 0.826142),
    },
    BcKind.SLIP: {
        1e-2: (5.828307, 7, 0.528970),
        1e-3: (8.132813, 8, 0.528922),
        1e-4: (10.437875, 9, 0.528921),
        1e-5: (12.741323, 11, 0.528921),
    },
}
FBF_XI_TOL = 1e-4
FBF_BETA_TOL = 2e-5

# Shooting seeds and cumulative RHS-evaluation counts (order of magnitude
# comparison only; counts depend on the adaptive step sequence).
SHOOTING_SEEDS = {
    ("shoot-secant", BcKind.NO_SLIP): (1.0, 2.0),
    ("shoot-secant", BcKind.SLIP): (0.8, 1.0),
    ("shoot-newton", BcKind.NO_SLIP): (1.0, None),
    ("shoot-newton", BcKind.SLIP): (0.8, None),
}
SHOOTING_EVALUATIONS = {
    ("shoot-secant", BcKind.NO_SLIP): 327771,
    ("shoot-newton", BcKind.NO_SLIP): 4711,
    ("shoot-secant", BcKind.SLIP): 86020,
    ("shoot-newton", BcKind.SLIP): 19139,
}

# Closed-form approximations of beta at b = 2, quoted in the captions.
APPROX_BETA = {BcKind.NO_SLIP: 0.828336, BcKind.SLIP: 0.530662}
APPROX_BETA_TOL = 5e-7
