"""Adaptive Bogacki-Shampine 3(2) initial-value integrator.

Explicit embedded pair with the FSAL property: three fresh right-hand-side
evaluations per attempted step, plus one start-up evaluation.  The step is
controlled on the third-order solution with an RMS error norm, safety 0.9
and step-factor clamp [0.2, 5].  Accounting (accepted/rejected steps,
evaluations) is reported so shooting costs can be compared.
"""

from dataclasses import dataclass, field

import numpy as np

OVERFLOW_LIMIT = 1e12

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 5.0


class IntegrationError(Exception):
    pass


class StepCountExceeded(IntegrationError):
    """Raised when the step budget is exhausted before reaching t_end."""

    def __init__(self, t, max_steps):
        super().__init__(f"step budget {max_steps} exhausted at t = {t:.6g}")
        self.t = t
        self.max_steps = max_steps


class Overflow(IntegrationError):
    """Raised when a state component exceeds OVERFLOW_LIMIT in magnitude.

    Signals divergence of a shooting trajectory before the floating-point
    range is actually exhausted.  ``beta`` is attached by the shooting
    layer when the offending initial condition is known.
    """

    def __init__(self, t, magnitude):
        super().__init__(f"state magnitude {magnitude:.3g} exceeds "
                         f"{OVERFLOW_LIMIT:.0e} at t = {t:.6g}")
        self.t = t
        self.magnitude = magnitude
        self.beta = None


@dataclass(frozen=True)
class IvpOptions:
    rel_tol: float = 1e-3
    abs_tol: float = 1e-6
    max_steps: int = 1_000_000
    initial_step: float = None

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class IvpStats:
    accepted_steps: int = 0
    rejected_steps: int = 0
    rhs_evaluations: int = 0

    def add(self, other):
        self.accepted_steps += other.accepted_steps
        self.rejected_steps += other.rejected_steps
        self.rhs_evaluations += other.rhs_evaluations


def step_bs23(rhs, t, y, h, f_start=None):
    """One embedded BS23 step of size h from (t, y).

    Returns (second-order solution, third-order solution, new evaluations,
    final slope).  The final slope is f at the third-order solution and can
    be reused as ``f_start`` of the next step (FSAL); when ``f_start`` is
    omitted it is computed here, adding one evaluation.
    """
    nev = 0
    if f_start is None:
        f_start = rhs(t, y)
        nev += 1
    k1 = f_start
    k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1)
    k3 = rhs(t + 0.75 * h, y + (0.75 * h) * k2)
    y3 = y + h * ((2.0 / 9.0) * k1 + (1.0 / 3.0) * k2 + (4.0 / 9.0) * k3)
    k4 = rhs(t + h, y3)
    nev += 3
    y2 = y + h * ((7.0 / 24.0) * k1 + 0.25 * k2 + (1.0 / 3.0) * k3 + 0.125 * k4)
    return y2, y3, nev, k4


def _initial_step(y0, f0, t_span, opts):
    # One-evaluation heuristic: balance the scaled norms of y0 and f(y0).
    scale = opts.abs_tol + opts.rel_tol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    if d0 < 1e-10 or d1 < 1e-10:
        h = 1e-3 * t_span
    else:
        h = 0.01 * d0 / d1
    return min(h, t_span)


def integrate(rhs, t0, t_end, y0, opts=IvpOptions()):
    """Integrate y' = rhs(t, y) from t0 to t_end; returns (y(t_end), stats).

    Local error per step is held below abs_tol + rel_tol*|y| in the RMS
    norm; the third-order solution is propagated.
    """
    if not t_end > t0:
        raise ValueError("t_end must exceed t0")
    t = t0
    y = np.array(y0, dtype=float)
    stats = IvpStats()
    f = rhs(t, y)
    stats.rhs_evaluations += 1
    h = opts.initial_step or _initial_step(y, f, t_end - t0, opts)
    while t < t_end:
        if stats.accepted_steps + stats.rejected_steps >= opts.max_steps:
            raise StepCountExceeded(t, opts.max_steps)
        h = min(h, t_end - t)
        y2, y3, nev, k4 = step_bs23(rhs, t, y, h, f_start=f)
        stats.rhs_evaluations += nev
        err = y3 - y2
        scale = opts.abs_tol + opts.rel_tol * np.maximum(np.abs(y), np.abs(y3))
        enorm = np.sqrt(np.mean((err / scale) ** 2))
        if enorm <= 1.0:
            t += h
            y = y3
            f = k4
            stats.accepted_steps += 1
            mag = np.max(np.abs(y))
            if mag > OVERFLOW_LIMIT:
                raise Overflow(t, mag)
        else:
            stats.rejected_steps += 1
        factor = _SAFETY * enorm ** (-1.0 / 3.0) if enorm > 0 else _FAC_MAX
        h *= min(_FAC_MAX, max(_FAC_MIN, factor))
    return y, stats
