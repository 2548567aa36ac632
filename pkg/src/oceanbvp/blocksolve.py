"""Newton iteration for two-point-coupled nonlinear block systems.

Both relaxation discretizations lead to residuals of the same shape: one
m-vector of unknowns per node j = 0..J, interior equation j coupling only
the nodes j-1 and j, plus m boundary rows coupling node 0 and node J.  The
Newton linear systems are solved in O(J m^3) by a forward block
elimination that carries the node-J coupling as a bordered column, so the
boundary rows may mix both ends (cyclic border) at no extra cost.
"""

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-13


class SingularJacobian(Exception):
    def __init__(self, where, pivot):
        super().__init__(f"pivot {pivot:.3g} below {PIVOT_TOL:g} "
                         f"while eliminating node {where}")


class NewtonMaxIterations(Exception):
    def __init__(self, limit, update_norm):
        super().__init__(f"no convergence in {limit} Newton iterations "
                         f"(last mean update {update_norm:.3g})")
        self.update_norm = update_norm


@dataclass(frozen=True)
class BlockSystem:
    """Nonlinear system in (J+1) nodes of m unknowns each.

    residual(V) -> (interior (J, m), boundary (m,)) for V of shape (J+1, m);
    jacobian(V) -> (L, R, A, C) where interior equation j (1-based) has
    blocks L[j-1] on node j-1 and R[j-1] on node j, and the boundary rows
    are A on node 0 plus C on node J.
    """

    J: int
    m: int
    residual: callable
    jacobian: callable


@dataclass
class NewtonReport:
    iterations: int
    final_update_norm: float
    converged: bool


def _eliminate(W, ncols, where):
    """In-place Gaussian elimination of the first ncols columns of W with
    partial pivoting; leaves an upper-triangular leading block."""
    for c in range(ncols):
        p = c + np.argmax(np.abs(W[c:, c]))
        if abs(W[p, c]) < PIVOT_TOL:
            raise SingularJacobian(where, abs(W[p, c]))
        if p != c:
            W[[c, p]] = W[[p, c]]
        factors = W[c + 1:, c] / W[c, c]
        W[c + 1:] -= factors[:, None] * W[c][None, :]
    return W


def solve_bordered_block(L, R, A, C, interior_rhs, boundary_rhs):
    """Solve the block linear system

        A x_0 + C x_J = boundary_rhs
        L[j-1] x_{j-1} + R[j-1] x_j = interior_rhs[j-1],   j = 1..J

    for x of shape (J+1, m).  Columns of each elimination window are laid
    out as [x_j | x_{j+1} | x_J | rhs]; the x_J block is the border that
    absorbs both the boundary rows' far coupling and the last interior
    equation.
    """
    J, m, _ = L.shape
    zeros = np.zeros((m, m))
    carry = np.hstack([A, zeros, C, np.asarray(boundary_rhs, float)[:, None]])
    saved = []
    for j in range(1, J + 1):
        if j < J:
            rows = np.hstack([L[j - 1], R[j - 1], zeros,
                              interior_rhs[j - 1][:, None]])
        else:
            rows = np.hstack([L[j - 1], zeros, R[j - 1],
                              interior_rhs[j - 1][:, None]])
        W = _eliminate(np.vstack([carry, rows]), m, j - 1)
        saved.append(W[:m])
        carry = np.hstack([W[m:, m:2 * m], zeros, W[m:, 2 * m:]])
    # Remaining rows involve the border only.
    tail = _eliminate(carry[:, 2 * m:].copy(), m, J)
    x = np.empty((J + 1, m))
    x[J] = _back_substitute(tail[:, :m], tail[:, m])
    for j in range(J - 1, -1, -1):
        W = saved[j]
        rhs = W[:, 3 * m] - W[:, 2 * m:3 * m] @ x[J]
        if j < J - 1:
            rhs -= W[:, m:2 * m] @ x[j + 1]
        x[j] = _back_substitute(W[:, :m], rhs)
    return x


def _back_substitute(U, rhs):
    out = np.empty(len(rhs))
    for c in range(len(rhs) - 1, -1, -1):
        out[c] = (rhs[c] - U[c, c + 1:] @ out[c + 1:]) / U[c, c]
    return out


def newton_solve(sys, v0, tol, max_iter=100, iterate_check=None):
    """Full-step Newton on a BlockSystem; stops on the mean absolute
    update criterion  mean|dV| <= tol.

    The iteration count equals the number of linear solves performed.
    ``iterate_check`` (if given) is called with each new iterate and may
    raise to abort, e.g. when an iterate leaves the admissible region.
    """
    V = np.array(v0, dtype=float)
    if V.shape != (sys.J + 1, sys.m):
        raise ValueError(f"iterate shape {V.shape} != {(sys.J + 1, sys.m)}")
    update_norm = np.inf
    for it in range(1, max_iter + 1):
        interior, boundary = sys.residual(V)
        L, R, A, C = sys.jacobian(V)
        dV = solve_bordered_block(L, R, A, C, -interior, -boundary)
        V = V + dV
        if iterate_check is not None:
            iterate_check(V)
        update_norm = np.mean(np.abs(dV))
        if update_norm <= tol:
            return V, NewtonReport(iterations=it,
                                   final_update_norm=update_norm,
                                   converged=True)
    raise NewtonMaxIterations(max_iter, update_norm)


def full_residual(sys, V):
    """Residual as one flat vector: J*m interior rows then m boundary rows."""
    interior, boundary = sys.residual(V)
    return np.concatenate([interior.ravel(), boundary])


def dense_jacobian_from_blocks(L, R, A, C):
    """Assemble the dense matrix the blocks represent (small systems only)."""
    J, m, _ = L.shape
    n = (J + 1) * m
    M = np.zeros((n, n))
    for j in range(1, J + 1):
        r = (j - 1) * m
        M[r:r + m, (j - 1) * m:j * m] = L[j - 1]
        M[r:r + m, j * m:(j + 1) * m] = R[j - 1]
    M[J * m:, :m] = A
    M[J * m:, J * m:] = C
    return M


def check_jacobian(sys, V, step=1e-6):
    """Max discrepancy between the analytic Jacobian blocks and central
    finite differences of the residual, relative to max(1, |entry|)."""
    V = np.asarray(V, float)
    dense = dense_jacobian_from_blocks(*sys.jacobian(V))
    flat = V.ravel()
    fd = np.empty_like(dense)
    for i in range(flat.size):
        h = step * max(1.0, abs(flat[i]))
        vp = flat.copy()
        vp[i] += h
        vm = flat.copy()
        vm[i] -= h
        shape = V.shape
        fd[:, i] = (full_residual(sys, vp.reshape(shape))
                    - full_residual(sys, vm.reshape(shape))) / (2 * h)
    return np.max(np.abs(dense - fd) / np.maximum(1.0, np.abs(dense)))
