"""Unrestarted complex GMRES with full orthogonalization."""

from dataclasses import dataclass, field

import numpy as np


class ConvergenceError(RuntimeError):
    """GMRES hit its iteration cap before reaching the tolerance."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"GMRES did not converge in {report.iterations} iterations "
            f"(relative residual {report.residuals[-1]:.3e})"
        )


@dataclass
class KrylovReport:
    iterations: int
    residuals: list = field(repr=False)
    solution: np.ndarray = field(repr=False)
    converged: bool = True
    breakdown: bool = False

    @property
    def relative_residual(self):
        return self.residuals[-1]


def _as_operator(apply):
    if callable(apply):
        return apply
    A = np.asarray(apply)
    return lambda v: A @ v


def gmres_solve(apply, rhs, tol=1e-8, maxiter=None, raise_on_failure=True):
    """Solve ``A x = rhs`` from ``x0 = 0`` by unrestarted GMRES.

    Parameters
    ----------
    apply : callable or array_like
        Matrix-vector product ``v -> A v``, or the matrix itself.
    rhs : array_like
        Nonzero right-hand side.
    tol : float
        Target relative residual ``||b - A x|| / ||b||``.
    maxiter : int, optional
        Iteration cap; defaults to the system dimension.

    Returns
    -------
    KrylovReport
        ``iterations`` is the Krylov dimension at convergence. ``residuals[j]``
        is the relative residual after ``j`` iterations.
    """
    matvec = _as_operator(apply)
    b = np.asarray(rhs, dtype=complex).ravel()
    dim = b.size
    beta = np.linalg.norm(b)
    if beta == 0:
        raise ValueError("right-hand side must be nonzero")
    maxiter = dim if maxiter is None else min(int(maxiter), dim)

    # storage grows geometrically with the Krylov dimension
    cap = min(maxiter, 64)
    V = np.empty((dim, cap + 1), dtype=complex)
    H = np.zeros((cap + 1, cap), dtype=complex)
    cs = np.zeros(cap)
    sn = np.zeros(cap, dtype=complex)
    g = np.zeros(cap + 1, dtype=complex)
    g[0] = beta
    V[:, 0] = b / beta
    residuals = [1.0]
    breakdown = False
    j = 0
    while j < maxiter:
        if j >= cap:
            grow = min(cap, maxiter - cap)
            V = np.concatenate([V, np.empty((dim, grow), dtype=complex)], axis=1)
            H = np.pad(H, ((0, grow), (0, grow)))
            cs, sn, g = np.pad(cs, (0, grow)), np.pad(sn, (0, grow)), np.pad(g, (0, grow))
            cap += grow
        w = matvec(V[:, j])
        # modified Gram-Schmidt, then one reorthogonalization pass
        for _ in range(2):
            for i in range(j + 1):
                c = np.vdot(V[:, i], w)
                H[i, j] += c
                w = w - c * V[:, i]
        h_next = np.linalg.norm(w)
        H[j + 1, j] = h_next
        for i in range(j):
            hi, hi1 = H[i, j], H[i + 1, j]
            H[i, j] = cs[i] * hi + sn[i] * hi1
            H[i + 1, j] = -np.conj(sn[i]) * hi + cs[i] * hi1
        a, bb = H[j, j], H[j + 1, j]
        denom = np.hypot(abs(a), abs(bb))
        if denom == 0:
            cs[j], sn[j] = 1.0, 0.0
        elif a == 0:
            cs[j], sn[j] = 0.0, 1.0
        else:
            cs[j] = abs(a) / denom
            sn[j] = (a / abs(a)) * np.conj(bb) / denom
        H[j, j] = cs[j] * a + sn[j] * bb
        H[j + 1, j] = 0.0
        g[j + 1] = -np.conj(sn[j]) * g[j]
        g[j] = cs[j] * g[j]
        j += 1
        residuals.append(abs(g[j]) / beta)
        if h_next <= 1e-14 * beta:
            breakdown = True
            break
        if residuals[-1] <= tol:
            break
        V[:, j] = w / h_next

    y = np.linalg.solve(np.triu(H[:j, :j]), g[:j])
    x = V[:, :j] @ y
    converged = residuals[-1] <= tol or breakdown
    report = KrylovReport(j, residuals, x, converged, breakdown)
    if not converged and raise_on_failure:
        raise ConvergenceError(report)
    return report
