"""Separation-of-variables solution for plane-wave transmission by a disk.

Exterior scattered field ``sum_m c_m H_m(k1 r) e^{i m theta}``, interior
field ``sum_m d_m J_m(k2 r) e^{i m theta}``, incident coefficients
``a_m = i^|m| e^{-i m theta_d}`` (all radial factors use order
``|m|``). The transmission conditions are

    a_m J_m(k1 R) + c_m H_m(k1 R) = d_m J_m(k2 R),
    k1 (a_m J_m'(k1 R) + c_m H_m'(k1 R)) = nu k2 d_m J_m'(k2 R).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .postprocess import FarField, default_directions

TAIL_TOL = 1e-16


class MieError(ValueError):
    pass


@dataclass(frozen=True)
class MieSolution:
    radius: float
    k1: float
    k2: float
    nu: float
    direction: np.ndarray
    orders: np.ndarray = field(repr=False)
    scattered: np.ndarray = field(repr=False)
    interior: np.ndarray = field(repr=False)
    condition: np.ndarray = field(repr=False)

    @property
    def truncation(self):
        return int(self.orders.max())

    def incident(self):
        theta_d = np.arctan2(self.direction[1], self.direction[0])
        return (1j) ** np.abs(self.orders) * np.exp(-1j * self.orders * theta_d)


def _mode_system(m, k1, k2, nu, R):
    m = np.abs(m)
    J1, dJ1 = special.jv(m, k1 * R), special.jvp(m, k1 * R)
    H1, dH1 = special.hankel1(m, k1 * R), special.h1vp(m, k1 * R)
    J2, dJ2 = special.jv(m, k2 * R), special.jvp(m, k2 * R)
    return J1, dJ1, H1, dH1, J2, dJ2


def mie_solve(radius=1.0, config=None, *, k1=None, k2=None, nu=None, direction=None, max_order=None):
    """Per-mode transmission coefficients for a disk of given radius.

    Either pass a :class:`~transmission_bie.formulations.TransmissionConfig`
    (its geometry must be ``"circle"``) or the keywords ``k1, k2, nu, direction``.
    The truncation order grows until ``|c_M| / max |c_m| < 1e-16``.
    """
    if config is not None:
        if config.geometry != "circle":
            raise MieError("the series solution is only available for the circle")
        k1, k2, nu = config.k1, config.k2, config.nu
        direction = config.incident_direction if direction is None else direction
    if k1 is None or k2 is None:
        raise MieError("wavenumbers are required")
    nu = 1.0 if nu is None else float(nu)
    direction = np.asarray((1.0, 0.0) if direction is None else direction, dtype=float)
    R = float(radius)
    if R <= 0:
        raise MieError("radius must be positive")

    if max_order is None:
        M = int(np.ceil(max(k1, k2) * R)) + 20
        while True:
            sol = _solve_orders(M, R, k1, k2, nu, direction)
            c = np.abs(sol.scattered)
            peak = c.max()
            if peak == 0 or c[[0, -1]].max() <= TAIL_TOL * peak or M > 4000:
                return sol
            M += 20
    return _solve_orders(int(max_order), R, k1, k2, nu, direction)


def _solve_orders(M, R, k1, k2, nu, direction):
    m = np.arange(-M, M + 1)
    J1, dJ1, H1, dH1, J2, dJ2 = _mode_system(m, k1, k2, nu, R)
    theta_d = np.arctan2(direction[1], direction[0])
    a = (1j) ** np.abs(m) * np.exp(-1j * m * theta_d)
    # Cramer's rule on [[H1, -J2], [k1 H1', -nu k2 J2']] [c, d] = -a [J1, k1 J1']
    det = -nu * k2 * H1 * dJ2 + k1 * dH1 * J2
    if np.any(det == 0):
        raise MieError("singular mode system")
    c = a * (nu * k2 * J1 * dJ2 - k1 * dJ1 * J2) / det
    d = a * k1 * (dH1 * J1 - H1 * dJ1) / det
    # 2x2 condition numbers of the column-scaled mode matrices
    cond = np.empty(m.size)
    for i in range(m.size):
        A = np.array([[1.0, -1.0], [k1 * dH1[i] / H1[i], -nu * k2 * dJ2[i] / J2[i] if J2[i] != 0 else -1.0]])
        cond[i] = np.linalg.cond(A)
    c = np.where(np.isfinite(c), c, 0)
    d = np.where(np.isfinite(d), d, 0)
    return MieSolution(R, k1, k2, nu, direction, m, c, d, cond)


def mie_far_field(sol, directions=None):
    """Far-field amplitude ``sqrt(2/(pi k1)) e^{-i pi/4} sum_m c_m (-i)^|m| e^{i m theta}``."""
    if directions is None:
        directions = default_directions()
    directions = np.asarray(directions, dtype=float)
    theta = np.arctan2(directions[1], directions[0])
    m = sol.orders
    coef = sol.scattered * (-1j) ** np.abs(m)
    amp = np.sqrt(2 / (np.pi * sol.k1)) * np.exp(-0.25j * np.pi) * (np.exp(1j * np.outer(theta, m)) @ coef)
    return FarField(directions, amp)


def mie_near_field(sol, points, total=True):
    """Field at ``points`` (shape ``(2, p)``); exterior values include the incident wave if ``total``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.hypot(points[0], points[1])
    theta = np.arctan2(points[1], points[0])
    m = sol.orders
    out = np.empty(r.size, dtype=complex)
    inside = r < sol.radius
    E = np.exp(1j * np.outer(theta, m))
    if inside.any():
        J2 = special.jv(np.abs(m)[None, :], sol.k2 * r[inside, None])
        out[inside] = ((J2 * E[inside]) @ sol.interior)
    ext = ~inside
    if ext.any():
        H1 = special.hankel1(np.abs(m)[None, :], sol.k1 * r[ext, None])
        out[ext] = (H1 * E[ext]) @ sol.scattered
        if total:
            out[ext] += np.exp(1j * sol.k1 * (sol.direction @ points[:, ext]))
    return out


def optical_theorem_residual(sol, quad_points=2048):
    """``|int |u_inf|^2 - (-2 sqrt(2 pi / k1) Re(e^{i pi/4} u_inf(d)))|`` for real wavenumbers."""
    theta = 2 * np.pi * np.arange(quad_points) / quad_points
    ff = mie_far_field(sol, np.array([np.cos(theta), np.sin(theta)]))
    sigma = 2 * np.pi * np.mean(np.abs(ff.amplitudes) ** 2)
    fwd = mie_far_field(sol, sol.direction[:, None]).amplitudes[0]
    return abs(sigma + 2 * np.sqrt(2 * np.pi / sol.k1) * np.real(np.exp(0.25j * np.pi) * fwd))


def trace_residual(sol, count=256):
    """Max mismatch of both transmission conditions at ``count`` angles on ``r = R``.

    Returns ``(value residual, flux residual)``, each relative to the
    incident-wave scale (1 and ``k1``).
    """
    theta = 2 * np.pi * np.arange(count) / count
    m = sol.orders
    R = sol.radius
    J1, dJ1, H1, dH1, J2, dJ2 = _mode_system(m, sol.k1, sol.k2, sol.nu, R)
    a = sol.incident()
    E = np.exp(1j * np.outer(theta, m))
    outer = E @ (a * J1 + sol.scattered * H1)
    inner = E @ (sol.interior * J2)
    outer_d = sol.k1 * (E @ (a * dJ1 + sol.scattered * dH1))
    inner_d = sol.nu * sol.k2 * (E @ (sol.interior * dJ2))
    return float(np.abs(outer - inner).max()), float(np.abs(outer_d - inner_d).max() / sol.k1)
