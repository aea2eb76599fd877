"""Far fields, near fields and error metrics for solved block systems."""

import csv
from dataclasses import dataclass

import numpy as np
from scipy import special

from .geometry import winding_number

DEFAULT_DIRECTION_COUNT = 720
MIN_DIRECTION_COUNT = 360


def default_directions(count=DEFAULT_DIRECTION_COUNT):
    theta = 2 * np.pi * np.arange(count) / count
    return np.array([np.cos(theta), np.sin(theta)])


@dataclass(frozen=True)
class FarField:
    """Far-field amplitudes ``u_inf(x_hat)``, where ``u^s ~ e^{ik|x|}/sqrt|x| u_inf``.

    ``directions`` has shape ``(2, m)``.
    """

    directions: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.ndim != 2 or d.shape[0] != 2 or d.shape[1] != np.size(self.amplitudes):
            raise ValueError("directions must have shape (2, len(amplitudes))")

    @property
    def angles(self):
        return np.mod(np.arctan2(self.directions[1], self.directions[0]), 2 * np.pi)

    def is_equispaced(self):
        m = self.directions.shape[1]
        if m < MIN_DIRECTION_COUNT:
            return False
        gaps = np.diff(np.sort(self.angles))
        return bool(np.allclose(gaps, 2 * np.pi / m, atol=1e-12))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["angle", "re", "im", "abs"])
            for a, u in zip(self.angles, self.amplitudes):
                w.writerow([repr(float(a)), repr(float(u.real)), repr(float(u.imag)), repr(float(abs(u)))])


def _far_field_constant(k):
    return np.exp(0.25j * np.pi) / np.sqrt(8 * np.pi * k)


def far_field_from_densities(nodes, k, phi, psi, directions=None):
    """Far field of ``D_k[phi] - S_k[psi]`` by the trapezoid rule."""
    if directions is None:
        directions = default_directions()
    directions = np.asarray(directions, dtype=float)
    phase = np.exp(-1j * k * (directions.T @ nodes.x))
    xn = directions.T @ nodes.normal
    integrand = (-1j * k * xn * phi[None, :] - psi[None, :]) * phase
    amp = _far_field_constant(k) * (integrand @ nodes.weights)
    return FarField(directions, amp)


def far_field(system, report, directions=None):
    """Far field from a converged solve of ``system``."""
    from .formulations import densities

    if not report.converged:
        raise ValueError("far field requested for an unconverged solve")
    (phi, psi), _ = densities(system, report.solution)
    return far_field_from_densities(system.nodes, system.config.k1, phi, psi, directions)


def far_field_from_traces(system, report, directions=None):
    """Far field from the total exterior traces (direct representation)."""
    from .formulations import boundary_traces

    u, dudn = boundary_traces(system, report.solution)
    return far_field_from_densities(system.nodes, system.config.k1, u, dudn, directions)


def far_field_error(computed, reference):
    """``max |u_inf^calc - u_inf^ref|`` over a shared direction grid."""
    if computed.directions.shape != reference.directions.shape or not np.allclose(
        computed.directions, reference.directions, atol=1e-12
    ):
        raise ValueError("far fields are sampled on different direction grids")
    return float(np.max(np.abs(computed.amplitudes - reference.amplitudes)))


def relative_far_field_difference(a, b):
    """``max |a - b| / max |b|``; used to compare against relative solver tolerances."""
    return far_field_error(a, b) / float(np.max(np.abs(b.amplitudes)))


def _potentials(nodes, k, points):
    """Trapezoid matrices of the single and double layer potentials at ``points``."""
    d = points[:, :, None] - nodes.x[:, None, :]
    r = np.hypot(d[0], d[1])
    h0 = special.hankel1(0, k * r)
    h1 = special.hankel1(1, k * r)
    w = nodes.weights[None, :]
    S = 0.25j * h0 * w
    nd = d[0] * nodes.normal[0][None, :] + d[1] * nodes.normal[1][None, :]
    D = 0.25j * k * h1 * nd / r * w
    return S, D


def check_clearance(nodes, points, spacings=3):
    """Reject points closer to the boundary than ``spacings`` node spacings."""
    d = points[:, :, None] - nodes.x[:, None, :]
    dist = np.hypot(d[0], d[1]).min(axis=1)
    gap = spacings * nodes.weights.max()
    if np.any(dist < gap):
        raise ValueError(f"evaluation points within {gap:.3g} of the boundary")


def near_field(system, report, points, total=True):
    """Field at ``points`` (shape ``(2, p)``), exterior or interior by winding number.

    Exterior values are the scattered field, plus the incident wave when
    ``total``. Interior values are always the transmitted field.
    """
    from .formulations import densities

    if not report.converged:
        raise ValueError("near field requested for an unconverged solve")
    nodes, config = system.nodes, system.config
    points = np.atleast_2d(np.asarray(points, dtype=float))
    check_clearance(nodes, points)
    (phi1, psi1), (phi2, psi2) = densities(system, report.solution)
    inside = winding_number(nodes, points) != 0
    out = np.empty(points.shape[1], dtype=complex)
    if inside.any():
        S, D = _potentials(nodes, config.k2, points[:, inside])
        out[inside] = -(D @ phi2) + S @ psi2
    ext = ~inside
    if ext.any():
        S, D = _potentials(nodes, config.k1, points[:, ext])
        out[ext] = D @ phi1 - S @ psi1
        if total:
            out[ext] += np.exp(1j * config.k1 * (config.incident_direction @ points[:, ext]))
    return out
