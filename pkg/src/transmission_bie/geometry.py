"""Smooth 2*pi-periodic boundary curves and their Nystrom node sets.

All curves are parametrized counter-clockwise; the normal stored on a
:class:`NodeSet` is the outward unit normal ``(x2', -x1') / |x'|``.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Vec = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ParamCurve:
    """A closed curve ``t -> x(t)`` with analytic derivatives up to third order.

    Each closure accepts an array of parameter values and returns an array of
    shape ``(2, len(t))``.
    """

    name: str
    position: Vec
    d1: Vec
    d2: Vec
    d3: Vec

    def __call__(self, t):
        return self.position(np.asarray(t, dtype=float))


def _stack(f, g):
    return lambda t: np.array([f(np.asarray(t, dtype=float)), g(np.asarray(t, dtype=float))])


def make_circle(radius=1.0):
    R = float(radius)
    return ParamCurve(
        "circle",
        _stack(lambda t: R * np.cos(t), lambda t: R * np.sin(t)),
        _stack(lambda t: -R * np.sin(t), lambda t: R * np.cos(t)),
        _stack(lambda t: -R * np.cos(t), lambda t: -R * np.sin(t)),
        _stack(lambda t: R * np.sin(t), lambda t: -R * np.cos(t)),
    )


def make_kite():
    return ParamCurve(
        "kite",
        _stack(lambda t: np.cos(t) + 0.65 * np.cos(2 * t) - 0.65, lambda t: 1.5 * np.sin(t)),
        _stack(lambda t: -np.sin(t) - 1.3 * np.sin(2 * t), lambda t: 1.5 * np.cos(t)),
        _stack(lambda t: -np.cos(t) - 2.6 * np.cos(2 * t), lambda t: -1.5 * np.sin(t)),
        _stack(lambda t: np.sin(t) + 5.2 * np.sin(2 * t), lambda t: -1.5 * np.cos(t)),
    )


def make_cavity():
    # x2 = Y/2 - Ys/48 with Y = sin t + sin 2t + sin(3t)/2,
    # Ys = -4 sin t + 7 sin 2t - 6 sin 3t + 2 sin 4t
    def x2(t, d):
        # d-th derivative of sum_j c_j sin(j t)
        coeffs = {1: 0.5 + 4 / 48, 2: 0.5 - 7 / 48, 3: 0.25 + 6 / 48, 4: -2 / 48}
        out = 0.0
        for j, c in coeffs.items():
            out = out + c * j**d * _dsin(j * t, d)
        return out

    def x1(t, d):
        return (_dcos(t, d) + 2 * 2**d * _dcos(2 * t, d)) / 2.5

    return ParamCurve(
        "cavity",
        _stack(lambda t: x1(t, 0), lambda t: x2(t, 0)),
        _stack(lambda t: x1(t, 1), lambda t: x2(t, 1)),
        _stack(lambda t: x1(t, 2), lambda t: x2(t, 2)),
        _stack(lambda t: x1(t, 3), lambda t: x2(t, 3)),
    )


def _dsin(u, d):
    return [np.sin, np.cos, lambda v: -np.sin(v), lambda v: -np.cos(v)][d % 4](u)


def _dcos(u, d):
    return [np.cos, lambda v: -np.sin(v), lambda v: -np.cos(v), np.sin][d % 4](u)


CURVES = {"circle": make_circle, "kite": make_kite, "cavity": make_cavity}


def get_curve(name):
    try:
        return CURVES[name]()
    except KeyError:
        raise ValueError(f"unknown geometry {name!r}; expected one of {sorted(CURVES)}") from None


@dataclass(frozen=True)
class NodeSet:
    """Curve sampled at the ``2n`` equispaced nodes ``t_j = pi j / n``."""

    curve: ParamCurve
    n: int
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    dx: np.ndarray = field(repr=False)
    ddx: np.ndarray = field(repr=False)
    dddx: np.ndarray = field(repr=False)
    speed: np.ndarray = field(repr=False)
    normal: np.ndarray = field(repr=False)

    @property
    def size(self):
        return 2 * self.n

    @property
    def h(self):
        """Parameter spacing ``pi / n``."""
        return np.pi / self.n

    @property
    def weights(self):
        """Trapezoid arclength weights ``(pi / n) |x'(t_j)|``."""
        return self.h * self.speed

    def diameter(self):
        d = self.x[:, :, None] - self.x[:, None, :]
        return float(np.sqrt((d**2).sum(axis=0)).max())


def sample(curve, n):
    """Sample ``curve`` on ``2n`` equispaced nodes.

    Parameters
    ----------
    curve : ParamCurve
    n : int
        Half node count, ``n >= 8``.
    """
    if int(n) != n or n < 8:
        raise ValueError("half node count n must be an integer >= 8")
    n = int(n)
    t = np.pi * np.arange(2 * n) / n
    x = curve.position(t)
    dx = curve.d1(t)
    speed = np.hypot(dx[0], dx[1])
    if np.any(speed <= 0):
        raise ValueError(f"curve {curve.name!r} is not regular")
    normal = np.array([dx[1], -dx[0]]) / speed
    return NodeSet(curve, n, t, x, dx, curve.d2(t), curve.d3(t), speed, normal)


def winding_number(nodes, points):
    """Winding number of the sampled curve around each point (shape ``(2, m)``)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    z = (nodes.x[0] + 1j * nodes.x[1])[None, :] - (points[0] + 1j * points[1])[:, None]
    ang = np.angle(np.roll(z, -1, axis=1) / z)
    return np.rint(ang.sum(axis=1) / (2 * np.pi)).astype(int)
