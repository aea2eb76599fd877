"""Block integral-equation systems for the penetrable scattering problem.

Five formulations are available:

``sk14``, ``sk15``
    Direct second-kind systems for the total exterior trace ``(u, du/dn)``.
    They coincide when ``nu = 1``.
``fk16``
    Direct first-kind system with a positive-definite principal part.
``skr-lp``
    Indirect regularized system, unknowns ``(a, b)``; the regularizer uses
    the layer operators ``S`` and ``N`` at a complex wavenumber ``kappa1``.
``skr-ps``
    Same ansatz with ``S`` and ``N`` replaced by Fourier multipliers having
    their principal symbols.

In the regularized systems the fields are represented as

    u1 = D1[alpha] - S1[beta],    u2 = -D2[alpha - a] + S2[beta - b] / nu,
    alpha = R11 a + R12 b,        beta = R21 a + R22 b.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .geometry import get_curve, sample
from .operators import OperatorCache, apply_sigma, check_wavenumber

FORMULATIONS = ("sk14", "sk15", "fk16", "skr-lp", "skr-ps")
REGULARIZED = ("skr-lp", "skr-ps")

DEFAULT_DIRECTIONS = {
    "circle": (0.0, -1.0),
    "kite": (np.sqrt(2) / 2, -np.sqrt(2) / 2),
    "cavity": (1.0, 0.0),
}


@dataclass(frozen=True)
class TransmissionConfig:
    """One scattering experiment.

    ``n`` is the half node count: each density lives on ``2n`` nodes and the
    block system has ``4n`` unknowns.
    """

    geometry: str = "circle"
    omega: float = 8.0
    eps1: float = 1.0
    eps2: float = 2.0
    polarization: str = "E"
    formulation: str = "sk15"
    n: int = 32
    tol: float = 1e-8
    kappa1: Optional[complex] = None
    direction: Optional[tuple] = None

    def __post_init__(self):
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"unknown formulation {self.formulation!r}; expected one of {FORMULATIONS}")
        if self.polarization not in ("E", "H"):
            raise ValueError("polarization must be 'E' or 'H'")
        if self.omega <= 0 or self.eps1 <= 0 or self.eps2 <= 0:
            raise ValueError("omega and permittivities must be positive")
        if self.direction is not None:
            d = np.asarray(self.direction, dtype=float)
            if d.shape != (2,) or abs(np.hypot(*d) - 1) > 1e-12:
                raise ValueError("incident direction must be a unit 2-vector")

    @property
    def k1(self):
        return self.omega * np.sqrt(self.eps1)

    @property
    def k2(self):
        return self.omega * np.sqrt(self.eps2)

    @property
    def nu(self):
        return 1.0 if self.polarization == "E" else self.eps1 / self.eps2

    @property
    def unknowns(self):
        return 4 * self.n

    @property
    def incident_direction(self):
        if self.direction is not None:
            return np.asarray(self.direction, dtype=float)
        return np.asarray(DEFAULT_DIRECTIONS.get(self.geometry, (1.0, 0.0)), dtype=float)

    @property
    def regularizer_wavenumber(self):
        if self.formulation not in REGULARIZED:
            return None
        if self.kappa1 is not None:
            return check_wavenumber(self.kappa1, strict=True)
        return kappa1_default(self)

    def with_(self, **changes):
        return replace(self, **changes)


def kappa1_default(config):
    """Regularizing wavenumber ``(k1 + k2)/2 + i eps``.

    The imaginary offset is ``omega`` for H-polarization, ``4`` for the
    circle and ``omega/4`` otherwise.
    """
    re = (config.k1 + config.k2) / 2
    if config.polarization == "H":
        im = config.omega
    elif config.geometry == "circle":
        im = 4.0
    else:
        im = config.omega / 4
    return complex(re, im)


def plane_wave_trace(nodes, k1, direction):
    """Values and outward normal derivatives of ``exp(i k1 d.x)`` at the nodes."""
    d = np.asarray(direction, dtype=float)
    if abs(np.hypot(*d) - 1) > 1e-12:
        raise ValueError("direction must be a unit vector")
    u = np.exp(1j * k1 * (d @ nodes.x))
    dudn = 1j * k1 * (d @ nodes.normal) * u
    return u, dudn


@dataclass
class BlockSystem:
    """2x2 block system ``[[A11, A12], [A21, A22]] x = rhs``."""

    config: TransmissionConfig
    nodes: object = field(repr=False)
    blocks: tuple = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    unknowns: str
    kappa1: Optional[complex] = None
    composed: Optional[Callable] = field(default=None, repr=False)
    ops: Optional[OperatorCache] = field(default=None, repr=False)

    @property
    def matrix(self):
        A11, A12, A21, A22 = self.blocks
        return np.block([[A11, A12], [A21, A22]])

    def matvec(self, x):
        A11, A12, A21, A22 = self.blocks
        N = A11.shape[0]
        return np.concatenate([A11 @ x[:N] + A12 @ x[N:], A21 @ x[:N] + A22 @ x[N:]])


def regularizer(config, nodes, ops=None):
    """Return ``(R11, R12, R21, R22)``; scalar entries are multiples of I."""
    nu = config.nu
    kappa = config.regularizer_wavenumber
    if config.formulation == "skr-lp":
        ops = ops or OperatorCache(nodes)
        XS, XN = ops.S(kappa), ops.N(kappa)
    else:
        ops = ops or OperatorCache(nodes)
        XS, XN = ops.get("SigmaS", kappa), ops.get("SigmaN", kappa)
    return nu / (1 + nu), -2 / (1 + nu) * XS, 2 * nu / (1 + nu) * XN, 1 / (1 + nu)


def assemble_formulation(config, nodes=None, ops=None):
    """Assemble the block system and right-hand side for ``config``."""
    if nodes is None:
        nodes = sample(get_curve(config.geometry), config.n)
    ops = ops or OperatorCache(nodes)
    k1, k2, nu = config.k1, config.k2, config.nu
    I = np.eye(nodes.size)
    uinc, dinc = plane_wave_trace(nodes, k1, config.incident_direction)
    S1, S2 = ops.S(k1), ops.S(k2)
    D1, D2 = ops.D(k1), ops.D(k2)
    T1, T2 = ops.Dstar(k1), ops.Dstar(k2)
    N1, N2 = ops.N(k1), ops.N(k2)
    f = config.formulation
    jump = (1 / nu + 1) / 2
    kappa = None
    if f == "sk14":
        blocks = (I + D2 - D1, -(S2 / nu - S1), -(N1 - N2), jump * I + T1 - T2 / nu)
        rhs = np.concatenate([uinc, dinc])
        unknowns = "direct"
    elif f == "sk15":
        blocks = (jump * I + D2 - D1 / nu, (S1 - S2) / nu, -(N1 - N2), jump * I + T1 - T2 / nu)
        rhs = np.concatenate([uinc / nu, dinc])
        unknowns = "direct"
    elif f == "fk16":
        blocks = (-(D1 + D2), S2 / nu + S1, -(N1 + nu * N2), T1 + T2)
        rhs = np.concatenate([uinc, dinc])
        unknowns = "direct"
    else:
        kappa = config.regularizer_wavenumber
        R11, R12, R21, R22 = regularizer(config, nodes, ops)
        Dsum, Ssum = D1 + D2, S1 + S2 / nu
        Nsum, Tsum = N1 + nu * N2, T1 + T2
        blocks = (
            I / 2 - D2 + R11 * Dsum - Ssum @ R21,
            S2 / nu + Dsum @ R12 - R22 * Ssum,
            -nu * N2 + R11 * Nsum - Tsum @ R21,
            I / 2 + T2 + Nsum @ R12 - R22 * Tsum,
        )
        rhs = -np.concatenate([uinc, dinc])
        unknowns = "indirect"
    system = BlockSystem(config, nodes, blocks, rhs, unknowns, kappa, ops=ops)
    system.composed = composed_matvec(config, nodes, ops)
    return system


def composed_matvec(config, nodes, ops):
    """Matvec that applies each boundary operator separately (no pre-summed blocks).

    This is the cost model of an implementation that never forms the block
    matrix; it is used for per-matvec timing and as an assembly cross-check.
    """
    k1, k2, nu = config.k1, config.k2, config.nu
    S1, S2 = ops.S(k1), ops.S(k2)
    D1, D2 = ops.D(k1), ops.D(k2)
    T1, T2 = ops.Dstar(k1), ops.Dstar(k2)
    N1, N2 = ops.N(k1), ops.N(k2)
    N = nodes.size
    f = config.formulation
    jump = (1 / nu + 1) / 2

    if f == "sk14":
        def apply(x):
            u, v = x[:N], x[N:]
            r1 = u + D2 @ u - D1 @ u - (S2 @ v) / nu + S1 @ v
            r2 = jump * v + T1 @ v - (T2 @ v) / nu - N1 @ u + N2 @ u
            return np.concatenate([r1, r2])
    elif f == "sk15":
        def apply(x):
            u, v = x[:N], x[N:]
            r1 = jump * u + D2 @ u - (D1 @ u) / nu + (S1 @ v - S2 @ v) / nu
            r2 = jump * v + T1 @ v - (T2 @ v) / nu - N1 @ u + N2 @ u
            return np.concatenate([r1, r2])
    elif f == "fk16":
        def apply(x):
            u, v = x[:N], x[N:]
            r1 = -(D1 @ u) - D2 @ u + (S2 @ v) / nu + S1 @ v
            r2 = -(N1 @ u) - nu * (N2 @ u) + T1 @ v + T2 @ v
            return np.concatenate([r1, r2])
    else:
        kappa = config.regularizer_wavenumber
        c11, c12, c21, c22 = nu / (1 + nu), -2 / (1 + nu), 2 * nu / (1 + nu), 1 / (1 + nu)
        if f == "skr-lp":
            XS, XN = ops.S(kappa), ops.N(kappa)
            reg_s = lambda b: XS @ b
            reg_n = lambda a: XN @ a
        else:
            reg_s = lambda b: apply_sigma(nodes, "SigmaS", kappa, b)
            reg_n = lambda a: apply_sigma(nodes, "SigmaN", kappa, a)

        def apply(x):
            a, b = x[:N], x[N:]
            alpha = c11 * a + c12 * reg_s(b)
            beta = c21 * reg_n(a) + c22 * b
            r1 = a / 2 + D2 @ (alpha - a) + D1 @ alpha - S1 @ beta + (S2 @ (b - beta)) / nu
            r2 = b / 2 + N1 @ alpha + nu * (N2 @ (alpha - a)) - T1 @ beta - T2 @ (beta - b)
            return np.concatenate([r1, r2])

    return apply


def densities(system, x):
    """Layer densities of the exterior and interior representations.

    Returns ``((phi1, psi1), (phi2, psi2))`` with scattered field
    ``D1[phi1] - S1[psi1]`` and interior field ``-D2[phi2] + S2[psi2]``.
    For direct systems ``(phi1, psi1)`` are the total exterior traces; for
    regularized ones they are ``(alpha, beta)``.
    """
    config, nodes = system.config, system.nodes
    N = nodes.size
    first, second = x[:N], x[N:]
    nu = config.nu
    if system.unknowns == "direct":
        return (first, second), (first, second / nu)
    R11, R12, R21, R22 = regularizer(config, nodes, system.ops)
    alpha = R11 * first + R12 @ second
    beta = R21 @ first + R22 * second
    return (alpha, beta), (alpha - first, (beta - second) / nu)


def boundary_traces(system, x):
    """Total exterior traces ``(u, du/dn)`` on the boundary.

    Direct systems return their unknowns. For regularized systems the
    interior representation is traced from inside and the transmission
    conditions convert it to exterior values.
    """
    config, nodes = system.config, system.nodes
    N = nodes.size
    if system.unknowns == "direct":
        return x[:N], x[N:]
    _, (phi2, psi2) = densities(system, x)
    k2, nu = config.k2, config.nu
    ops = system.ops
    u = phi2 / 2 - ops.D(k2) @ phi2 + ops.S(k2) @ psi2
    dudn2 = -(ops.N(k2) @ phi2) + ops.Dstar(k2) @ psi2 + psi2 / 2
    return u, nu * dudn2
