"""Dense Nystrom matrices of the Helmholtz boundary integral operators.

Single layer ``S_k``, double layer ``D_k``, its adjoint ``D*_k`` and the
hypersingular operator ``N_k`` are discretized with the Kress/Martensen
log-split product quadrature. Each kernel ``K`` is written as
``K1 log(4 sin^2((t - tau)/2)) + K2`` with ``K1``, ``K2`` smooth; the
diagonal values of ``K2`` are closed-form Taylor limits.

For wavenumbers with a large imaginary part ``J_0(k r)`` and ``J_1(k r)``
grow like ``exp(Im(k) r)`` while the full kernel decays, so the split
would cancel catastrophically. In that regime ``K1`` is multiplied by a
smooth cutoff in ``t - tau`` that equals one near the diagonal; ``K2``
absorbs the rest of the kernel and stays smooth.

Normals are outward. ``N_k`` is the normal derivative of the double layer
potential, so on any smooth curve ``S N = D^2 - I/4`` and
``N S = (D*)^2 - I/4``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special

from . import quadrature

EULER_GAMMA = np.euler_gamma
KINDS = ("S", "D", "Dstar", "N", "SigmaS", "SigmaN")

# Without a cutoff the split carries terms of size exp(Im k * r), which
# alias badly on high modes; beyond GROWTH_LIMIT the log part is localized
# to Im k * r <= WINDOW_GROWTH.
GROWTH_LIMIT = 8.5
WINDOW_GROWTH = 6.0
WINDOW_MIN_NODES = 8
PLATEAU = 0.1


class WavenumberError(ValueError):
    pass


def check_wavenumber(k, strict=False):
    """Validate and return ``k`` as complex.

    ``strict`` requires ``Re k > 0`` and ``Im k > 0`` (regularizer wavenumbers).
    """
    k = complex(k)
    if not np.isfinite(k):
        raise WavenumberError("wavenumber must be finite")
    if k == 0:
        raise WavenumberError("wavenumber k = 0 is not supported")
    if k.real < 0 or k.imag < 0:
        raise WavenumberError(f"wavenumber {k} must have nonnegative real and imaginary parts")
    if strict and not (k.real > 0 and k.imag > 0):
        raise WavenumberError(f"regularizing wavenumber {k} needs strictly positive real and imaginary parts")
    return k


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix of one discretized boundary operator acting node to node."""

    kind: str
    k: complex
    entries: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            other = other.entries
        return self.entries @ other

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def shape(self):
        return self.entries.shape


class _Pairs:
    """Pairwise geometric quantities shared by every kernel on a node set."""

    def __init__(self, nodes):
        self.nodes = nodes
        N = nodes.size
        self.diag = np.eye(N, dtype=bool)
        dx = nodes.x[:, :, None] - nodes.x[:, None, :]
        self.dx = dx
        r = np.sqrt((dx**2).sum(axis=0))
        r[self.diag] = 1.0
        self.r = r
        self.s = nodes.t[:, None] - nodes.t[None, :]
        sin2 = np.sin(self.s / 2) ** 2
        sin2[self.diag] = 1.0
        self.sin2 = sin2
        lg = np.log(4 * sin2)
        lg[self.diag] = 0.0
        self.log4sin2 = lg
        xp = nodes.dx
        # a = dx . x'(t), b = dx . x'(tau), c = x'(t) . x'(tau)
        self.a = (dx * xp[:, :, None]).sum(axis=0)
        self.b = (dx * xp[:, None, :]).sum(axis=0)
        self.c = xp[0][:, None] * xp[0][None, :] + xp[1][:, None] * xp[1][None, :]
        # unnormalized outward normal at the source point, and unit normal at target
        self.n_src_dot = xp[1][None, :] * dx[0] - xp[0][None, :] * dx[1]
        self.n_tgt_dot = nodes.normal[0][:, None] * dx[0] + nodes.normal[1][:, None] * dx[1]
        sp = nodes.speed
        self.speed = sp
        self.cross = (nodes.ddx[0] * xp[1] - xp[0] * nodes.ddx[1]) / sp**2

    def window(self, k):
        """Cutoff applied to the log part, or ``None`` when no cutoff is needed."""
        nodes = self.nodes
        growth = k.imag * self.r[~self.diag].max()
        if growth <= GROWTH_LIMIT:
            return None
        half_width = max(WINDOW_GROWTH / (k.imag * self.speed.max()), WINDOW_MIN_NODES * nodes.h)
        if half_width >= np.pi:
            return None
        s = np.abs((self.s + np.pi) % (2 * np.pi) - np.pi) / half_width
        return smooth_cutoff(s)


def smooth_cutoff(u, plateau=PLATEAU):
    """C-infinity function equal to 1 for ``u <= plateau`` and 0 for ``u >= 1``."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u <= plateau] = 1.0
    mid = (u > plateau) & (u < 1)
    x = (u[mid] - plateau) / (1 - plateau)
    out[mid] = np.exp(2 * np.exp(-1 / x) / (x - 1))
    return out


def pairs(nodes):
    cache = nodes.__dict__.setdefault("_pairs_cache", [])
    if not cache:
        cache.append(_Pairs(nodes))
    return cache[0]


def _bessel(k, r):
    z = k * r
    J0 = special.jv(0, z)
    J1 = special.jv(1, z)
    H0 = special.hankel1(0, z)
    H1 = special.hankel1(1, z)
    return J0, J1, H0, H1


def _finish(P, K, K1, k, diag_K1, diag_K2):
    w = P.window(k)
    if w is not None:
        K1 = K1 * w
    K2 = K - K1 * P.log4sin2
    K1 = K1.copy()
    K1[P.diag] = diag_K1
    K2[P.diag] = diag_K2
    return quadrature.split_matrix(K1, K2, quadrature.log_weights(P.nodes.n))


def _log_const(k, speed):
    return 1j / 4 - EULER_GAMMA / (2 * np.pi) - np.log(k * speed / 2) / (2 * np.pi)


def assemble_single_layer(nodes, k):
    k = check_wavenumber(k)
    P = pairs(nodes)
    J0, _, H0, _ = _bessel(k, P.r)
    spj = P.speed[None, :]
    K = 0.25j * H0 * spj
    K1 = -J0 * spj / (4 * np.pi)
    A = _finish(P, K, K1, k, -P.speed / (4 * np.pi), _log_const(k, P.speed) * P.speed)
    return OperatorMatrix("S", k, A)


def assemble_double_layer(nodes, k):
    k = check_wavenumber(k)
    P = pairs(nodes)
    _, J1, _, H1 = _bessel(k, P.r)
    K = 0.25j * k * P.n_src_dot * H1 / P.r
    K1 = -k / (4 * np.pi) * P.n_src_dot * J1 / P.r
    A = _finish(P, K, K1, k, 0.0, P.cross / (4 * np.pi))
    return OperatorMatrix("D", k, A)


def assemble_adjoint_double_layer(nodes, k):
    k = check_wavenumber(k)
    P = pairs(nodes)
    _, J1, _, H1 = _bessel(k, P.r)
    spj = P.speed[None, :]
    K = -0.25j * k * P.n_tgt_dot * H1 / P.r * spj
    K1 = k / (4 * np.pi) * P.n_tgt_dot * J1 / P.r * spj
    A = _finish(P, K, K1, k, 0.0, P.cross / (4 * np.pi))
    return OperatorMatrix("Dstar", k, A)


def hypersingular_diagonal(nodes, k):
    """Diagonal limit of the smooth part of the hypersingular kernel."""
    xp, xpp, xppp = nodes.dx, nodes.ddx, nodes.dddx
    sp2 = nodes.speed**2
    return (
        k**2 * sp2 / (8 * np.pi) * (1j * np.pi + 1 - 2 * EULER_GAMMA - 2 * np.log(k * nodes.speed / 2))
        - 1 / (24 * np.pi)
        + (xp * xppp).sum(axis=0) / (12 * np.pi * sp2)
        - (xp * xpp).sum(axis=0) ** 2 / (4 * np.pi * sp2**2)
        + (xpp * xpp).sum(axis=0) / (8 * np.pi * sp2)
    )


def assemble_hypersingular(nodes, k):
    """``N_k = |x'(t)|^{-1} [ (1/4pi) PV int cot((tau-t)/2) psi' + int M psi ]``."""
    k = check_wavenumber(k)
    P = pairs(nodes)
    J0, J1, H0, H1 = _bessel(k, P.r)
    r2 = P.r**2
    abr = P.a * P.b / r2
    H1r = H1 / P.r
    J1r = J1 / P.r
    M = (
        0.25j * k**2 * H0 * P.c
        - abr * (0.25j * k**2 * H0 - 0.5j * k * H1r)
        - 0.25j * k * H1r * P.c
        - 1 / (8 * np.pi * P.sin2)
    )
    M1 = -(k**2) / (4 * np.pi) * J0 * P.c + abr * (k**2 / (4 * np.pi) * J0 - k / (2 * np.pi) * J1r) + k / (
        4 * np.pi
    ) * J1r * P.c
    Mmat = _finish(P, M, M1, k, -(k**2) * P.speed**2 / (8 * np.pi), hypersingular_diagonal(nodes, k))
    A = (quadrature.hilbert_derivative_matrix(nodes.n) + Mmat) / P.speed[:, None]
    return OperatorMatrix("N", k, A)


def symbol_n(xi, kappa):
    """``p^N(xi) = -sqrt(xi^2 - kappa^2)/2`` on the branch with positive imaginary part."""
    xi = np.asarray(xi, dtype=float)
    return -0.5 * np.sqrt(xi**2 - complex(kappa) ** 2 + 0j)


def symbol_s(xi, kappa):
    """``p^S(xi) = 1/(2 sqrt(xi^2 - kappa^2))`` on the same branch as :func:`symbol_n`."""
    xi = np.asarray(xi, dtype=float)
    return 0.5 / np.sqrt(xi**2 - complex(kappa) ** 2 + 0j)


def assemble_sigma(nodes, kind, kappa):
    """Dense matrix of the principal-symbol operator ``SigmaS`` or ``SigmaN``.

    ``SigmaN`` multiplies the Fourier coefficients of the density and divides
    by ``|x'(t)|``; ``SigmaS`` multiplies those of ``density * |x'|``.
    """
    kappa = check_wavenumber(kappa, strict=True)
    m = quadrature.mode_numbers(nodes.size)
    if kind == "SigmaN":
        A = quadrature.multiplier_matrix(symbol_n(m, kappa)) / nodes.speed[:, None]
    elif kind == "SigmaS":
        A = quadrature.multiplier_matrix(symbol_s(m, kappa)) * nodes.speed[None, :]
    else:
        raise ValueError(f"kind must be 'SigmaS' or 'SigmaN', got {kind!r}")
    return OperatorMatrix(kind, kappa, A)


def apply_sigma(nodes, kind, kappa, density):
    """FFT application of the principal-symbol operators (same action as :func:`assemble_sigma`)."""
    kappa = check_wavenumber(kappa, strict=True)
    m = quadrature.mode_numbers(nodes.size)
    density = np.asarray(density)
    sp = nodes.speed if density.ndim == 1 else nodes.speed[:, None]
    if kind == "SigmaN":
        return quadrature.apply_multiplier(symbol_n(m, kappa), density) / sp
    if kind == "SigmaS":
        return quadrature.apply_multiplier(symbol_s(m, kappa), density * sp)
    raise ValueError(f"kind must be 'SigmaS' or 'SigmaN', got {kind!r}")


ASSEMBLERS = {
    "S": assemble_single_layer,
    "D": assemble_double_layer,
    "Dstar": assemble_adjoint_double_layer,
    "N": assemble_hypersingular,
}


class OperatorCache:
    """Assemble each ``(kind, k)`` operator on a node set at most once."""

    def __init__(self, nodes):
        self.nodes = nodes
        self._store = {}

    def get(self, kind, k):
        key = (kind, complex(k))
        if key not in self._store:
            if kind in ASSEMBLERS:
                self._store[key] = ASSEMBLERS[kind](self.nodes, k)
            else:
                self._store[key] = assemble_sigma(self.nodes, kind, k)
        return self._store[key].entries

    def S(self, k):
        return self.get("S", k)

    def D(self, k):
        return self.get("D", k)

    def Dstar(self, k):
        return self.get("Dstar", k)

    def N(self, k):
        return self.get("N", k)


def _modes_matrix(nodes, ms):
    return np.exp(1j * np.outer(nodes.t, ms))


def difference_decay(A, B, nodes, m_range=None):
    """Least-squares slope of ``log ||(A - B) e^{imt}||`` against ``log m``.

    The default fit range is ``m in [n/8, n/2]``.
    """
    n = nodes.n
    lo, hi = m_range if m_range is not None else (max(n // 8, 1), n // 2)
    ms = np.arange(lo, hi + 1)
    E = _modes_matrix(nodes, ms)
    diff = np.asarray(A) - np.asarray(B)
    norms = np.sqrt(np.mean(np.abs(diff @ E) ** 2, axis=0))
    slope = np.polyfit(np.log(ms), np.log(norms), 1)[0]
    return float(slope)


def operator_difference_decay(kind, k_a, k_b, nodes, m_range=None):
    """Decay exponent of an operator difference acting on Fourier modes.

    ``kind`` is one of ``S``, ``D``, ``Dstar``, ``N`` (compares wavenumbers
    ``k_a`` and ``k_b``) or ``S-sigma``/``N-sigma`` (compares the operator at
    ``k_a`` with its principal-symbol counterpart; ``k_b`` is ignored).
    """
    if kind in ASSEMBLERS:
        A = ASSEMBLERS[kind](nodes, k_a).entries
        B = ASSEMBLERS[kind](nodes, k_b).entries
    elif kind in ("S-sigma", "N-sigma"):
        base = kind[0]
        A = ASSEMBLERS[base](nodes, k_a).entries
        B = assemble_sigma(nodes, "Sigma" + base, k_a).entries
    else:
        raise ValueError(f"unknown decay kind {kind!r}")
    return difference_decay(A, B, nodes, m_range)
