"""Automated property checks shared by the test suite and the CLI.

Every check returns a :class:`PropertyResult`; none of them raise on a
failed property, only on invalid input.
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from . import quadrature
from .formulations import TransmissionConfig, assemble_formulation
from .geometry import CURVES, get_curve, sample
from .gmres import KrylovReport, gmres_solve
from .mie import mie_far_field, mie_solve, optical_theorem_residual, trace_residual
from .operators import (
    ASSEMBLERS,
    OperatorCache,
    assemble_sigma,
    check_wavenumber,
    operator_difference_decay,
    symbol_n,
    symbol_s,
)
from .postprocess import (
    far_field,
    far_field_error,
    far_field_from_densities,
    far_field_from_traces,
    relative_far_field_difference,
)

ROUNDOFF_FLOOR = 1e-13


@dataclass
class PropertyResult:
    module: str
    quantity: str
    observed: float
    required: str
    passed: bool

    def as_dict(self):
        d = asdict(self)
        d["observed"] = float(d["observed"])
        d["passed"] = bool(d["passed"])
        return d


def circle_eigenvalues(kind, k, m):
    """Exact eigenvalues of the boundary operators on the unit circle for mode ``m``."""
    a = np.abs(np.asarray(m))
    if kind == "S":
        return 0.5j * np.pi * special.jv(a, k) * special.hankel1(a, k)
    if kind in ("D", "Dstar"):
        return 0.5j * np.pi * k * special.jvp(a, k) * special.hankel1(a, k) - 0.5
    if kind == "N":
        return 0.5j * np.pi * k**2 * special.jvp(a, k) * special.h1vp(a, k)
    raise ValueError(kind)


def circle_spectrum_error(kind, k, n=64, max_mode=None):
    """Max relative deviation of discrete eigenvalues from the exact ones, ``|m| <= n/4``."""
    nodes = sample(get_curve("circle"), n)
    A = ASSEMBLERS[kind](nodes, k).entries
    max_mode = n // 4 if max_mode is None else max_mode
    m = np.arange(-max_mode, max_mode + 1)
    E = np.exp(1j * np.outer(nodes.t, m))
    lam = (A @ E)[0] / E[0]
    exact = circle_eigenvalues(kind, k, m)
    return float(np.max(np.abs(lam - exact) / np.abs(exact)))


def resolved_modes(nodes):
    m = np.arange(-(nodes.n // 2), nodes.n // 2 + 1)
    return np.exp(1j * np.outer(nodes.t, m)) / np.sqrt(nodes.size)


def calderon_residual(nodes, k, pairing="SN", projected=True, perturb=0.0):
    """Max-norm residual of a Calderon identity.

    ``pairing``: ``"SN"`` for ``S N - D^2 + I/4``, ``"NS"`` for
    ``N S - (D*)^2 + I/4``, ``"literal"`` for ``S N + I/4 - (D*)^2``.
    With ``projected`` the residual is restricted to modes ``|m| <= n/2``.
    ``perturb`` adds a constant to the diagonal of ``S`` (fault injection).
    """
    ops = OperatorCache(nodes)
    S = ops.S(k) + perturb * np.eye(nodes.size)
    D, T, N = ops.D(k), ops.Dstar(k), ops.N(k)
    quarter = np.eye(nodes.size) / 4
    if pairing == "SN":
        R = S @ N - D @ D + quarter
    elif pairing == "NS":
        R = N @ S - T @ T + quarter
    elif pairing == "literal":
        R = S @ N + quarter - T @ T
    else:
        raise ValueError(f"unknown pairing {pairing!r}")
    if projected:
        Q = resolved_modes(nodes)
        R = Q.conj().T @ R @ Q
    return float(np.abs(R).max())


def calderon_property(geometry, k=2.0, n=64, pairing="SN", perturb=0.0):
    """Resolved-mode residual at ``n`` is at most 1e-8 and drops 100x (or to roundoff) at ``2n``."""
    r1 = calderon_residual(sample(get_curve(geometry), n), k, pairing, True, perturb)
    r2 = calderon_residual(sample(get_curve(geometry), 2 * n), k, pairing, True, perturb)
    ok = r1 <= 1e-8 and (r2 <= r1 / 100 or r2 <= ROUNDOFF_FLOOR)
    return PropertyResult(
        "operators", f"calderon {pairing} {geometry} n={n}->{2 * n}", r1, f"<=1e-8, then /100 (got {r2:.2e})", ok
    )


def quadratic_forms(nodes, kappa, samples=100, seed=0):
    """Imaginary parts of ``phi^H W A phi`` for ``A`` in ``S, N, SigmaS, SigmaN``."""
    kappa = check_wavenumber(kappa, strict=True)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((nodes.size, samples)) + 1j * rng.standard_normal((nodes.size, samples))
    W = nodes.weights
    out = {}
    for kind in ("S", "N"):
        A = ASSEMBLERS[kind](nodes, kappa).entries
        out[kind] = np.einsum("ij,i,ij->j", X.conj(), W, A @ X).imag
    for kind in ("SigmaS", "SigmaN"):
        A = assemble_sigma(nodes, kind, kappa).entries
        out[kind] = np.einsum("ij,i,ij->j", X.conj(), W, A @ X).imag
    return out


def positivity_properties(kappa=2 + 1j, n=64, samples=100):
    results = []
    for g in CURVES:
        forms = quadratic_forms(sample(get_curve(g), n), kappa, samples)
        for kind, vals in forms.items():
            results.append(PropertyResult("operators", f"min Im quadratic form {kind} {g}", vals.min(), ">0", vals.min() > 0))
    m = quadrature.mode_numbers(2 * n)
    for name, sym in (("p^N", symbol_n), ("p^S", symbol_s)):
        v = sym(m, kappa).imag.min()
        results.append(PropertyResult("operators", f"min Im {name}", v, ">0", v > 0))
    return results


def decay_properties(n=128):
    results = []
    for g in CURVES:
        nodes = sample(get_curve(g), n)
        for kind, ka, kb, bound in (("S-sigma", 2 + 1j, None, -2.7), ("S", 2.0, 3 + 1j, -2.7), ("N", 2.0, 3 + 1j, -0.7)):
            s = operator_difference_decay(kind, ka, kb, nodes)
            results.append(PropertyResult("operators", f"decay slope {kind} {g}", s, f"<={bound}", s <= bound))
    return results


def spectral_properties():
    results = []
    for k in (1.0, 2 + 1j):
        e = circle_spectrum_error("S", k)
        results.append(PropertyResult("operators", f"circle S eigenvalues k={k}", e, "<=1e-10", e <= 1e-10))
    return results


def specfun_properties():
    z = np.array([0.5, 1.0, 2 + 1j, 5 + 3j, 20 + 0.5j, 80.0])
    n = np.arange(0, 40)[:, None]
    w = special.jv(n, z) * special.yvp(n, z) - special.jvp(n, z) * special.yv(n, z) - 2 / (np.pi * z)
    wr = float(np.max(np.abs(w) / np.abs(2 / (np.pi * z))))
    rec = 0.0
    for f in (special.jv, special.hankel1):
        c = f(n[1:-1], z) + 0 * z
        lhs = f(n[:-2], z) + f(n[2:], z) - 2 * n[1:-1] / z * c
        mask = np.abs(c) > 1e-250
        rec = max(rec, float(np.max(np.abs(lhs[mask]) / np.abs(c[mask]))))
    return [
        PropertyResult("specfun", "Wronskian relative residual", wr, "<=1e-12", wr <= 1e-12),
        PropertyResult("specfun", "recurrence relative residual", rec, "<=1e-10", rec <= 1e-10),
    ]


def geometry_properties():
    rng = np.random.default_rng(1)
    t = rng.uniform(0, 2 * np.pi, 100)
    h = 1e-5
    worst = 0.0
    for name in CURVES:
        c = get_curve(name)
        for f, df in ((c.position, c.d1), (c.d1, c.d2), (c.d2, c.d3)):
            fd = (f(t + h) - f(t - h)) / (2 * h)
            worst = max(worst, float(np.abs(fd - df(t)).max()))
    return [PropertyResult("geometry", "analytic vs centered-difference derivatives", worst, "<=1e-8", worst <= 1e-8)]


def mie_properties():
    cfg = TransmissionConfig(geometry="circle", omega=8, eps2=2)
    sol = mie_solve(1.0, cfg)
    res = optical_theorem_residual(sol)
    jump = max(trace_residual(sol))
    return [
        PropertyResult("mie", "optical theorem residual", res, "<=1e-10", res <= 1e-10),
        PropertyResult("mie", "transmission-condition residual at 256 angles", jump, "<=1e-12", jump <= 1e-12),
    ]


def formulation_properties(tol=1e-8):
    # n = 128 puts the discretization error well below the solver tolerance
    cfg = TransmissionConfig(geometry="kite", omega=8, eps2=2, n=128, tol=tol)
    fields = {}
    results = []
    for f in ("sk14", "sk15", "fk16", "skr-lp", "skr-ps"):
        system = assemble_formulation(cfg.with_(formulation=f))
        rep = gmres_solve(system.matvec, system.rhs, tol)
        fields[f] = far_field(system, rep)
        dense = np.linalg.solve(system.matrix, system.rhs)
        dev = np.abs(rep.solution - dense).max() / np.abs(dense).max()
        results.append(PropertyResult("gmres", f"GMRES vs dense solve {f}", dev, f"<={10 * tol:g}", dev <= 10 * tol))
        if f.startswith("skr"):
            d = relative_far_field_difference(fields[f], far_field_from_traces(system, rep))
            results.append(PropertyResult("postprocess", f"SKR vs trace far field {f}", d, f"<={10 * tol:g}", d <= 10 * tol))
    names = list(fields)
    worst = max(relative_far_field_difference(fields[a], fields[b]) for i, a in enumerate(names) for b in names[i + 1 :])
    results.append(PropertyResult("formulations", "pairwise relative far-field spread", worst, f"<={10 * tol:g}", worst <= 10 * tol))
    return results


def far_field_kernel_property():
    """Far field from asymptotic kernels vs layer potentials evaluated at radius 1e6."""
    nodes = sample(get_curve("kite"), 64)
    k = 8.0
    rng = np.random.default_rng(2)
    phi = rng.standard_normal(nodes.size) + 1j * rng.standard_normal(nodes.size)
    psi = rng.standard_normal(nodes.size) + 1j * rng.standard_normal(nodes.size)
    theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    dirs = np.array([np.cos(theta), np.sin(theta)])
    ff = far_field_from_densities(nodes, k, phi, psi, dirs).amplitudes
    err = float(np.abs(large_radius_far_field(nodes, k, phi, psi, dirs) - ff).max() / np.abs(ff).max())
    return [PropertyResult("postprocess", "asymptotic far-field kernel vs radius 1e6", err, "<=1e-6", err <= 1e-6)]


def large_radius_far_field(nodes, k, phi, psi, dirs, radius=1e6):
    """``sqrt(R) e^{-ikR} (D[phi] - S[psi])(R x_hat)``, Richardson-extrapolated in ``1/R`` from ``R, 2R``."""

    def scaled(R):
        pts = R * dirs
        d = pts[:, :, None] - nodes.x[:, None, :]
        r = np.hypot(d[0], d[1])
        nd = d[0] * nodes.normal[0] + d[1] * nodes.normal[1]
        w = nodes.weights
        u = (0.25j * k * special.hankel1(1, k * r) * nd / r * w) @ phi - (0.25j * special.hankel1(0, k * r) * w) @ psi
        return u * np.sqrt(R) * np.exp(-1j * k * R)

    return 2 * scaled(2 * radius) - scaled(radius)


def mie_agreement_property():
    cfg = TransmissionConfig(geometry="circle", omega=8, eps2=2, n=32, formulation="sk15")
    system = assemble_formulation(cfg)
    rep = gmres_solve(system.matvec, system.rhs, cfg.tol)
    e = far_field_error(far_field(system, rep), mie_far_field(mie_solve(1.0, cfg)))
    return [PropertyResult("mie", "SK15 vs Mie far field, 128 unknowns", e, "<=1e-7", e <= 1e-7)]


SUITES = {
    "specfun": specfun_properties,
    "geometry": geometry_properties,
    "spectral": spectral_properties,
    "calderon": lambda: [calderon_property(g, pairing=p) for g in ("circle", "kite") for p in ("SN", "NS")],
    "positivity": positivity_properties,
    "decay": decay_properties,
    "mie": mie_properties,
    "mie-agreement": mie_agreement_property,
    "far-field-kernel": far_field_kernel_property,
    "formulations": formulation_properties,
}


def run_properties(suites=None, perturb_diagonal=0.0, kappa=2 + 1j):
    """Run the named suites (all by default) and return a list of results.

    ``perturb_diagonal`` feeds a fault into the Calderon checks; ``kappa``
    is the regularizing wavenumber for the positivity suite and must have a
    strictly positive imaginary part.
    """
    check_wavenumber(kappa, strict=True)
    names = list(SUITES) if suites is None else list(suites)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown property suite {name!r}")
        if name == "calderon" and perturb_diagonal:
            results += [calderon_property(g, pairing=p, perturb=perturb_diagonal) for g in ("circle", "kite") for p in ("SN", "NS")]
        elif name == "positivity":
            results += positivity_properties(kappa)
        else:
            results += SUITES[name]()
    return results
