"""End-to-end solve: assemble, iterate, post-process, compare to a reference."""

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .formulations import TransmissionConfig, assemble_formulation
from .gmres import KrylovReport, gmres_solve
from .mie import mie_far_field, mie_solve
from .postprocess import DEFAULT_DIRECTION_COUNT, FarField, default_directions, far_field, far_field_error

REFERENCE_FORMULATION = "sk15"


@dataclass
class SolveReport:
    config: TransmissionConfig
    kappa1: Optional[complex]
    iterations: int
    residuals: list = field(repr=False)
    solution: np.ndarray = field(repr=False)
    far_field: FarField = field(repr=False)
    error: Optional[float] = None
    reference: Optional[str] = None
    assemble_time: float = 0.0
    solve_time: float = 0.0

    def summary(self):
        c = self.config
        return {
            "geometry": c.geometry,
            "formulation": c.formulation,
            "omega": c.omega,
            "eps1": c.eps1,
            "eps2": c.eps2,
            "nu": c.nu,
            "kappa1": None if self.kappa1 is None else str(self.kappa1),
            "unknowns": c.unknowns,
            "iterations": self.iterations,
            "residual": self.residuals[-1],
            "far_field_error": self.error,
            "reference": self.reference,
            "wall_time": self.assemble_time + self.solve_time,
        }


def _direction_key(config):
    return tuple(float(v) for v in config.incident_direction)


@lru_cache(maxsize=16)
def _reference_far_field(geometry, omega, eps1, eps2, polarization, n, direction, count):
    config = TransmissionConfig(
        geometry=geometry,
        omega=omega,
        eps1=eps1,
        eps2=eps2,
        polarization=polarization,
        formulation=REFERENCE_FORMULATION,
        n=n,
        direction=direction,
    )
    directions = default_directions(count)
    if geometry == "circle":
        return mie_far_field(mie_solve(1.0, config), directions), "mie"
    system = assemble_formulation(config)
    x = np.linalg.solve(system.matrix, system.rhs)
    report = KrylovReport(0, [0.0], x)
    return far_field(system, report, directions), f"sk15-lu-n{n}"


def reference_far_field(config, count=DEFAULT_DIRECTION_COUNT):
    """Mie series on the circle; otherwise SK15 at twice the resolution, solved directly."""
    c = config
    return _reference_far_field(
        c.geometry, c.omega, c.eps1, c.eps2, c.polarization, 2 * c.n, _direction_key(c), count
    )


def solve(config, directions=DEFAULT_DIRECTION_COUNT, with_reference=True, maxiter=None):
    """Solve one configuration and return a :class:`SolveReport`.

    Raises :class:`~transmission_bie.gmres.ConvergenceError` if GMRES stalls.
    """
    t0 = time.perf_counter()
    system = assemble_formulation(config)
    t1 = time.perf_counter()
    krylov = gmres_solve(system.matvec, system.rhs, tol=config.tol, maxiter=maxiter)
    t2 = time.perf_counter()
    ff = far_field(system, krylov, default_directions(directions))
    error = ref_name = None
    if with_reference:
        ref, ref_name = reference_far_field(config, directions)
        error = far_field_error(ff, ref)
    return SolveReport(
        config, system.kappa1, krylov.iterations, krylov.residuals, krylov.solution, ff, error, ref_name, t1 - t0, t2 - t1
    )


def matvec_seconds(configs, blocks=30, calls=10, seed=0):
    """Per-matvec wall time of the operator-by-operator matvec of each config.

    Formulations are timed in interleaved blocks of ``calls`` products and the
    fastest block is kept, which suppresses scheduler noise.
    """
    rng = np.random.default_rng(seed)
    appliers = []
    for config in configs:
        system = assemble_formulation(config)
        x = rng.standard_normal(system.rhs.size) + 1j * rng.standard_normal(system.rhs.size)
        system.composed(x)
        appliers.append((system.composed, x))
    best = [np.inf] * len(appliers)
    for _ in range(blocks):
        for i, (apply, x) in enumerate(appliers):
            t0 = time.perf_counter()
            for _ in range(calls):
                apply(x)
            best[i] = min(best[i], (time.perf_counter() - t0) / calls)
    return best
