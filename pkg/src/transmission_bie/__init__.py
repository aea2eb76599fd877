"""Boundary integral solvers for two-dimensional Helmholtz transmission problems."""

from .formulations import FORMULATIONS, TransmissionConfig, assemble_formulation
from .gmres import ConvergenceError, gmres_solve
from .mie import mie_far_field, mie_solve
from .postprocess import FarField, far_field, far_field_error
from .solver import SolveReport, solve

__all__ = [
    "FORMULATIONS",
    "ConvergenceError",
    "FarField",
    "SolveReport",
    "TransmissionConfig",
    "assemble_formulation",
    "far_field",
    "far_field_error",
    "gmres_solve",
    "mie_far_field",
    "mie_solve",
    "solve",
]
