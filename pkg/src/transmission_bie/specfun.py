"""Bessel and Hankel functions of integer order and complex argument.

Thin, domain-checked wrappers around the AMOS routines exposed by
``scipy.special``. Arguments are restricted to the closed first quadrant,
which is where every wavenumber used by the solver lives.
"""

import numpy as np
from scipy import special

MAX_ORDER = 500
MAX_ABS_ARG = 500.0


class SpecfunDomainError(ValueError):
    """Raised when an order or argument is outside the supported range."""


def _check(order, z, allow_zero=True):
    order = np.asarray(order)
    z = np.asarray(z, dtype=complex)
    if np.any(order < 0) or np.any(order != np.floor(order)):
        raise SpecfunDomainError("order must be a nonnegative integer")
    if np.any(order > MAX_ORDER):
        raise SpecfunDomainError(f"order exceeds {MAX_ORDER}")
    if np.any(np.abs(z) > MAX_ABS_ARG):
        raise SpecfunDomainError(f"|z| exceeds {MAX_ABS_ARG}")
    # tiny negative parts arise from roundoff in r*k products
    if np.any(z.real < -1e-14) or np.any(z.imag < -1e-14):
        raise SpecfunDomainError("argument must lie in the closed first quadrant")
    if not allow_zero and np.any(z == 0):
        raise SpecfunDomainError("Hankel function is singular at z = 0")
    return order, z


def bessel_j(order, z):
    """Bessel function of the first kind ``J_order(z)``."""
    order, z = _check(order, z)
    out = special.jv(order, z)
    return out[()] if out.ndim == 0 else out


def hankel1(order, z):
    """Hankel function of the first kind ``H^(1)_order(z)``; singular at 0."""
    order, z = _check(order, z, allow_zero=False)
    out = special.hankel1(order, z)
    return out[()] if out.ndim == 0 else out


def bessel_y(order, z):
    order, z = _check(order, z, allow_zero=False)
    out = special.yv(order, z)
    return out[()] if out.ndim == 0 else out


def bessel_j_prime(order, z):
    """Derivative ``J'_order(z)`` from the standard recurrence."""
    order, z = _check(order, z)
    out = special.jvp(order, z)
    return out[()] if out.ndim == 0 else out


def hankel1_prime(order, z):
    order, z = _check(order, z, allow_zero=False)
    out = special.h1vp(order, z)
    return out[()] if out.ndim == 0 else out


def bessel_y_prime(order, z):
    order, z = _check(order, z, allow_zero=False)
    out = special.yvp(order, z)
    return out[()] if out.ndim == 0 else out
