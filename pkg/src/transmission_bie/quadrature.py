"""Spectral quadrature on ``2n`` equispaced nodes of ``[0, 2*pi)``.

Everything here is either a circulant matrix or a diagonal operator in
Fourier space. Mode numbers follow the asymmetric convention
``m = -n, ..., n-1``; the unpaired mode ``-n`` gets the symbol value at
``xi = -n`` with no symmetrization.
"""

from functools import lru_cache

import numpy as np
from scipy.linalg import circulant


def mode_numbers(size):
    """Integer mode numbers in FFT order for ``size`` samples."""
    return np.fft.fftfreq(size, 1.0 / size).round().astype(int)


def _half(size):
    if size % 2:
        raise ValueError("an even number of nodes is required")
    return size // 2


@lru_cache(maxsize=32)
def _log_weights_row(n):
    # R_j(t_i) depends on (i - j) mod 2n only
    l = np.arange(2 * n)
    m = np.arange(1, n)
    arg = np.pi * np.outer(l, m) / n
    row = -(2 * np.pi / n) * (np.cos(arg) / m).sum(axis=1) - (np.pi / n**2) * np.cos(np.pi * l)
    row.setflags(write=False)
    return row


def log_weights(n):
    """Weights ``R_j(t_i)`` for ``int log(4 sin^2((t - tau)/2)) f(tau) dtau``.

    Returns the real ``2n x 2n`` circulant matrix
    ``R_j(t) = -(2 pi / n) sum_{m=1}^{n-1} cos(m (t - t_j)) / m
    - (pi / n^2) cos(n (t - t_j))`` evaluated at ``t = t_i``.
    """
    return circulant(_log_weights_row(n))


def split_matrix(K1, K2, R=None):
    """Nystrom matrix for the kernel ``K1 log(4 sin^2((t-tau)/2)) + K2``."""
    K1 = np.asarray(K1)
    K2 = np.asarray(K2)
    if K1.shape != K2.shape or K1.ndim != 2 or K1.shape[0] != K1.shape[1]:
        raise ValueError("kernel samples must be square and of equal shape")
    n = _half(K1.shape[0])
    if R is None:
        R = log_weights(n)
    return R * K1 + (np.pi / n) * K2


def log_quadrature(K1, K2, density):
    """Apply the log-split product quadrature to ``density`` at all nodes."""
    density = np.asarray(density)
    if density.shape[0] != np.shape(K1)[0]:
        raise ValueError("density length does not match kernel size")
    return split_matrix(K1, K2) @ density


def fourier_coeffs(values):
    """Coefficients ``c_m``, ``m = -n..n-1`` (ascending), with ``f = sum c_m e^{imt}``."""
    values = np.asarray(values)
    _half(values.shape[0])
    return np.fft.fftshift(np.fft.fft(values, axis=0), axes=0) / values.shape[0]


def inverse_fourier_coeffs(coeffs):
    coeffs = np.asarray(coeffs)
    _half(coeffs.shape[0])
    return np.fft.ifft(np.fft.ifftshift(coeffs, axes=0), axis=0) * coeffs.shape[0]


def apply_multiplier(symbol, values):
    """Apply the Fourier multiplier whose symbol is ``symbol(m)`` (FFT order array)."""
    values = np.asarray(values)
    sym = np.asarray(symbol)
    if values.ndim > 1:
        sym = sym.reshape((-1,) + (1,) * (values.ndim - 1))
    return np.fft.ifft(sym * np.fft.fft(values, axis=0), axis=0)


def multiplier_matrix(symbol):
    """Dense circulant matrix of a Fourier multiplier (symbol in FFT order)."""
    col = np.fft.ifft(np.asarray(symbol, dtype=complex))
    return circulant(col)


def hilbert_symbol(size):
    return -0.5 * np.abs(mode_numbers(size)).astype(float)


def hilbert_derivative(density):
    """``(1/4pi) PV int cot((tau - t)/2) psi'(tau) dtau``; symbol ``-|m|/2``."""
    density = np.asarray(density)
    out = apply_multiplier(hilbert_symbol(density.shape[0]), density)
    return out.real if np.isrealobj(density) else out


def hilbert_derivative_matrix(n):
    return multiplier_matrix(hilbert_symbol(2 * n)).real


def trapezoid(values, n):
    return (np.pi / n) * np.sum(values, axis=0)
