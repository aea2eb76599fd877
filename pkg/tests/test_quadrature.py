import numpy as np
import pytest
from scipy import integrate

from transmission_bie import quadrature as q

N = 32
T = np.pi * np.arange(2 * N) / N


def test_log_kernel_on_constant():
    one = np.ones((2 * N, 2 * N))
    out = q.log_quadrature(one, 0 * one, np.ones(2 * N))
    np.testing.assert_allclose(out, 0, atol=1e-13)


def test_log_kernel_on_cosine():
    one = np.ones((2 * N, 2 * N))
    m = 3
    out = q.log_quadrature(one, 0 * one, np.cos(m * T))
    np.testing.assert_allclose(out, -(2 * np.pi / m) * np.cos(m * T), atol=1e-13)


def test_log_kernel_against_adaptive_quadrature():
    # oracle: adaptive quadrature with the log singularity flagged as a breakpoint
    K1 = lambda t, s: np.exp(np.cos(t) * np.sin(s))
    f = lambda s: 1 / (2 + np.cos(s))
    approx = q.log_quadrature(K1(T[:, None], T[None, :]), np.zeros((2 * N, 2 * N)), f(T))
    for i in (0, 7, 40):
        t = T[i]
        g = lambda s: K1(t, s) * f(s) * np.log(4 * np.sin((t - s) / 2) ** 2)
        ref = integrate.quad(g, t, t + 2 * np.pi, limit=200, epsabs=1e-13, epsrel=1e-13)[0]
        assert abs(approx[i] - ref) <= 1e-11


def test_smooth_part_is_trapezoid():
    one = np.ones((2 * N, 2 * N))
    out = q.log_quadrature(0 * one, one, np.ones(2 * N))
    np.testing.assert_allclose(out, 2 * np.pi, atol=1e-13)


def test_log_weights_circulant():
    R = q.log_weights(N)
    for shift in (1, 5, 17):
        np.testing.assert_array_equal(np.roll(np.roll(R, shift, 0), shift, 1), R)


def test_hilbert_derivative_examples():
    np.testing.assert_allclose(q.hilbert_derivative(np.ones(2 * N)), 0, atol=1e-14)
    e3 = np.exp(3j * T)
    np.testing.assert_allclose(q.hilbert_derivative(e3), -1.5 * e3, atol=1e-13)
    np.testing.assert_allclose(q.hilbert_derivative(np.cos(T)), -0.5 * np.cos(T), atol=1e-14)


def test_hilbert_matrix_matches_fft():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(2 * N)
    np.testing.assert_allclose(q.hilbert_derivative_matrix(N) @ v, q.hilbert_derivative(v), atol=1e-12)


def test_fourier_coeffs():
    c = q.fourier_coeffs(np.ones(2 * N))
    m = np.arange(-N, N)
    np.testing.assert_allclose(c, (m == 0).astype(float), atol=1e-15)
    t64 = np.pi * np.arange(64) / 32
    c2 = q.fourier_coeffs(np.exp(2j * t64))
    np.testing.assert_allclose(c2, (np.arange(-32, 32) == 2).astype(float), atol=1e-14)


def test_fourier_round_trip():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N)
    np.testing.assert_allclose(q.inverse_fourier_coeffs(q.fourier_coeffs(v)), v, atol=1e-14)


def test_exact_on_trig_polynomials():
    # product rule for log kernel times e^{ijt}, |j| < n
    one = np.ones((2 * N, 2 * N))
    for j in range(1, N):
        out = q.log_quadrature(one, 0 * one, np.exp(1j * j * T))
        np.testing.assert_allclose(out, -(2 * np.pi / j) * np.exp(1j * j * T), atol=1e-12)


def test_odd_size_rejected():
    with pytest.raises(ValueError):
        q.fourier_coeffs(np.ones(7))
    with pytest.raises(ValueError):
        q.split_matrix(np.ones((3, 3)), np.ones((3, 3)))
