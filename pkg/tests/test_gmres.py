import numpy as np
import pytest

from transmission_bie.formulations import TransmissionConfig, assemble_formulation
from transmission_bie.gmres import ConvergenceError, KrylovReport, gmres_solve


def test_identity_one_iteration(rng):
    b = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    rep = gmres_solve(np.eye(10), b)
    assert rep.iterations == 1
    np.testing.assert_allclose(rep.solution, b)


def test_two_distinct_eigenvalues():
    rep = gmres_solve(np.diag([1.0, 2.0]).astype(complex), np.array([1.0, 1.0]))
    assert rep.iterations <= 2
    np.testing.assert_allclose(rep.solution, [1.0, 0.5], atol=1e-14)


def test_callable_and_matrix_agree(rng):
    A = np.eye(50) + rng.standard_normal((50, 50)) / 20
    b = rng.standard_normal(50)
    r1 = gmres_solve(A, b, 1e-10)
    r2 = gmres_solve(lambda v: A @ v, b, 1e-10)
    assert r1.iterations == r2.iterations
    np.testing.assert_allclose(r1.solution, r2.solution)


def test_residual_history(rng):
    A = np.diag(np.linspace(1, 50, 200)) + rng.standard_normal((200, 200)) / 15
    b = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    rep = gmres_solve(A, b, 1e-10)
    res = np.array(rep.residuals)
    assert res[0] == 1.0 and len(res) == rep.iterations + 1
    assert np.all(np.diff(res) <= 1e-14)
    assert rep.iterations > 64  # exercises storage growth
    true = np.linalg.norm(b - A @ rep.solution) / np.linalg.norm(b)
    assert true <= 1e-10 * 1.01
    assert abs(true - res[-1]) <= 1e-12


def test_matches_dense_solve():
    system = assemble_formulation(TransmissionConfig(geometry="kite", n=48, formulation="skr-lp"))
    rep = gmres_solve(system.matvec, system.rhs, 1e-8)
    x = np.linalg.solve(system.matrix, system.rhs)
    assert np.abs(rep.solution - x).max() / np.abs(x).max() <= 1e-7


def test_krylov_basis_orthogonal():
    # rerun Arnoldi on a small system and check the basis explicitly
    rng = np.random.default_rng(3)
    A = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40)) + 8 * np.eye(40)
    b = rng.standard_normal(40)
    store = []

    def apply(v):
        store.append(v.copy())
        return A @ v

    rep = gmres_solve(apply, b, 1e-12)
    V = np.array(store).T
    G = V.conj().T @ V
    assert np.abs(G - np.eye(G.shape[0])).max() <= 1e-12
    assert rep.converged


def test_nonconvergence_raises_with_history():
    A = np.diag(np.linspace(1, 1000, 100))
    with pytest.raises(ConvergenceError) as info:
        gmres_solve(A, np.ones(100), 1e-12, maxiter=5)
    assert info.value.report.iterations == 5
    assert len(info.value.report.residuals) == 6
    rep = gmres_solve(A, np.ones(100), 1e-12, maxiter=5, raise_on_failure=False)
    assert not rep.converged


def test_breakdown_reported():
    # b lies in a 3-dimensional invariant subspace
    A = np.diag([1.0, 2.0, 3.0, 4.0, 5.0])
    rep = gmres_solve(A, np.array([1.0, 1.0, 1.0, 0, 0]), 1e-30)
    assert rep.breakdown and rep.converged and rep.iterations == 3
    np.testing.assert_allclose(rep.solution, [1, 0.5, 1 / 3, 0, 0], atol=1e-14)


def test_zero_rhs_rejected():
    with pytest.raises(ValueError):
        gmres_solve(np.eye(3), np.zeros(3))


def test_report_fields():
    rep = KrylovReport(2, [1.0, 0.1, 1e-9], np.zeros(2))
    assert rep.relative_residual == 1e-9
