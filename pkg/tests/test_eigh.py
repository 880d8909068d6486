import numpy as np
import pytest

from balanced_spectra.eigh import (
    householder_tridiagonal,
    ql_implicit_eigenvalues,
    symmetric_eigenvalues,
)
from balanced_spectra.errors import InvalidArgumentError, SolverFailureError


def test_diagonal_matrix():
    values = symmetric_eigenvalues(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(values, [1.0, 2.0, 3.0], atol=1e-14)


def test_rank_one_all_ones():
    values = symmetric_eigenvalues(np.ones((4, 4)))
    assert np.allclose(values, [0.0, 0.0, 0.0, 4.0], atol=1e-12)


def test_exchange_matrix():
    values = symmetric_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(values, [-1.0, 1.0], atol=1e-14)


def test_single_entry():
    assert symmetric_eigenvalues(np.array([[5.5]])) == pytest.approx([5.5])


@pytest.mark.parametrize("n", [2, 3, 10, 30, 50])
def test_against_reference_solver(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        a = rng.standard_normal((n, n))
        a = a + a.T
        mine = symmetric_eigenvalues(a)
        ref = np.linalg.eigvalsh(a)
        scale = max(1.0, float(np.max(np.abs(ref))))
        assert np.max(np.abs(mine - ref)) < 1e-10 * scale


def test_shift_covariance():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a = rng.standard_normal((30, 30))
        a = a + a.T
        base = symmetric_eigenvalues(a)
        shifted = symmetric_eigenvalues(a + 3.25 * np.eye(30))
        assert np.max(np.abs(shifted - (base + 3.25))) < 1e-9


def test_scale_covariance():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = rng.standard_normal((30, 30))
        a = a + a.T
        base = symmetric_eigenvalues(a)
        scaled = symmetric_eigenvalues(-2.5 * a)
        assert np.max(np.abs(scaled - np.sort(-2.5 * base))) < 1e-9


def test_trace_identities_every_solve():
    rng = np.random.default_rng(3)
    for n in (5, 20, 60):
        a = rng.standard_normal((n, n))
        a = a + a.T
        values = symmetric_eigenvalues(a)
        assert values.sum() == pytest.approx(np.trace(a), abs=1e-10 * n)
        assert (values**2).sum() == pytest.approx((a**2).sum(), rel=1e-12, abs=1e-9)


def test_householder_preserves_spectrum():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((25, 25))
    a = a + a.T
    d, e = householder_tridiagonal(a)
    tri = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(np.linalg.eigvalsh(tri), np.linalg.eigvalsh(a), atol=1e-10)


def test_already_tridiagonal_input():
    d = np.array([1.0, -2.0, 0.5, 4.0])
    e = np.array([0.5, 0.0, -1.5])
    tri = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(
        ql_implicit_eigenvalues(d, e), np.linalg.eigvalsh(tri), atol=1e-12
    )


def test_sweep_cap_raises_solver_failure():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((12, 12))
    a = a + a.T
    with pytest.raises(SolverFailureError) as info:
        symmetric_eigenvalues(a, max_sweeps=0)
    assert info.value.index is not None


def test_invalid_inputs():
    with pytest.raises(InvalidArgumentError):
        symmetric_eigenvalues(np.zeros((2, 3)))
    with pytest.raises(InvalidArgumentError):
        symmetric_eigenvalues(np.eye(3), tol=0.0)


def test_degenerate_spectra():
    assert np.allclose(symmetric_eigenvalues(np.zeros((6, 6))), np.zeros(6))
    values = symmetric_eigenvalues(7.0 * np.eye(5))
    assert np.allclose(values, 7.0)
