import math

import numpy as np
import pytest

from balanced_spectra.errors import InvalidArgumentError
from balanced_spectra.inputs import Distribution, InputSequence, generate_sequence
from balanced_spectra.matgen import (
    MatrixKind,
    build_matrix,
    needed_length,
    occurrence_count,
    principal_submatrix,
)
from balanced_spectra.spectra import trace_power


def _seq(values):
    return InputSequence(values=np.asarray(values, dtype=float), dist=Distribution.STANDARD_NORMAL, seed=0)


def test_occurrence_corner_entries():
    assert occurrence_count(MatrixKind.T, 5, 1, 5) == 1
    for n in (3, 10, 113):
        assert occurrence_count(MatrixKind.H, n, n, n) == 1
        assert occurrence_count(MatrixKind.H, n, 1, 1) == 1
        assert occurrence_count(MatrixKind.T, n, 1, 1) == n


@pytest.mark.parametrize("kind", [MatrixKind.T, MatrixKind.H])
@pytest.mark.parametrize("n", [1, 2, 7, 40])
def test_occurrence_reciprocal_sum_counts_variables(kind, n):
    # each variable's occurrences sum its reciprocal to 1; 2n-1 variables total
    total = sum(
        1.0 / occurrence_count(kind, n, i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )
    assert abs(total - (2 * n - 1)) < 1e-9


def test_occurrence_symmetry_and_range():
    n = 23
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ct = occurrence_count(MatrixKind.T, n, i, j)
            ch = occurrence_count(MatrixKind.H, n, i, j)
            assert 1 <= ct <= n and 1 <= ch <= n
            assert ch == occurrence_count(MatrixKind.H, n, j, i)
            assert ct == occurrence_count(MatrixKind.T, n, 1, 1 + abs(i - j))


def test_occurrence_index_validation():
    with pytest.raises(InvalidArgumentError):
        occurrence_count(MatrixKind.T, 5, 0, 3)
    with pytest.raises(InvalidArgumentError):
        occurrence_count(MatrixKind.H, 5, 2, 6)


def test_balanced_toeplitz_2x2_layout():
    x0, x1 = 0.7, -1.3
    mat = build_matrix(MatrixKind.BT, _seq([x0, x1]), 2)
    expected = np.array([[x0 / math.sqrt(2), x1], [x1, x0 / math.sqrt(2)]])
    assert np.array_equal(mat.entries, expected)


def test_balanced_hankel_2x2_layout():
    x1, x2, x3 = 0.5, 2.0, -0.25
    mat = build_matrix(MatrixKind.BH, _seq([x1, x2, x3]), 2)
    expected = np.array([[x1, x2 / math.sqrt(2)], [x2 / math.sqrt(2), x3]])
    assert np.array_equal(mat.entries, expected)


def test_unbalanced_toeplitz_uniform_scaling():
    mat = build_matrix(MatrixKind.T, _seq([1.0, 1.0, 1.0]), 3)
    assert np.allclose(mat.entries, 1 / math.sqrt(3))


def test_exact_symmetry_all_kinds():
    for kind in MatrixKind:
        n = 31
        seq = generate_sequence(Distribution.STANDARD_NORMAL, needed_length(kind, n), 3)
        mat = build_matrix(kind, seq, n)
        assert np.array_equal(mat.entries, mat.entries.T)
        assert mat.parent_n == n


def test_sequence_too_short():
    with pytest.raises(InvalidArgumentError):
        build_matrix(MatrixKind.BT, _seq([1.0, 2.0]), 3)
    with pytest.raises(InvalidArgumentError):
        build_matrix(MatrixKind.BH, _seq([1.0, 2.0, 3.0, 4.0]), 3)


@pytest.mark.parametrize("kind", [MatrixKind.BT, MatrixKind.BH])
@pytest.mark.parametrize("n", [50, 400])
def test_rademacher_second_trace_moment_exact(kind, n):
    # with +/-1 inputs every squared entry is 1/count, so the sum telescopes
    seq = generate_sequence(Distribution.RADEMACHER, needed_length(kind, n), 11)
    mat = build_matrix(kind, seq, n)
    assert trace_power(mat, 2) / n == pytest.approx((2 * n - 1) / n, abs=1e-12)


def test_submatrix_eps_zero_is_identity():
    seq = generate_sequence(Distribution.STANDARD_NORMAL, 79, 5)
    mat = build_matrix(MatrixKind.BT, seq, 79)
    sub = principal_submatrix(mat, 0.0)
    assert sub.n == 79
    assert np.array_equal(sub.entries, mat.entries)


def test_bt_submatrix_dimension_and_scaling_bound():
    n, eps = 400, 0.1
    seq = generate_sequence(Distribution.RADEMACHER, n, 5)
    mat = build_matrix(MatrixKind.BT, seq, n)
    sub = principal_submatrix(mat, eps)
    assert sub.n == 360
    assert sub.parent_n == n
    # retained lags keep counts >= n*eps, so |entries| <= 1/sqrt(n*eps - 1)
    assert np.max(np.abs(sub.entries)) <= 1.0 / math.sqrt(n * eps - 1)


def test_bh_submatrix_trims_both_ends():
    n, eps = 400, 0.1
    seq = generate_sequence(Distribution.STANDARD_NORMAL, 2 * n - 1, 5)
    mat = build_matrix(MatrixKind.BH, seq, n)
    sub = principal_submatrix(mat, eps)
    assert sub.n == 360
    # rows 21..380 of the parent (1-based)
    assert np.array_equal(sub.entries, mat.entries[20:380, 20:380])


def test_submatrix_entries_copied_not_rescaled():
    seq = generate_sequence(Distribution.STANDARD_NORMAL, 100, 5)
    mat = build_matrix(MatrixKind.BT, seq, 100)
    sub = principal_submatrix(mat, 0.25)
    assert np.array_equal(sub.entries, mat.entries[: sub.n, : sub.n])


def test_submatrix_odd_trim_dimension_recorded():
    seq = generate_sequence(Distribution.STANDARD_NORMAL, 2 * 11 - 1, 5)
    mat = build_matrix(MatrixKind.BH, seq, 11)
    sub = principal_submatrix(mat, 0.3)  # 11*0.3/2 = 1.65 -> trim 1 per side
    assert sub.n == 9


def test_submatrix_invalid_inputs():
    seq = generate_sequence(Distribution.STANDARD_NORMAL, 10, 5)
    unbalanced = build_matrix(MatrixKind.T, seq, 10)
    with pytest.raises(InvalidArgumentError):
        principal_submatrix(unbalanced, 0.1)
    balanced = build_matrix(MatrixKind.BT, seq, 10)
    with pytest.raises(InvalidArgumentError):
        principal_submatrix(balanced, 1.0)
    with pytest.raises(InvalidArgumentError):
        principal_submatrix(balanced, -0.1)


def test_entries_read_only():
    seq = generate_sequence(Distribution.STANDARD_NORMAL, 10, 5)
    mat = build_matrix(MatrixKind.BT, seq, 10)
    with pytest.raises(ValueError):
        mat.entries[0, 0] = 9.9
