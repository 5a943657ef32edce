from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigma_align import numerics
from sigma_align.errors import DimensionMismatch, EmptyMatrix
from sigma_align.numerics import (Tolerance, columns_subset_of, exact_matrix,
                                  rank, subspace_contains, to_float)

TOL = numerics.DEFAULT_TOL


def test_rank_identity():
    assert rank(np.eye(3)) == 3
    assert rank(exact_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3


def test_rank_proportional_rows():
    m = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert rank(m) == 1
    assert rank(exact_matrix([[1, 2], [2, 4]])) == 1


def test_rank_empty_matrix_rejected():
    with pytest.raises(EmptyMatrix):
        rank(np.zeros((0, 3)))


def test_rank_zero_matrix():
    assert rank(np.zeros((4, 4))) == 0
    assert rank(numerics.exact_zeros(4, 4)) == 0


def test_rank_monomial_tall_matrix():
    # 6x4 with entries x_i^e_j, exponents {1,2,3,4}: full column rank for
    # generic x (cross-checked exactly below).
    rng = np.random.default_rng(11)
    x = [Fraction(int(k), 64) for k in rng.integers(33, 128, size=6)]
    m = exact_matrix([[xi ** e for e in (1, 2, 3, 4)] for xi in x])
    assert rank(m) == 4
    assert rank(to_float(m)) == 4


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rel_rank_tol=0.0)


def test_subspace_contains_column_subset():
    b = np.array([[1.0, 3.0], [2.0, 5.0]])
    a = b[:, :1]
    assert subspace_contains(a, b)


def test_subspace_contains_orthogonal():
    b = np.array([[1.0], [0.0]])
    a = np.array([[0.0], [1.0]])
    assert not subspace_contains(a, b)


def test_subspace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        subspace_contains(np.eye(2), np.eye(3))


def test_columns_subset_permutation():
    b = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    a = b[:, [2, 0, 1]]
    assert columns_subset_of(a, b)


def test_columns_subset_scaling_breaks_equality():
    b = np.array([[1.0], [2.0]])
    assert subspace_contains(2 * b, b)
    assert not columns_subset_of(2 * b, b)


def test_columns_subset_implies_span():
    rng = np.random.default_rng(0)
    b = rng.normal(size=(5, 3))
    a = b[:, [1, 1, 2]]
    assert columns_subset_of(a, b)
    assert subspace_contains(a, b)


def test_columns_subset_exact_mode():
    b = exact_matrix([[1, 2], [3, 4]])
    a = b[:, [1]]
    assert columns_subset_of(a, b)
    a2 = a.copy()
    a2[0, 0] = a2[0, 0] + Fraction(1, 10 ** 12)
    assert not columns_subset_of(a2, b)


@st.composite
def small_rational_matrix(draw):
    nrows = draw(st.integers(1, 6))
    ncols = draw(st.integers(1, 6))
    entry = st.fractions(min_value=-4, max_value=4, max_denominator=8)
    return [[draw(entry) for _ in range(ncols)] for _ in range(nrows)]


@given(small_rational_matrix())
@settings(max_examples=150, deadline=None)
def test_rank_transpose_invariant(rows):
    m = exact_matrix(rows)
    assert rank(m) == rank(m.T)


# Small-integer matrices keep |det| >= 1 when nonsingular, so the float
# cutoff cannot disagree with the exact rank.
@given(st.integers(1, 5), st.integers(1, 5), st.data())
@settings(max_examples=150, deadline=None)
def test_float_rank_matches_exact_rank(nrows, ncols, data):
    rows = [[data.draw(st.integers(-4, 4)) for _ in range(ncols)]
            for _ in range(nrows)]
    m = exact_matrix(rows)
    if np.all(to_float(m) == 0.0):
        assert rank(m) == 0
        return
    assert rank(to_float(m)) == rank(m)


def test_solve_exact_roundtrip():
    a = exact_matrix([[2, 1], [1, 3]])
    b = exact_matrix([[1, 0], [0, 1]])
    x = numerics.solve_exact(a, b)
    prod = numerics.matmul(a, x)
    assert all(prod[i, j] == (1 if i == j else 0)
               for i in range(2) for j in range(2))


def test_solve_exact_singular():
    a = exact_matrix([[1, 2], [2, 4]])
    with pytest.raises(np.linalg.LinAlgError):
        numerics.solve_exact(a, exact_matrix([[1], [1]]))
