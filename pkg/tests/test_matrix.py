import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from feec.base import DimensionMismatch, NotSquare, Singular
from feec.combinatorics import permutation_sign
from feec.matrix import ExactMatrix


def leibniz_det(rows):
    size = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(size)):
        term = Fraction(permutation_sign(perm))
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


@pytest.mark.parametrize(
    "rows, det",
    [
        ([[1, 2], [3, 4]], -2),
        ([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]], Fraction(1, 60)),
        ([[2, 0, 1], [1, 3, 2], [1, 1, 2]], 6),
        ([[2, 0, 1], [1, 3, 2], [1, 1, 1]], 0),
        ([[0, 1], [1, 0]], -1),
    ],
)
def test_det(rows, det):
    assert ExactMatrix.from_rows(rows).det() == det


def test_det_of_empty_matrix():
    assert ExactMatrix(0, 0).det() == 1


def test_det_not_square():
    with pytest.raises(NotSquare):
        ExactMatrix(2, 3).det()


def test_rank():
    assert ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]]).rank() == 2
    assert ExactMatrix(3, 4).rank() == 0
    assert ExactMatrix(0, 4).rank() == 0
    assert ExactMatrix.identity(5).rank() == 5


def test_nullspace():
    assert ExactMatrix.from_rows([[1, 1]]).nullspace() == [[-1, 1]]
    matrix = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    kernel = matrix.nullspace()
    assert len(kernel) == 2
    for v in kernel:
        assert matrix @ v == [0, 0]
    assert ExactMatrix.identity(3).nullspace() == []


def test_solve():
    matrix = ExactMatrix.from_rows([[1, 2], [3, 4]])
    assert matrix.solve([5, 11]) == [1, 2]
    assert ExactMatrix.from_rows([[1, 1], [1, 1]]).solve([1, 2]) is None
    with pytest.raises(DimensionMismatch):
        matrix.solve([1, 2, 3])


def test_inverse():
    matrix = ExactMatrix.from_rows([[1, 2], [3, 4]])
    assert matrix @ matrix.inverse() == ExactMatrix.identity(2)
    with pytest.raises(Singular):
        ExactMatrix.from_rows([[1, 2], [2, 4]]).inverse()


def test_shapes():
    matrix = ExactMatrix.from_columns([[1, 2, 3], [4, 5, 6]], 3)
    assert matrix.shape == (3, 2)
    assert matrix.T.shape == (2, 3)
    assert matrix.column(1) == [4, 5, 6]
    assert ExactMatrix.stack([matrix, matrix], 2).rows == 6
    with pytest.raises(DimensionMismatch):
        ExactMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        ExactMatrix.stack([matrix.T], 2)
    with pytest.raises(DimensionMismatch):
        matrix @ matrix


def test_str():
    matrix = ExactMatrix.from_rows([[Fraction(1, 2), 0], [-3, Fraction(-2, 3)]])
    assert str(matrix) == "1/2 0\n-3 -2/3"
    assert repr(matrix) == "ExactMatrix(2x2)"


small = st.integers(min_value=-4, max_value=4)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_leibniz_formula(rows):
    matrix = ExactMatrix.from_rows(rows)
    det = leibniz_det([[Fraction(v) for v in row] for row in rows])
    assert matrix.det() == det
    assert (matrix.rank() == 3) == (det != 0)


@given(
    st.lists(st.lists(small, min_size=4, max_size=4), min_size=2, max_size=4),
)
def test_rank_nullity(rows):
    matrix = ExactMatrix.from_rows(rows)
    kernel = matrix.nullspace()
    assert matrix.rank() + len(kernel) == 4
    for v in kernel:
        assert all(x == 0 for x in matrix @ v)
