"""
Exact rational matrices: numpy object arrays of Fraction entries.
"""

import math
import logging
from fractions import Fraction

import numpy as np

from .base import DimensionMismatch, NotSquare, Singular, fstr


log = logging.getLogger("feec.matrix")


def _fractions(rows, cols, values=None):
    data = np.empty((rows, cols), dtype=object)
    data[...] = Fraction(0)
    if values is not None:
        for i, row in enumerate(values):
            for j, value in enumerate(row):
                data[i, j] = Fraction(value)
    return data


class ExactMatrix:
    """
    rows x cols matrix of exact rationals.

    rank and determinant use fraction-free (Bareiss) elimination on
    integer rows; nullspace and solve use the reduced row echelon form.
    """

    def __init__(self, rows, cols, values=None):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative shape ({}, {})".format(rows, cols))
        self.data = _fractions(rows, cols, values)

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(row) != cols for row in rows):
            raise DimensionMismatch("ragged rows, expected {} columns".format(cols))
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns, rows):
        columns = [list(col) for col in columns]
        if any(len(col) != rows for col in columns):
            raise DimensionMismatch("every column needs {} entries".format(rows))
        matrix = cls(rows, len(columns))
        for j, col in enumerate(columns):
            for i, value in enumerate(col):
                matrix.data[i, j] = Fraction(value)
        return matrix

    @classmethod
    def identity(cls, size):
        matrix = cls(size, size)
        for i in range(size):
            matrix.data[i, i] = Fraction(1)
        return matrix

    @classmethod
    def stack(cls, blocks, cols):
        """vertical concatenation of matrices with ``cols`` columns"""
        rows = []
        for block in blocks:
            if block.cols != cols:
                raise DimensionMismatch(
                    "cannot stack a {}-column block onto {}".format(block.cols, cols)
                )
            rows.extend(block.tolist())
        return cls.from_rows(rows, cols)

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, index):
        return self.data[index]

    def __setitem__(self, index, value):
        self.data[index] = Fraction(value)

    def tolist(self):
        return [list(row) for row in self.data]

    def column(self, j):
        return list(self.data[:, j])

    def transpose(self):
        result = ExactMatrix(self.cols, self.rows)
        result.data = self.data.T.copy()
        return result

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    "cannot multiply {} by {}".format(self.shape, other.shape)
                )
            result = ExactMatrix(self.rows, other.cols)
            if self.cols:
                result.data = self.data.dot(other.data)
            return result
        vector = list(other)
        if len(vector) != self.cols:
            raise DimensionMismatch(
                "vector of length {} for {} columns".format(len(vector), self.cols)
            )
        return [
            sum((self.data[i, j] * vector[j] for j in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        ]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.data == other.data))

    __hash__ = None

    def _integer_rows(self):
        """rows scaled by the lcm of their denominators, with the product of scales"""
        rows, scale = [], 1
        for row in self.data:
            lcm = 1
            for value in row:
                lcm = lcm * value.denominator // math.gcd(lcm, value.denominator)
            rows.append([int(value * lcm) for value in row])
            scale *= lcm
        return rows, scale

    def _bareiss(self):
        """echelon rank and the signed last pivot of fraction-free elimination"""
        a, scale = self._integer_rows()
        m, n = self.rows, self.cols
        sign, prev, rank = 1, 1, 0
        for col in range(n):
            if rank == m:
                break
            pivot = next((i for i in range(rank, m) if a[i][col] != 0), None)
            if pivot is None:
                continue
            if pivot != rank:
                a[pivot], a[rank] = a[rank], a[pivot]
                sign = -sign
            for i in range(rank + 1, m):
                for j in range(col + 1, n):
                    a[i][j] = (a[i][j] * a[rank][col] - a[i][col] * a[rank][j]) // prev
                a[i][col] = 0
            prev = a[rank][col]
            rank += 1
        return rank, sign * prev, scale

    def rank(self):
        if not self.rows or not self.cols:
            return 0
        rank, _, _ = self._bareiss()
        log.debug("rank of {}x{} matrix: {}".format(self.rows, self.cols, rank))
        return rank

    def nullity(self):
        return self.cols - self.rank()

    def det(self):
        if self.rows != self.cols:
            raise NotSquare("determinant of a {}x{} matrix".format(self.rows, self.cols))
        if not self.rows:
            return Fraction(1)
        rank, last, scale = self._bareiss()
        if rank < self.rows:
            return Fraction(0)
        return Fraction(last, scale)

    def rref(self):
        """(reduced row echelon form, pivot columns)"""
        a = self.data.copy()
        m, n = self.rows, self.cols
        pivots = []
        row = 0
        for col in range(n):
            if row == m:
                break
            pivot = next((i for i in range(row, m) if a[i, col] != 0), None)
            if pivot is None:
                continue
            if pivot != row:
                a[[row, pivot]] = a[[pivot, row]]
            a[row, :] = a[row, :] / a[row, col]
            for i in range(m):
                if i != row and a[i, col] != 0:
                    a[i, :] = a[i, :] - a[i, col] * a[row, :]
            pivots.append(col)
            row += 1
        result = ExactMatrix(m, n)
        result.data = a
        return result, pivots

    def nullspace(self):
        """basis of {x : A x = 0}, one free column at a time"""
        reduced, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            vector = [Fraction(0)] * self.cols
            vector[f] = Fraction(1)
            for i, p in enumerate(pivots):
                vector[p] = -reduced.data[i, f]
            basis.append(vector)
        return basis

    def solve(self, rhs):
        """one exact solution of A x = rhs, None when inconsistent"""
        rhs = [Fraction(v) for v in rhs]
        if len(rhs) != self.rows:
            raise DimensionMismatch(
                "right hand side of length {} for {} rows".format(len(rhs), self.rows)
            )
        augmented = ExactMatrix(self.rows, self.cols + 1)
        augmented.data[:, : self.cols] = self.data
        augmented.data[:, self.cols] = np.array(rhs, dtype=object)
        reduced, pivots = augmented.rref()
        if self.cols in pivots:
            return None
        solution = [Fraction(0)] * self.cols
        for i, p in enumerate(pivots):
            solution[p] = reduced.data[i, self.cols]
        return solution

    def inverse(self):
        if self.rows != self.cols:
            raise NotSquare("inverse of a {}x{} matrix".format(self.rows, self.cols))
        augmented = ExactMatrix(self.rows, 2 * self.cols)
        augmented.data[:, : self.cols] = self.data
        augmented.data[:, self.cols :] = ExactMatrix.identity(self.rows).data
        reduced, pivots = augmented.rref()
        if pivots[: self.rows] != list(range(self.rows)):
            raise Singular("matrix of size {} is singular".format(self.rows))
        result = ExactMatrix(self.rows, self.cols)
        result.data = reduced.data[:, self.cols :].copy()
        return result

    def __str__(self):
        return "\n".join(" ".join(fstr(v) for v in row) for row in self.data)

    def __repr__(self):
        return "{name}({m}x{n})".format(
            name=self.__class__.__name__, m=self.rows, n=self.cols
        )
