"""Exact sparse linear algebra over the integers, the rationals and prime fields.

Matrices are stored column-wise as ``{row: value}`` dictionaries holding
Python integers, so arithmetic never overflows.  Rational computations are
carried out fraction-free: a column is only ever rescaled by a non-zero
integer, which leaves ranks and column spans over Q unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import MalformedInputError, UnsupportedCoefficientsError

Column = dict[int, int]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_characteristic(characteristic) -> int:
    """Validate a field characteristic: 0 for Q or a prime p for F_p."""
    if characteristic is None or isinstance(characteristic, bool):
        raise UnsupportedCoefficientsError(
            "a field is required (characteristic 0 or a prime), got %r" % (characteristic,))
    if isinstance(characteristic, str):
        if characteristic.upper() in ("Z", "INTEGERS"):
            raise UnsupportedCoefficientsError("integer coefficients are not supported here")
        try:
            characteristic = int(characteristic)
        except ValueError:
            raise MalformedInputError("bad characteristic %r" % characteristic) from None
    characteristic = int(characteristic)
    if characteristic != 0 and not is_prime(characteristic):
        raise MalformedInputError("characteristic must be 0 or prime, got %d" % characteristic)
    return characteristic


@dataclass(frozen=True)
class SparseMatrix:
    """Integer matrix with ``nrows`` rows, stored as a tuple of sparse columns."""

    nrows: int
    ncols: int
    columns: tuple

    def __post_init__(self):
        if len(self.columns) != self.ncols:
            raise MalformedInputError("column count mismatch")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols, tuple({} for _ in range(ncols)))

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[Column]) -> "SparseMatrix":
        cols = tuple({r: v for r, v in c.items() if v} for c in columns)
        for c in cols:
            for r in c:
                if not 0 <= r < nrows:
                    raise MalformedInputError("row index %d out of range" % r)
        return cls(nrows, len(cols), cols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "SparseMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise MalformedInputError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, tuple(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise MalformedInputError("shape mismatch %s @ %s" % (self.shape, other.shape))
        out = []
        for col in other.columns:
            acc: Column = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            out.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, tuple(out))

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise MalformedInputError("shape mismatch")
        out = []
        for a, b in zip(self.columns, other.columns):
            c = dict(a)
            for i, v in b.items():
                c[i] = c.get(i, 0) + v
            out.append({i: v for i, v in c.items() if v})
        return SparseMatrix(self.nrows, self.ncols, tuple(out))

    def transpose(self) -> "SparseMatrix":
        cols: list[Column] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, tuple(cols))

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "SparseMatrix":
        """New matrix whose row ``i`` is old row ``row_order[i]`` (same for columns)."""
        new_row = {old: new for new, old in enumerate(row_order)}
        cols = tuple({new_row[i]: v for i, v in self.columns[j].items()} for j in col_order)
        return SparseMatrix(self.nrows, self.ncols, cols)


def _normalize(col: Column, p: int) -> Column:
    if p:
        return {i: v % p for i, v in col.items() if v % p}
    g = 0
    for v in col.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        return {i: v // g for i, v in col.items()}
    return dict(col)


def reduce_columns(matrix: SparseMatrix, characteristic: int = 0) -> list[int]:
    """Left-to-right column reduction; returns the pivot row ("low") of each column.

    A column that reduces to zero gets ``-1``.  The reduced matrix equals
    ``matrix @ V`` with ``V`` upper triangular and invertible over the field,
    so the number of pivots with column ``<= j`` and low ``>= i`` is the rank
    of the lower-left block ``matrix[i:, :j+1]``.
    """
    p = check_characteristic(characteristic)
    owner: dict[int, Column] = {}
    lows = []
    for raw in matrix.columns:
        col = _normalize(raw, p)
        low = -1
        while col:
            low = max(col)
            piv = owner.get(low)
            if piv is None:
                break
            a, b = piv[low], col[low]
            if p:
                f = b * pow(a, -1, p) % p
                for i, v in piv.items():
                    w = (col.get(i, 0) - f * v) % p
                    if w:
                        col[i] = w
                    else:
                        col.pop(i, None)
            else:
                g = gcd(a, b)
                ca, cb = a // g, b // g
                new = {i: ca * v for i, v in col.items()}
                for i, v in piv.items():
                    w = new.get(i, 0) - cb * v
                    if w:
                        new[i] = w
                    else:
                        new.pop(i, None)
                col = _normalize(new, 0)
            low = -1
        if col:
            owner[low] = col
            lows.append(low)
        else:
            lows.append(-1)
    return lows


def rank(matrix: SparseMatrix, characteristic: int = 0) -> int:
    """Rank over Q (characteristic 0) or over F_p."""
    return sum(1 for low in reduce_columns(matrix, characteristic) if low >= 0)
