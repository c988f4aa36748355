"""Integral homology via Smith normal form, and Betti numbers over fields."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import ChainComplex, chain_complex
from .errors import InternalConsistencyError
from .linalg import SparseMatrix, check_characteristic, rank


@dataclass(frozen=True)
class SmithDecomposition:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of an integer matrix.

    When transforms were requested, ``U @ M @ V`` equals ``diagonal()``
    with ``U`` and ``V`` unimodular.
    """

    shape: tuple
    invariant_factors: tuple
    U: tuple | None = None
    V: tuple | None = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def diagonal(self) -> list[list[int]]:
        m, n = self.shape
        D = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.invariant_factors):
            D[i][i] = d
        return D

    def torsion(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d > 1)


def _snf_dense(A: list[list[int]], track: bool):
    """Smith normal form of a dense integer matrix, in place.

    Pivots are chosen by minimal absolute value.  Returns the diagonal and,
    when ``track`` is set, the row and column transforms.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += f * rs[k]
        if track:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += f * us[k]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in A:
            if row[src]:
                row[dst] += f * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder of row/column t into the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return diag, U, V


def _unit_pivot_elimination(M: SparseMatrix):
    """Strip unit pivots from a sparse matrix.

    Returns the number of unit invariant factors removed and the residual
    matrix as dense rows (only rows and columns still non-zero).
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set] = {}
    for j, col in enumerate(M.columns):
        if col:
            cols[j] = set(col)
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda c: len(cols[c])):
            rc = cols.get(c)
            if not rc:
                cols.pop(c, None)
                continue
            pivot = None
            for r in rc:
                if abs(rows[r][c]) == 1 and (pivot is None or len(rows[r]) < len(rows[pivot])):
                    pivot = r
            if pivot is None:
                continue
            prow = rows.pop(pivot)
            s = prow[c]
            for r in list(rc):
                if r == pivot:
                    continue
                row = rows[r]
                f = row[c] * s
                for j, v in prow.items():
                    w = row.get(j, 0) - f * v
                    if w:
                        if j not in row:
                            cols[j].add(r)
                        row[j] = w
                    elif j in row:
                        del row[j]
                        cols[j].discard(r)
                if not row:
                    del rows[r]
            for j in prow:
                cols[j].discard(pivot)
            del cols[c]
            units += 1
            progress = True
    live_rows = sorted(r for r, row in rows.items() if row)
    live_cols = sorted(c for c, rc in cols.items() if rc)
    cidx = {c: k for k, c in enumerate(live_cols)}
    dense = []
    for r in live_rows:
        line = [0] * len(live_cols)
        for c, v in rows[r].items():
            line[cidx[c]] = v
        dense.append(line)
    return units, dense


def smith_normal_form(M, with_transforms: bool = False) -> SmithDecomposition:
    """Smith normal form of an integer matrix (``SparseMatrix`` or list of rows)."""
    if not isinstance(M, SparseMatrix):
        rows = [list(map(int, r)) for r in M]
        M = SparseMatrix.from_dense(rows, len(rows[0]) if rows else 0)
    if with_transforms:
        diag, U, V = _snf_dense(M.to_dense(), True)
        return SmithDecomposition(M.shape, tuple(diag), tuple(map(tuple, U)), tuple(map(tuple, V)))
    units, rest = _unit_pivot_elimination(M)
    diag, _, _ = _snf_dense(rest, False) if rest else ([], None, None)
    return SmithDecomposition(M.shape, tuple([1] * units + diag))


@dataclass(frozen=True)
class HomologyResult:
    """Betti numbers and torsion coefficients per dimension.

    ``empty`` marks the empty space, for which no groups are reported.
    """

    betti: tuple
    torsion: tuple
    reduced: bool = True
    empty: bool = False

    def betti_at(self, n: int) -> int:
        return self.betti[n] if 0 <= n < len(self.betti) else 0

    def torsion_at(self, n: int) -> tuple:
        return self.torsion[n] if 0 <= n < len(self.torsion) else ()

    def vanishes_at(self, n: int) -> bool:
        return self.betti_at(n) == 0 and not self.torsion_at(n)

    def nonvanishing_dims(self) -> list[int]:
        return [n for n in range(len(self.betti)) if not self.vanishes_at(n)]

    def is_acyclic(self) -> bool:
        return not self.empty and not self.nonvanishing_dims()

    def group(self, n: int) -> str:
        parts = []
        b = self.betti_at(n)
        if b:
            parts.append("Z" if b == 1 else "Z^%d" % b)
        parts += ["Z/%d" % t for t in self.torsion_at(n)]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        if self.empty:
            return {"empty": True, "reduced": self.reduced, "groups": {}}
        return {
            "empty": False,
            "reduced": self.reduced,
            "groups": {str(n): {"betti": self.betti[n], "torsion": list(self.torsion[n])}
                       for n in range(len(self.betti))},
        }


def _as_chain_complex(C) -> ChainComplex:
    return C if isinstance(C, ChainComplex) else chain_complex(C)


def _homology(C, reduced: bool) -> HomologyResult:
    C = _as_chain_complex(C)
    if C.is_empty():
        return HomologyResult((), (), reduced=reduced, empty=True)
    top = C.top_dim
    snf = [smith_normal_form(C.boundary(p)) for p in range(top + 2)]
    ranks = [s.rank for s in snf]
    if reduced:
        ranks[0] = 1
    betti, torsion = [], []
    for p in range(top + 1):
        b = C.rank(p) - ranks[p] - ranks[p + 1]
        if b < 0:
            raise InternalConsistencyError("negative Betti number in dimension %d" % p)
        betti.append(b)
        torsion.append(snf[p + 1].torsion())
    return HomologyResult(tuple(betti), tuple(torsion), reduced=reduced)


def reduced_homology(C) -> HomologyResult:
    """Reduced integral homology of a chain complex (or of a complex)."""
    return _homology(C, True)


def homology(C) -> HomologyResult:
    """Unreduced integral homology."""
    return _homology(C, False)


def betti_numbers_field(C, characteristic: int = 0) -> list[int]:
    """Unreduced Betti numbers over Q (characteristic 0) or F_p."""
    p = check_characteristic(characteristic)
    C = _as_chain_complex(C)
    if C.is_empty():
        return []
    ranks = [rank(C.boundary(q), p) for q in range(C.top_dim + 2)]
    return [C.rank(q) - ranks[q] - ranks[q + 1] for q in range(C.top_dim + 1)]


def betti_list(result: HomologyResult, upto: int) -> list[int]:
    return [result.betti_at(n) for n in range(upto + 1)]


def euler_from_betti(betti: Sequence[int]) -> int:
    return sum((-1) ** n * b for n, b in enumerate(betti))
