"""Mayer-Vietoris double complexes and their two spectral sequences.

Page dimensions come from the filtration subspaces

    Z^r_s = F_s Tot_n  ∩  d^{-1}(F_{s-r} Tot_{n-1})
    B^r_s = F_s Tot_n  ∩  d(F_{s+r} Tot_{n+1})
    E^r_s = Z^r_s / (Z^{r-1}_{s-1} + B^{r-1}_s)

Every dimension above reduces to ranks of blocks "columns with filtration
<= a, rows with filtration > b" of the total differential.  With rows and
columns sorted by filtration these are lower-left blocks, and all of their
ranks are read off from a single left-to-right column reduction per degree.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .complexes import SetFamily, family_union
from .errors import InternalConsistencyError, MalformedInputError, ResourceLimitError
from .homology import betti_numbers_field, homology
from .linalg import SparseMatrix, check_characteristic, rank, reduce_columns
from .nerve import DEFAULT_MAX_N, AcyclicityReport, IntersectionHomology, is_k_acyclic_family, nerve

FIRST, SECOND = "first", "second"


@dataclass(frozen=True)
class DoubleComplex:
    """First-quadrant double complex.

    ``horizontal[(p, q)]`` maps C_{p,q} -> C_{p-1,q} and ``vertical[(p, q)]``
    maps C_{p,q} -> C_{p,q-1}; missing entries are zero maps.
    """

    bases: dict
    horizontal: dict
    vertical: dict
    characteristic: int = 0
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for (p, q) in self.bases:
            if p < 0 or q < 0:
                raise MalformedInputError("bidegree (%d, %d) outside the first quadrant" % (p, q))
        if self.validate:
            self.check()

    def rank(self, p: int, q: int) -> int:
        return len(self.bases.get((p, q), ()))

    @property
    def ranks(self) -> dict:
        return {pq: len(b) for pq, b in self.bases.items() if b}

    def bounding_box(self) -> tuple[int, int]:
        nz = [pq for pq, b in self.bases.items() if b]
        return (max((p for p, _ in nz), default=-1), max((q for _, q in nz), default=-1))

    def h(self, p: int, q: int) -> SparseMatrix:
        m = self.horizontal.get((p, q))
        return m if m is not None else SparseMatrix.zeros(self.rank(p - 1, q), self.rank(p, q))

    def v(self, p: int, q: int) -> SparseMatrix:
        m = self.vertical.get((p, q))
        return m if m is not None else SparseMatrix.zeros(self.rank(p, q - 1), self.rank(p, q))

    def check(self) -> None:
        """Raise unless both differentials square to zero and anticommute."""
        for (p, q) in self.bases:
            if self.h(p, q).shape != (self.rank(p - 1, q), self.rank(p, q)):
                raise InternalConsistencyError("horizontal map at (%d, %d) has the wrong shape" % (p, q))
            if self.v(p, q).shape != (self.rank(p, q - 1), self.rank(p, q)):
                raise InternalConsistencyError("vertical map at (%d, %d) has the wrong shape" % (p, q))
        for (p, q) in self.bases:
            if not self.rank(p, q):
                continue
            if p >= 2 and not (self.h(p - 1, q) @ self.h(p, q)).is_zero():
                raise InternalConsistencyError("horizontal differential squares to non-zero at (%d, %d)" % (p, q))
            if q >= 2 and not (self.v(p, q - 1) @ self.v(p, q)).is_zero():
                raise InternalConsistencyError("vertical differential squares to non-zero at (%d, %d)" % (p, q))
            if p >= 1 and q >= 1:
                s = self.h(p, q - 1) @ self.v(p, q) + self.v(p - 1, q) @ self.h(p, q)
                if not s.is_zero():
                    raise InternalConsistencyError("differentials do not anticommute at (%d, %d)" % (p, q))

    def transpose(self) -> "DoubleComplex":
        return DoubleComplex({(q, p): b for (p, q), b in self.bases.items()},
                             {(q, p): m for (p, q), m in self.vertical.items()},
                             {(q, p): m for (p, q), m in self.horizontal.items()},
                             self.characteristic, validate=False)


def mayer_vietoris_double_complex(family: SetFamily, characteristic: int = 0,
                                  max_n: int = DEFAULT_MAX_N) -> DoubleComplex:
    """C_{p,q} = sum over (q+1)-subsets J of the cellular p-chains of the intersection over J.

    The horizontal map is the cellular boundary on each summand; the vertical
    map sends a cell c of the J-summand to ``(-1)^p sum_i (-1)^i c`` in the
    summand of J minus its i-th element.
    """
    characteristic = check_characteristic(characteristic)
    if family.n > max_n:
        raise ResourceLimitError("family has %d members, cap is %d" % (family.n, max_n))
    N = nerve(family)
    amb = family.ambient
    cells_of = {}
    for J in N.faces:
        cells_of[J] = N.intersection(J).cells
    bases: dict = {}
    for J, cells in cells_of.items():
        q = len(J) - 1
        for c in cells:
            bases.setdefault((amb.cell_dim(c), q), []).append((J, c))
    bases = {pq: tuple(sorted(b)) for pq, b in bases.items()}
    index = {pq: {lab: i for i, lab in enumerate(b)} for pq, b in bases.items()}
    horizontal, vertical = {}, {}
    for (p, q), basis in bases.items():
        if p >= 1:
            tgt = index.get((p - 1, q), {})
            cols = []
            for J, c in basis:
                col = {}
                for g, s in amb.boundary(c):
                    i = tgt[(J, g)]
                    col[i] = col.get(i, 0) + s
                cols.append({i: v for i, v in col.items() if v})
            horizontal[(p, q)] = SparseMatrix(len(tgt), len(cols), tuple(cols))
        if q >= 1:
            tgt = index.get((p, q - 1), {})
            sp = -1 if p % 2 else 1
            cols = []
            for J, c in basis:
                col = {}
                for i in range(len(J)):
                    Ji = J[:i] + J[i + 1:]
                    col[tgt[(Ji, c)]] = sp * (-1 if i % 2 else 1)
                cols.append(col)
            vertical[(p, q)] = SparseMatrix(len(tgt), len(cols), tuple(cols))
    return DoubleComplex(bases, horizontal, vertical, characteristic)


@dataclass(frozen=True)
class TotalComplex:
    """Tot_n = sum_{p+q=n} C_{p,q} with d = horizontal + vertical.

    ``basis[n]`` lists ``(p, q, i)`` triples; ``first[n]`` / ``second[n]``
    give the filtration index (p, respectively q) of every basis element.
    """

    basis: tuple
    differential: tuple
    characteristic: int = 0

    @property
    def top(self) -> int:
        return len(self.basis) - 1

    def rank(self, n: int) -> int:
        return len(self.basis[n]) if 0 <= n < len(self.basis) else 0

    def d(self, n: int) -> SparseMatrix:
        if 0 <= n < len(self.differential):
            return self.differential[n]
        return SparseMatrix.zeros(self.rank(n - 1), self.rank(n))

    def filtration(self, which: str, n: int) -> tuple:
        if which == FIRST:
            return tuple(p for p, _, _ in self.basis[n])
        if which == SECOND:
            return tuple(q for _, q, _ in self.basis[n])
        raise MalformedInputError("filtration must be 'first' or 'second'")

    def first(self, n: int) -> tuple:
        return self.filtration(FIRST, n)

    def second(self, n: int) -> tuple:
        return self.filtration(SECOND, n)

    def homology_dims(self, characteristic: int | None = None) -> list[int]:
        ch = self.characteristic if characteristic is None else check_characteristic(characteristic)
        ranks = [rank(self.d(n), ch) if n >= 1 else 0 for n in range(self.top + 2)]
        return [self.rank(n) - ranks[n] - ranks[n + 1] for n in range(self.top + 1)]


def total_complex(D: DoubleComplex) -> TotalComplex:
    D.check()
    P, Q = D.bounding_box()
    top = P + Q if P >= 0 else -1
    basis = []
    offset = {}
    for n in range(top + 1):
        b = []
        for p in range(0, n + 1):
            q = n - p
            offset[(p, q)] = len(b)
            b.extend((p, q, i) for i in range(D.rank(p, q)))
        basis.append(tuple(b))
    diffs = [SparseMatrix.zeros(0, len(basis[0]))] if top >= 0 else []
    for n in range(1, top + 1):
        cols = []
        for p, q, i in basis[n]:
            col = {}
            if p >= 1:
                for r, v in D.h(p, q).columns[i].items():
                    col[offset[(p - 1, q)] + r] = v
            if q >= 1:
                for r, v in D.v(p, q).columns[i].items():
                    k = offset[(p, q - 1)] + r
                    col[k] = col.get(k, 0) + v
            cols.append({r: v for r, v in col.items() if v})
        diffs.append(SparseMatrix(len(basis[n - 1]), len(cols), tuple(cols)))
    T = TotalComplex(tuple(basis), tuple(diffs), D.characteristic)
    for n in range(2, top + 1):
        if not (T.d(n - 1) @ T.d(n)).is_zero():
            raise InternalConsistencyError("total differential squares to non-zero in degree %d" % n)
    for which in (FIRST, SECOND):
        for n in range(1, top + 1):
            src, tgt = T.filtration(which, n), T.filtration(which, n - 1)
            for j, col in enumerate(T.d(n).columns):
                if any(tgt[i] > src[j] for i in col):
                    raise InternalConsistencyError("d does not respect the %s filtration" % which)
    return T


@dataclass(frozen=True)
class SpectralPage:
    """Dimensions of E^r_{p,q} and ranks of d^r leaving each bidegree.

    Bidegrees are those of the original double complex for both
    filtrations: d^r has bidegree (-r, r-1) for the first filtration and
    (r-1, -r) for the second.
    """

    r: int | None  # None for the E^infinity page
    filtration: str
    characteristic: int
    dims: dict
    differential_ranks: dict

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def target(self, p: int, q: int) -> tuple[int, int]:
        if self.filtration == FIRST:
            return (p - self.r, q + self.r - 1)
        return (p + self.r - 1, q - self.r)

    def source(self, p: int, q: int) -> tuple[int, int]:
        if self.filtration == FIRST:
            return (p + self.r, q - self.r + 1)
        return (p - self.r + 1, q + self.r)

    def total(self, n: int) -> int:
        return sum(v for (p, q), v in self.dims.items() if p + q == n)

    def nonzero(self) -> dict:
        return {pq: v for pq, v in self.dims.items() if v}

    def grid(self, P: int, Q: int) -> list[list[int]]:
        """Rows q = 0..Q, columns p = 0..P."""
        return [[self.dim(p, q) for p in range(P + 1)] for q in range(Q + 1)]

    def to_json(self, P: int | None = None, Q: int | None = None) -> dict:
        if P is None:
            P = max((p for p, _ in self.dims), default=0)
        if Q is None:
            Q = max((q for _, q in self.dims), default=0)
        return {"r": self.r, "filtration": self.filtration, "characteristic": self.characteristic,
                "grid_rows_q_cols_p": self.grid(P, Q),
                "differential_ranks": {"%d,%d" % pq: v for pq, v in sorted(self.differential_ranks.items()) if v}}


class SpectralSequence:
    """Spectral sequence of one filtration of a total complex, over a field."""

    def __init__(self, T: TotalComplex, filtration: str = FIRST, characteristic: int | None = None):
        if filtration not in (FIRST, SECOND):
            raise MalformedInputError("filtration must be 'first' or 'second'")
        self.T = T
        self.filtration = filtration
        self.characteristic = check_characteristic(T.characteristic if characteristic is None else characteristic)
        self._filt = [sorted(T.filtration(filtration, n)) for n in range(T.top + 1)]
        self._pivots = [[] for _ in range(T.top + 2)]
        for n in range(1, T.top + 1):
            src = T.filtration(filtration, n)
            tgt = T.filtration(filtration, n - 1)
            col_order = sorted(range(len(src)), key=lambda j: (src[j], j))
            row_order = sorted(range(len(tgt)), key=lambda i: (tgt[i], i))
            M = T.d(n).permuted(row_order, col_order)
            lows = reduce_columns(M, self.characteristic)
            sorted_src = [src[j] for j in col_order]
            sorted_tgt = [tgt[i] for i in row_order]
            self._pivots[n] = [(sorted_src[j], sorted_tgt[low]) for j, low in enumerate(lows) if low >= 0]
        smin = min((min(f) for f in self._filt if f), default=0)
        smax = max((max(f) for f in self._filt if f), default=0)
        self.span = smax - smin
        self._cache = {}

    # dimension of F_s Tot_n
    def _dimF(self, n: int, s) -> int:
        if not 0 <= n <= self.T.top:
            return 0
        if s is None:
            return len(self._filt[n])
        return bisect_right(self._filt[n], s)

    # rank of the block of d_n: columns with filtration <= a, rows with filtration > b
    def _rank(self, n: int, a, b) -> int:
        if not 1 <= n <= self.T.top:
            return 0
        return sum(1 for cs, rs in self._pivots[n] if (a is None or cs <= a) and (b is None or rs > b))

    def Z(self, r, s: int, n: int) -> int:
        """dim Z^r_s in total degree n; ``r=None`` means r = infinity."""
        return self._dimF(n, s) - self._rank(n, s, None if r is None else s - r)

    def B(self, r, s: int, n: int) -> int:
        top = None if r is None else s + r
        return self._rank(n + 1, top, None) - self._rank(n + 1, top, s)

    def E(self, r, s: int, n: int) -> int:
        if r is None:
            return self.Z(None, s, n) - self.Z(None, s - 1, n) - self.B(None, s, n) + self.B(None, s - 1, n)
        return self.Z(r, s, n) - self.Z(r - 1, s - 1, n) - self.B(r - 1, s, n) + self.B(r, s - 1, n)

    def d_rank(self, r: int, s: int, n: int) -> int:
        """Rank of d^r leaving E^r_s in degree n (lands in filtration s-r, degree n-1)."""
        t, m = s - r, n - 1
        return self.B(r, t, m) - self.B(r + 1, t - 1, m) - self.B(r - 1, t, m) + self.B(r, t - 1, m)

    def _bidegree(self, s: int, n: int) -> tuple[int, int]:
        return (s, n - s) if self.filtration == FIRST else (n - s, s)

    def page(self, r) -> SpectralPage:
        if r is not None and r < 0:
            raise MalformedInputError("page index must be >= 0")
        if r in self._cache:
            return self._cache[r]
        dims, ranks = {}, {}
        for n in range(self.T.top + 1):
            for s in range(0, n + 1):
                pq = self._bidegree(s, n)
                dims[pq] = self.E(r, s, n)
                if r is not None and r >= 1:
                    ranks[pq] = self.d_rank(r, s, n)
        page = SpectralPage(r, self.filtration, self.characteristic, dims, ranks)
        self._cache[r] = page
        return page

    def infinity_page(self) -> SpectralPage:
        return self.page(None)

    def collapse_page(self) -> int:
        """Least r >= 1 with E^r = E^infinity."""
        inf = self.infinity_page().dims
        r = 1
        while self.page(r).dims != inf:
            r += 1
            if r > self.span + 2:
                raise InternalConsistencyError("spectral sequence failed to stabilise")
        return r


def spectral_page(T: TotalComplex, filtration: str, r: int, characteristic: int | None = None) -> SpectralPage:
    return SpectralSequence(T, filtration, characteristic).page(r)


def check_claim_first(page2: SpectralPage, union_betti: list[int]) -> list[str]:
    """Mismatches against: E^2_{p,0} = H_p(union) and E^2_{p,q} = 0 for q >= 1."""
    issues = []
    for (p, q), v in sorted(page2.dims.items()):
        if q >= 1 and v:
            issues.append("E2[%d,%d] = %d, expected 0" % (p, q, v))
    top = max([p for p, _ in page2.dims] + [len(union_betti) - 1])
    for p in range(top + 1):
        want = union_betti[p] if p < len(union_betti) else 0
        if page2.dim(p, 0) != want:
            issues.append("E2[%d,0] = %d, expected Betti_%d(union) = %d" % (p, page2.dim(p, 0), p, want))
    return issues


def check_claim_second(page2: SpectralPage, nerve_betti: list[int], k: int) -> list[str]:
    """Mismatches against: E~^2_{p,q} = 0 for p >= 1, p+q >= k-1; E~^2_{0,q} = H_q(nerve) for q >= k."""
    issues = []
    for (p, q), v in sorted(page2.dims.items()):
        if p >= 1 and p + q >= k - 1 and v:
            issues.append("E~2[%d,%d] = %d, expected 0" % (p, q, v))
    top = max([q for _, q in page2.dims] + [len(nerve_betti) - 1])
    for q in range(k, top + 1):
        want = nerve_betti[q] if q < len(nerve_betti) else 0
        if page2.dim(0, q) != want:
            issues.append("E~2[0,%d] = %d, expected Betti_%d(nerve) = %d" % (q, page2.dim(0, q), q, want))
    return issues


def _pad(xs: list[int], n: int) -> list[int]:
    return list(xs) + [0] * (n - len(xs))


@dataclass
class ConvergenceReport:
    k: int
    characteristic: int
    hypothesis: AcyclicityReport
    tot: list
    einf_first: list
    einf_second: list
    union: list
    nerve: list
    claim_first: list
    claim_second: list
    nerve_agreement_integral: bool
    pages: dict = field(default_factory=dict, repr=False)

    @property
    def convergence(self) -> bool:
        return self.tot == self.einf_first == self.einf_second

    @property
    def union_matches_tot(self) -> bool:
        return self.union == self.tot

    @property
    def nerve_agreement(self) -> bool:
        return all(self.union[n] == self.nerve[n] for n in range(self.k, len(self.union)))

    @property
    def claims(self) -> bool:
        return not self.claim_first and (not self.hypothesis.verdict or not self.claim_second)

    @property
    def verdict(self) -> bool:
        ok = self.convergence and self.union_matches_tot and not self.claim_first
        if self.hypothesis.verdict:
            ok = ok and self.nerve_agreement and self.nerve_agreement_integral and not self.claim_second
        return ok

    def to_json(self, names=None) -> dict:
        return {
            "k": self.k,
            "characteristic": self.characteristic,
            "hypothesis": self.hypothesis.to_json(names),
            "per_degree": [
                {"n": n, "tot": self.tot[n], "einf_first": self.einf_first[n],
                 "einf_second": self.einf_second[n], "union": self.union[n], "nerve": self.nerve[n]}
                for n in range(len(self.tot))],
            "convergence": self.convergence,
            "union_matches_tot": self.union_matches_tot,
            "union_equals_nerve_from_k": self.nerve_agreement,
            "union_equals_nerve_from_k_integral": self.nerve_agreement_integral,
            "claim_first_issues": self.claim_first,
            "claim_second_issues": self.claim_second,
            "verdict": self.verdict,
            "pages": {key: page.to_json() for key, page in self.pages.items()},
        }


def convergence_check(family: SetFamily, k: int, characteristic: int = 0, max_n: int = DEFAULT_MAX_N,
                      intersections: IntersectionHomology | None = None) -> ConvergenceReport:
    """Compare H(Tot), both E^infinity pages, H(union) and H(nerve) degree by degree."""
    characteristic = check_characteristic(characteristic)
    if intersections is None:
        intersections = IntersectionHomology(family, max_n)
    hyp = is_k_acyclic_family(family, k, intersections=intersections)
    D = mayer_vietoris_double_complex(family, characteristic, max_n)
    T = total_complex(D)
    ss1 = SpectralSequence(T, FIRST, characteristic)
    ss2 = SpectralSequence(T, SECOND, characteristic)
    U = family_union(family)
    N = intersections.nerve.complex
    union_b = betti_numbers_field(U, characteristic)
    nerve_b = betti_numbers_field(N, characteristic)
    top = max(T.top, len(union_b) - 1, len(nerve_b) - 1, 0)
    tot = _pad(T.homology_dims(characteristic), top + 1)
    inf1, inf2 = ss1.infinity_page(), ss2.infinity_page()
    e1 = [inf1.total(n) for n in range(top + 1)]
    e2 = [inf2.total(n) for n in range(top + 1)]
    p2_first, p2_second = ss1.page(2), ss2.page(2)
    claim1 = check_claim_first(p2_first, union_b)
    claim2 = check_claim_second(p2_second, nerve_b, k) if hyp.verdict else []
    hu, hn = homology(U), homology(N)
    agree_int = all(hu.betti_at(n) == hn.betti_at(n) and hu.torsion_at(n) == hn.torsion_at(n)
                    for n in range(k, top + 1))
    pages = {"E1_first": ss1.page(1), "E2_first": p2_first, "E1_second": ss2.page(1), "E2_second": p2_second}
    return ConvergenceReport(k, characteristic, hyp, tot, e1, e2, _pad(union_b, top + 1),
                             _pad(nerve_b, top + 1), claim1, claim2, agree_int, pages)


@dataclass
class NerveTheoremReport:
    k: int
    status: str  # "ok" or "hypothesis-failed"
    violation: dict | None
    union: list
    nerve: list
    verdict: bool | None

    def to_json(self) -> dict:
        return {"k": self.k, "status": self.status, "violation": self.violation,
                "union": self.union, "nerve": self.nerve, "verdict": self.verdict}


def nerve_theorem_hypothesis(intersections: IntersectionHomology, k: int):
    """First subfamily G whose intersection is not homologically (k-|G|+1)-connected, or None."""
    for face in sorted(intersections.results, key=lambda f: (len(f), f)):
        need = k - len(face) + 1
        if need < 0:
            continue  # (-1)-connected means non-empty
        conn = intersections.connectivity(face)
        if conn < need:
            return {"members": list(face), "connectivity": conn, "required": need}
    return None


def nerve_theorem_check(family: SetFamily, k: int, max_n: int = DEFAULT_MAX_N,
                        intersections: IntersectionHomology | None = None) -> NerveTheoremReport:
    """H_n(union) = H_n(nerve) for n <= k, when every non-empty intersection is (k-|G|+1)-connected."""
    if k < 0:
        raise MalformedInputError("k must be non-negative")
    if intersections is None:
        intersections = IntersectionHomology(family, max_n)
    hu = homology(family_union(family))
    hn = homology(intersections.nerve.complex)

    def groups(h):
        return [{"betti": h.betti_at(n), "torsion": list(h.torsion_at(n))} for n in range(k + 1)]

    bad = nerve_theorem_hypothesis(intersections, k)
    if bad is not None:
        if bad["connectivity"] == float("inf"):
            bad["connectivity"] = "acyclic"
        return NerveTheoremReport(k, "hypothesis-failed", bad, groups(hu), groups(hn), None)
    same = groups(hu) == groups(hn)
    return NerveTheoremReport(k, "ok", None, groups(hu), groups(hn), same)
