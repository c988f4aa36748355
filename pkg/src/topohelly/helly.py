"""Fractional Helly statistics, (p,q)-conditions and exact transversal numbers.

"Points" are ambient vertices.  Members are closed subcomplexes, so a cell
lies in a member only if all of its vertices do; vertices therefore realise
every possible depth and every piercing pattern.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .complexes import SetFamily
from .errors import MalformedInputError, ResourceLimitError
from .nerve import DEFAULT_MAX_N, AcyclicityReport, IntersectionHomology, is_k_acyclic_family, maximal_patterns


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _members(mask: int) -> tuple:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class DepthResult:
    depth: int
    witness: tuple | None
    members: tuple


def intersection_depth(family: SetFamily) -> DepthResult:
    """Maximum number of members sharing one point, with a witness vertex."""
    best, wit, mask = 0, None, 0
    for v, m in sorted(family.membership_patterns().items()):
        c = _popcount(m)
        if c > best:
            best, wit, mask = c, v, m
    return DepthResult(best, wit, _members(mask))


def count_intersecting(family: SetFamily, size: int) -> int:
    """Number of ``size``-subsets of members with non-empty intersection."""
    if size == 0:
        return 1
    pats = maximal_patterns(family)
    total = sum(math.comb(_popcount(m), size) for m in pats)
    if total <= math.comb(family.n, size) or len(pats) == 1:
        seen = set()
        for m in pats:
            seen.update(itertools.combinations(_members(m), size))
        return len(seen)
    count = 0
    for combo in itertools.combinations(range(family.n), size):
        mask = sum(1 << i for i in combo)
        if any(m & mask == mask for m in pats):
            count += 1
    return count


def alpha_fraction(family: SetFamily, k: int) -> Fraction:
    """Fraction of (k+1)-subsets of the family with non-empty intersection."""
    if k < 0:
        raise MalformedInputError("k must be non-negative")
    if k + 1 > family.n:
        raise MalformedInputError("k + 1 = %d exceeds the family size %d" % (k + 1, family.n))
    return Fraction(count_intersecting(family, k + 1), math.comb(family.n, k + 1))


def beta(alpha: Fraction | float, k: int) -> float:
    """``1 - (1 - alpha)^(1/(k+1))`` as a float, for display."""
    return 1.0 - (1.0 - float(alpha)) ** (1.0 / (k + 1))


def beta_n_floor(alpha: Fraction, k: int, n: int) -> int:
    """``floor((1 - (1 - alpha)^(1/(k+1))) * n)``, computed exactly.

    ``m <= beta * n`` iff ``(1 - m/n)^(k+1) >= 1 - alpha`` for ``0 <= m <= n``.
    """
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise MalformedInputError("alpha must lie in [0, 1]")
    if n == 0:
        return 0
    m = 0
    while m < n and (1 - Fraction(m + 1, n)) ** (k + 1) >= 1 - alpha:
        m += 1
    return m


def point_coordinates(cell: tuple, kind: str) -> list:
    """A vertex cell as a point: grid coordinates for cubical ambients, the vertex id otherwise."""
    if kind == "cubical":
        return [x // 2 for x in cell]
    return list(cell)


def _rational(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


@dataclass(frozen=True)
class FractionalHellyReport:
    n: int
    k: int
    intersecting: int
    subsets: int
    alpha: Fraction
    depth: int
    witness: tuple | None
    beta_n_floor: int
    hypothesis: AcyclicityReport | None
    grid_dimension: int
    ambient_kind: str = "cubical"

    @property
    def beta(self) -> float:
        return beta(self.alpha, self.k)

    @property
    def verdict(self) -> bool:
        return self.depth >= self.beta_n_floor

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis is not None and self.hypothesis.verdict and self.k >= self.grid_dimension

    def to_json(self, names=None) -> dict:
        return {
            "n": self.n, "k": self.k,
            "intersecting_subsets": self.intersecting, "subsets": self.subsets,
            "alpha": _rational(self.alpha), "alpha_decimal": float(self.alpha),
            "beta": {"decimal": self.beta},
            "beta_n": {"decimal": self.beta * self.n, "floor": self.beta_n_floor},
            "depth": self.depth,
            "witness_point": point_coordinates(self.witness, self.ambient_kind) if self.witness is not None else None,
            "grid_dimension": self.grid_dimension,
            "hypothesis": self.hypothesis.to_json(names) if self.hypothesis else None,
            "hypothesis_holds": self.hypothesis_holds,
            "verdict": self.verdict,
        }


def fractional_helly_check(family: SetFamily, k: int, max_n: int = DEFAULT_MAX_N, check_hypothesis: bool = True,
                           intersections: IntersectionHomology | None = None) -> FractionalHellyReport:
    """Depth versus ``floor(beta(alpha) n)`` with ``beta(alpha) = 1 - (1-alpha)^(1/(k+1))``.

    The hypothesis (k-|G|)-acyclicity with ``k >= d`` is evaluated and
    reported alongside; the verdict itself is the depth inequality.
    """
    alpha = alpha_fraction(family, k)
    n = family.n
    subsets = math.comb(n, k + 1)
    dep = intersection_depth(family)
    hyp = None
    if check_hypothesis:
        hyp = is_k_acyclic_family(family, k, max_n=max_n, intersections=intersections)
    return FractionalHellyReport(n, k, int(alpha * subsets), subsets, alpha, dep.depth, dep.witness,
                                 beta_n_floor(alpha, k, n), hyp, family.grid_dimension,
                                 family.ambient.kind)


@dataclass(frozen=True)
class PQResult:
    p: int
    q: int
    holds: bool
    witness: tuple | None  # a p-subset with no q intersecting members
    vacuous: bool

    def to_json(self, names=None) -> dict:
        d = {"p": self.p, "q": self.q, "holds": self.holds, "vacuous": self.vacuous,
             "witness": list(self.witness) if self.witness is not None else None}
        if names is not None and self.witness is not None:
            d["witness_names"] = [names[i] for i in self.witness]
        return d


def pq_condition(family: SetFamily, p: int, q: int, max_subsets: int = 2_000_000) -> PQResult:
    """Among any p members, some q have a common point."""
    if not (isinstance(p, int) and isinstance(q, int)) or not p >= q >= 1:
        raise MalformedInputError("need p >= q >= 1, got p=%r q=%r" % (p, q))
    n = family.n
    if n < p:
        return PQResult(p, q, True, None, True)
    if math.comb(n, p) > max_subsets:
        raise ResourceLimitError("C(%d, %d) p-subsets exceed the cap" % (n, p))
    pats = maximal_patterns(family)
    for combo in itertools.combinations(range(n), p):
        mask = sum(1 << i for i in combo)
        if not any(_popcount(m & mask) >= q for m in pats):
            return PQResult(p, q, False, combo, False)
    return PQResult(p, q, True, None, False)


@dataclass(frozen=True)
class TransversalResult:
    tau: int
    witness: tuple  # ambient vertices, one per chosen point
    method: str
    ambient_kind: str = "cubical"

    def to_json(self) -> dict:
        return {"tau": self.tau, "witness": [point_coordinates(w, self.ambient_kind) for w in self.witness],
                "method": self.method}


def _greedy_cover(universe: int, sets: list[int]) -> list[int]:
    chosen, covered = [], 0
    while covered != universe:
        best = max(range(len(sets)), key=lambda i: _popcount(sets[i] & ~covered))
        chosen.append(best)
        covered |= sets[best]
    return chosen


def _branch_and_bound(universe: int, sets: list[int], best: list[int]) -> list[int]:
    cover_of = {}
    for e in _members(universe):
        cover_of[e] = [i for i, s in enumerate(sets) if s >> e & 1]
    largest = max(_popcount(s) for s in sets)
    best = list(best)

    def search(covered: int, chosen: list[int]):
        nonlocal best
        rest = universe & ~covered
        if not rest:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + -(-_popcount(rest) // largest) >= len(best):
            return
        # branch on the uncovered member with the fewest candidate points
        e = min(_members(rest), key=lambda x: len(cover_of[x]))
        for i in sorted(cover_of[e], key=lambda i: -_popcount(sets[i] & rest)):
            chosen.append(i)
            search(covered | sets[i], chosen)
            chosen.pop()

    search(0, [])
    return best


def transversal_number(family: SetFamily, max_n: int = 64, exhaustive_sizes: int = 3) -> TransversalResult:
    """Exact minimum number of points meeting every member.

    Candidate points are ambient vertices reduced to inclusion-maximal
    membership patterns.  Sizes up to ``exhaustive_sizes`` are tried by full
    enumeration; beyond that a branch-and-bound seeded with the greedy cover
    runs to completion, which certifies that no smaller transversal exists.
    """
    n = family.n
    if n > max_n:
        raise ResourceLimitError("family has %d members, transversal cap is %d" % (n, max_n))
    if n == 0:
        return TransversalResult(0, (), "exhaustive", family.ambient.kind)
    for name, m in zip(family.names, family.members):
        if m.is_empty():
            raise MalformedInputError("member %s is empty and cannot be pierced" % name)
    patterns = family.membership_patterns()
    sets = maximal_patterns(family)
    rep = {}
    for v, m in sorted(patterns.items()):
        for s in sets:
            if s not in rep and m == s:
                rep[s] = v
    universe = (1 << n) - 1
    for size in range(1, min(exhaustive_sizes, len(sets)) + 1):
        for combo in itertools.combinations(range(len(sets)), size):
            acc = 0
            for i in combo:
                acc |= sets[i]
            if acc == universe:
                return TransversalResult(size, tuple(rep[sets[i]] for i in combo), "exhaustive", family.ambient.kind)
    best = _branch_and_bound(universe, sets, _greedy_cover(universe, sets))
    return TransversalResult(len(best), tuple(rep[sets[i]] for i in sorted(best)), "branch-and-bound",
                             family.ambient.kind)
