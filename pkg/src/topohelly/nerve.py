"""Nerves of set families, acyclicity predicates and Leray numbers."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .complexes import (Complex, SetFamily, SimplicialComplex, build_simplicial, induced_subcomplex,
                        is_box, subcomplex_intersection)
from .errors import EmptySpaceError, MalformedInputError, ResourceLimitError
from .homology import HomologyResult, reduced_homology

DEFAULT_MAX_N = 12
DEFAULT_MAX_VERTICES = 14

FULLY_ACYCLIC = math.inf


@dataclass(frozen=True)
class NerveComplex:
    """Nerve of a family on vertex set ``0..n-1`` with a back-map to the family."""

    complex: SimplicialComplex
    family: SetFamily = field(repr=False)

    @property
    def faces(self):
        return self.complex.faces

    def intersection(self, face) -> Complex:
        """The witness intersection of the members indexed by ``face``."""
        return subcomplex_intersection(self.family, face)

    def check_face(self, face) -> bool:
        return not self.intersection(face).is_empty()

    def facets(self) -> list:
        return self.complex.facets()


def _masks_to_faces(masks) -> list:
    out = []
    for m in masks:
        out.append(tuple(i for i in range(m.bit_length()) if m >> i & 1))
    return out


def maximal_patterns(family: SetFamily) -> list[int]:
    """Inclusion-maximal bitmasks of members sharing an ambient vertex."""
    pats = sorted(set(family.membership_patterns().values()), key=lambda m: -bin(m).count("1"))
    keep: list[int] = []
    for m in pats:
        if not any(m & k == m for k in keep):
            keep.append(m)
    return sorted(keep)


def nerve(family: SetFamily) -> NerveComplex:
    """Nerve of the family.

    Members are closed subcomplexes, so a subfamily has non-empty intersection
    iff its members share a vertex; the facets of the nerve are therefore the
    maximal membership patterns of ambient vertices.
    """
    faces = _masks_to_faces(maximal_patterns(family))
    return NerveComplex(build_simplicial(faces), family)


@dataclass(frozen=True)
class Violation:
    """A non-empty intersection with non-vanishing reduced homology in dimension ``dim``."""

    members: tuple
    dim: int
    betti: int
    torsion: tuple

    def group(self) -> str:
        parts = ["Z" if self.betti == 1 else "Z^%d" % self.betti] if self.betti else []
        parts += ["Z/%d" % t for t in self.torsion]
        return " + ".join(parts)

    def to_json(self, names=None) -> dict:
        d = {"members": list(self.members), "dim": self.dim, "group": self.group()}
        if names is not None:
            d["names"] = [names[i] for i in self.members]
        return d


class IntersectionHomology:
    """Reduced homology of every non-empty intersection of a family, computed once.

    Subfamilies are visited by increasing size; only faces of the nerve are
    visited, which skips every superset of an empty intersection.
    """

    def __init__(self, family: SetFamily, max_n: int = DEFAULT_MAX_N):
        if family.n > max_n:
            raise ResourceLimitError("family has %d members, enumeration cap is %d" % (family.n, max_n))
        self.family = family
        self.nerve = nerve(family)
        self.results: dict[tuple, HomologyResult] = {}
        for face in sorted(self.nerve.faces, key=lambda f: (len(f), f)):
            self.results[face] = reduced_homology(self.nerve.intersection(face))

    def violations(self, k: int | None) -> list[Violation]:
        """Every (G, n) with ``H~_n(cap G) != 0`` and ``n >= k - |G|`` (any n when ``k`` is None)."""
        out = []
        for face, h in self.results.items():
            for n in h.nonvanishing_dims():
                if k is None or n >= k - len(face):
                    out.append(Violation(face, n, h.betti_at(n), h.torsion_at(n)))
        return sorted(out, key=lambda v: (len(v.members), v.members, v.dim))

    def minimal_k(self) -> int:
        """Least ``k >= 0`` for which the family is (k-|G|)-acyclic."""
        k = 0
        for face, h in self.results.items():
            for n in h.nonvanishing_dims():
                k = max(k, n + len(face) + 1)
        return k

    def connectivity(self, face) -> float:
        return _connectivity_from(self.results[face])


@dataclass(frozen=True)
class AcyclicityReport:
    k: int
    verdict: bool
    violations: tuple
    method: str = "enumeration"

    def to_json(self, names=None) -> dict:
        return {
            "k": self.k,
            "verdict": self.verdict,
            "method": self.method,
            "violations": [v.to_json(names) for v in self.violations],
        }


def _all_boxes(family: SetFamily) -> bool:
    return family.ambient.kind == "cubical" and all(is_box(m) for m in family.members if not m.is_empty())


def is_k_acyclic_family(family: SetFamily, k: int, max_n: int = DEFAULT_MAX_N,
                        intersections: IntersectionHomology | None = None) -> AcyclicityReport:
    """Check ``H~_n(cap G) = 0`` for all ``n >= k - |G|`` over all subfamilies with non-empty intersection.

    Families of grid boxes above the enumeration cap are certified
    structurally: every intersection of boxes is a box or empty.
    """
    if k < 0:
        raise MalformedInputError("k must be non-negative")
    if intersections is None:
        if family.n > max_n and _all_boxes(family):
            return AcyclicityReport(k, True, (), method="box-structure")
        intersections = IntersectionHomology(family, max_n)
    v = tuple(intersections.violations(k))
    return AcyclicityReport(k, not v, v)


def is_good_cover_homological(family: SetFamily, max_n: int = DEFAULT_MAX_N,
                              intersections: IntersectionHomology | None = None):
    """``(True, None)`` if every non-empty intersection is Z-acyclic, else ``(False, violation)``."""
    if intersections is None:
        if family.n > max_n and _all_boxes(family):
            return True, None
        intersections = IntersectionHomology(family, max_n)
    v = intersections.violations(None)
    if v:
        return False, v[0]
    return True, None


def _connectivity_from(h: HomologyResult) -> float:
    if h.empty:
        raise EmptySpaceError("connectivity of the empty space is undefined here")
    dims = h.nonvanishing_dims()
    if not dims:
        return FULLY_ACYCLIC
    return dims[0] - 1


def homological_connectivity(C: Complex) -> float:
    """Largest ``c`` with ``H~_n(C) = 0`` for all ``n <= c``.

    Returns ``-1`` for a disconnected space and ``FULLY_ACYCLIC`` (infinity)
    when all reduced homology vanishes.
    """
    if C.is_empty():
        raise EmptySpaceError("homological connectivity of an empty complex")
    return _connectivity_from(reduced_homology(C))


@dataclass(frozen=True)
class LerayResult:
    number: int
    witness: tuple | None  # vertex set of an induced subcomplex forcing the number
    witness_dim: int | None
    checked: int

    def to_json(self) -> dict:
        return {"leray_number": self.number, "witness_vertices": list(self.witness) if self.witness else None,
                "witness_dim": self.witness_dim, "induced_subcomplexes_checked": self.checked}


def _is_cone(K: SimplicialComplex) -> bool:
    facets = K.facets()
    common = set(facets[0])
    for f in facets[1:]:
        common &= set(f)
        if not common:
            return False
    return True


def leray_analysis(K: SimplicialComplex, max_vertices: int = DEFAULT_MAX_VERTICES) -> LerayResult:
    """Smallest ``d >= 0`` such that every induced subcomplex has ``H~_n = 0`` for ``n >= d``.

    All ``2^V - 1`` non-empty induced subcomplexes are examined; cones are
    acyclic and skip the homology computation.
    """
    verts = K.vertices
    if len(verts) > max_vertices:
        raise ResourceLimitError("%d vertices exceed the Leray enumeration cap %d" % (len(verts), max_vertices))
    best, witness, wdim = 0, None, None
    checked = 0
    for r in range(1, len(verts) + 1):
        for S in itertools.combinations(verts, r):
            L = induced_subcomplex(K, S)
            checked += 1
            if _is_cone(L):
                continue
            h = reduced_homology(L)
            dims = h.nonvanishing_dims()
            if dims and dims[-1] + 1 > best:
                best, witness, wdim = dims[-1] + 1, S, dims[-1]
    return LerayResult(best, witness, wdim, checked)


def leray_number(K: SimplicialComplex, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    return leray_analysis(K, max_vertices).number
