"""Finite simplicial and cubical complexes, chain complexes and set families.

Simplices are sorted tuples of integer vertex ids.  Elementary cubes in a
``d``-dimensional integer grid are stored in *doubled coordinates*: the
interval ``[a, a]`` becomes ``2a`` and ``[a, a+1]`` becomes ``2a + 1``, so a
cube is a ``d``-tuple of ints whose odd entries mark its non-degenerate
directions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import InternalConsistencyError, MalformedInputError
from .linalg import SparseMatrix

Simplex = tuple
Cube = tuple


def _simplex_boundary(s: Simplex):
    if len(s) == 1:
        return []
    return [(s[:i] + s[i + 1:], -1 if i % 2 else 1) for i in range(len(s))]


def _cube_dim(c: Cube) -> int:
    return sum(x & 1 for x in c)


def _cube_boundary(c: Cube):
    out = []
    j = 0
    for i, x in enumerate(c):
        if x & 1:
            sign = -1 if j % 2 else 1
            out.append((c[:i] + (x + 1,) + c[i + 1:], sign))
            out.append((c[:i] + (x - 1,) + c[i + 1:], -sign))
            j += 1
    return out


def cube_from_intervals(intervals: Sequence[Sequence[int]]) -> Cube:
    """``[[a0, b0], [a1, b1], ...]`` with ``b - a in {0, 1}`` to doubled coordinates."""
    cube = []
    for iv in intervals:
        a, b = int(iv[0]), int(iv[1])
        if b - a not in (0, 1):
            raise MalformedInputError("not an elementary interval: [%d, %d]" % (a, b))
        cube.append(2 * a + (b - a))
    return tuple(cube)


def cube_intervals(cube: Cube) -> list[list[int]]:
    return [[x // 2, x // 2 + (x & 1)] for x in cube]


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite abstract simplicial complex given by its (downward closed) faces."""

    faces: frozenset = frozenset()
    validate: bool = field(default=True, compare=False, repr=False)

    kind = "simplicial"

    def __post_init__(self):
        if not self.validate:
            return
        for f in self.faces:
            if not f or list(f) != sorted(set(f)):
                raise MalformedInputError("faces must be non-empty sorted vertex tuples: %r" % (f,))
            if len(f) > 1:
                for g, _ in _simplex_boundary(f):
                    if g not in self.faces:
                        raise MalformedInputError("face set is not downward closed at %r" % (f,))

    @property
    def cells(self) -> frozenset:
        return self.faces

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted(f[0] for f in self.faces if len(f) == 1))

    @cached_property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    @staticmethod
    def cell_dim(cell: Simplex) -> int:
        return len(cell) - 1

    @staticmethod
    def boundary(cell: Simplex):
        return _simplex_boundary(cell)

    @staticmethod
    def cell_vertices(cell: Simplex):
        return [(v,) for v in cell]

    def vertex_cells(self) -> list:
        return [(v,) for v in self.vertices]

    def is_empty(self) -> bool:
        return not self.faces

    def __len__(self) -> int:
        return len(self.faces)

    def facets(self) -> list:
        return maximal_cells(self)

    def subcomplex(self, cells: Iterable, close: bool = False) -> "SimplicialComplex":
        cells = frozenset(cells)
        if close:
            cells = _close(cells, _simplex_boundary)
        if not cells <= self.faces:
            raise MalformedInputError("cells outside the ambient complex")
        return SimplicialComplex(cells, validate=not close)

    def with_cells(self, cells: frozenset) -> "SimplicialComplex":
        # cells already known to be a subcomplex
        return SimplicialComplex(cells, validate=False)


@dataclass(frozen=True)
class CubicalComplex:
    """Closed set of elementary cubes of the integer grid in R^dimension."""

    dimension: int
    cells: frozenset = frozenset()
    validate: bool = field(default=True, compare=False, repr=False)

    kind = "cubical"

    def __post_init__(self):
        if self.dimension < 1:
            raise MalformedInputError("grid dimension must be >= 1")
        if not self.validate:
            return
        for c in self.cells:
            if not isinstance(c, tuple) or len(c) != self.dimension:
                raise MalformedInputError("cube %r does not live in dimension %d" % (c, self.dimension))
            for g, _ in _cube_boundary(c):
                if g not in self.cells:
                    raise MalformedInputError("cube set is not closed at %r" % (c,))

    @cached_property
    def dim(self) -> int:
        return max((_cube_dim(c) for c in self.cells), default=-1)

    @staticmethod
    def cell_dim(cell: Cube) -> int:
        return _cube_dim(cell)

    @staticmethod
    def boundary(cell: Cube):
        return _cube_boundary(cell)

    @staticmethod
    def cell_vertices(cell: Cube):
        choices = [(x,) if not x & 1 else (x - 1, x + 1) for x in cell]
        return list(itertools.product(*choices))

    def vertex_cells(self) -> list:
        return sorted(c for c in self.cells if not any(x & 1 for x in c))

    @property
    def vertices(self) -> tuple:
        return tuple(self.vertex_cells())

    def is_empty(self) -> bool:
        return not self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def facets(self) -> list:
        return maximal_cells(self)

    def subcomplex(self, cells: Iterable, close: bool = False) -> "CubicalComplex":
        cells = frozenset(cells)
        if close:
            cells = _close(cells, _cube_boundary)
        if not cells <= self.cells:
            raise MalformedInputError("cells outside the ambient complex")
        return CubicalComplex(self.dimension, cells, validate=not close)

    def with_cells(self, cells: frozenset) -> "CubicalComplex":
        return CubicalComplex(self.dimension, cells, validate=False)


Complex = Union[SimplicialComplex, CubicalComplex]


def _close(cells: Iterable, boundary) -> frozenset:
    out = set()
    stack = list(cells)
    while stack:
        c = stack.pop()
        if c in out:
            continue
        out.add(c)
        stack.extend(g for g, _ in boundary(c) if g not in out)
    return frozenset(out)


def maximal_cells(K: Complex) -> list:
    """Cells of ``K`` that are not a proper face of another cell, sorted."""
    covered = set()
    for c in K.cells:
        for g, _ in K.boundary(c):
            covered.add(g)
    return sorted(c for c in K.cells if c not in covered)


def build_simplicial(facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of a list of vertex sets."""
    faces = set()
    for facet in facets:
        verts = tuple(sorted(set(int(v) for v in facet)))
        if not verts:
            raise MalformedInputError("empty vertex set among the facets")
        if verts in faces:
            continue
        for r in range(1, len(verts) + 1):
            faces.update(itertools.combinations(verts, r))
    return SimplicialComplex(frozenset(faces), validate=False)


def build_cubical(cubes: Iterable[Sequence[Sequence[int]]], dimension: int | None = None) -> CubicalComplex:
    """Closure of a list of elementary cubes given as interval lists."""
    doubled = [cube_from_intervals(c) for c in cubes]
    if dimension is None:
        if not doubled:
            raise MalformedInputError("dimension required for an empty cube list")
        dimension = len(doubled[0])
    for c in doubled:
        if len(c) != dimension:
            raise MalformedInputError("cube %r has the wrong dimension" % (c,))
    return CubicalComplex(dimension, _close(doubled, _cube_boundary), validate=False)


def cubical_box(lower: Sequence[int], upper: Sequence[int]) -> CubicalComplex:
    """All elementary cubes of the closed box ``prod [lower_i, upper_i]``."""
    if len(lower) != len(upper):
        raise MalformedInputError("box corners differ in dimension")
    if any(u < l for l, u in zip(lower, upper)):
        raise MalformedInputError("box upper corner below lower corner")
    ranges = [range(2 * l, 2 * u + 1) for l, u in zip(lower, upper)]
    return CubicalComplex(len(lower), frozenset(itertools.product(*ranges)), validate=False)


def is_box(K: Complex) -> bool:
    """True iff ``K`` is the full cubical complex of a closed axis-parallel box."""
    if K.kind != "cubical" or K.is_empty():
        return False
    lo = [min(c[i] for c in K.cells) for i in range(K.dimension)]
    hi = [max(c[i] for c in K.cells) for i in range(K.dimension)]
    if any(x & 1 for x in lo + hi):
        return False
    count = 1
    for a, b in zip(lo, hi):
        count *= b - a + 1
    return count == len(K.cells)


def induced_subcomplex(K: SimplicialComplex, S: Iterable[int]) -> SimplicialComplex:
    """Faces of ``K`` all of whose vertices lie in ``S``."""
    S = set(S)
    unknown = S - set(K.vertices)
    if unknown:
        raise MalformedInputError("unknown vertices %s" % sorted(unknown))
    return SimplicialComplex(frozenset(f for f in K.faces if S.issuperset(f)), validate=False)


@dataclass(frozen=True)
class ChainComplex:
    """Cellular chain complex with integer boundary matrices.

    ``bases[p]`` lists the p-cells; ``boundaries[p]`` is the matrix of
    ``d_p : C_p -> C_{p-1}`` (``boundaries[0]`` is the empty map to C_{-1}).
    """

    bases: tuple
    boundaries: tuple

    def __post_init__(self):
        if len(self.bases) != len(self.boundaries):
            raise InternalConsistencyError("one boundary matrix per degree expected")
        for p, d in enumerate(self.boundaries):
            rows = len(self.bases[p - 1]) if p else 0
            if d.shape != (rows, len(self.bases[p])):
                raise InternalConsistencyError("boundary %d has shape %s" % (p, d.shape))
        for p in range(2, len(self.boundaries)):
            if not (self.boundaries[p - 1] @ self.boundaries[p]).is_zero():
                raise InternalConsistencyError("d_%d d_%d != 0" % (p - 1, p))

    @property
    def top_dim(self) -> int:
        return len(self.bases) - 1

    def rank(self, p: int) -> int:
        return len(self.bases[p]) if 0 <= p < len(self.bases) else 0

    def boundary(self, p: int) -> SparseMatrix:
        if 0 <= p < len(self.boundaries):
            return self.boundaries[p]
        return SparseMatrix.zeros(self.rank(p - 1), self.rank(p))

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * len(b) for p, b in enumerate(self.bases))

    def is_empty(self) -> bool:
        return not any(self.bases)


def chain_complex(K: Complex) -> ChainComplex:
    """Cellular chain complex of a simplicial or cubical complex.

    Simplices use the alternating-sign boundary in ascending vertex order;
    cubes use ``d(I x J) = dI x J + (-1)^dim(I) I x dJ``.
    """
    by_dim: dict[int, list] = {}
    for c in K.cells:
        by_dim.setdefault(K.cell_dim(c), []).append(c)
    top = K.dim
    bases = tuple(tuple(sorted(by_dim.get(p, ()))) for p in range(top + 1))
    index = [{c: i for i, c in enumerate(b)} for b in bases]
    boundaries = [SparseMatrix.zeros(0, len(bases[0]) if bases else 0)]
    for p in range(1, top + 1):
        cols = []
        for c in bases[p]:
            col = {}
            for g, s in K.boundary(c):
                i = index[p - 1][g]
                col[i] = col.get(i, 0) + s
            cols.append({i: v for i, v in col.items() if v})
        boundaries.append(SparseMatrix(len(bases[p - 1]), len(cols), tuple(cols)))
    if top < 0:
        return ChainComplex((), ())
    return ChainComplex(bases, tuple(boundaries))


def order_complex(K: Complex) -> SimplicialComplex:
    """Barycentric subdivision: chains of cells under the face relation.

    Homeomorphic to ``K``; used to cross-check cubical homology against
    simplicial homology.
    """
    cells = sorted(K.cells, key=lambda c: (K.cell_dim(c), c))
    ids = {c: i for i, c in enumerate(cells)}
    maximal = maximal_cells(K)
    facets = []

    def chains(top, tail):
        faces = [g for g, _ in K.boundary(top)]
        if not faces:
            facets.append(tail + (ids[top],))
            return
        for g in faces:
            chains(g, tail + (ids[top],))

    for m in maximal:
        chains(m, ())
    return build_simplicial(facets)


@dataclass(frozen=True)
class SetFamily:
    """Named subcomplexes ``F_1, ..., F_n`` of one ambient complex (0-based)."""

    ambient: Complex
    members: tuple
    names: tuple = ()

    def __post_init__(self):
        members = tuple(self.members)
        names = tuple(self.names) if self.names else tuple("F%d" % (i + 1) for i in range(len(members)))
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "names", names)
        if len(names) != len(members):
            raise MalformedInputError("one name per member required")
        if len(set(names)) != len(names):
            raise MalformedInputError("member names must be unique")
        for name, m in zip(names, members):
            if m.kind != self.ambient.kind:
                raise MalformedInputError("member %s has the wrong complex type" % name)
            if not m.cells <= self.ambient.cells:
                raise MalformedInputError("member %s is not a subcomplex of the ambient complex" % name)

    @property
    def n(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def grid_dimension(self) -> int:
        """Dimension ``d`` with ``H_n(union) = 0`` for all ``n >= d``."""
        if self.ambient.kind == "cubical":
            return self.ambient.dimension
        return self.ambient.dim + 1

    def subfamily(self, J: Iterable[int]) -> "SetFamily":
        J = sorted(set(J))
        return SetFamily(self.ambient, tuple(self.members[j] for j in J), tuple(self.names[j] for j in J))

    def permuted(self, order: Sequence[int]) -> "SetFamily":
        return SetFamily(self.ambient, tuple(self.members[j] for j in order), tuple(self.names[j] for j in order))

    def empty(self) -> Complex:
        return self.ambient.with_cells(frozenset())

    def membership_patterns(self) -> dict:
        """Map each ambient vertex lying in some member to the bitmask of members containing it."""
        pat: dict = {}
        for i, m in enumerate(self.members):
            bit = 1 << i
            for v in m.vertex_cells():
                pat[v] = pat.get(v, 0) | bit
        return pat


def _check_index_set(family: SetFamily, J) -> list[int]:
    J = sorted(set(J))
    if not J:
        raise MalformedInputError("index set must be non-empty")
    for j in J:
        if not 0 <= j < family.n:
            raise MalformedInputError("index %r out of range" % (j,))
    return J


def subcomplex_intersection(family: SetFamily, J: Iterable[int]) -> Complex:
    J = _check_index_set(family, J)
    cells = family.members[J[0]].cells
    for j in J[1:]:
        cells = cells & family.members[j].cells
    return family.ambient.with_cells(cells)


def subcomplex_union(family: SetFamily, J: Iterable[int]) -> Complex:
    J = _check_index_set(family, J)
    cells = frozenset().union(*(family.members[j].cells for j in J))
    return family.ambient.with_cells(cells)


def family_union(family: SetFamily) -> Complex:
    if not family.n:
        return family.empty()
    return subcomplex_union(family, range(family.n))
