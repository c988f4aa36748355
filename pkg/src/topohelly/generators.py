"""Seeded constructors for families of grid subcomplexes.

Randomness comes from numpy's PCG64 bit generator seeded with the GeneratorSpec's
integer seed, so a spec determines its family exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .complexes import (CubicalComplex, SetFamily, SimplicialComplex, _close, _cube_boundary, cubical_box,
                        is_box, subcomplex_intersection)
from .errors import InfeasibleParametersError, MalformedInputError
from .homology import homology
from .nerve import DEFAULT_MAX_N, is_good_cover_homological

RNG_ALGORITHM = "pcg64"
KINDS = ("boxes", "annuli", "punctured-regions", "discrete-sets", "adversarial")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    d: int = 2
    extent: int | tuple = 16
    n: int = 4
    seed: int = 0
    params: dict = field(default_factory=dict)

    def extents(self) -> tuple:
        if isinstance(self.extent, int):
            return (self.extent,) * self.d
        ext = tuple(int(e) for e in self.extent)
        if len(ext) != self.d:
            raise MalformedInputError("extent has %d entries for d=%d" % (len(ext), self.d))
        return ext

    def to_json(self) -> dict:
        ext = self.extent if isinstance(self.extent, int) else list(self.extent)
        return {"kind": self.kind, "d": self.d, "extent": ext, "n": self.n, "seed": self.seed,
                "params": dict(sorted(self.params.items()))}

    @classmethod
    def from_json(cls, doc: dict) -> "GeneratorSpec":
        ext = doc.get("extent", 16)
        return cls(kind=doc["kind"], d=int(doc.get("d", 2)), extent=ext if isinstance(ext, int) else tuple(ext),
                   n=int(doc.get("n", 4)), seed=int(doc.get("seed", 0)), params=dict(doc.get("params", {})))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _randint(rng, lo: int, hi: int) -> int:
    """Uniform integer in the closed range [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def _random_box(rng, ext, lo_size, hi_size):
    lower, upper = [], []
    for e in ext:
        size = _randint(rng, min(lo_size, e), min(hi_size, e))
        a = _randint(rng, 0, e - size)
        lower.append(a)
        upper.append(a + size)
    return lower, upper


def _open_cells(cells, dim):
    return [c for c in cells if sum(x & 1 for x in c) == dim]


def discretize_annulus(center, r_inner, r_outer, grid, slab=None) -> CubicalComplex:
    """Closed union of grid squares whose centres lie in a square ring.

    ``center`` is a point of the (x0, x1)-plane (None for the grid centre),
    distances are sup-norm, and
    ``grid`` is the tuple of extents.  In dimension > 2 the ring is extruded
    through ``slab`` (default: the full extent of the remaining axes).
    """
    grid = tuple(int(g) for g in grid)
    d = len(grid)
    if d < 2:
        raise MalformedInputError("annuli need a grid of dimension >= 2")
    if center is None:
        center = (grid[0] / 2, grid[1] / 2)
    cx, cy = float(center[0]), float(center[1])
    if not 0 < r_inner < r_outer:
        raise MalformedInputError("need 0 < r_inner < r_outer, got %r, %r" % (r_inner, r_outer))
    if cx - r_outer - 0.5 < 0 or cy - r_outer - 0.5 < 0 or cx + r_outer + 0.5 > grid[0] or cy + r_outer + 0.5 > grid[1]:
        raise MalformedInputError("annulus radii exceed the grid")
    if slab is None:
        slab = [(0, g) for g in grid[2:]]
    squares = []
    for i in range(grid[0]):
        for j in range(grid[1]):
            dist = max(abs(i + 0.5 - cx), abs(j + 0.5 - cy))
            if r_inner <= dist <= r_outer:
                squares.append((2 * i + 1, 2 * j + 1))
    if not squares:
        raise InfeasibleParametersError("annulus contains no grid square")
    extra = [range(2 * a + 1, 2 * b, 2) for a, b in slab] if slab else []
    if any(len(r) == 0 for r in extra):
        raise MalformedInputError("empty slab")
    tops = [sq + rest for sq in squares for rest in itertools.product(*extra)] if extra else squares
    K = CubicalComplex(d, _close(tops, _cube_boundary), validate=False)
    h = homology(K)
    if (h.betti_at(0), h.betti_at(1)) != (1, 1) or any(h.betti_at(n) for n in range(2, d + 1)) \
            or any(h.torsion_at(n) for n in range(d + 1)):
        raise InfeasibleParametersError("discretised annulus is not a ring (homology %s)" % (h.betti,))
    return K


def _boxes(spec, rng, ext):
    lo = int(spec.params.get("min_size", 1))
    hi = int(spec.params.get("max_size", max(1, max(ext) // 2)))
    return [cubical_box(*_random_box(rng, ext, lo, hi)) for _ in range(spec.n)]


def _annuli(spec, rng, ext):
    members = []
    if spec.params.get("concentric", False):
        cx, cy = ext[0] / 2, ext[1] / 2
        r_out = min(ext[0], ext[1]) / 2 - 0.5
        base = float(spec.params.get("r_inner_start", 1))
        for i in range(spec.n):
            members.append(discretize_annulus((cx, cy), base + i, r_out, ext))
        return members
    for _ in range(spec.n):
        width = _randint(rng, 1, int(spec.params.get("max_width", 2)))
        r_in = _randint(rng, 1, int(spec.params.get("max_inner", 2)))
        r_out = r_in + width
        # centre of a grid square, far enough from the border
        span0 = ext[0] - 2 * r_out - 1
        span1 = ext[1] - 2 * r_out - 1
        if span0 < 0 or span1 < 0:
            raise MalformedInputError("annulus radii exceed the grid")
        cx = _randint(rng, 0, span0) + r_out + 0.5
        cy = _randint(rng, 0, span1) + r_out + 0.5
        slab = None
        if len(ext) > 2:
            slab = []
            for e in ext[2:]:
                t = _randint(rng, 1, e)
                a = _randint(rng, 0, e - t)
                slab.append((a, a + t))
        members.append(discretize_annulus((cx, cy), r_in, r_out, ext, slab))
    return members


def _punctured(spec, rng, ext):
    members = []
    holes_max = int(spec.params.get("max_holes", 2))
    lo = int(spec.params.get("min_size", 3))
    hi = int(spec.params.get("max_size", max(lo, max(ext) // 2)))
    for _ in range(spec.n):
        lower, upper = _random_box(rng, ext, lo, hi)
        box = cubical_box(lower, upper)
        # top cells not touching the box boundary
        interior = sorted(c for c in _open_cells(box.cells, len(ext))
                          if all(2 * l + 1 < x < 2 * u - 1 for x, l, u in zip(c, lower, upper)))
        if not interior:
            raise InfeasibleParametersError("box too small to puncture; raise min_size")
        count = _randint(rng, 1, min(holes_max, len(interior)))
        picks = rng.choice(len(interior), size=count, replace=False)
        removed = {interior[int(i)] for i in sorted(picks)}
        members.append(box.with_cells(box.cells - removed))
    return members


def _adversarial(spec, rng, ext):
    members = []
    lo = int(spec.params.get("min_size", 1))
    hi = int(spec.params.get("max_size", max(1, max(ext) // 2)))
    pieces = int(spec.params.get("max_pieces", 3))
    for _ in range(spec.n):
        cells = set()
        for _ in range(_randint(rng, 2, pieces)):
            cells |= cubical_box(*_random_box(rng, ext, lo, hi)).cells
        members.append(CubicalComplex(len(ext), frozenset(cells), validate=False))
    return members


def _discrete(spec, rng):
    pattern = spec.params.get("pattern", "complement-singletons")
    n = spec.n
    points = int(spec.params.get("points", n))
    amb = SimplicialComplex(frozenset((i,) for i in range(points)), validate=False)
    if pattern == "complement-singletons":
        sets = [[j for j in range(n) if j != i] for i in range(n)]
    elif pattern == "disjoint":
        sets = [[i] for i in range(n)]
    elif pattern == "random":
        size = int(spec.params.get("size", max(1, points // 2)))
        sets = [sorted(int(x) for x in rng.choice(points, size=size, replace=False)) for _ in range(n)]
    else:
        raise MalformedInputError("unknown discrete pattern %r" % pattern)
    return amb, [amb.with_cells(frozenset((v,) for v in s)) for s in sets]


def generate(spec: GeneratorSpec, max_n: int = DEFAULT_MAX_N) -> SetFamily:
    """Build the family described by ``spec`` and re-check its advertised regime."""
    if spec.kind not in KINDS:
        raise MalformedInputError("unknown generator kind %r" % spec.kind)
    if spec.n < 0:
        raise MalformedInputError("n must be non-negative")
    rng = make_rng(spec.seed)
    if spec.kind == "discrete-sets":
        amb, members = _discrete(spec, rng)
        return SetFamily(amb, tuple(members))
    ext = spec.extents()
    if any(e < 2 for e in ext):
        raise MalformedInputError("grid extent must be >= 2 on every axis")
    amb = cubical_box([0] * len(ext), ext)
    if spec.kind == "boxes":
        members = _boxes(spec, rng, ext)
    elif spec.kind == "annuli":
        members = _annuli(spec, rng, ext)
    elif spec.kind == "punctured-regions":
        members = _punctured(spec, rng, ext)
    else:
        members = _adversarial(spec, rng, ext)
    fam = SetFamily(amb, tuple(members))
    _validate(spec, fam, max_n)
    return fam


def _validate(spec, fam, max_n):
    if spec.kind == "boxes":
        if not all(is_box(m) for m in fam.members):
            raise InfeasibleParametersError("box generator produced a non-box member")
        if fam.n <= max_n:
            ok, bad = is_good_cover_homological(fam, max_n=max_n)
            if not ok:
                raise InfeasibleParametersError("box family failed the good-cover check: %r" % (bad,))
    elif spec.kind == "annuli" and spec.params.get("concentric", False):
        for r in range(1, fam.n + 1):
            for J in itertools.combinations(range(fam.n), r):
                h = homology(subcomplex_intersection(fam, J))
                if h.betti_at(1) != 1:
                    raise InfeasibleParametersError("ring family lost its 1-dimensional hole at %r" % (J,))
    elif spec.kind == "punctured-regions":
        d = fam.ambient.dimension
        for m in fam.members:
            h = homology(m)
            if h.betti_at(0) != 1 or h.betti_at(d - 1) < 1:
                raise InfeasibleParametersError("punctured region is not a connected region with holes")
