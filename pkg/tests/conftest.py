import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from topohelly.complexes import CubicalComplex, SetFamily, SimplicialComplex, build_simplicial, cubical_box

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# Small named spaces used across the suite.
def point():
    return build_simplicial([[0]])


def circle():
    return build_simplicial([[0, 1], [1, 2], [0, 2]])


def sphere2():
    return build_simplicial(itertools.combinations(range(4), 3))


RP2_FACETS = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
              [2, 3, 5], [3, 4, 6], [2, 4, 5], [2, 4, 6], [3, 5, 6]]


def rp2():
    return build_simplicial(RP2_FACETS)


def grid_family(extent, boxes):
    amb = cubical_box([0] * len(extent), extent)
    return SetFamily(amb, tuple(cubical_box(lo, hi) for lo, hi in boxes))


def union_family(extent, members):
    """Members given as lists of boxes; each member is the union of its boxes."""
    amb = cubical_box([0] * len(extent), extent)
    out = []
    for boxes in members:
        cells = frozenset().union(*(cubical_box(lo, hi).cells for lo, hi in boxes))
        out.append(CubicalComplex(len(extent), cells, validate=False))
    return SetFamily(amb, tuple(out))


def triangle_of_segments():
    """Pairwise-meeting members with empty triple intersection (bottom, right, left-plus-top)."""
    return union_family((2, 2), [
        [([0, 0], [2, 0])],
        [([2, 0], [2, 2])],
        [([0, 0], [0, 2]), ([0, 2], [2, 2])],
    ])


def point_family(sets, points=None):
    points = points if points is not None else 1 + max((max(s) for s in sets if s), default=0)
    amb = SimplicialComplex(frozenset((i,) for i in range(points)), validate=False)
    return SetFamily(amb, tuple(amb.with_cells(frozenset((v,) for v in s)) for s in sets))


@st.composite
def boxes_in(draw, extent):
    lo, hi = [], []
    for e in extent:
        a = draw(st.integers(0, e))
        b = draw(st.integers(a, e))
        lo.append(a)
        hi.append(b)
    return lo, hi


@st.composite
def cubical_families(draw, extent=(3, 3), max_n=3, max_boxes=2, min_n=1):
    """Members are unions of 1..max_boxes boxes in the grid."""
    n = draw(st.integers(min_n, max_n))
    members = [draw(st.lists(boxes_in(extent), min_size=1, max_size=max_boxes)) for _ in range(n)]
    return union_family(extent, members)


@st.composite
def simplicial_complexes(draw, max_vertices=6, max_facets=6, max_dim=3):
    facets = draw(st.lists(
        st.sets(st.integers(0, max_vertices - 1), min_size=1, max_size=max_dim + 1),
        min_size=1, max_size=max_facets))
    return build_simplicial(facets)


@st.composite
def simplicial_families(draw, max_vertices=6, max_n=4):
    K = draw(simplicial_complexes(max_vertices=max_vertices))
    faces = sorted(K.faces)
    n = draw(st.integers(1, max_n))
    members = []
    for _ in range(n):
        chosen = draw(st.lists(st.sampled_from(faces), min_size=1, max_size=4))
        members.append(K.subcomplex(chosen, close=True))
    return SetFamily(K, tuple(members))


@pytest.fixture
def rp2_complex():
    return rp2()
