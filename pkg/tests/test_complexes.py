import itertools

import pytest
from hypothesis import given

from topohelly.complexes import (ChainComplex, CubicalComplex, SetFamily, SimplicialComplex, build_cubical,
                                 build_simplicial, chain_complex, cube_from_intervals, cube_intervals, cubical_box,
                                 family_union, induced_subcomplex, is_box, maximal_cells, order_complex,
                                 subcomplex_intersection, subcomplex_union)
from topohelly.errors import InternalConsistencyError, MalformedInputError
from topohelly.linalg import SparseMatrix

from conftest import boxes_in, cubical_families, simplicial_complexes


def test_doubled_coordinates():
    assert cube_from_intervals([[2, 3], [4, 4]]) == (5, 8)
    assert cube_intervals((5, 8)) == [[2, 3], [4, 4]]
    with pytest.raises(MalformedInputError):
        cube_from_intervals([[0, 2]])


def test_box_cell_counts():
    # an a x b box has (a+1)(b+1) vertices, a(b+1)+b(a+1) edges and ab squares
    B = cubical_box([0, 0], [3, 2])
    dims = [sum(1 for c in B.cells if B.cell_dim(c) == k) for k in range(3)]
    assert dims == [12, 17, 6]
    assert B.dim == 2
    assert is_box(B)
    assert not is_box(B.with_cells(B.cells - {(1, 1)}))


def test_simplicial_validation_rejects_missing_faces():
    with pytest.raises(MalformedInputError):
        SimplicialComplex(frozenset({(0, 1)}))
    K = build_simplicial([[0, 1, 2]])
    assert len(K) == 7
    assert K.facets() == [(0, 1, 2)]


def test_cubical_validation_rejects_missing_faces():
    with pytest.raises(MalformedInputError):
        CubicalComplex(2, frozenset({(1, 1)}))
    with pytest.raises(MalformedInputError):
        build_cubical([[[0, 1]], [[0, 1], [0, 0]]])


def test_box_rejects_inverted_corners():
    with pytest.raises(MalformedInputError):
        cubical_box([2, 0], [1, 1])


@given(boxes_in((4, 3, 2)))
def test_cubical_boundary_squares_to_zero(box):
    C = chain_complex(cubical_box(*box))
    for p in range(2, C.top_dim + 1):
        assert (C.boundary(p - 1) @ C.boundary(p)).is_zero()


@given(simplicial_complexes())
def test_simplicial_boundary_squares_to_zero(K):
    C = chain_complex(K)
    for p in range(2, C.top_dim + 1):
        assert (C.boundary(p - 1) @ C.boundary(p)).is_zero()


def test_chain_complex_rejects_nonzero_square():
    one = SparseMatrix.from_dense([[1]], 1)
    with pytest.raises(InternalConsistencyError):
        ChainComplex((("a",), ("b",), ("c",)), (SparseMatrix.zeros(0, 1), one, one))


def test_chain_complex_rejects_wrong_shape():
    with pytest.raises(InternalConsistencyError):
        ChainComplex((("a",), ("b",)), (SparseMatrix.zeros(0, 1), SparseMatrix.zeros(2, 1)))


@given(simplicial_complexes(max_vertices=5))
def test_euler_characteristic_counts_cells(K):
    C = chain_complex(K)
    counts = [sum(1 for f in K.faces if len(f) == k + 1) for k in range(K.dim + 1)]
    assert C.euler_characteristic() == sum((-1) ** k * c for k, c in enumerate(counts))


def test_order_complex_of_square_has_expected_size():
    # barycentric subdivision of a square: 9 vertices, 16 edges, 8 triangles
    O = order_complex(cubical_box([0, 0], [1, 1]))
    counts = [sum(1 for f in O.faces if len(f) == k + 1) for k in range(3)]
    assert counts == [9, 16, 8]


def test_induced_subcomplex():
    K = build_simplicial([[0, 1, 2], [2, 3]])
    L = induced_subcomplex(K, [0, 2, 3])
    assert L.facets() == [(0, 2), (2, 3)]
    with pytest.raises(MalformedInputError):
        induced_subcomplex(K, [7])


@given(cubical_families())
def test_intersection_and_union_are_subcomplexes(fam):
    for r in range(1, fam.n + 1):
        for J in itertools.combinations(range(fam.n), r):
            I = subcomplex_intersection(fam, J)
            U = subcomplex_union(fam, J)
            # re-validating checks closure under faces
            CubicalComplex(fam.ambient.dimension, I.cells)
            CubicalComplex(fam.ambient.dimension, U.cells)
            assert I.cells <= U.cells
    assert family_union(fam).cells == frozenset().union(*(m.cells for m in fam.members))


def test_family_rejects_foreign_members():
    amb = cubical_box([0, 0], [2, 2])
    with pytest.raises(MalformedInputError):
        SetFamily(amb, (cubical_box([0, 0], [3, 1]),))
    with pytest.raises(MalformedInputError):
        SetFamily(amb, (cubical_box([0, 0], [1, 1]),), names=("A", "B"))
    fam = SetFamily(amb, (cubical_box([0, 0], [1, 1]),))
    with pytest.raises(MalformedInputError):
        subcomplex_intersection(fam, [])
    with pytest.raises(MalformedInputError):
        subcomplex_intersection(fam, [3])


def test_membership_patterns_and_grid_dimension():
    amb = cubical_box([0], [3])
    fam = SetFamily(amb, (cubical_box([0], [1]), cubical_box([1], [3])))
    assert fam.membership_patterns() == {(0,): 1, (2,): 3, (4,): 2, (6,): 2}
    assert fam.grid_dimension == 1
    assert fam.names == ("F1", "F2")
    assert maximal_cells(fam.members[0]) == [(1,)]
    assert fam.permuted([1, 0]).names == ("F2", "F1")
