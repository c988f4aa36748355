import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ

from topohelly.complexes import build_simplicial, chain_complex, cubical_box, family_union, order_complex
from topohelly.errors import MalformedInputError, UnsupportedCoefficientsError
from topohelly.homology import betti_numbers_field, euler_from_betti, homology, reduced_homology, smith_normal_form
from topohelly.linalg import SparseMatrix

from conftest import circle, cubical_families, point, rp2, simplicial_complexes, sphere2


@st.composite
def int_matrices(draw, max_rows=6, max_cols=6):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(st.integers(-6, 6)) for _ in range(n)] for _ in range(m)]


def _oracle_factors(rows):
    D = sympy_snf(sympy.Matrix(rows), domain=ZZ)
    return tuple(sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0))


@given(int_matrices())
def test_snf_matches_sympy(rows):
    assert tuple(sorted(smith_normal_form(rows).invariant_factors)) == _oracle_factors(rows)


@given(int_matrices())
def test_sparse_snf_matches_dense_snf(rows):
    fast = smith_normal_form(rows)
    dense = smith_normal_form(rows, with_transforms=True)
    assert sorted(fast.invariant_factors) == sorted(dense.invariant_factors)


@given(int_matrices())
def test_snf_transforms_are_unimodular_witnesses(rows):
    s = smith_normal_form(rows, with_transforms=True)
    U, V, M = sympy.Matrix(s.U), sympy.Matrix(s.V), sympy.Matrix(rows)
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    assert U * M * V == sympy.Matrix(s.diagonal())
    f = s.invariant_factors
    assert all(b % a == 0 for a, b in zip(f, f[1:]))


def test_snf_small_example():
    s = smith_normal_form([[2, 0], [0, 3]], with_transforms=True)
    assert s.invariant_factors == (1, 6)
    assert s.torsion() == (6,)


def test_point():
    h = reduced_homology(point())
    assert h.is_acyclic() and h.betti == (0,)
    assert homology(point()).betti == (1,)


def test_circle():
    h = reduced_homology(circle())
    assert h.betti == (0, 1) and h.torsion == ((), ())
    assert h.group(1) == "Z"


def test_sphere():
    h = reduced_homology(sphere2())
    assert h.betti == (0, 0, 1)
    assert h.nonvanishing_dims() == [2]


def test_projective_plane():
    K = rp2()
    h = reduced_homology(K)
    assert h.betti == (0, 0, 0)
    assert h.torsion_at(1) == (2,)
    assert h.group(1) == "Z/2"
    assert betti_numbers_field(K, 0) == [1, 0, 0]
    assert betti_numbers_field(K, 2) == [1, 1, 1]
    assert betti_numbers_field(K, 3) == [1, 0, 0]


def test_empty_complex():
    K = build_simplicial([[0]]).with_cells(frozenset())
    h = homology(K)
    assert h.empty and not h.is_acyclic()
    assert h.to_json() == {"empty": True, "reduced": False, "groups": {}}
    assert betti_numbers_field(K, 0) == []


def test_field_validation():
    with pytest.raises(MalformedInputError):
        betti_numbers_field(circle(), 6)
    with pytest.raises(UnsupportedCoefficientsError):
        betti_numbers_field(circle(), None)


def test_box_is_acyclic_and_square_ring_is_a_circle():
    assert reduced_homology(cubical_box([0, 0, 0], [2, 1, 3])).is_acyclic()
    ring = cubical_box([0, 0], [3, 3])
    ring = ring.with_cells(ring.cells - {(3, 3)})
    assert homology(ring).betti == (1, 1, 0)


def test_hollow_cube_is_a_sphere():
    # hollow cube surface is a 2-sphere
    B = cubical_box([0, 0, 0], [1, 1, 1])
    S = B.with_cells(B.cells - {(1, 1, 1)})
    assert reduced_homology(S).betti == (0, 0, 1)


def _universal_coefficients(h, p, top):
    def t(n):
        return sum(1 for x in h.torsion_at(n) if x % p == 0)
    return [h.betti_at(n) + t(n) + t(n - 1) for n in range(top + 1)]


@given(simplicial_complexes(max_vertices=6, max_facets=7), st.sampled_from([2, 3]))
def test_field_betti_agree_with_universal_coefficients(K, p):
    h = homology(K)
    assert betti_numbers_field(K, 0) == list(h.betti)
    assert betti_numbers_field(K, p) == _universal_coefficients(h, p, K.dim)


@given(simplicial_complexes(max_vertices=6, max_facets=7))
def test_euler_characteristic_matches_betti(K):
    assert euler_from_betti(homology(K).betti) == chain_complex(K).euler_characteristic()


@given(cubical_families(extent=(3, 2), max_n=1, max_boxes=3))
def test_cubical_homology_matches_subdivision(fam):
    # the order complex is homeomorphic to the cubical complex
    K = family_union(fam)
    assert homology(K).betti == homology(order_complex(K)).betti


def test_homology_to_json():
    h = reduced_homology(rp2())
    assert h.to_json()["groups"]["1"] == {"betti": 0, "torsion": [2]}


def test_sparse_input_equivalence():
    rows = [[2, 4], [6, 8]]
    assert smith_normal_form(SparseMatrix.from_dense(rows, 2)).invariant_factors == \
        smith_normal_form(rows).invariant_factors
