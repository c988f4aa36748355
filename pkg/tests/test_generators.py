import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topohelly.complexes import cubical_box, is_box, subcomplex_intersection
from topohelly.errors import InfeasibleParametersError, MalformedInputError
from topohelly.generators import KINDS, RNG_ALGORITHM, GeneratorSpec, discretize_annulus, generate
from topohelly.homology import homology, reduced_homology
from topohelly.io import dumps, family_to_json
from topohelly.nerve import is_good_cover_homological


def _bytes(spec):
    return dumps(family_to_json(generate(spec)))


SPECS = [
    GeneratorSpec("boxes", d=2, extent=8, n=6, seed=11),
    GeneratorSpec("boxes", d=3, extent=5, n=5, seed=12),
    GeneratorSpec("annuli", d=2, extent=12, n=3, seed=13),
    GeneratorSpec("annuli", d=3, extent=6, n=2, seed=14, params={"max_inner": 1, "max_width": 1}),
    GeneratorSpec("punctured-regions", d=2, extent=8, n=3, seed=15),
    GeneratorSpec("adversarial", d=2, extent=8, n=4, seed=16),
    GeneratorSpec("discrete-sets", n=5, seed=17, params={"pattern": "random", "points": 8}),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_generation_is_byte_reproducible(spec):
    assert _bytes(spec) == _bytes(GeneratorSpec.from_json(spec.to_json()))


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3]))
@settings(max_examples=25)
def test_box_families_are_good_covers(seed, d):
    fam = generate(GeneratorSpec("boxes", d=d, extent=5, n=4, seed=seed))
    assert fam.n == 4 and all(is_box(m) for m in fam.members)
    assert is_good_cover_homological(fam)[0]


def test_different_seeds_differ():
    assert _bytes(GeneratorSpec("boxes", n=6, seed=1)) != _bytes(GeneratorSpec("boxes", n=6, seed=2))
    assert RNG_ALGORITHM == "pcg64"
    assert "boxes" in KINDS


def test_boxes_seed_7():
    fam = generate(GeneratorSpec("boxes", d=2, n=5, seed=7))
    assert fam.n == 5
    assert is_good_cover_homological(fam) == (True, None)


def test_annulus_examples():
    A = discretize_annulus(None, 1, 3, (16, 16))
    assert homology(A).betti == (1, 1, 0)
    # outer radius reaching the border, only the centre square removed
    B = discretize_annulus(None, 0.5, 7, (15, 15))
    assert homology(B).betti == (1, 1, 0)
    assert sum(1 for c in B.cells if B.cell_dim(c) == 2) == 15 * 15 - 1
    with pytest.raises(MalformedInputError):
        discretize_annulus(None, 3, 3, (16, 16))
    with pytest.raises(MalformedInputError):
        discretize_annulus(None, 4, 2, (16, 16))
    with pytest.raises(MalformedInputError):
        discretize_annulus(None, 1, 9, (16, 16))


def test_annulus_too_thin_is_infeasible():
    # no square centre has sup-distance in [1.2, 1.3] from a lattice point
    with pytest.raises(InfeasibleParametersError):
        discretize_annulus((4, 4), 1.2, 1.3, (8, 8))


def test_annulus_in_3d_is_a_ring():
    A = discretize_annulus(None, 1, 2, (6, 6, 3), slab=[(1, 2)])
    assert reduced_homology(A).betti == (0, 1, 0, 0)


def test_concentric_rings_keep_their_hole():
    fam = generate(GeneratorSpec("annuli", d=2, extent=12, n=3, params={"concentric": True}))
    for r in range(1, 4):
        for J in itertools.combinations(range(3), r):
            h = reduced_homology(subcomplex_intersection(fam, J))
            assert h.betti_at(1) == 1 and h.group(1) == "Z"


def test_random_annuli_are_rings():
    fam = generate(GeneratorSpec("annuli", d=2, extent=12, n=4, seed=5))
    for m in fam.members:
        assert homology(m).betti == (1, 1, 0)


def test_complement_singletons():
    fam = generate(GeneratorSpec("discrete-sets", n=4, params={"pattern": "complement-singletons"}))
    assert [sorted(v for (v,) in m.cells) for m in fam.members] == [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]]
    assert fam.ambient.dim == 0


def test_punctured_regions_have_holes():
    fam = generate(GeneratorSpec("punctured-regions", d=2, extent=8, n=3, seed=4))
    for m in fam.members:
        h = homology(m)
        assert h.betti_at(0) == 1 and h.betti_at(1) >= 1


def test_infeasible_parameters():
    with pytest.raises(MalformedInputError):
        generate(GeneratorSpec("annuli", d=2, extent=4, n=2, params={"max_inner": 3}))
    with pytest.raises(InfeasibleParametersError):
        generate(GeneratorSpec("punctured-regions", d=2, extent=8, n=2, params={"min_size": 1, "max_size": 2}))
    with pytest.raises(MalformedInputError):
        generate(GeneratorSpec("boxes", extent=1))
    with pytest.raises(MalformedInputError):
        generate(GeneratorSpec("spheres"))
    with pytest.raises(MalformedInputError):
        generate(GeneratorSpec("boxes", d=2, extent=(4, 4, 4)))
    with pytest.raises(MalformedInputError):
        generate(GeneratorSpec("discrete-sets", params={"pattern": "zigzag"}))


def test_members_lie_in_the_grid():
    fam = generate(GeneratorSpec("adversarial", d=2, extent=(7, 5), n=5, seed=9))
    grid = cubical_box([0, 0], [7, 5]).cells
    assert all(m.cells <= grid for m in fam.members)
