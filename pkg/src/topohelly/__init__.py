"""Exact homology of grid and simplicial complexes, nerves of set families,
Mayer-Vietoris spectral sequences and fractional Helly statistics."""
from .complexes import (ChainComplex, CubicalComplex, SetFamily, SimplicialComplex, build_cubical, build_simplicial,
                        chain_complex, cubical_box, family_union, induced_subcomplex, subcomplex_intersection,
                        subcomplex_union)
from .errors import (EmptySpaceError, InfeasibleParametersError, InternalConsistencyError, MalformedInputError,
                     ResourceLimitError, TopoHellyError, UnsupportedCoefficientsError)
from .generators import GeneratorSpec, discretize_annulus, generate
from .helly import (alpha_fraction, beta, beta_n_floor, fractional_helly_check, intersection_depth, pq_condition,
                    transversal_number)
from .homology import betti_numbers_field, homology, reduced_homology, smith_normal_form
from .io import complex_from_json, complex_to_json, family_from_json, family_to_json
from .nerve import (homological_connectivity, is_good_cover_homological, is_k_acyclic_family, leray_analysis,
                    leray_number, nerve)
from .spectral import (FIRST, SECOND, convergence_check, mayer_vietoris_double_complex, nerve_theorem_check,
                       spectral_page, total_complex)

__version__ = "0.1.0"

__all__ = [
    "ChainComplex", "CubicalComplex", "SetFamily", "SimplicialComplex", "build_cubical", "build_simplicial",
    "chain_complex", "cubical_box", "family_union", "induced_subcomplex", "subcomplex_intersection",
    "subcomplex_union", "EmptySpaceError", "InfeasibleParametersError", "InternalConsistencyError",
    "MalformedInputError", "ResourceLimitError", "TopoHellyError", "UnsupportedCoefficientsError", "GeneratorSpec",
    "discretize_annulus", "generate", "alpha_fraction", "beta", "beta_n_floor", "fractional_helly_check",
    "intersection_depth", "pq_condition", "transversal_number", "betti_numbers_field", "homology",
    "reduced_homology", "smith_normal_form", "complex_from_json", "complex_to_json", "family_from_json",
    "family_to_json", "homological_connectivity", "is_good_cover_homological", "is_k_acyclic_family",
    "leray_analysis", "leray_number", "nerve", "FIRST", "SECOND", "convergence_check",
    "mayer_vietoris_double_complex", "nerve_theorem_check", "spectral_page", "total_complex",
]
