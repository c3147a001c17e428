"""Characteristic varieties, purity and Lagrangian geometry of D-modules over F_p."""

from .char_variety import (CharVariety, char_variety, component_ext_check, holonomicity_report,
                           level_relabel, localization_support_test, purity_report, variety_union_equal)
from .filt import (FilteredMorphism, GoodFilteredModule, check_exact_triple, filtered_complex_homology,
                   filtered_ext, good_resolution, induced_ker_coker, is_strict)
from .groebner import Ideal, groebner, ideal_dim, intersect, monomial_components, radical_member
from .rings import ParseError, PolyRing, cotangent_ring
from .symp import (ConormalSpec, CotangentChart, conormal_ideal, isotropy_test, lagrangian_test,
                   log_containment_check)
from .weyl import WeylAlgebra, WeylPresentation, log_induce, principal_symbol, weyl_ext

__version__ = "0.1.0"

__all__ = [
    "CharVariety", "char_variety", "component_ext_check", "holonomicity_report", "level_relabel",
    "localization_support_test", "purity_report", "variety_union_equal",
    "FilteredMorphism", "GoodFilteredModule", "check_exact_triple", "filtered_complex_homology",
    "filtered_ext", "good_resolution", "induced_ker_coker", "is_strict",
    "Ideal", "groebner", "ideal_dim", "intersect", "monomial_components", "radical_member",
    "ParseError", "PolyRing", "cotangent_ring",
    "ConormalSpec", "CotangentChart", "conormal_ideal", "isotropy_test", "lagrangian_test",
    "log_containment_check",
    "WeylAlgebra", "WeylPresentation", "log_induce", "principal_symbol", "weyl_ext",
]
