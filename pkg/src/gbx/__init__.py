"""Exact big-bracket calculus on T*[2]A[1].

Elements are polynomials in graded generators with coefficients that are
exact rational functions (with sign-resolved fractional powers) of the base
coordinates.  On top of the bracket sit Lie algebroid structures, compatible
pairs of tensors, the sl(2) action of an inverse pair, Courant algebroid
endomorphisms and Monge-Ampere structures.
"""

from .scalar import ScalarExpr
from .graded import GradedContext, GradedElement, big_bracket, wedge
from .printer import format_element, format_scalar
from .algebroid import (
    AlgebroidStructure,
    differential,
    heisenberg_mu,
    nijenhuis_torsion,
    schouten_bracket,
    so3_mu,
    standard_mu,
    validate_structure,
)
from .compat import check_structure, modular_cocycle, tilde_structure
from .sl2 import Sl2Frame, lepage_decompose, lepage_recompose
from .courant import DoubleEndo, classify_generalized, courant_torsion
from .monge_ampere import (
    analyze_2d,
    analyze_3d,
    build_ma,
    jacobi_analyze,
    ma_operator_apply,
)
from .dsl import parse_dsl, parse_element, parse_file
from .report import run_document, serialize

__version__ = "0.1.0"

__all__ = [
    "AlgebroidStructure",
    "DoubleEndo",
    "GradedContext",
    "GradedElement",
    "ScalarExpr",
    "Sl2Frame",
    "analyze_2d",
    "analyze_3d",
    "big_bracket",
    "build_ma",
    "check_structure",
    "classify_generalized",
    "courant_torsion",
    "differential",
    "format_element",
    "format_scalar",
    "heisenberg_mu",
    "jacobi_analyze",
    "lepage_decompose",
    "lepage_recompose",
    "ma_operator_apply",
    "modular_cocycle",
    "nijenhuis_torsion",
    "parse_dsl",
    "parse_element",
    "parse_file",
    "run_document",
    "schouten_bracket",
    "serialize",
    "so3_mu",
    "standard_mu",
    "tilde_structure",
    "validate_structure",
    "wedge",
]
