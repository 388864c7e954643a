"""Exact polynomial algebra and the float layer for root geometry."""

from .hull import convex_hull, in_hull, lucas_check
from .parse import ParseError, parse_poly, parse_rational_function
from .partial import PartialFractionExpansion, PFTerm, partial_fractions
from .poly import (
    ONE,
    X,
    ZERO,
    ExactPoly,
    ZeroDivisorError,
    as_fraction,
    format_fraction,
    poly_arith,
    poly_gcd,
    squarefree_decomposition,
    squarefree_part,
)
from .rational import RationalFunction, logarithmic_derivative
from .roots import RootFindingError, RootMultiset, find_roots, rational_roots, relative_residual
from .sturm import count_real_roots, count_real_roots_in, sturm_sequence

__all__ = [
    "ONE", "X", "ZERO", "ExactPoly", "ParseError", "PartialFractionExpansion", "PFTerm",
    "RationalFunction", "RootFindingError", "RootMultiset", "ZeroDivisorError", "as_fraction",
    "convex_hull", "count_real_roots", "count_real_roots_in", "find_roots", "format_fraction",
    "in_hull", "logarithmic_derivative", "lucas_check", "parse_poly", "parse_rational_function",
    "partial_fractions", "poly_arith", "poly_gcd", "rational_roots", "relative_residual",
    "squarefree_decomposition", "squarefree_part", "sturm_sequence",
]
