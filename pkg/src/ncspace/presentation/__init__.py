"""Noncommutative polynomials, algebra presentations and the source parser."""

from .algebra import AlgebraPresentation, GroupActionSpec, commutator, crossed_product, format_source
from .ncpoly import NcPolynomial, word_matrix
from .parser import parse, parse_expression, parse_field, parse_ncpoly, parse_scalar

__all__ = [
    "AlgebraPresentation",
    "GroupActionSpec",
    "NcPolynomial",
    "commutator",
    "crossed_product",
    "format_source",
    "parse",
    "parse_expression",
    "parse_field",
    "parse_ncpoly",
    "parse_scalar",
    "word_matrix",
]
