"""Exact scalar arithmetic and linear algebra."""

from .field import Embedding, FieldSpec, Scalar, complex_embeddings, is_irreducible_mod_p
from .intpoly import IntPolynomial, char_poly, poly_roots_complex, squarefree_decomposition
from .lattice import smith_index
from .matrix import ExactMatrix, rref, row_echelon

__all__ = [
    "Embedding",
    "ExactMatrix",
    "FieldSpec",
    "IntPolynomial",
    "Scalar",
    "char_poly",
    "complex_embeddings",
    "is_irreducible_mod_p",
    "poly_roots_complex",
    "row_echelon",
    "rref",
    "smith_index",
    "squarefree_decomposition",
]
