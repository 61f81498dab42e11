"""Exact computations on finitely presented algebras and their modules."""

__version__ = "0.1.0"
