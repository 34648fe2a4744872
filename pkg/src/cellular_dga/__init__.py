"""Cellular DGAs of Legendrian surfaces from transverse square decompositions."""

from .freealg import GenMatrix, Generator, Grading, Polynomial, derive, substitute

__version__ = "0.1.0"

__all__ = ["GenMatrix", "Generator", "Grading", "Polynomial", "derive", "substitute", "__version__"]
