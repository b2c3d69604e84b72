"""Hilbert modular forms over real quadratic fields of narrow class number
one, with exact verification of the kernel identities that express products
of completed L-values through Rankin-Cohen brackets of Eisenstein series."""

from .quadfield import FieldContext, IdealHNF, QuadRat, make_field

__all__ = ["FieldContext", "IdealHNF", "QuadRat", "make_field"]
__version__ = "0.1.0"
