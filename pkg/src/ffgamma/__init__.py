"""Exact arithmetic for the Carlitz module over F_q[T]: exponential and
period, torsion and adjoint-torsion functions, factorial-like product values
with their functional equations, a decision procedure for multiplicative
dependence of those values, and the associated difference-equation matrix
layer.  Everything is computed inside truncated Laurent series over F_q with
absolute-precision tracking, so every reported digit is certified.
"""

from .ffarith import (
    GF,
    DomainError,
    FieldElem,
    LaurentNum,
    ParseError,
    Poly,
    Rat,
    abs_val,
    parse_elem,
)

__version__ = "0.1.0"

__all__ = [
    "GF", "FieldElem", "DomainError", "ParseError",
    "Poly", "Rat", "parse_elem", "LaurentNum", "abs_val",
    "__version__",
]
