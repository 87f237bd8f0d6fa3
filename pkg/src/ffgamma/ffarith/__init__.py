"""Exact base arithmetic: F_q, F_q[T], F_q(T), and truncated Laurent series
over F_q((u)) with u = 1/Ttilde, Ttilde^(q-1) = -T."""

from .field import GF, DomainError, FieldElem
from .laurent import LaurentNum, abs_val
from .poly import (
    ParseError,
    Poly,
    Rat,
    all_polys,
    factor_monic,
    monic_divisors,
    monic_polys,
    parse_elem,
    unit_count,
)

__all__ = [
    "GF", "FieldElem", "DomainError", "ParseError",
    "Poly", "Rat", "parse_elem",
    "monic_polys", "all_polys", "factor_monic", "monic_divisors", "unit_count",
    "LaurentNum", "abs_val",
]
