"""Exact 0/1 brackets on rational arguments and the translate-equivalence
relation they induce on cycles.

For N >= 0 the indicator ``bracket_N(x)`` fires exactly when the fractional
part of x has leading term 1*T^{-N-1}, i.e. degree -(N+1) and leading
coefficient 1; the tail below the leading term is unconstrained.  This is the
variant under which the translation / sign-sum / level-descent relations hold
with no exceptional cases, and it matches the coefficient extraction that
identifies unit character sums of brackets with Dirichlet-style L-values at
s = 0 (monic numerators contribute, non-monic ones do not).  At most one N
can fire for a given x, so ``bracket(x)`` is
again a 0/1 indicator.  Everything here is exact rational arithmetic; no
series truncation is involved, which is what makes the relation ``equiv_f``
below usable as an independent oracle against the integer-lattice test in
`distribution`.

Two cycles at level f are equivalent (``a ~_f b``) when their bracket totals
agree after translating by every unit residue mod f of degree < deg f.
"""

from __future__ import annotations

from .ffarith import DomainError, Poly, Rat, all_polys
from .gammaeval import Cycle

__all__ = [
    "bracket_N", "bracket", "bracket_support",
    "bracket_of_cycle", "bracket_vector", "unit_residues", "equiv_f",
]


def bracket_N(x: Rat, N: int) -> int:
    """1 iff frac(x) has degree -(N+1) with leading coefficient 1."""
    if N < 0:
        raise DomainError("index must be nonnegative")
    fr = x.frac_part()
    if fr.is_zero() or fr.degree != -(N + 1):
        return 0
    gf = x.gf
    return 1 if gf.mul(fr.num.lc(), gf.inv(fr.den.lc())) == 1 else 0


def bracket_support(x: Rat) -> int | None:
    """The unique N with bracket_N(x) = 1, or None.

    Only N = -deg(frac(x)) - 1 can fire, so a single test suffices.
    """
    fr = x.frac_part()
    if fr.is_zero():
        return None
    N = -fr.degree - 1
    return N if bracket_N(x, N) else None


def bracket(x: Rat) -> int:
    """sum_N bracket_N(x) — 0 or 1."""
    return 0 if bracket_support(x) is None else 1


def bracket_of_cycle(a: Cycle) -> int:
    """Integer-linear extension of bracket over the symbols of a cycle."""
    return sum(n * bracket(Rat(r, a.f)) for r, n in a.items())


def unit_residues(f: Poly) -> list[Poly]:
    """Residues prime to f of degree < deg f, in a deterministic order."""
    return [a for a in all_polys(f.gf, f.degree - 1, f.var)
            if a.gcd(f).degree == 0]


def bracket_vector(a: Cycle) -> tuple[int, ...]:
    """bracket_of_cycle over all unit translates, ordered as unit_residues."""
    return tuple(bracket_of_cycle(a.star(u)) for u in unit_residues(a.f))


def equiv_f(a: Cycle, b: Cycle) -> bool:
    """True iff every unit translate of a and b has the same bracket total."""
    if a.f != b.f:
        raise DomainError("cycles live at different levels")
    for u in unit_residues(a.f):
        if bracket_of_cycle(a.star(u)) != bracket_of_cycle(b.star(u)):
            return False
    return True
