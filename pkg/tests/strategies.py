"""Hypothesis strategies shared across the test modules."""

from hypothesis import strategies as st

from ffgamma.ffarith import GF, Poly, Rat


def field_elems(q: int):
    """Element codes of F_q."""
    return st.sampled_from(list(GF.get(q).elements()))


@st.composite
def polys(draw, q: int = 3, max_deg: int = 3, allow_zero: bool = True):
    gf = GF.get(q)
    deg = draw(st.integers(min_value=0, max_value=max_deg))
    coeffs = draw(st.lists(field_elems(q), min_size=deg + 1, max_size=deg + 1))
    p = Poly(gf, coeffs)
    if not allow_zero and p.is_zero():
        lead = draw(st.sampled_from(list(gf.units())))
        coeffs[-1] = lead
        p = Poly(gf, coeffs)
    return p


@st.composite
def monic(draw, q: int = 3, min_deg: int = 1, max_deg: int = 3):
    gf = GF.get(q)
    deg = draw(st.integers(min_value=min_deg, max_value=max_deg))
    coeffs = draw(st.lists(field_elems(q), min_size=deg, max_size=deg))
    return Poly(gf, coeffs + [1])


@st.composite
def rationals(draw, q: int = 3, max_deg: int = 2, nonintegral: bool = False):
    num = draw(polys(q=q, max_deg=max_deg, allow_zero=not nonintegral))
    den = draw(monic(q=q, max_deg=max_deg))
    r = Rat(num, den)
    if nonintegral and r.is_poly():
        num = Poly.one(num.gf)
        den = draw(monic(q=q, max_deg=max_deg))
        r = Rat(num, den)
    return r


@st.composite
def int_vectors(draw, length: int, bound: int = 2):
    return draw(st.lists(st.integers(min_value=-bound, max_value=bound),
                         min_size=length, max_size=length))
