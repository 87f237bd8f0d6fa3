"""Base arithmetic: finite fields, polynomials, rationals, Laurent numbers."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgamma.ffarith import (GF, DomainError, LaurentNum, ParseError, Poly,
                             Rat, abs_val, factor_monic, monic_divisors,
                             monic_polys, parse_elem, unit_count)
from strategies import field_elems, monic, polys


# -- finite fields -------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_field_axioms_exhaustive(q):
    gf = GF.get(q)
    elems = list(gf.elements())
    assert len(elems) == q
    for a in elems:
        assert gf.add(a, gf.neg(a)) == 0
        if a:
            assert gf.mul(a, gf.inv(a)) == 1
        for b in elems:
            assert gf.add(a, b) == gf.add(b, a)
            assert gf.mul(a, b) == gf.mul(b, a)
            for c in elems:
                assert gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c))


def test_gf_rejects_non_prime_powers():
    with pytest.raises(DomainError):
        GF.get(6)
    with pytest.raises(DomainError):
        GF.get(1024)


def test_frobenius_is_additive_gf9():
    gf = GF.get(9)
    for a in gf.elements():
        for b in gf.elements():
            assert gf.pow(gf.add(a, b), 3) == gf.add(gf.pow(a, 3), gf.pow(b, 3))


# -- polynomials ---------------------------------------------------------------


@given(polys(), polys(), polys())
def test_poly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a - a == Poly.zero(a.gf)


@given(polys(), monic())
def test_poly_divmod(a, d):
    quo, rem = divmod(a, d)
    assert quo * d + rem == a
    assert rem.degree < d.degree


@given(polys(allow_zero=False), polys(allow_zero=False))
def test_poly_gcd_divides_both(a, b):
    g = a.gcd(b)
    assert (a % g).is_zero()
    assert (b % g).is_zero()
    assert g.is_monic()


def test_monic_polys_counts():
    for q in (2, 3):
        for d in (1, 2, 3):
            assert len(list(monic_polys(GF.get(q), d))) == q**d


@given(monic(max_deg=4))
def test_factor_monic_reconstructs(f):
    acc = Poly.one(f.gf)
    for p, e in factor_monic(f):
        assert p.is_monic()
        for _ in range(e):
            acc = acc * p
    assert acc == f


def test_unit_count_examples():
    gf = GF.get(3)
    assert unit_count(Poly(gf, [0, 1])) == 2
    assert unit_count(Poly(gf, [0, 0, 1])) == 6
    assert unit_count(Poly(gf, [0, 2, 1])) == 4
    gf2 = GF.get(2)
    assert unit_count(Poly(gf2, [1, 1, 1])) == 3


@given(monic(max_deg=3))
def test_monic_divisors_divide(f):
    divs = monic_divisors(f)
    assert Poly.one(f.gf) in divs and f in divs
    for d in divs:
        assert (f % d).is_zero()


def test_mixed_variable_arithmetic_rejected():
    gf = GF.get(3)
    with pytest.raises(DomainError):
        Poly(gf, [0, 1], "T") + Poly(gf, [0, 1], "t")


# -- rational functions --------------------------------------------------------


def test_rat_normalizes():
    gf = GF.get(3)
    t = Poly(gf, [0, 1])
    r = Rat(t * t, t)
    assert r.is_poly() and r.num == t
    r2 = Rat(t.scale(2), t * t)
    assert r2.den.is_monic()


@given(polys(), monic())
def test_rat_poly_plus_frac_parts(n, d):
    x = Rat(n, d)
    assert Rat(x.poly_part()) + x.frac_part() == x


def test_rat_residue_examples():
    gf = GF.get(3)
    t = Poly(gf, [0, 1])
    assert Rat(Poly.one(gf), t).residue() == 1
    assert Rat(Poly.one(gf), t * t).residue() == 0
    assert Rat(Poly(gf, [1, 2]), t * t).residue() == 2


def test_parse_elem_round_trip_and_errors():
    x = parse_elem("(T+1)/(T^2-T)", 3)
    assert str(x.num) == "T+1"
    assert str(x.den) == "T^2+2*T"
    with pytest.raises(ParseError):
        parse_elem("T^^2", 3)
    with pytest.raises(ParseError):
        parse_elem("y+1", 3)
    with pytest.raises(DomainError):
        parse_elem("1/0", 3)


# -- Laurent numbers -----------------------------------------------------------


def _laurent(gf, terms, prec):
    return LaurentNum.from_terms(gf, terms, prec)


def test_laurent_basic_ops():
    gf = GF.get(3)
    x = _laurent(gf, {-2: 1, 1: 2}, 10)
    y = _laurent(gf, {2: 1}, 10)
    assert (x + y).coeff_at(1) == 2
    assert (x * y).val == 0
    assert (x - x).is_zero()


def test_laurent_precision_contracts():
    gf = GF.get(3)
    x = _laurent(gf, {-1: 1}, 6)
    y = _laurent(gf, {0: 1}, 20)
    # product precision: min over factors of own prec + other's valuation
    assert (x * y).prec == 6
    assert (x + y).prec == 6


@given(st.integers(min_value=-3, max_value=3), st.integers(min_value=1, max_value=2))
def test_laurent_inverse(v, c):
    gf = GF.get(3)
    x = _laurent(gf, {v: c, v + 3: 1}, 24 + v)
    prod = x * x.inverse()
    one = LaurentNum.one(gf, prod.prec)
    assert prod.eq_residual(one) >= prod.prec


def test_laurent_twist_scales_support():
    gf = GF.get(3)
    x = _laurent(gf, {-2: 1, 3: 2}, 12)
    y = x.twist(1)
    assert y.val == -6
    assert y.coeff_at(9) == 2**3 % 3
    # negative twist undoes it
    z = y.twist(-1)
    assert z.eq_residual(x) >= min(z.prec, x.prec)


def test_laurent_negative_twist_needs_divisible_support():
    gf = GF.get(3)
    x = _laurent(gf, {1: 1}, 9)
    with pytest.raises(DomainError):
        x.twist(-1)


def test_t_elem_and_abs_val():
    from fractions import Fraction
    gf = GF.get(3)
    tv = LaurentNum.t_elem(gf, 8)
    assert tv.val == -2
    # abs_val reports log_q of the absolute value: |T| = q
    assert abs_val(tv) == Fraction(1)
    assert abs_val(LaurentNum.zero(gf, 8)) is None


@given(polys(max_deg=3), polys(max_deg=3))
def test_from_poly_is_a_ring_map(a, b):
    gf = a.gf
    pa, pb = LaurentNum.from_poly(a, 40), LaurentNum.from_poly(b, 40)
    pc = LaurentNum.from_poly(a * b, 40)
    assert (pa * pb).eq_residual(pc) >= 30
    ps = LaurentNum.from_poly(a + b, 40)
    assert (pa + pb).eq_residual(ps) >= 40


@given(polys(max_deg=2, allow_zero=False), monic(max_deg=2))
def test_from_rat_consistent_with_division(n, d):
    gf = n.gf
    x = LaurentNum.from_rat(Rat(n, d), 32)
    back = x * LaurentNum.from_poly(d, 48)
    assert back.eq_residual(LaurentNum.from_poly(n, 48)) >= 24


def test_laurent_json_round_trip():
    gf = GF.get(3)
    x = _laurent(gf, {-2: 1, 0: 2, 5: 1}, 9)
    y = LaurentNum.from_json(x.to_json())
    assert y.val == x.val and y.prec == x.prec
    assert y.eq_residual(x) >= x.prec
