"""Tests for the exponential, torsion values, and twisted-polynomial algebra."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgamma.ffarith import GF, LaurentNum, Poly, Rat
from ffgamma.tseries import ConvergenceError, TSeries
from ffgamma.carlitz import (
    BivarZ,
    TwistedPoly,
    adj_div_poly,
    adj_from_div,
    alpha_digits,
    carlitz_exp,
    cyclotomic,
    dfac,
    div_poly,
    e_star,
    e_star_via_digits,
    e_torsion,
    omega,
    omega_mac_coeff,
    omega_minus1,
    period,
    poly_eval_laurent,
    twisted_to_bivar,
)

from strategies import monic, polys

PREC = 64


def _gf():
    return GF.get(3)


def _tpoly(p):
    """Rebuild a base-ring polynomial with the operator variable."""
    return Poly(p.gf, p.c, "t")


# ---------------------------------------------------------------------------
# factorial-like denominators


def test_dfac_base_cases():
    gf = _gf()
    assert dfac(3, 0) == Poly.one(gf)
    # first denominator: T^q - T
    assert dfac(3, 1) == Poly(gf, [0, 2, 0, 1])


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (3, 2)])
def test_dfac_recursion(q, n):
    # D_n = (T^{q^n} - T) * D_{n-1}^q
    gf = GF.get(q)
    prev = dfac(q, n - 1)
    prev_q = Poly.one(gf)
    for _ in range(q):
        prev_q = prev_q * prev
    lead = Poly.gen(gf).compose_power(q**n) - Poly.gen(gf)
    assert dfac(q, n) == lead * prev_q


# ---------------------------------------------------------------------------
# exponential


def test_period_valuation():
    assert period(3, 32).val == -3
    assert period(2, 32).val == -2


@given(polys(max_deg=2), polys(max_deg=2))
def test_exp_is_additive(a, b):
    gf = _gf()
    den = Poly(gf, [0, 0, 0, 1])
    x, y = Rat(a, den), Rat(b, den)
    ex = carlitz_exp(LaurentNum.from_rat(x, PREC), PREC)
    ey = carlitz_exp(LaurentNum.from_rat(y, PREC), PREC)
    exy = carlitz_exp(LaurentNum.from_rat(x + y, PREC), PREC)
    assert exy.eq_residual(ex + ey) >= PREC - 8


def test_exp_semilinear_under_t():
    # exp(T z) = T exp(z) + exp(z)^q
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    for den in ([0, 0, 1], [0, 2, 0, 1]):
        z = LaurentNum.from_rat(Rat(Poly.one(gf), Poly(gf, den)), PREC)
        ez = carlitz_exp(z, PREC)
        assert carlitz_exp(tl * z, PREC).eq_residual(tl * ez + ez.twist(1)) >= PREC - 8


def test_exp_kills_integral_points():
    gf = _gf()
    for num in ([1], [1, 1], [0, 2, 1]):
        val = e_torsion(Rat(Poly(gf, num)), PREC)
        assert val.is_zero()


def test_e_is_periodic_mod_polynomials():
    gf = _gf()
    f = Poly(gf, [0, 0, 1])
    x = Rat(Poly.one(gf), f)
    shifted = x + Rat(Poly(gf, [1, 2]))
    assert e_torsion(x, PREC).eq_residual(e_torsion(shifted, PREC)) >= PREC - 8


def test_e_intertwines_module_action():
    # e(a*x) agrees with the degree-a operator applied to e(x)
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    f = Poly(gf, [0, 2, 0, 1])
    for a in (Poly.gen(gf), Poly(gf, [1, 1]), Poly(gf, [2, 0, 1])):
        x = Rat(Poly.one(gf), f)
        lhs = e_torsion(x * Rat(a), PREC)
        rhs = div_poly(a).eval(tl, e_torsion(x, PREC))
        assert lhs.eq_residual(rhs) >= PREC - 8


def test_e_torsion_killed_by_denominator():
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    for den in ([0, 0, 1], [0, 2, 1]):
        f = Poly(gf, den)
        v = div_poly(f).eval(tl, e_torsion(Rat(Poly.one(gf), f), PREC))
        assert v.is_zero() or v.val >= PREC - 8


def test_exp_budget_exhaustion():
    gf = _gf()
    z = LaurentNum.from_rat(Rat(Poly.one(gf), Poly(gf, [0, 0, 1])), PREC)
    with pytest.raises(ConvergenceError):
        carlitz_exp(z, PREC, budget=1)


# ---------------------------------------------------------------------------
# the entire function omega and the dual torsion values


def test_omega_coefficients_are_dual_torsion_values():
    gf = _gf()
    for i in range(4):
        den = Poly.gen(gf).compose_power(i + 1) if i else Poly.gen(gf)
        want = e_star(Rat(Poly.one(gf), den), PREC)
        assert omega_mac_coeff(3, i, PREC).eq_residual(want) >= PREC - 4


def test_dual_torsion_square_at_base_point():
    # e*(1/T)^2 = -1/T exactly in the chosen uniformizer
    gf = _gf()
    v = e_star(Rat(Poly.one(gf), Poly.gen(gf)), PREC)
    want = LaurentNum.from_rat(Rat(Poly(gf, [0, 2])), PREC).inverse()
    assert (v * v).eq_residual(want) >= PREC - 4


def test_omega_twist_relation_small():
    # the twisted series equals (t - T) times the series, coefficientwise
    prec, trunc = 48, 12
    gf = _gf()
    om = omega(3, prec, trunc)
    lin = TSeries.from_laurent_coeffs(
        gf,
        [LaurentNum.t_elem(gf, prec).scale(gf.neg(1)), LaurentNum.one(gf, prec)],
        trunc,
        prec,
    )
    diff = omega_minus1(3, prec, trunc) - lin * om
    for i in range(10):
        c = diff.c[i]
        assert c.is_zero() or c.val >= prec - 8


def test_adjoint_kills_dual_torsion():
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    for den in ([0, 0, 1], [0, 2, 1]):
        f = Poly(gf, den)
        v = adj_div_poly(f).eval(tl, e_star(Rat(Poly.one(gf), f), PREC))
        assert v.is_zero() or v.val >= PREC - 8


@given(st.data())
def test_dual_torsion_is_additive(data):
    gf = _gf()
    den = Poly(gf, [0, 0, 0, 1])
    x = Rat(data.draw(polys(max_deg=2)), den)
    y = Rat(data.draw(polys(max_deg=2)), den)
    lhs = e_star(x + y, 48)
    rhs = e_star(x, 48) + e_star(y, 48)
    assert lhs.eq_residual(rhs) >= 40
    if not lhs.is_zero():
        assert lhs.val >= 1


# ---------------------------------------------------------------------------
# digit expansion of the dual values


def test_alpha_digit_values():
    assert [alpha_digits(n, 3) for n in (0, 1, 2, 3, 4, 5, 9, 13)] == [
        0,
        1,
        None,
        1,
        2,
        None,
        1,
        3,
    ]
    assert alpha_digits(5, 2) == 2
    assert alpha_digits(7, 2) == 3


def test_digit_route_matches_series_route():
    gf = _gf()
    for num, den in ([[1], [0, 0, 1]], [[1, 1], [0, 0, 0, 1]]):
        x = Rat(Poly(gf, num), Poly(gf, den))
        assert e_star_via_digits(x, 48).eq_residual(e_star(x, 48)) >= 40


# ---------------------------------------------------------------------------
# twisted polynomials


def _random_twisted(data, max_len=3):
    gf = _gf()
    n = data.draw(st.integers(min_value=1, max_value=max_len))
    tps = [_tpoly(data.draw(polys(max_deg=1))) for _ in range(n)]
    return TwistedPoly(gf, tps)


@given(st.data())
def test_twisted_mul_is_associative(data):
    a = _random_twisted(data)
    b = _random_twisted(data)
    c = _random_twisted(data)
    assert (a * b) * c == a * (b * c)


def test_twisted_mul_identity():
    gf = _gf()
    one = TwistedPoly(gf, (Poly.one(gf, "t"),))
    f = div_poly(Poly(gf, [1, 2, 1]))
    assert one * f == f
    assert f * one == f


def test_div_poly_base_cases():
    gf = _gf()
    ct = div_poly(Poly.gen(gf))
    assert ct.qdeg == 1
    assert ct.tpolys[0] == Poly.gen(gf, "t")
    assert ct.tpolys[1] == Poly.one(gf, "t")


@given(polys(max_deg=2, allow_zero=False), polys(max_deg=2, allow_zero=False))
def test_div_poly_is_multiplicative(a, b):
    assert div_poly(a) * div_poly(b) == div_poly(a * b)


@given(polys(max_deg=2), polys(max_deg=2))
def test_div_poly_is_additive(a, b):
    lhs = div_poly(a + b)
    ca, cb = div_poly(a), div_poly(b)
    deg = max(ca.qdeg, cb.qdeg)

    def tp(c, k):
        return c.tpolys[k] if k <= c.qdeg else Poly.zero(c.gf, "t")

    for k in range(deg + 1):
        assert tp(lhs, k) == tp(ca, k) + tp(cb, k)


def test_twisted_eval_is_additive_in_z():
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    tp = div_poly(Poly(gf, [0, 0, 1]))
    z1 = LaurentNum.from_rat(Rat(Poly.one(gf), Poly(gf, [0, 0, 1])), PREC)
    z2 = LaurentNum.from_rat(Rat(Poly(gf, [2, 1]), Poly(gf, [0, 0, 0, 1])), PREC)
    lhs = tp.eval(tl, z1 + z2)
    assert lhs.eq_residual(tp.eval(tl, z1) + tp.eval(tl, z2)) >= PREC - 8


@given(monic(max_deg=3))
def test_adjoint_routes_agree(f):
    assert adj_div_poly(f) == adj_from_div(f)


def test_adjoint_routes_agree_q2():
    gf = GF.get(2)
    for c in ((0, 1, 1), (1, 1, 0, 1)):
        f = Poly(gf, list(c))
        assert adj_div_poly(f) == adj_from_div(f)


# ---------------------------------------------------------------------------
# cyclotomic factors


def _z_factor(gf):
    return BivarZ(gf, (Poly.zero(gf, "t"), Poly.one(gf, "t")))


@pytest.mark.parametrize(
    "q,den", [(3, [0, 0, 1]), (3, [0, 2, 1]), (2, [0, 1, 1])]
)
def test_cyclotomic_factors_multiply_to_div_poly(q, den):
    gf = GF.get(q)
    f = Poly(gf, den)
    from ffgamma.ffarith import monic_divisors

    acc = BivarZ(gf, (Poly.one(gf, "t"),))
    for d in monic_divisors(f):
        acc = acc * (_z_factor(gf) if d.degree == 0 else cyclotomic(d))
    assert acc == twisted_to_bivar(div_poly(f))


def test_cyclotomic_vanishes_exactly_at_unit_torsion():
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    f = Poly(gf, [0, 0, 1])
    cy = cyclotomic(f)
    unit_val = cy.eval(tl, e_torsion(Rat(Poly.one(gf), f), PREC))
    assert unit_val.is_zero() or unit_val.val >= PREC - 8
    # a non-unit numerator gives torsion of lower level, not a root
    lower = cy.eval(tl, e_torsion(Rat(Poly.gen(gf), f), PREC))
    assert not lower.is_zero()


def test_bivar_matches_twisted_eval():
    gf = _gf()
    tl = LaurentNum.t_elem(gf, PREC)
    tp = div_poly(Poly(gf, [1, 2, 1]))
    z0 = LaurentNum.from_rat(Rat(Poly(gf, [1, 1]), Poly(gf, [0, 0, 1])), PREC)
    assert twisted_to_bivar(tp).eval(tl, z0).eq_residual(tp.eval(tl, z0)) >= PREC - 8


def test_bivar_division_round_trip():
    gf = _gf()
    a = twisted_to_bivar(div_poly(Poly.gen(gf)))
    b = twisted_to_bivar(div_poly(Poly(gf, [1, 1])))
    quo, rem = (a * b).divmod_z(b)
    assert quo == a
    assert rem == BivarZ(gf, ())


def test_poly_eval_laurent_is_ring_map():
    gf = _gf()
    p = Poly(gf, [2, 0, 1, 1], "t")
    got = poly_eval_laurent(p, LaurentNum.t_elem(gf, PREC))
    want = LaurentNum.from_poly(Poly(gf, p.c), PREC)
    assert got.eq_residual(want) >= PREC - 8
