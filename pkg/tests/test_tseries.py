"""Truncated t-series, their matrices, and convergent twisted products."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgamma.ffarith import GF, DomainError, LaurentNum, Poly
from ffgamma.tseries import (ConvergenceError, TailBoundError, TMatrix,
                             TSeries, laurent_mat_inverse,
                             tm_product_convergent)


def _gf():
    return GF.get(3)


def _u(gf, terms, prec):
    return LaurentNum.from_terms(gf, terms, prec)


def _series(gf, rows, prec=24):
    return TSeries(gf, [_u(gf, t, prec) for t in rows])


def test_series_add_mul_by_hand():
    gf = _gf()
    a = _series(gf, [{0: 1}, {1: 2}])            # 1 + 2u t
    b = _series(gf, [{0: 2}, {0: 1}])            # 2 + t
    s = a + b
    assert s.c[0].coeff_at(0) == 0 and s.c[1].coeff_at(0) == 1
    p = a * b
    # constant term 2, t-term 1 + 4u = 1 + u
    assert p.c[0].coeff_at(0) == 2
    assert p.c[1].coeff_at(0) == 1 and p.c[1].coeff_at(1) == 1
    assert p.trunc == 2


@given(st.integers(min_value=0, max_value=5))
def test_from_tpoly_round_trip(k):
    gf = _gf()
    cs = [0] * (k + 1)
    cs[k] = 1
    ts = TSeries.from_tpoly(Poly(gf, cs, "t"), 16, k + 3)
    assert ts.last_nonzero() == k
    assert ts.c[k].coeff_at(0) == 1


def test_twist_scales_t_and_coefficients():
    gf = _gf()
    ts = _series(gf, [{-2: 1}, {1: 1}], prec=27)
    tw = ts.twist(1)
    # t is fixed; each coefficient is cubed (exponents scale by q)
    assert tw.c[0].val == -6
    assert tw.c[1].val == 3
    back = tw.twist(-1)
    assert back.c[0].eq_residual(ts.c[0]) >= min(back.c[0].prec, ts.c[0].prec)


def test_eval_polynomial_series_is_exact():
    gf = _gf()
    # 1 + 2t + t^2 with stored zero coefficients so the tail is certified
    ts = _series(gf, [{0: 1}, {0: 2}, {0: 1}, {}, {}, {}], prec=30)
    t0 = LaurentNum.t_elem(gf, 30)
    got = ts.eval(t0, tail_target=0)
    want = (LaurentNum.one(gf, 30) + t0) * (LaurentNum.one(gf, 30) + t0)
    assert got.eq_residual(want) >= got.prec > 0


def test_eval_certifies_decaying_tail():
    gf = _gf()
    # coefficient valuations 0, 3, 6, ... outrun val(t0) = -2 per index
    rows = [{3 * i: 1} for i in range(8)]
    ts = _series(gf, rows, prec=40)
    t0 = LaurentNum.t_elem(gf, 40)
    v = ts.eval(t0, tail_target=6)
    assert v.prec >= 6


def test_eval_raises_when_tail_unknowable():
    gf = _gf()
    ts = _series(gf, [{0: 1}, {0: 1}], prec=6)   # flat coefficients
    t0 = LaurentNum.t_elem(gf, 6)                # |t0| > 1
    with pytest.raises(TailBoundError):
        ts.eval(t0, tail_target=100)


def test_truncate_t_drops_tail():
    gf = _gf()
    ts = _series(gf, [{0: 1}, {0: 1}, {0: 1}])
    cut = ts.truncate_t(2)
    assert cut.trunc == 2 and cut.last_nonzero() == 1


# -- matrices -------------------------------------------------------------------


def _mat(gf, entries, prec=24):
    return TMatrix([[_series(gf, e, prec) for e in row] for row in entries])


def test_matrix_mul_and_det_by_hand():
    gf = _gf()
    m = _mat(gf, [[[{0: 1}, {}], [{0: 1}, {0: 1}]],
                  [[{}, {}], [{0: 1}, {}]]])     # [[1, 1+t],[0, 1]]
    m2 = m * m
    assert m2.rows[0][1].c[1].coeff_at(0) == 2   # (1+t)+(1+t) = 2+2t
    d = m.det()
    assert d.c[0].coeff_at(0) == 1 and d.last_nonzero() == 0


def test_matrix_identity_and_transpose():
    gf = _gf()
    m = _mat(gf, [[[{0: 2}], [{1: 1}]], [[{0: 1}], [{0: 1}, {2: 1}]]])
    eye = m.identity_like()
    assert (m * eye).rows[0][1].c[0].eq_residual(m.rows[0][1].c[0]) >= 20
    t = m.transpose()
    assert t.rows[0][1].c[0].coeff_at(0) == m.rows[1][0].c[0].coeff_at(0)


def test_laurent_mat_inverse_round_trip():
    gf = _gf()
    m = TMatrix([[_u(gf, {0: 1}, 30), _u(gf, {2: 1}, 30)],
                 [_u(gf, {-2: 1}, 30), _u(gf, {0: 2}, 30)]])
    inv = laurent_mat_inverse(m)
    prod = m * inv
    for i in range(2):
        for j in range(2):
            entry = prod.rows[i][j]
            if i == j:
                assert entry.eq_residual(LaurentNum.one(gf, entry.prec)) >= 24
            else:
                assert entry.is_zero() or entry.val >= 24


def test_laurent_mat_inverse_rejects_singular():
    gf = _gf()
    one = _u(gf, {0: 1}, 20)
    m = TMatrix([[one, one], [one, one]])
    with pytest.raises(DomainError):
        laurent_mat_inverse(m)


def test_tm_product_convergent_geometric():
    gf = _gf()

    def factors():
        n = 1
        while True:
            yield _mat(gf, [[[{0: 1}, {n: 1}]]], prec=40)   # 1 + u^n t
            n += 1

    prod = tm_product_convergent(factors(), budget=64, stop_prec=30)
    # t-coefficient of prod(1 + u^n t) starts at u^1
    assert prod.rows[0][0].c[1].val == 1


def test_tm_product_convergent_needs_improvement():
    gf = _gf()

    def flat():
        while True:
            yield _mat(gf, [[[{0: 1}, {1: 1}]]], prec=40)   # defect stuck at 1

    with pytest.raises(ConvergenceError):
        tm_product_convergent(flat(), budget=16, stop_prec=30)
