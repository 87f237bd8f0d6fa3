"""The Carlitz module over A = F_q[T] and its analytic companions.

Central objects, all over the encoded field F_q((u)) (see ffarith.laurent):

* dfac(n): the factorial-like products D_n = prod_{i<n} (T^{q^n} - T^{q^i});
* carlitz_exp: z -> sum z^{q^n}/D_n, the entire F_q-linear exponential with
  kernel period*A;
* period: the fundamental period  T*Ttilde*prod_{i>=1}(1 - T^{1-q^i})^{-1};
* omega / omega_minus1: the infinite-product generating series in t whose
  (-1)-twist satisfies  omega^(-1) = (t-T)*omega, with Maclaurin
  coefficients a_i tied to the adjoint torsion values;
* div_poly / adj_div_poly: the division polynomials C_a(t,z) of the module
  action and their adjoints, as F_q-linear polynomials in z;
* cyclotomic: the factor of C_f whose roots at t=T are exactly the torsion
  values of the residues prime to f;
* e_torsion / e_star: the A-periodic function e(x) = carlitz_exp(period*x)
  and its adjoint counterpart e*(x) = sum residue(T^i x) a_i, plus the
  base-q digit shortcut for Ttilde*e*(x).

Memoized factories are keyed by (q, precision); lru_cache makes them safe
for concurrent readers.
"""

from __future__ import annotations

from functools import lru_cache

from .ffarith import GF, DomainError, LaurentNum, Poly, Rat
from .ffarith.poly import monic_divisors, unit_count
from .tseries import ConvergenceError, TSeries

DEFAULT_PREC_FACTOR = 128


def default_prec(q: int) -> int:
    """Default absolute u-adic precision: 128*(q-1) coefficients."""
    return DEFAULT_PREC_FACTOR * (q - 1)


# -- D_n -----------------------------------------------------------------


@lru_cache(maxsize=None)
def dfac(q: int, n: int) -> Poly:
    """D_n = prod_{i=0}^{n-1} (T^{q^n} - T^{q^i}) as an exact polynomial."""
    gf = GF.get(q)
    if n < 0:
        raise DomainError("dfac wants n >= 0")
    out = Poly.one(gf)
    for i in range(n):
        f = {q**n: 1, q**i: gf.neg(1)}
        cs = [0] * (q**n + 1)
        for k, v in f.items():
            cs[k] = gf.add(cs[k], v)
        out = out * Poly(gf, cs)
    return out


@lru_cache(maxsize=None)
def dfac_inv_laurent(q: int, n: int, prec: int) -> LaurentNum:
    """1/D_n as a LaurentNum known mod u^prec."""
    gf = GF.get(q)
    vd = n * (q - 1) * q**n  # -val of D_n
    P = prec + 2 * vd
    acc = LaurentNum.one(gf, P)
    for i in range(n):
        gq = {-(q - 1) * q**n: 1 if q**n % 2 == 0 else gf.neg(1),
              -(q - 1) * q**i: gf.neg(1) if q**i % 2 == 0 else 1}
        acc = acc * LaurentNum.from_terms(gf, gq, P)
    return acc.inverse().truncate(prec)


# -- exponential and period -------------------------------------------------


def carlitz_exp(z: LaurentNum, prec: int | None = None,
                budget: int = 64) -> LaurentNum:
    """sum_{n>=0} z^{q^n} / D_n, summed until terms drop below precision."""
    gf = z.gf
    q = gf.q
    if prec is None:
        prec = z.prec
    if z.is_zero():
        return LaurentNum.zero(gf, prec)
    acc = LaurentNum.zero(gf, prec)
    prev_val = None
    for n in range(budget):
        term_val = q**n * z.val + n * (q - 1) * q**n
        if term_val >= prec and prev_val is not None and term_val > prev_val:
            return acc.truncate(prec)
        # product prec = min(val(z^{q^n}) + prec(1/D_n), val(1/D_n) + prec(z^{q^n}));
        # val(1/D_n) >= 0, so only the first entry needs padding.
        dinv = dfac_inv_laurent(q, n, prec + max(0, -(q**n) * z.val) + 4)
        term = z.twist(n, prec_cap=prec) * dinv
        acc = acc + term.truncate(prec)
        prev_val = term_val
    raise ConvergenceError("carlitz_exp did not converge within budget")


@lru_cache(maxsize=None)
def period(q: int, prec: int) -> LaurentNum:
    """The fundamental period  T*Ttilde * prod_{i>=1} (1 - T^{1-q^i})^{-1}.

    Generates the kernel of carlitz_exp over A; |period| = q^{q/(q-1)}.
    """
    gf = GF.get(q)
    P = prec + 2 * q + 4
    acc = LaurentNum.t_elem(gf, P) * LaurentNum.ttilde(gf, P)
    i = 1
    while True:
        # 1 - T^(1-q^i) = (T^(q^i) - T)/T^(q^i), exact and of valuation 0
        num = Rat(_tpow_minus_t(gf, q**i), _tpow(gf, q**i))
        fac = LaurentNum.from_rat(num, P)
        if fac.is_zero() or fac.val >= P:
            break
        acc = acc * fac.inverse()
        if (q**i - 1) * (q - 1) >= P:
            break
        i += 1
    return acc.truncate(prec)


def _tpow(gf: GF, m: int) -> Poly:
    cs = [0] * (m + 1)
    cs[m] = 1
    return Poly(gf, cs)


def _tpow_minus_t(gf: GF, m: int) -> Poly:
    cs = [0] * (m + 1)
    cs[m] = 1
    cs[1] = gf.add(cs[1], gf.neg(1))
    return Poly(gf, cs)


# -- omega ---------------------------------------------------------------


@lru_cache(maxsize=None)
def omega(q: int, prec: int, trunc_t: int) -> TSeries:
    """Ttilde^{-q} * prod_{i>=1} (1 - t/T^{q^i}) as a TSeries.

    Value at t=T is -1/period; the (-1)-twist equals (t-T)*omega.
    """
    return _omega_product(q, prec, trunc_t, start_exp=-q, first_i=1)


@lru_cache(maxsize=None)
def omega_minus1(q: int, prec: int, trunc_t: int) -> TSeries:
    """Ttilde^{-1} * prod_{i>=0} (1 - t/T^{q^i}): the (-1)-twist of omega,
    computed by its own product so no precision is lost to root extraction.
    Its Maclaurin coefficients a_i are the adjoint torsion values
    e*(1/T^{i+1})."""
    return _omega_product(q, prec, trunc_t, start_exp=-1, first_i=0)


def _omega_product(q: int, prec: int, trunc_t: int, start_exp: int,
                   first_i: int) -> TSeries:
    gf = GF.get(q)
    P = prec + 2 * q + 4
    coeffs = [LaurentNum.u_pow(gf, -start_exp, P)]
    coeffs += [LaurentNum.zero(gf, P)] * (trunc_t - 1)
    i = first_i
    while q + (q - 1) * q**i < P:
        m = q**i
        tinv = LaurentNum.from_terms(
            gf, {m * (q - 1): gf.neg(1) if m % 2 else 1}, P)  # T^{-q^i}
        for j in range(trunc_t - 1, 0, -1):
            coeffs[j] = coeffs[j] - tinv * coeffs[j - 1]
        i += 1
    return TSeries(gf, [x.truncate(prec) for x in coeffs], trunc_t)


def omega_mac_coeff(q: int, i: int, prec: int) -> LaurentNum:
    """a_i: the t^i Maclaurin coefficient of omega_minus1."""
    return omega_minus1(q, prec, i + 2).c[i]


def omega_at(q: int, t0: LaurentNum, prec: int, trunc_t: int) -> LaurentNum:
    """omega evaluated at t=t0, certified mod u^prec.

    Horner over |t0| >= 1 eats trunc_t*val(t0) digits of absolute precision,
    so the series is built with that much padding and the value truncated
    back to the requested precision.
    """
    pad = trunc_t * max(0, -t0.val) + 8
    om = omega(q, prec + pad, trunc_t)
    return om.eval(t0, tail_target=prec).truncate(prec)


# -- torsion functions ------------------------------------------------------


def e_torsion(x: Rat, prec: int | None = None) -> LaurentNum:
    """e(x) = carlitz_exp(period * x); A-periodic, e(a/f) is f-torsion."""
    gf = x.gf
    q = gf.q
    if prec is None:
        prec = default_prec(q)
    xf = x.frac_part()
    if xf.is_zero():
        return LaurentNum.zero(gf, prec)
    P = prec + 2 * q + 4
    z = period(q, P) * LaurentNum.from_rat(xf, P)
    return carlitz_exp(z, P).truncate(prec)


def e_star(x: Rat, prec: int | None = None) -> LaurentNum:
    """e*(x) = sum_i residue(T^i x) a_i (adjoint torsion function).

    Kernel is A; values at 1/T^{i+1} are the omega_minus1 coefficients.
    """
    gf = x.gf
    q = gf.q
    if prec is None:
        prec = default_prec(q)
    imax = 1
    while q**imax < prec:
        imax += 1
    om = omega_minus1(q, prec, imax + 2)
    acc = LaurentNum.zero(gf, prec)
    for i in range(imax + 1):
        c = x.shift_residue(i)
        if c:
            acc = acc + om.c[i].scale(c).truncate(prec)
    return acc


def alpha_digits(n: int, q: int) -> int | None:
    """Sum of base-q digits when all digits are 0 or 1; None otherwise
    (standing in for -infinity: (-T)^alpha(n) is then absent)."""
    s = 0
    while n:
        d = n % q
        if d > 1:
            return None
        s += d
        n //= q
    return s


def e_star_via_digits(x: Rat, prec: int | None = None) -> LaurentNum:
    """e*(x) through the digit formula
    Ttilde*e*(x) = sum_n residue((-T)^alpha(n) x) T^{-n}."""
    gf = x.gf
    q = gf.q
    if prec is None:
        prec = default_prec(q)
    nmax = prec // (q - 1) + 2
    minus_t = -Poly.gen(gf)
    pw: dict[int, Rat] = {}
    terms: dict[int, int] = {}
    for n in range(nmax + 1):
        a = alpha_digits(n, q)
        if a is None:
            continue
        r = pw.get(a)
        if r is None:
            r = pw[a] = Rat(minus_t**a)
        c = (x * r).residue()
        if c:
            # T^{-n} = (-1)^n u^{n(q-1)}
            terms[n * (q - 1)] = gf.neg(c) if n % 2 else c
    tot = LaurentNum.from_terms(gf, terms, prec + 1)
    return tot.shift(1).truncate(prec)  # multiply by u = 1/Ttilde


# -- division polynomials -------------------------------------------------------


class TwistedPoly:
    """F_q-linear polynomial sum_i f_i(t) z^{q^i} (coefficients in F_q[t])."""

    __slots__ = ("gf", "tpolys")

    def __init__(self, gf: GF, tpolys):
        ts = list(tpolys)
        while ts and ts[-1].is_zero():
            ts.pop()
        self.gf = gf
        self.tpolys = tuple(ts)

    @property
    def qdeg(self) -> int:
        """Largest i with z^{q^i} present (-1 for the zero map)."""
        return len(self.tpolys) - 1

    def coeff(self, i: int) -> Poly:
        if 0 <= i < len(self.tpolys):
            return self.tpolys[i]
        return Poly.zero(self.gf, "t")

    def eval(self, t0: LaurentNum, z0: LaurentNum) -> LaurentNum:
        acc = None
        for i, fi in enumerate(self.tpolys):
            if fi.is_zero():
                continue
            term = poly_eval_laurent(fi, t0) * z0.twist(i)
            acc = term if acc is None else acc + term
        if acc is None:
            return LaurentNum.zero(self.gf, z0.prec)
        return acc

    def __mul__(self, other):
        """Composition (self after other): (f*g)(z) = f(g(z)).

        tau^i moves past a coefficient g_j by raising it to the q^i-th
        power, so the z^{q^k} coefficient is sum_{i+j=k} f_i * g_j^{q^i}.
        """
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        gf = self.gf
        q = gf.q
        if not self.tpolys or not other.tpolys:
            return TwistedPoly(gf, ())
        out = [Poly.zero(gf, "t")] * (self.qdeg + other.qdeg + 1)
        for i, fi in enumerate(self.tpolys):
            if fi.is_zero():
                continue
            for j, gj in enumerate(other.tpolys):
                if gj.is_zero():
                    continue
                out[i + j] = out[i + j] + fi * gj.compose_power(q**i)
        return TwistedPoly(gf, out)

    def __eq__(self, other):
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        return self.tpolys == other.tpolys

    def __hash__(self):
        return hash(self.tpolys)

    def __str__(self):
        if not self.tpolys:
            return "0"
        q = self.gf.q
        parts = []
        for i, fi in enumerate(self.tpolys):
            if fi.is_zero():
                continue
            zs = "z" if i == 0 else f"z^{q**i}"
            fs = str(fi)
            if len(fi.c) > 1 or i == 0 and False:
                fs = f"({fs})"
            parts.append(zs if fs == "1" else f"{fs}*{zs}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TwistedPoly({self})"


def poly_eval_laurent(p: Poly, t0: LaurentNum) -> LaurentNum:
    """Horner evaluation of an F_q[t] polynomial at a LaurentNum."""
    gf = t0.gf
    acc = LaurentNum.zero(gf, t0.prec - min(0, t0.val) * max(1, len(p.c)))
    for ci in reversed(p.c):
        acc = acc * t0
        if ci:
            acc = acc + LaurentNum.make(gf, 0, [ci], acc.prec)
    return acc


@lru_cache(maxsize=None)
def div_poly(a: Poly) -> TwistedPoly:
    """C_a(t,z): the image of a under the Carlitz A-action, built from
    C_T = t z + z^q digit by digit.  F_q-linear in a; C_a(T, e(x)) = e(a x).
    """
    gf = a.gf
    t = Poly.gen(gf, "t")
    if a.is_zero():
        return TwistedPoly(gf, ())
    cur = [Poly.const(gf, a.c[-1], "t")]
    for k in range(len(a.c) - 2, -1, -1):
        # C_{T b + eps} = C_b(t, t z + z^q) + eps z
        nxt = []
        for j in range(len(cur) + 1):
            acc = Poly.zero(gf, "t")
            if j < len(cur):
                acc = cur[j] * t.compose_power(gf.q**j)
            if j - 1 >= 0:
                acc = acc + cur[j - 1]
            nxt.append(acc)
        eps = a.c[k]
        if eps:
            nxt[0] = nxt[0] + Poly.const(gf, eps, "t")
        cur = nxt
    return TwistedPoly(gf, cur)


@lru_cache(maxsize=None)
def adj_div_poly(f: Poly) -> TwistedPoly:
    """The adjoint C*_f of C_f for monic f, via
    C*_{Tg+eps} = C*_g(t^q, t z^q + z) + eps z^{q^{deg f}}.

    Satisfies C*_f(T, e*(x)) = e*(f x)^{q^{deg f}} and the closed form
    relating its coefficients to those of C_f (see adj_from_div).
    """
    gf = f.gf
    if not f.is_monic():
        raise DomainError("adjoint is defined for monic f")
    if f.is_one():
        return TwistedPoly(gf, (Poly.one(gf, "t"),))
    g = f // Poly.gen(gf)
    eps = f.coeff(0)
    h = adj_div_poly(g).tpolys
    q = gf.q
    out = []
    for i in range(len(h) + 1):
        acc = Poly.zero(gf, "t")
        if i < len(h):
            acc = h[i].compose_power(q)
        if i - 1 >= 0:
            lower = h[i - 1].compose_power(q)
            acc = acc + lower * Poly.gen(gf, "t").compose_power(q ** (i - 1))
        out.append(acc)
    if eps:
        out[-1] = out[-1] + Poly.const(gf, eps, "t")
    return TwistedPoly(gf, out)


def adj_from_div(f: Poly) -> TwistedPoly:
    """Closed form of the adjoint: with C_f = sum f_i z^{q^i}, n = deg f,
    the z^{q^{n-i}} coefficient of C*_f is f_i(t^{q^{n-i-1}})  (and 1 at
    z^{q^0})."""
    gf = f.gf
    if not f.is_monic():
        raise DomainError("adjoint is defined for monic f")
    n = f.degree
    cf = div_poly(f).tpolys
    out = [Poly.zero(gf, "t")] * (n + 1)
    out[0] = Poly.one(gf, "t")
    for j in range(1, n + 1):
        out[j] = cf[n - j].compose_power(gf.q ** (j - 1))
    return TwistedPoly(gf, out)


# -- cyclotomic factors ------------------------------------------------------


class BivarZ:
    """Polynomial in z over F_q[t], dense in z (tuple of t-polynomials)."""

    __slots__ = ("gf", "zc")

    def __init__(self, gf: GF, zc):
        cs = list(zc)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.gf = gf
        self.zc = tuple(cs)

    @property
    def deg_z(self) -> int:
        return len(self.zc) - 1

    def is_monic_z(self) -> bool:
        return bool(self.zc) and self.zc[-1].is_one()

    def __mul__(self, other: "BivarZ") -> "BivarZ":
        if not self.zc or not other.zc:
            return BivarZ(self.gf, ())
        out = [Poly.zero(self.gf, "t")] * (len(self.zc) + len(other.zc) - 1)
        for i, a in enumerate(self.zc):
            if a.is_zero():
                continue
            for j, b in enumerate(other.zc):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return BivarZ(self.gf, out)

    def __sub__(self, other: "BivarZ") -> "BivarZ":
        n = max(len(self.zc), len(other.zc))
        z = Poly.zero(self.gf, "t")
        a = list(self.zc) + [z] * (n - len(self.zc))
        for j, b in enumerate(other.zc):
            a[j] = a[j] - b
        return BivarZ(self.gf, a)

    def divmod_z(self, d: "BivarZ") -> tuple["BivarZ", "BivarZ"]:
        """Long division in z; the divisor must be monic in z."""
        if not d.is_monic_z():
            raise DomainError("bivariate division needs a z-monic divisor")
        rem = list(self.zc)
        dn = len(d.zc) - 1
        quot = [Poly.zero(self.gf, "t")] * max(0, len(rem) - dn)
        for k in range(len(rem) - dn - 1, -1, -1):
            c = rem[k + dn]
            if not c.is_zero():
                quot[k] = c
                for i, di in enumerate(d.zc):
                    rem[k + i] = rem[k + i] - c * di
        return BivarZ(self.gf, quot), BivarZ(self.gf, rem[:dn])

    def eval(self, t0: LaurentNum, z0: LaurentNum) -> LaurentNum:
        acc = None
        for a in reversed(self.zc):
            term = poly_eval_laurent(a, t0)
            acc = term if acc is None else acc * z0 + term
        if acc is None:
            return LaurentNum.zero(self.gf, z0.prec)
        return acc

    def __eq__(self, other):
        if not isinstance(other, BivarZ):
            return NotImplemented
        return self.zc == other.zc

    def __hash__(self):
        return hash(self.zc)

    def __str__(self):
        if not self.zc:
            return "0"
        parts = []
        for j in range(len(self.zc) - 1, -1, -1):
            a = self.zc[j]
            if a.is_zero():
                continue
            zs = "1" if j == 0 else ("z" if j == 1 else f"z^{j}")
            s = str(a)
            if len(a.c) > 1:
                s = f"({s})"
            parts.append(zs if s == "1" and j > 0 else
                         (s if j == 0 else f"{s}*{zs}"))
        return " + ".join(parts)

    def __repr__(self):
        return f"BivarZ({self})"


def twisted_to_bivar(tp: TwistedPoly) -> BivarZ:
    gf = tp.gf
    if not tp.tpolys:
        return BivarZ(gf, ())
    q = gf.q
    out = [Poly.zero(gf, "t")] * (q ** (len(tp.tpolys) - 1) + 1)
    for i, fi in enumerate(tp.tpolys):
        out[q**i] = fi
    return BivarZ(gf, out)


@lru_cache(maxsize=None)
def cyclotomic(f: Poly) -> BivarZ:
    """The factor of C_f(t,z) whose specialization at t=T has exactly the
    torsion values of residues prime to f as roots:
    C_f = prod over monic d | f of cyclotomic(d), z-degree #(A/f)^x.
    """
    gf = f.gf
    if not f.is_monic() or f.is_zero():
        raise DomainError("cyclotomic factor wants monic f")
    cf = twisted_to_bivar(div_poly(f))
    for d in monic_divisors(f):
        if d == f:
            continue
        q_, r = cf.divmod_z(cyclotomic(d))
        if r.zc:
            raise AssertionError("cyclotomic division left a remainder")
        cf = q_
    if cf.deg_z != (unit_count(f) if f.degree > 0 else 1):
        raise AssertionError("cyclotomic factor has the wrong degree")
    return cf


__all__ = [
    "default_prec", "dfac", "dfac_inv_laurent", "carlitz_exp", "period",
    "omega", "omega_minus1", "omega_mac_coeff",
    "e_torsion", "e_star", "alpha_digits", "e_star_via_digits",
    "TwistedPoly", "div_poly", "adj_div_poly", "adj_from_div",
    "poly_eval_laurent", "BivarZ", "twisted_to_bivar", "cyclotomic",
    "ConvergenceError",
]
