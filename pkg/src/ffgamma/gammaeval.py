"""The q-linear interpolation polynomials, the factorial product, and its
functional equations.

For N >= 0 let ``psi_N`` be the F_q-linear polynomial with kernel spanned by
the polynomials of degree < N, normalized so that
``1 + psi_N(z) = prod (1 + z/a)`` over monic a of degree N.  It satisfies the
recursion

    psi_0(z) = z,
    psi_N(z) = (psi_{N-1}(z)^q - psi_{N-1}(z)) / (T^{q^N} - T),

which this module uses both exactly (coefficients in F_q(T), `LinPoly`) and
numerically (`psi_stream`).  Grouping the factorial product over all monic
polynomials by degree gives

    pi_value(x)    = prod_{N>=0} (1 + psi_N(x))^(-1),
    gamma_value(x) = pi_value(x) / x,

with poles exactly at the negatives of monic polynomials (and 0 for gamma).
The three standard functional equations (translation by a polynomial,
reflection over F_q^x scalings, and base-f multiplication) are exposed as
verifiers returning the u-adic valuation of LHS - RHS.

`Cycle` models finite integer combinations of torsion symbols [x] with
f*x integral, identified mod the polynomial ring; `pi_monomial` extends
`pi_value` multiplicatively over a Cycle.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .ffarith import (GF, DomainError, LaurentNum, Poly, Rat, all_polys,
                      monic_polys)
from .tseries import ConvergenceError

__all__ = [
    "LinPoly", "psi_poly", "psi_stream", "psi_prefix", "psi_value",
    "pi_value", "gamma_value", "Cycle", "pi_monomial",
    "moore_det", "moore_prod",
    "verify_translation", "verify_reflection", "verify_reflection_closed",
    "verify_gauss",
]

PSI_BUDGET = 16


def _rat_frob(x: Rat, q: int) -> Rat:
    # c^q = c for c in F_q, so raising a rational function to the q-th
    # power just substitutes X -> X^q.
    return Rat(x.num.compose_power(q), x.den.compose_power(q))


def _div_by_poly(a: LaurentNum, p: Poly) -> LaurentNum:
    """a / p for an exact nonzero polynomial p, preserving a's precision."""
    gf = a.gf
    if p.is_zero():
        raise DomainError("division by zero")
    pad = max(0, -a.val) + 2 * (gf.q - 1) * p.degree + 8
    binv = LaurentNum.from_rat(Rat(Poly.one(gf, p.var), p), a.prec + pad)
    return a * binv


class LinPoly:
    """An F_q-linear polynomial  sum_i c_i z^{q^i}  with coefficients in F_q(T)."""

    __slots__ = ("gf", "c")

    def __init__(self, gf: GF, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.gf = gf
        self.c = tuple(cs)

    @staticmethod
    def identity(gf: GF, var: str = "T") -> "LinPoly":
        return LinPoly(gf, (Rat(Poly.one(gf, var)),))

    @property
    def qdeg(self) -> int:
        return len(self.c) - 1

    def coeff(self, i: int) -> Rat:
        if 0 <= i < len(self.c):
            return self.c[i]
        var = self.c[0].var if self.c else "T"
        return Rat(Poly.zero(self.gf, var))

    def __add__(self, other: "LinPoly") -> "LinPoly":
        n = max(len(self.c), len(other.c))
        return LinPoly(self.gf, (self.coeff(i) + other.coeff(i) for i in range(n)))

    def __neg__(self) -> "LinPoly":
        return LinPoly(self.gf, (-ci for ci in self.c))

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        return self + (-other)

    def scale(self, s: Rat) -> "LinPoly":
        return LinPoly(self.gf, (ci * s for ci in self.c))

    def twist(self, n: int = 1) -> "LinPoly":
        """Raise to the q^n power (coefficients Frobenius'd, indices shifted)."""
        if n < 0:
            raise DomainError("linear polynomials only twist forward")
        q = self.gf.q
        var = self.c[0].var if self.c else "T"
        zero = Rat(Poly.zero(self.gf, var))
        out = [zero] * n + [_rat_frob(ci, q**n) for ci in self.c]
        return LinPoly(self.gf, out)

    def eval_rat(self, x: Rat) -> Rat:
        q = self.gf.q
        acc = None
        xp = x
        for i, ci in enumerate(self.c):
            if i:
                xp = xp ** q
            term = ci * xp
            acc = term if acc is None else acc + term
        if acc is None:
            return Rat(Poly.zero(self.gf, x.var))
        return acc

    def eval(self, x: LaurentNum, prec: int | None = None) -> LaurentNum:
        """Numeric value, certified mod u^prec (default: x.prec)."""
        gf = self.gf
        q = gf.q
        if prec is None:
            prec = x.prec
        acc = LaurentNum.zero(gf, prec)
        for i, ci in enumerate(self.c):
            if ci.is_zero():
                continue
            c = LaurentNum.from_rat(ci, prec + max(0, -(q**i) * x.val) + 4)
            xt = x.twist(i, prec_cap=prec + max(0, -c.val) + 4)
            acc = acc + (c * xt).truncate(prec)
        return acc

    def __eq__(self, other):
        if not isinstance(other, LinPoly):
            return NotImplemented
        return self.gf is other.gf and self.c == other.c

    def __hash__(self):
        return hash((id(self.gf), self.c))

    def __str__(self):
        if not self.c:
            return "0"
        q = self.gf.q
        parts = []
        for i, ci in enumerate(self.c):
            if ci.is_zero():
                continue
            parts.append(f"({ci})*z^{q**i}" if i else f"({ci})*z")
        return " + ".join(parts)

    __repr__ = __str__


@lru_cache(maxsize=None)
def psi_poly(q: int, N: int) -> LinPoly:
    """Exact psi_N over F_q(T), by the fundamental recursion."""
    if N < 0:
        raise DomainError("index must be nonnegative")
    gf = GF.get(q)
    if N == 0:
        return LinPoly.identity(gf)
    prev = psi_poly(q, N - 1)
    Tgen = Poly.gen(gf)
    den = Rat(Tgen.compose_power(q**N) - Tgen)
    return (prev.twist(1) - prev).scale(den**-1)


def psi_stream(x: Rat, prec: int, budget: int = PSI_BUDGET):
    """Yield (N, psi_N(x)) numerically for N = 0, 1, ..., budget.

    Each division step is by T^{q^N} - T, whose inverse has positive
    valuation, so absolute precision never drops along the recursion.
    """
    gf = x.gf
    q = gf.q
    Tgen = Poly.gen(gf, x.var)
    v = LaurentNum.from_rat(x, prec)
    yield 0, v
    for N in range(1, budget + 1):
        v = _div_by_poly(v.twist(1, prec_cap=prec) - v,
                         Tgen.compose_power(q**N) - Tgen)
        yield N, v


def psi_prefix(x: Rat, prec: int, count: int) -> list[LaurentNum]:
    """The values psi_0(x), ..., psi_count(x)."""
    out = []
    for _, ps in psi_stream(x, prec, count):
        out.append(ps)
        if len(out) > count:
            break
    return out


def psi_value(x: Rat, N: int, prec: int) -> LaurentNum:
    return psi_prefix(x, prec, N)[N]


def pi_value(x: Rat, prec: int, budget: int = PSI_BUDGET) -> LaurentNum:
    """The factorial product at x, certified mod u^prec.

    Raises DomainError when x is a pole, i.e. the negative of a monic
    polynomial.
    """
    gf = x.gf
    if x.is_poly() and (-x.num).is_monic():
        raise DomainError(f"{x} is a pole of the factorial product")
    pad = 16
    for _ in range(5):
        W = prec + pad
        acc = LaurentNum.one(gf, W)
        stabilized = False
        for N, psi in psi_stream(x, W, budget):
            if psi.is_zero():
                # all later factors are 1 + O(u^W): superexponential decay
                stabilized = True
                break
            fac = LaurentNum.one(gf, W) + psi
            if fac.is_zero():
                raise DomainError(
                    f"factor 1 + psi_{N}({x}) vanishes to working precision")
            acc = acc * fac.inverse()
        if not stabilized:
            raise ConvergenceError(
                "factorial product did not stabilize within budget")
        if acc.prec >= prec:
            return acc.truncate(prec)
        # inverses of factors with negative valuation cost precision; retry
        pad += (prec - acc.prec) + 16
    raise ConvergenceError("factorial product could not reach target precision")


def gamma_value(x: Rat, prec: int, budget: int = PSI_BUDGET) -> LaurentNum:
    """pi_value(x)/x; additionally x = 0 is a pole."""
    if x.is_zero():
        raise DomainError("0 is a pole of gamma")
    gf = x.gf
    q = gf.q
    W = prec + 2 * (q - 1) * abs(x.degree) + 8
    xv = LaurentNum.from_rat(x, W)
    return (pi_value(x, W, budget) * xv.inverse()).truncate(prec)


class Cycle:
    """A finite integer combination of torsion symbols at level f.

    Symbols [x] with f*x integral are identified mod the polynomial ring
    and stored by the reduced numerator residue a = x*f mod f.  The level
    must be monic of positive degree.
    """

    __slots__ = ("f", "counts")

    def __init__(self, f: Poly, counts=None):
        if f.degree < 1 or not f.is_monic():
            raise DomainError("level must be monic of positive degree")
        norm: dict[Poly, int] = {}
        for r, n in dict(counts or {}).items():
            r = r % f
            if n:
                norm[r] = norm.get(r, 0) + n
        self.f = f
        self.counts = {r: n for r, n in norm.items() if n}

    @staticmethod
    def zero(f: Poly) -> "Cycle":
        return Cycle(f, {})

    @staticmethod
    def symbol(x: Rat, f: Poly) -> "Cycle":
        """The one-term combination [x]; the denominator of x must divide f."""
        g, r = divmod(f, x.den)
        if not r.is_zero():
            raise DomainError(
                f"denominator of {x} does not divide the level {f}")
        return Cycle(f, {(x.num * g) % f: 1})

    def items(self):
        """(residue, multiplicity) pairs in a deterministic order."""
        return sorted(self.counts.items(), key=lambda rn: (rn[0].degree, rn[0].c))

    def symbols(self):
        """(x, multiplicity) pairs with x the reduced representative a/f."""
        return [(Rat(r, self.f), n) for r, n in self.items()]

    @property
    def weight(self) -> int:
        """Total multiplicity of the non-integral symbols.

        The integral symbol [0] carries weight 0: it is inert under every
        sign sum, bracket functional and product value built here, and the
        weight-zero relation lattice is only correct with it excluded.
        """
        return sum(n for r, n in self.counts.items() if not r.is_zero())

    def is_zero(self) -> bool:
        return not self.counts

    def is_effective(self) -> bool:
        return all(n > 0 for n in self.counts.values())

    def _check(self, other: "Cycle") -> None:
        if self.f != other.f:
            raise DomainError("cycles live at different levels")

    def __add__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        out = dict(self.counts)
        for r, n in other.counts.items():
            out[r] = out.get(r, 0) + n
        return Cycle(self.f, out)

    def __neg__(self) -> "Cycle":
        return Cycle(self.f, {r: -n for r, n in self.counts.items()})

    def __sub__(self, other: "Cycle") -> "Cycle":
        return self + (-other)

    def __mul__(self, n: int) -> "Cycle":
        if not isinstance(n, int):
            return NotImplemented
        return Cycle(self.f, {r: n * m for r, m in self.counts.items()})

    __rmul__ = __mul__

    def star(self, a: Poly) -> "Cycle":
        """The symbol-wise action [x] -> [a*x] of a unit a mod f."""
        a = a % self.f
        if a.gcd(self.f).degree != 0:
            raise DomainError(f"{a} is not a unit mod {self.f}")
        return Cycle(self.f, {(a * r) % self.f: n for r, n in self.counts.items()})

    def __eq__(self, other):
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.f == other.f and self.counts == other.counts

    def __hash__(self):
        return hash((self.f, frozenset(self.counts.items())))

    def __str__(self):
        if not self.counts:
            return "0"
        parts = []
        for r, n in self.items():
            coef = "" if n == 1 else ("-" if n == -1 else f"{n}*")
            parts.append(f"{coef}[({r})/({self.f})]")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def pi_monomial(a: Cycle, prec: int, budget: int = PSI_BUDGET) -> LaurentNum:
    """The multiplicative extension of pi_value over a Cycle."""
    gf = a.f.gf
    W = prec + 8
    acc = LaurentNum.one(gf, W)
    for r, n in a.items():
        if r.is_zero():
            continue  # [0] contributes the factor 1
        p = pi_value(Rat(r, a.f), W, budget)
        if n < 0:
            p, n = p.inverse(), -n
        for _ in range(n):
            acc = acc * p
    return acc.truncate(prec)


MOORE_MAX = 6


def moore_det(xs, q: int, qpow=None):
    """det of the matrix with rows (x_1^{q^m}, ..., x_N^{q^m}), m = N-1..0.

    Works over any commutative ring whose elements support + * -; pass
    `qpow` to override how x^{q^m} is computed (e.g. twisting).
    """
    xs = list(xs)
    N = len(xs)
    if N == 0:
        raise DomainError("empty argument list")
    if N > MOORE_MAX:
        raise DomainError(f"determinant size capped at {MOORE_MAX}")
    if qpow is None:
        qpow = lambda x, m: x ** (q**m)
    rows = [[qpow(x, N - 1 - i) for x in xs] for i in range(N)]
    acc = None
    for perm in itertools.permutations(range(N)):
        term = rows[0][perm[0]]
        for i in range(1, N):
            term = term * rows[i][perm[i]]
        if _perm_sign(perm) < 0:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def moore_prod(xs, q: int):
    """prod over monic c in F_q^N of sum_i c_i x_i (leftmost nonzero c_i = 1).

    Equal to moore_det by the Moore identity; elements must support
    .scale(code) (polynomials and rational functions do).
    """
    xs = list(xs)
    N = len(xs)
    if N == 0:
        raise DomainError("empty argument list")
    gf = GF.get(q)
    acc = None
    for lead in range(N):
        for tail in itertools.product(gf.elements(), repeat=N - lead - 1):
            term = xs[lead]
            for x, c in zip(xs[lead + 1:], tail):
                if c:
                    term = term + x.scale(c)
            acc = term if acc is None else acc * term
    return acc


def _residual(lhs: LaurentNum, rhs: LaurentNum, prec: int) -> int:
    return min(lhs.eq_residual(rhs), prec)


def verify_translation(z: Rat, a0: Poly, prec: int) -> int:
    """Valuation of LHS - RHS in the cross-multiplied translation identity

        pi(z+a0) * prod_{i<=deg a0} (1 + psi_i(z+a0))
          == pi(z) * prod_{i<=deg a0} (1 + psi_i(z)).
    """
    if a0.is_zero():
        raise DomainError("translation step must be nonzero")
    gf = z.gf
    W = prec + 64
    za = z + Rat(a0)
    one = LaurentNum.one(gf, W)
    lhs = pi_value(za, W)
    rhs = pi_value(z, W)
    for pa, pz in zip(psi_prefix(za, W, a0.degree), psi_prefix(z, W, a0.degree)):
        lhs = lhs * (one + pa)
        rhs = rhs * (one + pz)
    return _residual(lhs, rhs, prec)


def verify_reflection(z: Rat, prec: int) -> int:
    """Valuation of LHS - RHS in

        prod_{eps in F_q^x} pi(eps*z) == period * z / exp_C(period * z).
    """
    from .carlitz import carlitz_exp, period

    if z.is_poly():
        raise DomainError("argument must not be integral")
    gf = z.gf
    q = gf.q
    W = prec + 2 * q + 2 * (q - 1) * abs(z.degree) + 48
    lhs = LaurentNum.one(gf, W)
    for eps in gf.units():
        lhs = lhs * pi_value(z.scale(eps), W)
    pw = period(q, W)
    zv = LaurentNum.from_rat(z, W)
    ev = carlitz_exp(pw * zv, W)
    if ev.is_zero():
        raise DomainError("exponential vanishes to working precision")
    rhs = pw * zv * ev.inverse()
    return _residual(lhs, rhs, prec)


def verify_reflection_closed(q: int, prec: int) -> int:
    """Valuation of LHS - RHS in the closed special case at z = 1/T:

        prod_{eps} pi(eps/T) == period / (T * Ttilde).
    """
    from .carlitz import period

    gf = GF.get(q)
    W = prec + 2 * q + 16
    Tgen = Poly.gen(gf)
    z = Rat(Poly.one(gf), Tgen)
    lhs = LaurentNum.one(gf, W)
    for eps in gf.units():
        lhs = lhs * pi_value(z.scale(eps), W)
    denom = LaurentNum.t_elem(gf, W) * LaurentNum.ttilde(gf, W)
    rhs = period(q, W) * denom.inverse()
    return _residual(lhs, rhs, prec)


def verify_gauss(z: Rat, f: Poly, prec: int) -> int:
    """Valuation of LHS - RHS in the base-f multiplication identity

        prod_{deg a < deg f} pi((z+a)/f)
          == pi(z) * prod_{i<deg f} (1 + psi_i(z))
                   * prod_{monic a, deg a<deg f} prod_{eps} pi(eps*a/f).
    """
    if f.degree < 1 or not f.is_monic():
        raise DomainError("modulus must be monic of positive degree")
    gf = z.gf
    d = f.degree
    W = prec + 64
    one = LaurentNum.one(gf, W)
    lhs = one
    for a in all_polys(gf, d - 1):
        lhs = lhs * pi_value((z + Rat(a)) / Rat(f), W)
    rhs = pi_value(z, W)
    for ps in psi_prefix(z, W, d - 1):
        rhs = rhs * (one + ps)
    for m in range(d):
        for a in monic_polys(gf, m):
            for eps in gf.units():
                rhs = rhs * pi_value(Rat(a.scale(eps), f), W)
    return _residual(lhs, rhs, prec)
