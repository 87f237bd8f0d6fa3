"""Interpolation functions on the cyclotomic cover and their product values.

The residue pairing (a, b) -> Res(ab/f) on polynomials mod f is perfect, so
every basis {a_i} of A/f has a dual basis {b_j} with Res(a_i*b_j/f) = delta_ij
(`f_dual`).  Out of a dual pair and the torsion coefficients e*(a_i/f) we
build, for each non-integral x = a0/f, the function

    g_x = 1 - sum_i e*(a_i/f) * C_{a0*b_i}(t, z)

reduced mod the cyclotomic factor of level f (`coleman_g`).  The reduced
representative is independent of the dual pair used and of shifting x by a
polynomial; its twisted values at the torsion points xi_a = (T, e(a/f))
interpolate the psi ladder,

    g_x^{(N+1)}(xi_a) = 1 + psi_N(frac(a*x)),

and vanish at the bracket-selected twisted points (`verify_interp`,
`verify_zero`).  Multiplying the g's over an effective cycle and running the
twisted values over N >= 1 converges to the reciprocal of the factorial
product at the star-translated cycle (`pi_from_product`) — a computation path
through exact (t, z)-algebra that shares nothing with gammaeval.pi_monomial
beyond the ground arithmetic.
"""

from __future__ import annotations

from .ffarith import GF, DomainError, LaurentNum, Poly, Rat
from .carlitz import BivarZ, TwistedPoly, cyclotomic, div_poly, e_star, e_torsion
from .gammaeval import Cycle, psi_value
from .brackets import bracket, bracket_support, unit_residues
from .tseries import ConvergenceError

__all__ = [
    "f_dual", "ColemanFn", "coleman_g", "coleman_g_cycle",
    "verify_zero", "verify_interp", "interp_sum_i", "interp_sum_ii",
    "count_bracket_zeros", "pi_from_product",
]


def _gf_inverse(gf: GF, mat: list[list[int]]) -> list[list[int]]:
    """Invert a small square matrix over F_q (codes), by Gauss-Jordan."""
    n = len(mat)
    a = [row[:] + [1 if i == j else 0 for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise DomainError("singular pairing matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = gf.inv(a[col][col])
        a[col] = [gf.mul(inv, v) for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [gf.sub(v, gf.mul(c, w)) for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def f_dual(f: Poly, basis: list[Poly] | None = None) -> tuple[list[Poly], list[Poly]]:
    """A dual pair ({a_i}, {b_j}) with Res(a_i*b_j/f) = delta_ij.

    The default primal family is 1, T, ..., T^{deg f - 1}; any family that is
    a basis of polynomials mod f works and yields the same g_x downstream.
    """
    gf = f.gf
    n = f.degree
    if n < 1 or not f.is_monic():
        raise DomainError("level must be monic of positive degree")
    if basis is None:
        basis = [Poly.gen(gf) ** i for i in range(n)]
    if len(basis) != n:
        raise DomainError("primal family must have deg f members")
    gram = [[Rat(ai * (Poly.gen(gf) ** k), f).residue() for k in range(n)]
            for ai in basis]
    cinv = _gf_inverse(gf, gram)
    duals = []
    for j in range(n):
        b = Poly.zero(gf)
        for k in range(n):
            if cinv[k][j]:
                b = b + (Poly.gen(gf) ** k).scale(cinv[k][j])
        duals.append(b)
    return list(basis), duals


# -- exact reduction of q-power z-monomials mod the cyclotomic factor --------

_zq_cache: dict[Poly, list[BivarZ]] = {}


def _frobenius_z(b: BivarZ) -> BivarZ:
    """sum c_j(t) z^j  |->  sum c_j(t^q) z^{qj} (the q-th power in F_q[t,z])."""
    gf = b.gf
    q = gf.q
    if not b.zc:
        return b
    out = [Poly.zero(gf, "t")] * ((len(b.zc) - 1) * q + 1)
    for j, c in enumerate(b.zc):
        if not c.is_zero():
            out[q * j] = c.compose_power(q)
    return BivarZ(gf, out)


def _zq_reduced(f: Poly, imax: int) -> list[BivarZ]:
    """z^{q^i} mod C*_f for i = 0..imax, computed by iterated Frobenius."""
    cyc = cyclotomic(f)
    rs = _zq_cache.setdefault(f, [])
    if not rs:
        z = BivarZ(f.gf, [Poly.zero(f.gf, "t"), Poly.one(f.gf, "t")])
        _, r0 = (z.divmod_z(cyc) if cyc.deg_z <= 1 else (None, z))
        rs.append(r0)
    while len(rs) <= imax:
        _, r = _frobenius_z(rs[-1]).divmod_z(cyc)
        rs.append(r)
    return rs[: imax + 1]


def _reduce_twisted(tp: TwistedPoly, f: Poly) -> BivarZ:
    """A q-linear polynomial in z reduced mod C*_f, exactly over F_q[t]."""
    gf = f.gf
    if tp.qdeg < 0:
        return BivarZ(gf, ())
    rs = _zq_reduced(f, tp.qdeg)
    acc = BivarZ(gf, ())
    for i in range(tp.qdeg + 1):
        fi = tp.coeff(i)
        if fi.is_zero():
            continue
        acc = acc - BivarZ(gf, [(-fi) * c for c in rs[i].zc])
    return acc


class ColemanFn:
    """A residue mod C*_f(t, z) with LaurentNum coefficients.

    ``zc`` is a tuple (length < #units of the level is NOT required — length
    is exactly the cyclotomic z-degree after reduction) of sparse t-coefficient
    dicts {t-exponent: LaurentNum}.  All curve-level statements are consumed
    through this quotient-ring algebra; twisting the function twists only the
    Laurent coefficients, since the F_q[t,z] content is fixed by Frobenius.
    """

    __slots__ = ("f", "source", "zc", "prec")

    def __init__(self, f: Poly, source, zc, prec: int):
        self.f = f
        self.source = source
        self.zc = tuple({i: c for i, c in d.items() if not c.is_zero()}
                        for d in zc)
        self.prec = prec

    @property
    def ell(self) -> int:
        return cyclotomic(self.f).deg_z

    def twist(self, n: int) -> "ColemanFn":
        """Twist the coefficients by the q^n power map."""
        zc = [{i: c.twist(n) for i, c in d.items()} for d in self.zc]
        p = min((c.prec for d in zc for c in d.values()), default=self.prec)
        return ColemanFn(self.f, self.source, zc, p)

    def value_at(self, a: Poly, fn_twist: int = 0, pt_twist: int = 0,
                 workprec: int | None = None) -> LaurentNum:
        """The value at the pt_twist-fold twist of (T, e(a/f)), with the
        coefficients themselves twisted fn_twist times first."""
        gf = self.f.gf
        W = workprec if workprec is not None else self.prec
        t0 = LaurentNum.from_poly(Poly.gen(gf), W).twist(pt_twist, prec_cap=W)
        z0 = e_torsion(Rat(a, self.f), W).twist(pt_twist, prec_cap=W)
        acc = LaurentNum.zero(gf, W)
        for d in reversed(self.zc):
            acc = acc * z0
            if not d:
                continue
            top = max(d)
            inner = LaurentNum.zero(gf, W)
            for i in range(top, -1, -1):
                inner = inner * t0
                c = d.get(i)
                if c is not None:
                    inner = inner + c.twist(fn_twist, prec_cap=W)
            acc = acc + inner
        return acc

    def _mul_reduce(self, other: "ColemanFn") -> "ColemanFn":
        if self.f != other.f:
            raise DomainError("levels differ")
        gf = self.f.gf
        cyc = cyclotomic(self.f)
        ell = cyc.deg_z
        n = len(self.zc) + len(other.zc) - 1
        out: list[dict[int, LaurentNum]] = [dict() for _ in range(max(n, 1))]
        for j1, d1 in enumerate(self.zc):
            for j2, d2 in enumerate(other.zc):
                tgt = out[j1 + j2]
                for i1, c1 in d1.items():
                    for i2, c2 in d2.items():
                        k = i1 + i2
                        v = c1 * c2
                        tgt[k] = tgt[k] + v if k in tgt else v
        for j in range(len(out) - 1, ell - 1, -1):
            top = out[j]
            if not top:
                continue
            out[j] = {}
            for k, ck in enumerate(cyc.zc[:-1]):
                if ck.is_zero():
                    continue
                tgt = out[j - ell + k]
                for i, c in top.items():
                    for m, code in enumerate(ck.c):
                        if not code:
                            continue
                        v = c.scale(gf.neg(code))
                        key = i + m
                        tgt[key] = tgt[key] + v if key in tgt else v
        prec = min((c.prec for d in out[:ell] for c in d.values()),
                   default=self.prec)
        return ColemanFn(self.f, None, out[:ell], min(prec, other.prec, self.prec))

    def __mul__(self, other: "ColemanFn") -> "ColemanFn":
        return self._mul_reduce(other)

    def __pow__(self, m: int) -> "ColemanFn":
        if m < 1:
            raise DomainError("positive powers only")
        acc = self
        for _ in range(m - 1):
            acc = acc * self
        return acc

    def eq_residual(self, other: "ColemanFn") -> int:
        """Min u-adic valuation of entrywise differences (coefficientwise)."""
        res = min(self.prec, other.prec)
        n = max(len(self.zc), len(other.zc))
        zero = LaurentNum.zero(self.f.gf, res)
        for j in range(n):
            d1 = self.zc[j] if j < len(self.zc) else {}
            d2 = other.zc[j] if j < len(other.zc) else {}
            for i in set(d1) | set(d2):
                res = min(res, d1.get(i, zero).eq_residual(d2.get(i, zero)))
        return res


def _source_numerator(x: Rat, f: Poly) -> Poly:
    """a0 with x = a0/f mod A, reduced mod f; rejects integral x."""
    g, r = divmod(f, x.den)
    if not r.is_zero():
        raise DomainError(f"denominator of {x} does not divide the level {f}")
    a0 = (x.num * g) % f
    if a0.is_zero():
        raise DomainError("the integral class has no interpolation function")
    return a0


def coleman_g(x: Rat, f: Poly, prec: int,
              families: tuple[list[Poly], list[Poly]] | None = None) -> ColemanFn:
    """The reduced representative of 1 - sum_i e*(a_i/f) C_{a0 b_i}(t, z)."""
    gf = f.gf
    a0 = _source_numerator(x, f)
    ai, bi = families if families is not None else f_dual(f)
    ell = cyclotomic(f).deg_z
    zc: list[dict[int, LaurentNum]] = [dict() for _ in range(max(ell, 1))]
    zc[0][0] = LaurentNum.one(gf, prec)
    for a_k, b_k in zip(ai, bi):
        c = e_star(Rat(a_k, f), prec)
        if c.is_zero():
            continue
        red = _reduce_twisted(div_poly(a0 * b_k), f)
        for j, tp in enumerate(red.zc):
            tgt = zc[j]
            for m, code in enumerate(tp.c):
                if not code:
                    continue
                v = c.scale(gf.neg(code))
                tgt[m] = tgt[m] + v if m in tgt else v
    return ColemanFn(f, x, zc, prec)


def coleman_g_cycle(a: Cycle, prec: int,
                    families=None) -> ColemanFn:
    """Product of the symbol functions; effective with positive weight only.

    Integral symbols contribute no factor (they also carry no weight)."""
    if not a.is_effective() or a.weight <= 0:
        raise DomainError("cycle must be effective with positive weight")
    fam = families if families is not None else f_dual(a.f)
    out: ColemanFn | None = None
    for r, m in a.items():
        if r.is_zero():
            continue
        g = coleman_g(Rat(r, a.f), a.f, prec, fam) ** m
        out = g if out is None else out * g
    assert out is not None
    out.source = a
    return out


def count_bracket_zeros(x: Rat, f: Poly) -> int:
    """Number of unit translates a with a firing bracket; always equals
    (number of units)/(q - 1) when x is non-integral."""
    a0 = _source_numerator(x, f)
    return sum(bracket(Rat((a * a0) % f, f)) for a in unit_residues(f))


def _adaptive(build, target: int, pad0: int = 64, attempts: int = 6):
    """Rebuild at growing working precision until the result carries
    `target` certified coefficients; returns the last result regardless."""
    W = target + pad0
    best = None
    for _ in range(attempts):
        best = build(W)
        if best.prec >= target:
            return best
        W += (target - best.prec) + 32
    return best


def verify_zero(x: Rat, f: Poly, a: Poly, prec: int, families=None) -> int:
    """u-adic valuation of g_x at the bracket-selected twisted torsion point.

    Requires the bracket of a*x to fire (checked); the twist order is
    deg f - deg b - 1 with b the monic residue of a*numerator(x)."""
    a0 = _source_numerator(x, f)
    b = (a * a0) % f
    n = bracket_support(Rat(b, f))
    if n is None:
        raise DomainError("bracket precondition fails: value is not a zero")

    def build(W):
        return coleman_g(x, f, W, families).value_at(a, 0, n, workprec=W)

    v = _adaptive(build, prec)
    return v.prec if v.is_zero() else min(v.val, v.prec)


def verify_interp(x: Rat, f: Poly, a: Poly, N: int, prec: int,
                  families=None) -> int:
    """Residual valuation of  g_x^{(N+1)}(T, e(a/f))  vs  1 + psi_N(frac(a*x))."""
    if N < 0:
        raise DomainError("twist order must be nonnegative")
    y = (Rat(a) * x).frac_part()

    def build(W):
        lhs = coleman_g(x, f, W, families).value_at(a, N + 1, 0, workprec=W)
        rhs = LaurentNum.one(f.gf, W) + psi_value(y, N, W)
        return lhs - rhs

    d = _adaptive(build, prec)
    return d.prec if d.is_zero() else min(d.val, d.prec)


def interp_sum_i(f: Poly, a: Poly, N: int, prec: int, families=None) -> int:
    """Residual of  sum_i e*(a_i/f)^{q^{N+1}} e(b_i*a/f)  vs  -psi_N(a/f).

    Holds for every a with deg a < deg f and N >= 0: the dual-family sum
    interpolates the psi ladder with N sitting in the Frobenius exponent.
    """
    if N < 0:
        raise DomainError("ladder index must be nonnegative")
    if not a.degree < f.degree:
        raise DomainError("numerator must have degree below the level")
    fam = families if families is not None else f_dual(f)

    def build(W):
        acc = LaurentNum.zero(f.gf, W)
        for ai, bi in zip(*fam):
            s = e_star(Rat(ai, f), W).twist(N + 1, prec_cap=W)
            acc = acc + s * e_torsion(Rat(bi * a, f), W)
        return acc + psi_value(Rat(a, f), N, W)

    d = _adaptive(build, prec)
    return d.prec if d.is_zero() else min(d.val, d.prec)


def interp_sum_ii(f: Poly, a: Poly, prec: int, families=None) -> int:
    """Residual of  sum_i e*(a_i/f) e(b_i*a/f)^{q^{deg f - deg a - 1}}  vs  1.

    Requires monic a with deg a < deg f; the same dual-family sum at the
    negative ladder index deg a - deg f collapses to 1.
    """
    if not a.is_monic() or not a.degree < f.degree:
        raise DomainError("requires a monic numerator of degree below the level")
    m = f.degree - a.degree - 1
    fam = families if families is not None else f_dual(f)

    def build(W):
        acc = LaurentNum.zero(f.gf, W)
        for ai, bi in zip(*fam):
            t = e_torsion(Rat(bi * a, f), W).twist(m, prec_cap=W)
            acc = acc + e_star(Rat(ai, f), W) * t
        return acc - LaurentNum.one(f.gf, W)

    d = _adaptive(build, prec)
    return d.prec if d.is_zero() else min(d.val, d.prec)


def pi_from_product(a: Cycle, unit: Poly, prec: int, max_n: int = 12,
                    families=None) -> LaurentNum:
    """prod_{N>=1} of the N-twisted cycle function at (T, e(unit/f)).

    Converges to the reciprocal factorial-product value of the star-translate
    of the cycle by `unit`; raises ConvergenceError if the factors have not
    stabilized to the working precision within max_n twists."""
    f = a.f
    u = unit % f
    if u.gcd(f).degree != 0:
        raise DomainError("translate must be prime to the level")

    def build(W):
        g = coleman_g_cycle(a, W, families)
        acc = LaurentNum.one(f.gf, W)
        one = LaurentNum.one(f.gf, W)
        for N in range(1, max_n + 1):
            fac = g.value_at(u, N, 0, workprec=W)
            acc = acc * fac
            if fac.eq_residual(one) >= min(W, acc.prec):
                return acc
        raise ConvergenceError(
            f"product not stabilized after {max_n} twists")

    v = _adaptive(build, prec)
    return v.truncate(prec) if v.prec >= prec else v
