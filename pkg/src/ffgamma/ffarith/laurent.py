"""Truncated Laurent series over F_q in the uniformizer u, with absolute
precision tracking.

Encoding of the ambient field: u is the reciprocal of the distinguished
(q-1)-st root of -T, so

    Ttilde = u^(-1),        T = -u^(-(q-1)),        |u| = q^(-1/(q-1)).

Elements of F_q((1/T)) occupy exponents that are multiples of q-1; the
remaining residues carry the Ttilde-multiples.  A LaurentNum stores the
window [val, prec) of u-coefficients: the value is known modulo u^prec
(absolute precision), coefficients are integer codes of F_q elements
(see ffarith.field), and the leading stored coefficient is nonzero unless
the value is zero to precision (then the window is empty and val == prec).

Precision propagation is the standard ultrametric one:

    add:  prec = min(pa, pb)
    mul:  prec = min(va + pb, vb + pa)
    inv:  prec = pb - 2*vb
    twist by n >= 0:  exponents scale by q^n, prec scales by q^n
    twist by n < 0:   exponents divide by q^|n| (support must allow it),
                      prec = ceil(pb / q^|n|)

q-fold twisting fixes the coefficients themselves (c^q = c in F_q), so a
twist is purely an exponent map.  Multiplication runs on numpy int64
convolutions componentwise over the prime field, which keeps the kernels
exact and fast.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .field import GF, DomainError


def _red_table(gf: GF) -> list[list[int]]:
    """w^k mod modulus as F_p digit vectors, k = 0 .. 2e-2."""
    p, e = gf.p, gf.e
    table = []
    cur = [1] + [0] * (e - 1)
    mod = list(gf.modulus)
    for _ in range(2 * e - 1):
        table.append(cur[:])
        nxt = [0] + cur[:]
        # reduce degree-e term
        if len(nxt) > e:
            lead = nxt.pop()
            if lead:
                for i in range(e):
                    nxt[i] = (nxt[i] - lead * mod[i]) % p
        cur = nxt
    return table


_RED_CACHE: dict[int, list[list[int]]] = {}


def _arrmul(gf: GF, a, b, outlen: int) -> list[int]:
    """Truncated product of coefficient arrays (integer codes)."""
    if outlen <= 0 or not len(a) or not len(b):
        return []
    p, e = gf.p, gf.e
    if e == 1:
        arr = np.convolve(np.asarray(a, dtype=np.int64),
                          np.asarray(b, dtype=np.int64))
        if outlen < len(arr):
            arr = arr[:outlen]
        arr %= p
        return arr.tolist()
    red = _RED_CACHE.get(gf.q)
    if red is None:
        red = _RED_CACHE[gf.q] = _red_table(gf)
    acomps = _components(gf, a)
    bcomps = _components(gf, b)
    L = min(outlen, len(a) + len(b) - 1)
    out = [np.zeros(L, dtype=np.int64) for _ in range(e)]
    for i in range(e):
        if not acomps[i].any():
            continue
        for j in range(e):
            if not bcomps[j].any():
                continue
            cv = np.convolve(acomps[i], bcomps[j])
            if L < len(cv):
                cv = cv[:L]
            rk = red[i + j]
            for m in range(e):
                if rk[m]:
                    out[m][: len(cv)] += rk[m] * cv
    codes = np.zeros(L, dtype=np.int64)
    pw = 1
    for m in range(e):
        out[m] %= p
        codes += pw * out[m]
        pw *= p
    return codes.tolist()


def _components(gf: GF, a) -> list[np.ndarray]:
    arr = np.asarray(a, dtype=np.int64)
    comps = []
    for _ in range(gf.e):
        comps.append(arr % gf.p)
        arr = arr // gf.p
    return comps


class LaurentNum:
    __slots__ = ("gf", "val", "prec", "c")

    def __init__(self, gf: GF, val: int, prec: int, c: tuple):
        # trusted constructor; use make() to normalize
        self.gf = gf
        self.val = val
        self.prec = prec
        self.c = c

    @staticmethod
    def make(gf: GF, val: int, coeffs, prec: int) -> "LaurentNum":
        """Normalize a window of coefficients starting at u^val.

        Coefficients beyond the supplied window (through prec) are taken as
        known zeros: constructors always describe everything they know.
        """
        cs = list(coeffs)
        if len(cs) > prec - val:
            cs = cs[: prec - val]
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        if k == len(cs):
            return LaurentNum(gf, prec, prec, ())
        val += k
        cs = cs[k:]
        if len(cs) < prec - val:
            cs = cs + [0] * (prec - val - len(cs))
        return LaurentNum(gf, val, prec, tuple(cs))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(gf: GF, prec: int) -> "LaurentNum":
        return LaurentNum(gf, prec, prec, ())

    @staticmethod
    def one(gf: GF, prec: int) -> "LaurentNum":
        return LaurentNum.make(gf, 0, [1], prec)

    @staticmethod
    def u_pow(gf: GF, k: int, prec: int) -> "LaurentNum":
        return LaurentNum.make(gf, k, [1], prec)

    @staticmethod
    def from_terms(gf: GF, terms: dict, prec: int) -> "LaurentNum":
        """terms: u-exponent -> coefficient code."""
        live = {e_: c for e_, c in terms.items() if c and e_ < prec}
        if not live:
            return LaurentNum.zero(gf, prec)
        val = min(live)
        out = [0] * (prec - val)
        for e_, cc in live.items():
            out[e_ - val] = cc
        return LaurentNum.make(gf, val, out, prec)

    @staticmethod
    def ttilde(gf: GF, prec: int) -> "LaurentNum":
        return LaurentNum.u_pow(gf, -1, prec)

    @staticmethod
    def t_elem(gf: GF, prec: int) -> "LaurentNum":
        """T = -u^(-(q-1))."""
        return LaurentNum.from_terms(gf, {-(gf.q - 1): gf.neg(1)}, prec)

    @staticmethod
    def from_poly(p, prec: int) -> "LaurentNum":
        """Embed f(T): T^m = (-1)^m u^(-m(q-1))."""
        gf = p.gf
        terms = {}
        for m, cm in enumerate(p.c):
            if cm:
                terms[-m * (gf.q - 1)] = gf.neg(cm) if m % 2 else cm
        return LaurentNum.from_terms(gf, terms, prec)

    @staticmethod
    def from_rat(r, prec: int) -> "LaurentNum":
        gf = r.gf
        if r.num.is_zero():
            return LaurentNum.zero(gf, prec)
        pad = (gf.q - 1) * (max(r.num.degree, 0) + 2 * r.den.degree + 2)
        P = prec + pad
        num_l = LaurentNum.from_poly(r.num, P)
        if r.den.is_one():
            return num_l.truncate(prec)
        den_l = LaurentNum.from_poly(r.den, P)
        return (num_l * den_l.inverse()).truncate(prec)

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero to stored precision."""
        return not self.c

    def val_or_prec(self) -> int:
        return self.val

    def abs_val(self) -> Fraction | None:
        """log_q of the absolute value; None when zero to precision."""
        if not self.c:
            return None
        return Fraction(-self.val, self.gf.q - 1)

    def support_multiple_of(self, m: int) -> bool:
        return all((self.val + i) % m == 0 or ci == 0
                   for i, ci in enumerate(self.c))

    def coeff_at(self, e_: int) -> int:
        if e_ >= self.prec:
            raise DomainError(f"coefficient u^{e_} beyond precision {self.prec}")
        if not self.c or e_ < self.val:
            return 0
        return self.c[e_ - self.val]

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "LaurentNum") -> None:
        if self.gf is not other.gf:
            raise DomainError("mixed coefficient fields")

    def __add__(self, other):
        if not isinstance(other, LaurentNum):
            return NotImplemented
        self._check(other)
        gf = self.gf
        prec = min(self.prec, other.prec)
        if not self.c and not other.c:
            return LaurentNum.zero(gf, prec)
        val = min(self.val, other.val, prec)
        out = [0] * (prec - val)
        for i, ci in enumerate(self.c):
            e_ = self.val + i
            if e_ >= prec:
                break
            out[e_ - val] = ci
        add = gf.add
        for i, ci in enumerate(other.c):
            e_ = other.val + i
            if e_ >= prec:
                break
            out[e_ - val] = add(out[e_ - val], ci)
        return LaurentNum.make(gf, val, out, prec)

    def __neg__(self):
        neg = self.gf.neg
        return LaurentNum(self.gf, self.val, self.prec,
                          tuple(neg(x) for x in self.c))

    def __sub__(self, other):
        if not isinstance(other, LaurentNum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentNum):
            return NotImplemented
        self._check(other)
        gf = self.gf
        prec = min(self.val + other.prec, other.val + self.prec)
        if not self.c or not other.c:
            return LaurentNum.zero(gf, prec)
        val = self.val + other.val
        arr = _arrmul(gf, self.c, other.c, prec - val)
        return LaurentNum.make(gf, val, arr, prec)

    def scale(self, code: int) -> "LaurentNum":
        """Multiply by a field constant (integer code)."""
        if code == 0:
            return LaurentNum.zero(self.gf, self.prec)
        row = self.gf._mul[code]
        return LaurentNum(self.gf, self.val, self.prec,
                          tuple(row[x] for x in self.c))

    def shift(self, k: int) -> "LaurentNum":
        """Multiply by u^k (exact)."""
        return LaurentNum(self.gf, self.val + k, self.prec + k, self.c)

    def inverse(self) -> "LaurentNum":
        if not self.c:
            raise DomainError("inverse of a value that is zero to precision")
        gf = self.gf
        n = self.prec - self.val
        y = [gf.inv(self.c[0])]
        k = 1
        b = list(self.c)
        while k < n:
            k = min(2 * k, n)
            by = _arrmul(gf, b[:k], y, k)
            t = [gf.neg(x) for x in by]
            two = gf.add(1, 1)
            t[0] = gf.add(t[0], two)
            y = _arrmul(gf, t, y, k)
        return LaurentNum.make(gf, -self.val, y, self.prec - 2 * self.val)

    def __truediv__(self, other):
        if not isinstance(other, LaurentNum):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> "LaurentNum":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentNum.one(self.gf, self.prec)
        r = None
        base = self
        while n:
            if n & 1:
                r = base if r is None else r * base
            n >>= 1
            if n:
                base = base * base
        return r

    def twist(self, n: int, prec_cap: int | None = None) -> "LaurentNum":
        """Raise to the q^n power (n may be negative).

        Coefficients are fixed (c^q = c in F_q); only exponents scale.  For
        n < 0 every nonzero stored exponent must be divisible by q^|n|.
        prec_cap bounds the output precision, keeping windows short when the
        scaled precision would be enormous.
        """
        gf = self.gf
        if n == 0:
            return self if prec_cap is None else self.truncate(prec_cap)
        if n > 0:
            m = gf.q**n
            new_prec = self.prec * m
            if prec_cap is not None:
                new_prec = min(new_prec, prec_cap)
            if not self.c:
                return LaurentNum.zero(gf, new_prec)
            new_val = self.val * m
            if new_val >= new_prec:
                return LaurentNum.zero(gf, new_prec)
            out = [0] * (new_prec - new_val)
            for i, ci in enumerate(self.c):
                if ci:
                    e_ = (self.val + i) * m
                    if e_ >= new_prec:
                        break
                    out[e_ - new_val] = ci
            return LaurentNum.make(gf, new_val, out, new_prec)
        m = gf.q ** (-n)
        new_prec = -(-self.prec // m)
        if prec_cap is not None:
            new_prec = min(new_prec, prec_cap)
        if not self.c:
            return LaurentNum.zero(gf, new_prec)
        if not self.support_multiple_of(m):
            raise DomainError(
                f"support not divisible by q^{-n}; q^(1/{m}) twist undefined")
        new_val = self.val // m
        out = [0] * (new_prec - new_val)
        for i, ci in enumerate(self.c):
            if ci:
                e_ = (self.val + i) // m
                if e_ >= new_prec:
                    break
                out[e_ - new_val] = ci
        return LaurentNum.make(gf, new_val, out, new_prec)

    def truncate(self, new_prec: int) -> "LaurentNum":
        if new_prec >= self.prec:
            return self
        if not self.c or self.val >= new_prec:
            return LaurentNum.zero(self.gf, new_prec)
        return LaurentNum(self.gf, self.val, new_prec,
                          self.c[: new_prec - self.val])

    # -- function-field specifics --------------------------------------------

    def residue(self) -> int:
        """Coefficient of 1/T in the 1/T-expansion (integer code).

        Requires the value to lie in F_q((1/T)) (support on multiples of
        q-1) and the u^(q-1) slot to be within precision.
        """
        q = self.gf.q
        if self.prec <= q - 1:
            raise DomainError("precision too low to read the 1/T coefficient")
        if not self.support_multiple_of(q - 1):
            raise DomainError("value not in F_q((1/T)); residue undefined")
        return self.gf.neg(self.coeff_at(q - 1))

    def eq_residual(self, other: "LaurentNum") -> int:
        """u-adic valuation of the difference; equals the common precision
        when the difference is zero to precision (a lower bound then)."""
        d = self - other
        return d.prec if not d.c else d.val

    # -- plumbing -----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentNum):
            return NotImplemented
        return (self.gf is other.gf and self.val == other.val
                and self.prec == other.prec and self.c == other.c)

    def __hash__(self):
        return hash((self.gf.q, self.val, self.prec, self.c))

    def to_json(self) -> dict:
        return {"q": self.gf.q, "val": self.val, "prec": self.prec,
                "coeffs": list(self.c)}

    @staticmethod
    def from_json(d: dict) -> "LaurentNum":
        gf = GF.get(int(d["q"]))
        return LaurentNum.make(gf, int(d["val"]),
                               [int(x) for x in d["coeffs"]], int(d["prec"]))

    def __repr__(self):
        if not self.c:
            return f"O(u^{self.prec})"
        shown = []
        cnt = 0
        for i, ci in enumerate(self.c):
            if ci:
                shown.append(f"{ci}*u^{self.val + i}")
                cnt += 1
                if cnt >= 6:
                    shown.append("...")
                    break
        return " + ".join(shown) + f" + O(u^{self.prec})"


def abs_val(x: LaurentNum) -> Fraction | None:
    """log_q |x|_infty = -val/(q-1) as an exact Fraction; None for 0."""
    return x.abs_val()


__all__ = ["LaurentNum", "abs_val", "DomainError"]
