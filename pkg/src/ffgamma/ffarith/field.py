"""Arithmetic in small finite fields F_q, q = p^e.

Elements are encoded as integers in range(q): the base-p digits of the code
are the coordinates in the polynomial basis 1, w, ..., w^(e-1), where w is a
root of a fixed monic irreducible modulus of degree e over F_p.  The modulus
is the lexicographically first irreducible one (ordering monic polynomials by
the integer whose base-p digits are their coefficients), so encodings are
reproducible across runs and processes.

GF instances are interned per q; all operation tables are built once.  The
tables are plain nested lists, safe for concurrent readers.
"""

from __future__ import annotations

import threading


class DomainError(ValueError):
    """An input is outside the mathematical domain of the operation."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise DomainError."""
    if q < 2:
        raise DomainError(f"q must be a prime power >= 2, got {q}")
    for p in range(2, q + 1):
        if not _is_prime(p):
            continue
        if q % p:
            continue
        e, m = 0, q
        while m % p == 0:
            m //= p
            e += 1
        if m != 1:
            raise DomainError(f"q = {q} is not a prime power")
        return p, e
    raise DomainError(f"q = {q} is not a prime power")


def _fp_polymul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _fp_polymod(a: list[int], m: list[int], p: int) -> list[int]:
    # m monic
    a = a[:]
    while len(a) >= len(m):
        c = a[-1]
        if c:
            shift = len(a) - len(m)
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _irreducible(m: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg(m)//2."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            div = [0] * (d + 1)
            div[d] = 1
            c = code
            for i in range(d):
                div[i] = c % p
                c //= p
            if not _fp_polymod(m, div, p):
                return False
    return True


def _find_modulus(p: int, e: int) -> tuple[int, ...]:
    if e == 1:
        return (0, 1)  # w - 0, i.e. the prime field itself
    for code in range(p**e):
        m = [0] * (e + 1)
        m[e] = 1
        c = code
        for i in range(e):
            m[i] = c % p
            c //= p
        if _irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible modulus found")  # pragma: no cover


_GF_CACHE: dict[int, "GF"] = {}
_GF_LOCK = threading.Lock()

Q_MAX = 512


class GF:
    """The finite field F_q with integer-coded elements.

    Use GF.get(q); direct construction bypasses interning.
    """

    __slots__ = (
        "q", "p", "e", "modulus",
        "_add", "_mul", "_neg", "_inv",
    )

    def __init__(self, q: int):
        if q > Q_MAX:
            raise DomainError(f"q = {q} exceeds the supported bound {Q_MAX}")
        p, e = _prime_power(q)
        self.q = q
        self.p = p
        self.e = e
        self.modulus = _find_modulus(p, e)
        self._build_tables()

    @staticmethod
    def get(q: int) -> "GF":
        gf = _GF_CACHE.get(q)
        if gf is None:
            with _GF_LOCK:
                gf = _GF_CACHE.get(q)
                if gf is None:
                    gf = GF(q)
                    _GF_CACHE[q] = gf
        return gf

    # -- encoding helpers ------------------------------------------------

    def digits(self, a: int) -> list[int]:
        p, e = self.p, self.e
        out = []
        for _ in range(e):
            out.append(a % p)
            a //= p
        return out

    def undigits(self, ds: list[int]) -> int:
        p = self.p
        out = 0
        for d in reversed(ds):
            out = out * p + (d % p)
        return out

    def from_int(self, n: int) -> int:
        """Embed an integer via the prime subfield (n mod p)."""
        return n % self.p

    def _build_tables(self) -> None:
        q, p, e = self.q, self.p, self.e
        if e == 1:
            self._add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self._mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            self._neg = [(-a) % p for a in range(p)]
        else:
            mod = list(self.modulus)
            polys = [self.digits(a) for a in range(q)]
            self._add = [
                [self.undigits([(x + y) % p for x, y in zip(polys[a], polys[b])])
                 for b in range(q)]
                for a in range(q)
            ]
            self._mul = []
            for a in range(q):
                row = []
                for b in range(q):
                    prod = _fp_polymul(polys[a], polys[b], p)
                    prod = _fp_polymod(prod, mod, p)
                    prod += [0] * (e - len(prod))
                    row.append(self.undigits(prod))
                self._mul.append(row)
            self._neg = [self.undigits([(-x) % p for x in polys[a]]) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    inv[a] = b
                    break
            else:
                raise AssertionError("non-invertible nonzero element")  # pragma: no cover
        self._inv = inv

    # -- field operations on integer codes --------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("division by zero in F_q")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r, base = 1, a
        while n:
            if n & 1:
                r = self._mul[r][base]
            base = self._mul[base][base]
            n >>= 1
        return r

    def elements(self) -> range:
        return range(self.q)

    def minus_one(self) -> int:
        return self._neg[1]

    def units(self) -> range:
        return range(1, self.q)

    def __repr__(self) -> str:
        return f"GF({self.q})"


class FieldElem:
    """A single F_q element: thin wrapper over its integer code.

    Hot paths use raw codes with GF methods; this class is the friendly
    API-facing form (dunders, hashing, printing).
    """

    __slots__ = ("gf", "v")

    def __init__(self, gf: GF, v: int):
        self.gf = gf
        self.v = v % gf.q if v >= 0 else gf.from_int(v)

    @staticmethod
    def of(q: int, n: int) -> "FieldElem":
        gf = GF.get(q)
        return FieldElem(gf, gf.from_int(n))

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.gf is not self.gf:
                raise DomainError("mixed fields")
            return other
        if isinstance(other, int):
            return FieldElem(self.gf, self.gf.from_int(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.gf, self.gf.add(self.v, o.v))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.gf, self.gf.sub(self.v, o.v))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.gf, self.gf.sub(o.v, self.v))

    def __neg__(self):
        return FieldElem(self.gf, self.gf.neg(self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.gf, self.gf.mul(self.v, o.v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.gf, self.gf.div(self.v, o.v))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.gf, self.gf.div(o.v, self.v))

    def __pow__(self, n: int):
        return FieldElem(self.gf, self.gf.pow(self.v, n))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.gf, self.gf.inv(self.v))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.gf is other.gf and self.v == other.v
        if isinstance(other, int):
            return self.v == self.gf.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.gf.q, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FieldElem(q={self.gf.q}, {self.v})"
