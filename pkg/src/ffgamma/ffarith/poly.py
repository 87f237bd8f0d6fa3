"""Exact univariate polynomials and rational functions over F_q.

Poly is F_q[X] for a named variable (T for the base ring, t for operator
coefficients); Rat is the fraction field with reduced terms and monic
denominator.  Coefficients are stored as integer codes ascending by degree
with no trailing zeros, so the zero polynomial is the empty tuple and
degree() returns -1 for it (callers treat that case explicitly; the usual
deg 0 = -infinity convention only matters in comparisons we never reach
blindly).

Also hosts parse_elem, the little expression grammar shared by the CLI:
integer literals (reduced mod p), the variable letter, + - * / ^ and
parentheses.
"""

from __future__ import annotations

from functools import lru_cache

from .field import GF, DomainError, FieldElem


class ParseError(ValueError):
    """Syntax error in an element expression; carries the position."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class Poly:
    __slots__ = ("gf", "var", "c")

    def __init__(self, gf: GF, coeffs, var: str = "T"):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.gf = gf
        self.var = var
        self.c = tuple(cs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(gf: GF, var: str = "T") -> "Poly":
        return Poly(gf, (), var)

    @staticmethod
    def one(gf: GF, var: str = "T") -> "Poly":
        return Poly(gf, (1,), var)

    @staticmethod
    def const(gf: GF, a: int, var: str = "T") -> "Poly":
        return Poly(gf, (a % gf.q,), var)

    @staticmethod
    def gen(gf: GF, var: str = "T") -> "Poly":
        return Poly(gf, (0, 1), var)

    @staticmethod
    def from_ints(gf: GF, ints, var: str = "T") -> "Poly":
        return Poly(gf, [gf.from_int(n) for n in ints], var)

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def lc(self) -> int:
        if not self.c:
            return 0
        return self.c[-1]

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.gf is not other.gf or self.var != other.var:
            raise DomainError("mixed polynomial rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.gf, self.gf.from_int(other), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        gf = self.gf
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, bi in enumerate(b):
            out[i] = gf.add(out[i], bi)
        return Poly(gf, out, self.var)

    __radd__ = __add__

    def __neg__(self):
        gf = self.gf
        return Poly(gf, [gf.neg(x) for x in self.c], self.var)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.gf, self.gf.from_int(other), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.gf, self.gf.from_int(other), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        gf = self.gf
        if not self.c or not other.c:
            return Poly.zero(gf, self.var)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, ai in enumerate(self.c):
            if ai:
                row = gf._mul[ai]
                for j, bj in enumerate(other.c):
                    if bj:
                        out[i + j] = gf.add(out[i + j], row[bj])
        return Poly(gf, out, self.var)

    __rmul__ = __mul__

    def scale(self, a: int) -> "Poly":
        gf = self.gf
        if a == 0:
            return Poly.zero(gf, self.var)
        row = gf._mul[a]
        return Poly(gf, [row[x] for x in self.c], self.var)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise DomainError("negative polynomial power")
        r = Poly.one(self.gf, self.var)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def __divmod__(self, other: "Poly"):
        self._check(other)
        gf = self.gf
        if not other.c:
            raise DomainError("polynomial division by zero")
        a = list(self.c)
        b = other.c
        inv_lc = gf.inv(b[-1])
        quot = [0] * max(0, len(a) - len(b) + 1)
        for k in range(len(a) - len(b), -1, -1):
            c = gf.mul(a[k + len(b) - 1], inv_lc)
            if c:
                quot[k] = c
                for i, bi in enumerate(b):
                    a[k + i] = gf.sub(a[k + i], gf.mul(c, bi))
        return Poly(gf, quot, self.var), Poly(gf, a[: len(b) - 1], self.var)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self.scale(self.gf.inv(self.c[-1]))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def __call__(self, x: int) -> int:
        """Evaluate at an F_q element given by its integer code (Horner)."""
        gf = self.gf
        acc = 0
        for ci in reversed(self.c):
            acc = gf.add(gf.mul(acc, x), ci)
        return acc

    def compose_power(self, k: int) -> "Poly":
        """Return self(X^k).  For k = q^i this is self**(q^i), since the
        coefficients are fixed by x -> x^q."""
        if not self.c:
            return self
        out = [0] * ((len(self.c) - 1) * k + 1)
        for i, ci in enumerate(self.c):
            out[i * k] = ci
        return Poly(self.gf, out, self.var)

    def subs(self, val: "Poly") -> "Poly":
        acc = Poly.zero(self.gf, val.var)
        for ci in reversed(self.c):
            acc = acc * val + Poly.const(self.gf, ci, val.var)
        return acc

    # -- comparisons / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.gf, self.gf.from_int(other), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.gf is other.gf and self.c == other.c

    def __hash__(self):
        return hash((self.gf.q, self.var, self.c))

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            ci = self.c[i]
            if not ci:
                continue
            if i == 0:
                parts.append(str(ci))
            else:
                head = "" if ci == 1 else str(ci) + "*"
                xp = self.var if i == 1 else f"{self.var}^{i}"
                parts.append(head + xp)
        return "+".join(parts).replace("+-", "-")

    def __repr__(self):
        return f"Poly(q={self.gf.q}, {self})"


def monic_polys(gf: GF, deg: int, var: str = "T"):
    """Yield all monic polynomials of exact degree deg."""
    if deg < 0:
        return
    for code in range(gf.q**deg):
        cs = []
        c = code
        for _ in range(deg):
            cs.append(c % gf.q)
            c //= gf.q
        cs.append(1)
        yield Poly(gf, cs, var)


def all_polys(gf: GF, max_deg: int, var: str = "T"):
    """Yield all polynomials of degree < max_deg + 1 (i.e. deg <= max_deg),
    including 0, in base-q code order."""
    for code in range(gf.q ** (max_deg + 1)):
        cs = []
        c = code
        for _ in range(max_deg + 1):
            cs.append(c % gf.q)
            c //= gf.q
        yield Poly(gf, cs, var)


FACTOR_DEG_CAP = 6


@lru_cache(maxsize=None)
def factor_monic(f: Poly) -> tuple[tuple[Poly, int], ...]:
    """Factor a monic polynomial by trial division (deg <= FACTOR_DEG_CAP)."""
    if not f.is_monic():
        raise DomainError("factor_monic expects a monic polynomial")
    if f.degree > FACTOR_DEG_CAP:
        raise DomainError(
            f"factorization capped at degree {FACTOR_DEG_CAP}, got {f.degree}")
    gf = f.gf
    out: list[tuple[Poly, int]] = []
    rem = f
    d = 1
    while rem.degree > 0:
        if d > rem.degree // 2:
            out.append((rem, 1))
            break
        found = None
        for p in monic_polys(gf, d, f.var):
            if (rem % p).is_zero():
                found = p
                break
        if found is None:
            d += 1
            continue
        m = 0
        while (rem % found).is_zero():
            rem = rem // found
            m += 1
        out.append((found, m))
    return tuple(sorted(out, key=lambda pm: (pm[0].degree, pm[0].c)))


def monic_divisors(f: Poly) -> list[Poly]:
    """All monic divisors of monic f, ascending by (degree, coeffs)."""
    facs = factor_monic(f)
    divs = [Poly.one(f.gf, f.var)]
    for p, m in facs:
        divs = [d * p**k for d in divs for k in range(m + 1)]
    return sorted(divs, key=lambda d: (d.degree, d.c))


def unit_count(f: Poly) -> int:
    """#(A/f)^x for monic f: multiplicative over prime powers."""
    n = 1
    for p, m in factor_monic(f):
        qd = f.gf.q ** p.degree
        n *= qd**m - qd ** (m - 1)
    return n


class Rat:
    """Reduced fraction num/den in F_q(X) with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.gf, num.var)
        if den.is_zero():
            raise DomainError("zero denominator")
        g = num.gcd(den)
        if not g.is_one():
            num = num // g
            den = den // g
        if not den.is_monic():
            c = den.lc()
            num = num.scale(num.gf.inv(c))
            den = den.scale(den.gf.inv(c))
        self.num = num
        self.den = den

    @staticmethod
    def from_int(gf: GF, n: int, var: str = "T") -> "Rat":
        return Rat(Poly.const(gf, gf.from_int(n), var))

    @property
    def gf(self) -> GF:
        return self.num.gf

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    @property
    def degree(self) -> int:
        """deg num - deg den; the log_q of the absolute value.  -10**9 for 0."""
        if self.num.is_zero():
            return -(10**9)
        return self.num.degree - self.den.degree

    def _wrap(self, other) -> "Rat":
        if isinstance(other, Rat):
            return other
        if isinstance(other, Poly):
            return Rat(other)
        if isinstance(other, int):
            return Rat.from_int(self.gf, other, self.var)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return Rat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Rat(-self.num, self.den)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return Rat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise DomainError("division by zero")
        return Rat(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._wrap(other)
        return o / self

    def __pow__(self, n: int) -> "Rat":
        if n < 0:
            if self.num.is_zero():
                raise DomainError("division by zero")
            return Rat(self.den**-n, self.num**-n)
        return Rat(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def scale(self, a: int) -> "Rat":
        """Multiply by the field element with code a."""
        return Rat(self.num.scale(a), self.den)

    def poly_part(self) -> Poly:
        return self.num // self.den

    def frac_part(self) -> "Rat":
        """The strictly proper part: self minus its polynomial part."""
        return Rat(self.num % self.den, self.den)

    def residue(self) -> int:
        """Coefficient of 1/X in the expansion at infinity (integer code).

        Exact: for the proper part n/d (d monic) the 1/X coefficient is
        lc(n) when deg n = deg d - 1 and 0 when deg n < deg d - 1.
        """
        r = self.num % self.den
        if r.degree == self.den.degree - 1:
            return r.lc()
        return 0

    def shift_residue(self, i: int) -> int:
        """residue of X^i * self (the i-th expansion coefficient)."""
        x = Rat(self.num * Poly.gen(self.gf, self.var) ** i, self.den)
        return x.residue()

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        ns = str(self.num)
        if len(self.num.c) > 1:
            ns = f"({ns})"
        return f"{ns}/({self.den})"

    def __repr__(self):
        return f"Rat(q={self.gf.q}, {self})"


# -- parser ---------------------------------------------------------------


def _tokenize(s: str, var: str):
    toks = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            toks.append(("int", int(s[i:j]), i))
            i = j
        elif ch == var:
            toks.append(("var", ch, i))
            i += 1
        elif ch in "+-*/^()":
            toks.append((ch, ch, i))
            i += 1
        elif s[i : i + 2] == "**":  # pragma: no cover - '**' pre-replaced
            toks.append(("^", "^", i))
            i += 2
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, len(s)))
    return toks


class _Parser:
    def __init__(self, toks, gf: GF, var: str):
        self.toks = toks
        self.k = 0
        self.gf = gf
        self.var = var

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        t = self.toks[self.k]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[0]!r}", t[2])
        self.k += 1
        return t

    def expr(self) -> Rat:
        t = self.peek()
        neg = False
        while t[0] in "+-":
            self.take()
            if t[0] == "-":
                neg = not neg
            t = self.peek()
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Rat:
        acc = self.factor()
        while self.peek()[0] in "*/":
            op = self.take()[0]
            rhs = self.factor()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    raise DomainError("zero denominator")
                acc = acc / rhs
        return acc

    def factor(self) -> Rat:
        t = self.peek()
        if t[0] == "-":
            self.take()
            return -self.factor()
        if t[0] == "+":
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            et = self.take("int")
            return base ** (sign * et[1])
        return base

    def atom(self) -> Rat:
        t = self.take()
        if t[0] == "int":
            return Rat.from_int(self.gf, t[1], self.var)
        if t[0] == "var":
            return Rat(Poly.gen(self.gf, self.var))
        if t[0] == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {t[0]!r}", t[2])


def parse_elem(s: str, q: int, var: str = "T") -> Rat:
    """Parse an element of F_q(var): integers mod p, + - * / ^, parentheses."""
    gf = GF.get(q)
    s = s.replace("**", "^")
    p = _Parser(_tokenize(s, var), gf, var)
    out = p.expr()
    p.take("end")
    return out


__all__ = [
    "Poly", "Rat", "parse_elem", "ParseError", "DomainError", "FieldElem",
    "monic_polys", "all_polys", "factor_monic", "monic_divisors", "unit_count",
]
