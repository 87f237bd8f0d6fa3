"""Truncated power series in t over LaurentNum coefficients, and matrices of
them.

A TSeries stores exactly `trunc` coefficients: the series is known modulo
t^trunc, and each coefficient additionally carries its own u-adic precision.
Twisting a series twists its coefficients only (t is fixed by the twist).

Evaluation at a point t0 with |t0| >= 1 must justify dropping the tail
beyond t^trunc: ts_eval demands that the coefficient magnitudes decay over
the trailing window and that the last stored coefficient, pushed to the
first omitted index, lands below the target precision.  When the evidence
is missing it raises TailBoundError instead of silently returning garbage.

tm_product_convergent multiplies a lazily generated sequence of matrices
I + (small), checking per factor that the defect from the identity is a
strictly improving contraction, and stops once the next factor cannot
change the accumulated product at working precision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .ffarith import GF, DomainError, LaurentNum


class TailBoundError(ArithmeticError):
    """Tail of a truncated series cannot be certified below target."""


class ConvergenceError(RuntimeError):
    """An infinite product did not stabilize within its factor budget."""


class TSeries:
    __slots__ = ("gf", "trunc", "c")

    def __init__(self, gf: GF, coeffs, trunc: int | None = None):
        cs = list(coeffs)
        if trunc is None:
            trunc = len(cs)
        if len(cs) != trunc:
            raise DomainError("TSeries wants exactly trunc coefficients")
        self.gf = gf
        self.trunc = trunc
        self.c = tuple(cs)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def constant(x: LaurentNum, trunc: int, zero_prec: int | None = None) -> "TSeries":
        zp = zero_prec if zero_prec is not None else x.prec
        z = LaurentNum.zero(x.gf, zp)
        return TSeries(x.gf, [x] + [z] * (trunc - 1), trunc)

    @staticmethod
    def zero(gf: GF, trunc: int, prec: int) -> "TSeries":
        z = LaurentNum.zero(gf, prec)
        return TSeries(gf, [z] * trunc, trunc)

    @staticmethod
    def one(gf: GF, trunc: int, prec: int) -> "TSeries":
        z = LaurentNum.zero(gf, prec)
        return TSeries(gf, [LaurentNum.one(gf, prec)] + [z] * (trunc - 1), trunc)

    @staticmethod
    def from_laurent_coeffs(gf: GF, coeffs, trunc: int, prec: int) -> "TSeries":
        """Pad a short coefficient list with known zeros at prec."""
        cs = list(coeffs)
        if len(cs) > trunc:
            cs = cs[:trunc]
        z = LaurentNum.zero(gf, prec)
        cs += [z] * (trunc - len(cs))
        return TSeries(gf, cs, trunc)

    @staticmethod
    def from_tpoly(p, prec: int, trunc: int) -> "TSeries":
        """Embed an F_q[t] polynomial with exact constant coefficients."""
        gf = p.gf
        cs = [LaurentNum.make(gf, 0, [ci], prec) if ci else LaurentNum.zero(gf, prec)
              for ci in p.c]
        return TSeries.from_laurent_coeffs(gf, cs, trunc, prec)

    # -- ring operations ----------------------------------------------------------

    def _check(self, other: "TSeries") -> None:
        if self.gf is not other.gf:
            raise DomainError("mixed coefficient fields")

    def __add__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check(other)
        n = min(self.trunc, other.trunc)
        return TSeries(self.gf, [self.c[i] + other.c[i] for i in range(n)], n)

    def __neg__(self):
        return TSeries(self.gf, [-x for x in self.c], self.trunc)

    def __sub__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentNum):
            return TSeries(self.gf, [x * other for x in self.c], self.trunc)
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check(other)
        n = min(self.trunc, other.trunc)
        # zero-to-precision coefficients still participate: their unknown
        # tails cap the precision of every product they enter
        out: list[LaurentNum | None] = [None] * n
        for i, ai in enumerate(self.c[:n]):
            for j, bj in enumerate(other.c[: n - i]):
                term = ai * bj
                k = i + j
                out[k] = term if out[k] is None else out[k] + term
        return TSeries(self.gf, out, n)

    def scale(self, x: LaurentNum) -> "TSeries":
        return TSeries(self.gf, [ci * x for ci in self.c], self.trunc)

    def twist(self, n: int, prec_cap: int | None = None) -> "TSeries":
        return TSeries(self.gf, [ci.twist(n, prec_cap) for ci in self.c],
                       self.trunc)

    def truncate_t(self, new_trunc: int) -> "TSeries":
        if new_trunc >= self.trunc:
            return self
        return TSeries(self.gf, self.c[:new_trunc], new_trunc)

    def truncate_prec(self, prec: int) -> "TSeries":
        return TSeries(self.gf, [x.truncate(prec) for x in self.c], self.trunc)

    def min_prec(self) -> int:
        return min(x.prec for x in self.c)

    def last_nonzero(self) -> int:
        """Largest index with a coefficient not zero-to-precision; -1 if none."""
        for i in range(self.trunc - 1, -1, -1):
            if not self.c[i].is_zero():
                return i
        return -1

    def eval(self, t0: LaurentNum, tail_target: int | None = None,
             tail_window: int = 4) -> LaurentNum:
        """Sum the series at t0, certifying the dropped tail beyond t^trunc.

        Evidence required: over the trailing `tail_window` coefficients that
        are nonzero to precision, the per-index growth rate of
        val(c_i) + i*val(t0) must be positive and nondecreasing (the terms
        decay at an accelerating u-adic rate).  The last observed rate is
        then extrapolated from the last nonzero index to trunc; the result's
        precision is capped at that certified bound.  Series without that
        evidence (fewer than two nonzero coefficients, or flat/growing
        terms) fall back to pushing the final stored magnitude to t^trunc,
        and TailBoundError is raised when the bound misses tail_target
        (default: the Horner sum's own precision).
        """
        if t0.is_zero():
            return self.c[0]
        vt = t0.val
        acc = self.c[-1]
        for i in range(self.trunc - 2, -1, -1):
            acc = acc * t0 + self.c[i]
        target = tail_target if tail_target is not None else acc.prec
        pts = [(i, self.c[i].val + i * vt)
               for i in range(self.trunc) if not self.c[i].is_zero()]
        if len(pts) >= 2:
            tail = pts[-tail_window:]
            rates = [Fraction(v2 - v1, i2 - i1)
                     for (i1, v1), (i2, v2) in zip(tail, tail[1:])]
            ok = all(r > 0 for r in rates) and all(
                r2 >= r1 for r1, r2 in zip(rates, rates[1:]))
            if ok:
                iL, vL = pts[-1]
                bound = int(vL + (self.trunc - iL) * rates[-1])
            else:
                # no usable rate evidence: push either the last nonzero term
                # or the final stored coefficient (whichever says more) flat
                # to the first omitted index
                last = self.c[-1]
                vlast = last.prec if last.is_zero() else last.val
                bound = max(pts[-1][1] + (self.trunc - pts[-1][0]) * vt,
                            vlast + self.trunc * vt)
        else:
            last = self.c[-1]
            v = last.prec if last.is_zero() else last.val
            bound = v + self.trunc * vt
        if bound < target:
            raise TailBoundError(
                f"certified tail bound u^{bound} misses target u^{target}; "
                f"raise trunc_t or the working precision")
        return acc.truncate(min(acc.prec, max(bound, target)))

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.c == other.c

    def __hash__(self):
        return hash((self.trunc, self.c))

    def to_json(self) -> dict:
        return {"trunc_t": self.trunc, "coeffs": [x.to_json() for x in self.c]}

    @staticmethod
    def from_json(d: dict) -> "TSeries":
        cs = [LaurentNum.from_json(x) for x in d["coeffs"]]
        gf = cs[0].gf if cs else GF.get(2)
        return TSeries(gf, cs, int(d["trunc_t"]))

    def __repr__(self):
        return f"TSeries(trunc_t={self.trunc}, c0={self.c[0]!r}, ...)"


def _entry_zero_like(x):
    if isinstance(x, TSeries):
        return TSeries.zero(x.gf, x.trunc, x.min_prec())
    return LaurentNum.zero(x.gf, x.prec)


def _entry_one_like(x):
    if isinstance(x, TSeries):
        return TSeries.one(x.gf, x.trunc, x.min_prec())
    return LaurentNum.one(x.gf, x.prec)


class TMatrix:
    """Dense matrix over TSeries or LaurentNum entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        if not self.rows or any(len(r) != len(self.rows[0]) for r in self.rows):
            raise DomainError("ragged matrix")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def identity_like(self) -> "TMatrix":
        if self.nrows != self.ncols:
            raise DomainError("identity_like on a non-square matrix")
        e0 = self.rows[0][0]
        one = _entry_one_like(e0)
        zero = _entry_zero_like(e0)
        return TMatrix([[one if i == j else zero for j in range(self.ncols)]
                        for i in range(self.nrows)])

    def __add__(self, other):
        if not isinstance(other, TMatrix):
            return NotImplemented
        return TMatrix([[a + b for a, b in zip(ra, rb)]
                        for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, TMatrix):
            return NotImplemented
        return TMatrix([[a - b for a, b in zip(ra, rb)]
                        for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return TMatrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if not isinstance(other, TMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DomainError("matrix shape mismatch")
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = None
                for k in range(self.ncols):
                    term = self.rows[i][k] * other.rows[k][j]
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return TMatrix(out)

    def map(self, fn: Callable) -> "TMatrix":
        return TMatrix([[fn(a) for a in r] for r in self.rows])

    def twist(self, n: int, prec_cap: int | None = None) -> "TMatrix":
        return self.map(lambda a: a.twist(n, prec_cap))

    def transpose(self) -> "TMatrix":
        return TMatrix(list(zip(*self.rows)))

    def det(self):
        """Cofactor expansion (small matrices only)."""
        n = self.nrows
        if n != self.ncols:
            raise DomainError("determinant of a non-square matrix")
        if n == 1:
            return self.rows[0][0]
        acc = None
        for j in range(n):
            a = self.rows[0][j]
            minor = TMatrix([r[:j] + r[j + 1:] for r in self.rows[1:]])
            term = a * minor.det()
            if j % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc

    def __repr__(self):
        return f"TMatrix({self.nrows}x{self.ncols})"


def laurent_mat_inverse(m: TMatrix) -> TMatrix:
    """Exact Gaussian inverse of a LaurentNum matrix, pivoting on the entry
    of largest absolute value to avoid zero-to-precision pivots."""
    n = m.nrows
    if n != m.ncols:
        raise DomainError("inverse of a non-square matrix")
    a = [list(r) for r in m.rows]
    e0 = a[0][0]
    eye = [[LaurentNum.one(e0.gf, e0.prec) if i == j
            else LaurentNum.zero(e0.gf, e0.prec) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv, pv = None, None
        for r in range(col, n):
            x = a[r][col]
            if not x.is_zero() and (pv is None or x.val < pv):
                piv, pv = r, x.val
        if piv is None:
            raise DomainError("matrix is singular to working precision")
        a[col], a[piv] = a[piv], a[col]
        eye[col], eye[piv] = eye[piv], eye[col]
        inv_p = a[col][col].inverse()
        a[col] = [x * inv_p for x in a[col]]
        eye[col] = [x * inv_p for x in eye[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                eye[r] = [x - f * y for x, y in zip(eye[r], eye[col])]
    return TMatrix(eye)


def _defect_val(f: TMatrix) -> int:
    """min u-adic valuation of (f - identity); large when f ~ I."""
    best = None
    for i, row in enumerate(f.rows):
        for j, a in enumerate(row):
            coeffs = a.c if isinstance(a, TSeries) else (a,)
            for k, x in enumerate(coeffs):
                if i == j and k == 0:
                    x = x - LaurentNum.one(x.gf, x.prec)
                v = x.prec if x.is_zero() else x.val
                best = v if best is None else min(best, v)
    return best if best is not None else 0


def tm_product_convergent(
    factors: Iterable[TMatrix],
    budget: int = 64,
    stop_prec: int | None = None,
) -> TMatrix:
    """Ordered product F_1 F_2 ... of matrices converging to something.

    Each factor must differ from the identity by entries of positive u-adic
    valuation (a contraction), with strictly growing valuations factor over
    factor.  The product stops once the next defect valuation reaches the
    working precision (stop_prec, default: precision of the accumulated
    entries), and raises ConvergenceError if the budget runs out first or
    the defects stop improving.
    """
    it: Iterator[TMatrix] = iter(factors)
    prod: TMatrix | None = None
    prev_defect: int | None = None
    used = 0
    for f in it:
        defect = _defect_val(f)
        if defect <= 0:
            raise ConvergenceError(
                f"factor {used + 1} is not a contraction (defect val {defect})")
        if prev_defect is not None and defect <= prev_defect:
            raise ConvergenceError(
                f"defect valuations not improving at factor {used + 1} "
                f"({prev_defect} -> {defect})")
        prev_defect = defect
        if prod is None:
            prod = f
            target = stop_prec
            if target is None:
                target = min(
                    (x.prec for row in f.rows for a in row
                     for x in (a.c if isinstance(a, TSeries) else (a,))),
                )
        else:
            prod = prod * f
        used += 1
        if defect >= target:
            return prod
        if used >= budget:
            raise ConvergenceError(
                f"product not stabilized after {budget} factors "
                f"(defect val {defect} < target {target})")
    if prod is None:
        raise ConvergenceError("empty factor sequence")
    return prod


__all__ = [
    "TSeries", "TMatrix", "tm_product_convergent", "laurent_mat_inverse",
    "TailBoundError", "ConvergenceError",
]
