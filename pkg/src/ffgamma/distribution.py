"""Subgroup lattices of the free abelian group on f-torsion symbols.

The ambient group has rank q^{deg f}, one basis slot per residue mod f.  Two
distinguished subgroups are generated here:

  * ``gens_D(f)``: for every monic divisor g of f and every x with (f/g)*x
    integral, the combination [x] - sum_{deg a < deg g} [(x+a)/g];
  * ``gens_R(f)``: the above plus the reflection sums
    sum_{eps in F_q^x} [eps*x] over all residues x.

``rtilde(f)`` is the saturation of the second lattice intersected with the
kernel of the weight functional (sum of multiplicities); equivalence of two
cycles is membership of their difference.  All linear algebra is exact
big-integer row reduction (Hermite/Smith normal forms) — no floating point,
no modular shortcuts — so the results are usable as an oracle against the
bracket-based relation in `brackets`.
"""

from __future__ import annotations

from functools import lru_cache

from .brackets import equiv_f, unit_residues
from .ffarith import DomainError, Poly, Rat, all_polys, factor_monic, monic_divisors, unit_count
from .gammaeval import Cycle

__all__ = [
    "hnf", "snf", "kernel_left", "saturate_rows", "IntLattice",
    "residues_of", "cycle_to_vec", "vec_to_cycle",
    "gens_D", "gens_R", "lattice_D", "lattice_R", "rtilde",
    "quotient_rank", "equiv_lattice", "member_witness",
    "decide_dependence", "basis_Bf",
]


# ---------------------------------------------------------------------------
# exact integer row reduction


def hnf(mat, transform: bool = False):
    """Row Hermite normal form.

    Returns H (list of rows, zero rows dropped) with positive pivots and
    entries above each pivot reduced into [0, pivot); with transform=True
    returns (H, U, perm_rows_used) where U * mat == full H including the
    zero rows it carries at the bottom.
    """
    rows = [list(map(int, r)) for r in mat]
    m = len(rows)
    n = len(rows[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if rows[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[i0] = rows[i0], rows[r]
            if transform:
                U[r], U[i0] = U[i0], U[r]
            clean = True
            for i in range(r + 1, m):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if transform:
                        U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if rows[i][c]:
                        clean = False
            if clean:
                break
        if r < m and rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
                if transform:
                    U[r] = [-a for a in U[r]]
            for j in range(r):
                if rows[j][c]:
                    q = rows[j][c] // rows[r][c]
                    rows[j] = [a - q * b for a, b in zip(rows[j], rows[r])]
                    if transform:
                        U[j] = [a - q * b for a, b in zip(U[j], U[r])]
            r += 1
    H = [rows[i] for i in range(r)]
    if transform:
        return H, U, r
    return H


def kernel_left(mat):
    """Basis rows of {v : v * mat = 0}; the kernel lattice is saturated."""
    m = len(mat)
    if m == 0:
        return []
    _, U, rank = hnf(mat, transform=True)
    return [U[i] for i in range(rank, m)]


def _transpose(mat):
    if not mat:
        return []
    return [list(col) for col in zip(*mat)]


def saturate_rows(mat):
    """Basis of (Q-rowspan of mat) ∩ Z^n, as rows."""
    if not mat:
        return []
    orth = kernel_left(_transpose(mat))
    if not orth:
        n = len(mat[0])
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return kernel_left(_transpose(orth))


def snf(mat):
    """Smith normal form: (diag, U, V) with U*mat*V diagonal, d_i | d_{i+1}."""
    A = [list(map(int, r)) for r in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def addmul_col(dst, src, q):
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        pivots = [(abs(A[i][j]), i, j) for i in range(t, m)
                  for j in range(t, n) if A[i][j]]
        if not pivots:
            break
        _, pi, pj = min(pivots)
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = False
        for i in range(t + 1, m):
            if A[i][t]:
                addmul_row(i, t, A[i][t] // A[t][t])
                dirty = dirty or bool(A[i][t])
        for j in range(t + 1, n):
            if A[t][j]:
                addmul_col(j, t, A[t][j] // A[t][t])
                dirty = dirty or bool(A[t][j])
        if dirty:
            continue
        # enforce divisibility d_t | A[i][j] on the remaining block
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(offender, t, -1)  # fold row t into the offender
            continue
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return [A[i][i] for i in range(min(m, n))], U, V


class IntLattice:
    """A subgroup of Z^n given by generator rows, with a cached HNF basis."""

    __slots__ = ("n", "rows", "_hnf", "_U", "_rank")

    def __init__(self, n: int, rows):
        self.n = n
        self.rows = [list(map(int, r)) for r in rows]
        for r in self.rows:
            if len(r) != n:
                raise DomainError("generator length does not match dimension")
        self._hnf = None
        self._U = None
        self._rank = None

    def _reduce(self):
        if self._hnf is None:
            if self.rows:
                H, U, rank = hnf(self.rows, transform=True)
                self._hnf, self._U, self._rank = H, U, rank
            else:
                self._hnf, self._U, self._rank = [], [], 0

    @property
    def rank(self) -> int:
        self._reduce()
        return self._rank

    def basis(self):
        self._reduce()
        return [list(r) for r in self._hnf]

    def member(self, v) -> bool:
        return self.coords(v) is not None

    def coords(self, v):
        """Coefficients of v over self.rows, or None if v is not in the lattice."""
        self._reduce()
        v = list(map(int, v))
        if len(v) != self.n:
            raise DomainError("vector length does not match dimension")
        ys = [0] * len(self._hnf)
        for i, row in enumerate(self._hnf):
            c = next(j for j, a in enumerate(row) if a)
            if v[c] % row[c]:
                return None
            y = v[c] // row[c]
            ys[i] = y
            if y:
                v = [a - y * b for a, b in zip(v, row)]
        if any(v):
            return None
        # v = sum ys[i] * H[i] = sum ys[i] * (U*rows)[i]
        coords = [0] * len(self.rows)
        for i, y in enumerate(ys):
            if y:
                for j, u in enumerate(self._U[i]):
                    coords[j] += y * u
        return coords

    def saturate(self) -> "IntLattice":
        return IntLattice(self.n, saturate_rows(self.rows))


# ---------------------------------------------------------------------------
# the symbol lattices


@lru_cache(maxsize=None)
def _residue_data(f: Poly):
    res = list(all_polys(f.gf, f.degree - 1, f.var))
    index = {r: i for i, r in enumerate(res)}
    return res, index


def residues_of(f: Poly) -> list[Poly]:
    """All q^{deg f} residues mod f in the canonical enumeration order."""
    return list(_residue_data(f)[0])


def cycle_to_vec(a: Cycle) -> list[int]:
    _, index = _residue_data(a.f)
    v = [0] * len(index)
    for r, n in a.counts.items():
        v[index[r]] = n
    return v


def vec_to_cycle(v, f: Poly) -> Cycle:
    res, _ = _residue_data(f)
    return Cycle(f, {r: int(n) for r, n in zip(res, v) if n})


def gens_D(f: Poly) -> list[Cycle]:
    """Distribution-relation generators over all monic divisors of f."""
    gf = f.gf
    out = []
    for g in monic_divisors(f):
        cof = f // g  # x runs over (g/f)A mod A, i.e. x = c/cof, deg c < deg cof
        for c in all_polys(gf, cof.degree - 1, f.var) if cof.degree > 0 else [Poly.zero(gf, f.var)]:
            x = Rat(c, cof)
            gen = Cycle.symbol(x, f)
            for a in all_polys(gf, g.degree - 1, f.var) if g.degree > 0 else [Poly.zero(gf, f.var)]:
                gen = gen - Cycle.symbol((x + Rat(a)) / Rat(g), f)
            if g.degree == 0:
                assert gen.is_zero()  # the divisor g = 1 contributes nothing
            out.append(gen)
    return out


def gens_R(f: Poly) -> list[Cycle]:
    """gens_D plus the sign sums over every residue.

    The zero residue contributes (q-1)*[0]; keeping it matters because the
    integral symbol [0] is invisible to every bracket functional, so it must
    lie in the saturated relation lattice for the two oracles to agree.
    """
    gf = f.gf
    out = gens_D(f)
    for r in residues_of(f):
        x = Rat(r, f)
        refl = Cycle.zero(f)
        for eps in gf.units():
            refl = refl + Cycle.symbol(x.scale(eps), f)
        out.append(refl)
    return out


@lru_cache(maxsize=None)
def lattice_D(f: Poly) -> IntLattice:
    return IntLattice(len(residues_of(f)), [cycle_to_vec(g) for g in gens_D(f)])


@lru_cache(maxsize=None)
def lattice_R(f: Poly) -> IntLattice:
    return IntLattice(len(residues_of(f)), [cycle_to_vec(g) for g in gens_R(f)])


@lru_cache(maxsize=None)
def rtilde(f: Poly) -> IntLattice:
    """saturation(R_f) ∩ ker(weight), as a basis lattice."""
    res = residues_of(f)
    n = len(res)
    sat = saturate_rows(lattice_R(f).rows)
    if not sat:
        return IntLattice(n, [])
    # weight of a basis combination x*S is x . (S * wvec), where wvec is 1
    # on non-integral residues and 0 on the integral one
    wvec = [0 if r.is_zero() else 1 for r in res]
    w = [[sum(a * b for a, b in zip(row, wvec))] for row in sat]
    karr = kernel_left(w)
    rows = []
    for k in karr:
        rows.append([sum(k[i] * sat[i][j] for i in range(len(sat)))
                     for j in range(n)])
    return IntLattice(n, rows)


def quotient_rank(f: Poly) -> int:
    """Rank of the full symbol group modulo rtilde(f)."""
    return len(residues_of(f)) - rtilde(f).rank


def nu_f(f: Poly) -> int:
    """The expected quotient rank 1 + ((q-2)/(q-1)) * #units."""
    q = f.gf.q
    cnt = unit_count(f)
    assert cnt * (q - 2) % (q - 1) == 0
    return 1 + cnt * (q - 2) // (q - 1)


def equiv_lattice(a: Cycle, b: Cycle, f: Poly | None = None) -> bool:
    """Exact membership test of a - b in rtilde(f)."""
    if f is None:
        f = a.f
    if a.f != f or b.f != f:
        raise DomainError("cycles live at different levels")
    d = a - b
    return rtilde(f).member(cycle_to_vec(d))


def member_witness(a: Cycle, b: Cycle):
    """Coordinates of a - b over the rtilde basis rows, or None."""
    if a.f != b.f:
        raise DomainError("cycles live at different levels")
    return rtilde(a.f).coords(cycle_to_vec(a - b))


def decide_dependence(cycles: list[Cycle], f: Poly) -> dict:
    """Partition cycles into translate-equivalence classes, two oracles deep.

    Every pairwise comparison is run through both the bracket relation and
    the lattice membership test; a disagreement raises RuntimeError (it
    would falsify the equivalence the implementation relies on).  The family
    is reported independent iff all classes are singletons; dependent pairs
    carry the witnessing difference cycle and its lattice coordinates.
    """
    for c in cycles:
        if c.f != f:
            raise DomainError("cycles live at different levels")
    classes: list[list[int]] = []
    witnesses = []
    for i, c in enumerate(cycles):
        placed = False
        for cls in classes:
            j = cls[0]
            via_brackets = equiv_f(c, cycles[j])
            via_lattice = equiv_lattice(c, cycles[j], f)
            if via_brackets != via_lattice:
                raise RuntimeError(
                    f"oracle disagreement on pair ({i},{j}): "
                    f"brackets={via_brackets} lattice={via_lattice}")
            if via_brackets:
                cls.append(i)
                diff = c - cycles[j]
                witnesses.append({
                    "pair": [j, i],
                    "difference": str(diff),
                    "coords": rtilde(f).coords(cycle_to_vec(diff)),
                })
                placed = True
                break
        if not placed:
            classes.append([i])
    return {
        "classes": classes,
        "independent": all(len(cls) == 1 for cls in classes),
        "witnesses": witnesses,
    }


def basis_Bf(f: Poly) -> dict:
    """Non-monic unit slots a/f plus a slot for the period, when f = p^s.

    Raises DomainError unless f is a power of a single irreducible; the
    returned size always equals the quotient rank.
    """
    fac = factor_monic(f)
    if len(fac) != 1:
        raise DomainError(f"{f} is not a prime power")
    gf = f.gf
    slots = [a for a in unit_residues(f) if not a.is_monic()]
    expected = nu_f(f)
    if len(slots) + 1 != expected:
        raise RuntimeError(
            f"basis size {len(slots) + 1} does not match rank {expected}")
    return {
        "residues": slots,
        "includes_period": True,
        "size": len(slots) + 1,
    }
