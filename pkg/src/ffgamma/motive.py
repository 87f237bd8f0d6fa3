"""Matrix models attached to a level: multiplication matrices, perturbation
matrices of interpolation functions, their convergent twisted products, and a
verifier for linear relations that propagate through a twist equation.

Fix a level f and let ell be the number of residues prime to f.  The quotient
by the primitive torsion polynomial is a free module with monomial basis
1, z, ..., z^(ell-1); multiplication by z acts on that basis through a
companion-type matrix Z over F_q[t] whose characteristic polynomial recovers
the primitive torsion polynomial and whose specialization at t = T has the
primitive torsion values as eigenvalues.

An interpolation function g attached to an effective combination of classes
is congruent to 1 + sum c_ij t^i z^j with every scalar |c_ij| < 1, so
multiplication by g acts on the monomial basis through

    Phi = 1 + sum c_ij t^i Z^j,

again the identity plus a contraction.  Twisting raises the scalars c_ij to
the q^N power while fixing t and Z, which makes the ordered product

    Psi = Phi^(1) Phi^(2) Phi^(3) ...

converge entrywise; it satisfies the twist equation Psi^(-1) = Phi Psi.
Specializing Psi at t = T and conjugating by the inverse of the Vandermonde
matrix of primitive torsion values diagonalizes it, and the diagonal entries
are the reciprocal product values of the unit translates of the input
combination — the same numbers produced degree by degree and twist by twist
elsewhere in the package, reached here through a third, purely matrix-shaped
route.

verify_relation checks candidate linear relations in that setting: given a
square matrix Phi, a column psi satisfying psi^(-1) = Phi psi, a row P of
polynomials in t and a row rho of target scalars, it confirms the shape
det Phi = c (t - T)^s by exact synthetic division, then accepts the pair
(P, rho) when P(T) = rho and P psi vanishes identically to truncation.  It
is a verifier only: it never searches for P.
"""

from __future__ import annotations

from typing import Sequence

from .ffarith import GF, DomainError, LaurentNum, Poly, Rat
from .carlitz import BivarZ, cyclotomic, e_torsion, poly_eval_laurent
from .tseries import TMatrix, TSeries, laurent_mat_inverse, tm_product_convergent
from .brackets import unit_residues
from .gammaeval import Cycle, pi_monomial
from .coleman import coleman_g_cycle

__all__ = [
    "mult_matrix_Z", "mult_char_poly", "mult_eigen_residual",
    "phi_matrix", "phi_twist", "psi_matrix", "psi_fe_residual",
    "det_tT_shape", "det_twist_profile", "specialize_check",
    "verify_relation",
]


# ---------------------------------------------------------------------------
# multiplication matrix


def _poly_identity(gf: GF, n: int) -> TMatrix:
    one, zero = Poly.one(gf, "t"), Poly.zero(gf, "t")
    return TMatrix([[one if i == j else zero for j in range(n)]
                    for i in range(n)])


def mult_matrix_Z(f: Poly) -> TMatrix:
    """Matrix of multiplication by z on the monomial basis mod the primitive
    torsion polynomial of the level f.

    Row i holds the coefficients of z * z^i reduced mod that polynomial, so
    the matrix is companion-shaped: ones on the superdiagonal and the negated
    lower coefficients in the last row.  Entries are exact in F_q[t].
    """
    ck = cyclotomic(f)
    ell = ck.deg_z
    gf = f.gf
    one, zero = Poly.one(gf, "t"), Poly.zero(gf, "t")
    rows = [[one if j == i + 1 else zero for j in range(ell)]
            for i in range(ell - 1)]
    rows.append([-ck.zc[j] for j in range(ell)])
    return TMatrix(rows)


def mult_char_poly(f: Poly) -> BivarZ:
    """det(z*1 - Z) computed exactly over F_q[t]; equals the primitive
    torsion polynomial of f because Z is its companion matrix."""
    z_mat = mult_matrix_Z(f)
    gf = f.gf
    ell = z_mat.nrows
    ent = [[BivarZ(gf, [-z_mat[i, j]] + ([Poly.one(gf, "t")]
                   if i == j else []))
            for j in range(ell)] for i in range(ell)]

    bz_zero = BivarZ(gf, [])

    def det(m: list[list[BivarZ]]) -> BivarZ:
        if len(m) == 1:
            return m[0][0]
        acc = None
        for j in range(len(m)):
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            term = m[0][j] * det(minor)
            if j % 2:
                term = bz_zero - term
            acc = term if acc is None else acc - (bz_zero - term)
        return acc

    return det(ent)


def _laurent_pow_list(x: LaurentNum, n: int) -> list[LaurentNum]:
    out = [LaurentNum.one(x.gf, x.prec)]
    for _ in range(n - 1):
        out.append(out[-1] * x)
    return out


def mult_eigen_residual(f: Poly, prec: int) -> int:
    """min residual of Z(T) v_a = e(a/f) v_a over units a, where v_a is the
    column of powers of the torsion value; certifies the eigenvalues."""
    gf = f.gf
    z_mat = mult_matrix_Z(f)
    ell = z_mat.nrows
    t0 = LaurentNum.from_poly(Poly.gen(gf), prec)
    zt = [[poly_eval_laurent(z_mat[i, j], t0) for j in range(ell)]
          for i in range(ell)]
    worst: int | None = None
    for a in unit_residues(f):
        ea = e_torsion(Rat(a, f), prec)
        v = _laurent_pow_list(ea, ell)
        for i in range(ell):
            lhs = zt[i][0] * v[0]
            for j in range(1, ell):
                lhs = lhs + zt[i][j] * v[j]
            r = lhs.eq_residual(ea * v[i])
            worst = r if worst is None else min(worst, r)
    return worst if worst is not None else 0


# ---------------------------------------------------------------------------
# perturbation matrix of an interpolation function


def _phi_scalars(a: Cycle, prec: int):
    """Extract the scalar coefficients c_ij (with the bound |c_ij| < 1
    checked) and the needed powers of Z from the interpolation function."""
    g = coleman_g_cycle(a, prec)
    f = g.f
    gf = f.gf
    ell = g.ell
    one = LaurentNum.one(gf, prec)
    coef: dict[tuple[int, int], LaurentNum] = {}
    for j, column in enumerate(g.zc):
        for i, x in column.items():
            if i == 0 and j == 0:
                x = x - one
            if x.is_zero():
                continue
            if x.val < 1:
                raise DomainError(
                    f"perturbation coefficient at t^{i} z^{j} has valuation "
                    f"{x.val} < 1: the contraction bound fails")
            coef[(i, j)] = x
    jmax = max((j for _, j in coef), default=0)
    z_mat = mult_matrix_Z(f)
    zpows = [_poly_identity(gf, ell)]
    while len(zpows) <= jmax:
        zpows.append(zpows[-1] * z_mat)
    return gf, ell, coef, zpows


def _phi_from_scalars(scal, twist_n: int, prec: int,
                      trunc_t: int | None) -> TMatrix:
    gf, ell, coef, zpows = scal
    acc: list[list[dict[int, LaurentNum]]] = [
        [dict() for _ in range(ell)] for _ in range(ell)]
    tdeg = 0
    for (i, j), x in coef.items():
        xn = x.twist(twist_n, prec_cap=prec) if twist_n else x
        zp = zpows[j]
        for r in range(ell):
            for s in range(ell):
                p = zp[r, s]
                for m, code in enumerate(p.c):
                    if not code:
                        continue
                    k = i + m
                    tdeg = max(tdeg, k)
                    cell = acc[r][s]
                    term = xn.scale(code)
                    cell[k] = cell[k] + term if k in cell else term
    if trunc_t is None:
        trunc_t = tdeg + 1
    one = LaurentNum.one(gf, prec)
    zero = LaurentNum.zero(gf, prec)
    rows = []
    for r in range(ell):
        row = []
        for s in range(ell):
            cs = [acc[r][s].get(k, zero) for k in range(trunc_t)]
            if r == s:
                cs[0] = cs[0] + one
            row.append(TSeries(gf, cs, trunc_t))
        rows.append(row)
    return TMatrix(rows)


def phi_twist(a: Cycle, twist_n: int, prec: int,
              trunc_t: int | None = None) -> TMatrix:
    """Matrix of multiplication by the twist-n interpolation function of the
    cycle on the monomial basis: identity plus the contraction
    sum c_ij^(q^n) t^i Z^j.  Entries are polynomials in t stored as truncated
    series; with trunc_t omitted the minimal length is used."""
    return _phi_from_scalars(_phi_scalars(a, prec), twist_n, prec, trunc_t)


def phi_matrix(a: Cycle, prec: int, trunc_t: int | None = None) -> TMatrix:
    """Untwisted perturbation matrix (phi_twist at twist 0)."""
    return phi_twist(a, 0, prec, trunc_t)


# ---------------------------------------------------------------------------
# convergent twisted product


def psi_matrix(a: Cycle, trunc_t: int, prec: int, budget: int = 48) -> TMatrix:
    """Ordered product of the twisted perturbation matrices, twist 1 up.

    The twist-N factor differs from the identity by entries of valuation at
    least q^N, so the product contracts; it stops once the next factor cannot
    move the accumulated entries at working precision and satisfies the twist
    equation checked by psi_fe_residual.
    """
    scal = _phi_scalars(a, prec)

    def factors():
        for n in range(1, budget + 2):
            yield _phi_from_scalars(scal, n, prec, trunc_t)

    return tm_product_convergent(factors(), budget=budget, stop_prec=prec)


def _ts_eq_residual(x: TSeries, y: TSeries) -> int:
    n = min(x.trunc, y.trunc)
    return min(x.c[i].eq_residual(y.c[i]) for i in range(n))


def _mat_eq_residual(x: TMatrix, y: TMatrix) -> int:
    return min(_ts_eq_residual(x[i, j], y[i, j])
               for i in range(x.nrows) for j in range(x.ncols))


def psi_fe_residual(a: Cycle, trunc_t: int, prec: int,
                    budget: int = 48) -> int:
    """Residual valuation of the twist equation for the convergent product,
    checked in the equivalent positive-twist form Psi = Phi^(1) Psi^(1)."""
    psi = psi_matrix(a, trunc_t, prec, budget)
    phi1 = phi_twist(a, 1, prec, trunc_t)
    return _mat_eq_residual(psi, phi1 * psi.twist(1, prec))


# ---------------------------------------------------------------------------
# determinant shape and specialization


def _series_eval_poly(p: TSeries, t0: LaurentNum) -> LaurentNum:
    """Horner evaluation of a series taken as an exact polynomial (no tail
    certificate: callers pass entries that are polynomials by contract)."""
    top = p.last_nonzero()
    if top < 0:
        return LaurentNum.zero(p.gf, p.min_prec())
    acc = p.c[top]
    for i in range(top - 1, -1, -1):
        acc = acc * t0 + p.c[i]
    return acc


def _det_coeffs(m: TMatrix) -> list[LaurentNum]:
    """Determinant of a matrix of polynomial entries as a coefficient list,
    with the entries zero-padded first so no true coefficient is cut off."""
    maxdeg = max((e.last_nonzero() for row in m.rows for e in row),
                 default=-1)
    need = m.nrows * max(maxdeg, 0) + 1
    if any(e.trunc < need for row in m.rows for e in row):
        m = m.map(lambda s: TSeries.from_laurent_coeffs(
            s.gf, s.c, max(need, s.trunc), s.min_prec()))
    d = m.det()
    top = d.last_nonzero()
    if top < 0:
        raise DomainError("determinant is zero to working precision")
    return list(d.c[:top + 1])


def _divide_out(cur: list[LaurentNum], root: LaurentNum,
                residual: int | None) -> tuple[int, list, int | None]:
    """Divide the polynomial by (t - root) as often as the remainder stays
    zero to precision; returns (count, quotient, residual floor)."""
    count = 0
    while len(cur) > 1:
        quo: list = [None] * (len(cur) - 1)
        quo[-1] = cur[-1]
        for i in range(len(cur) - 2, 0, -1):
            quo[i - 1] = cur[i] + root * quo[i]
        rem = cur[0] + root * quo[0]
        if not rem.is_zero():
            break
        residual = rem.prec if residual is None else min(residual, rem.prec)
        cur = quo
        count += 1
        while len(cur) > 1 and cur[-1].is_zero():
            residual = min(residual, cur[-1].prec)
            cur.pop()
    return count, cur, residual


def det_tT_shape(m: TMatrix, prec: int | None = None) -> dict:
    """Check det m = c (t - T)^s by repeated exact synthetic division.

    Returns {"s", "unit_val", "residual"} where residual is the valuation
    floor certifying the discarded remainders and the vanishing of every
    coefficient above the final constant.  Raises DomainError when the
    determinant is zero to precision or a nonconstant factor prime to
    (t - T) survives.  This strict shape holds for the matrices fed to
    verify_relation and for perturbation matrices at degree-one levels;
    higher-degree levels acquire factors at twisted points and belong to
    det_twist_profile instead.
    """
    cur = _det_coeffs(m)
    gf = cur[0].gf
    if prec is None:
        prec = min(c.prec for c in cur)
    t0 = LaurentNum.from_poly(Poly.gen(gf), prec)
    s, cur, residual = _divide_out(cur, t0, None)
    if len(cur) > 1:
        raise DomainError(
            f"determinant is not c*(t-T)^s: degree-{len(cur) - 1} factor "
            f"prime to (t-T) remains after s={s} divisions")
    unit = cur[0]
    if unit.is_zero():
        raise DomainError("determinant unit part is zero to precision")
    if residual is None:
        residual = unit.prec
    return {"s": s, "unit_val": unit.val, "residual": residual}


def det_twist_profile(m: TMatrix, prec: int | None = None,
                      max_twist: int = 8) -> dict:
    """Factor det m as c * prod_N (t - T^(q^N))^(s_N) over twists N >= 0.

    Perturbation matrices of interpolation functions vanish at the twisted
    point of each unit whose translate has bracket support N, so their
    determinants factor over the twisted Carlitz points rather than at t=T
    alone once the level has degree > 1.  Returns {"orders": {N: s_N},
    "total", "unit_val", "residual"}; raises DomainError if a nonconstant
    factor survives all twists up to max_twist.
    """
    cur = _det_coeffs(m)
    gf = cur[0].gf
    if prec is None:
        prec = min(c.prec for c in cur)
    t0 = LaurentNum.from_poly(Poly.gen(gf), prec)
    residual: int | None = None
    orders: dict[int, int] = {}
    for n in range(max_twist + 1):
        if len(cur) == 1:
            break
        root = t0.twist(n, prec_cap=prec) if n else t0
        cnt, cur, residual = _divide_out(cur, root, residual)
        if cnt:
            orders[n] = cnt
    if len(cur) > 1:
        raise DomainError(
            f"degree-{len(cur) - 1} determinant factor survives all twisted "
            f"points up to twist {max_twist}")
    unit = cur[0]
    if unit.is_zero():
        raise DomainError("determinant unit part is zero to precision")
    if residual is None:
        residual = unit.prec
    return {"orders": orders, "total": sum(orders.values()),
            "unit_val": unit.val, "residual": residual}


def specialize_check(a: Cycle, trunc_t: int, prec: int,
                     budget: int = 48) -> dict:
    """Specialize the convergent product at t = T and diagonalize it.

    Conjugating by the inverse Vandermonde of the primitive torsion values
    must leave a diagonal matrix whose entries are the reciprocal product
    values of the unit translates of the cycle, in the sorted-unit order.
    Reports per-entry residual valuations: diagonal entries compare against
    independently computed products, off-diagonal entries against zero.
    """
    f = a.f
    gf = f.gf
    units = unit_residues(f)
    ell = len(units)
    psi = psi_matrix(a, trunc_t, prec, budget)
    t0 = LaurentNum.from_poly(Poly.gen(gf), prec)
    # tail_target 0: accept whatever tail precision the decay certifies (the
    # report carries the resulting residuals; a hard error here would hide
    # healthy results whose Horner precision overshoots the certificate)
    psi_t = psi.map(lambda s: s.eval(t0, tail_target=0))
    tv = [e_torsion(Rat(u, f), prec) for u in units]
    vand = TMatrix([[_laurent_pow_list(tv[k], ell)[i] for k in range(ell)]
                    for i in range(ell)])
    try:
        m_inv = laurent_mat_inverse(vand)
    except DomainError as exc:
        raise DomainError(
            f"torsion-value Vandermonde is singular to precision: {exc}")
    diag = m_inv * psi_t * vand
    residuals = []
    min_diag: int | None = None
    min_off: int | None = None
    for i in range(ell):
        row = []
        for j in range(ell):
            x = diag[i, j]
            if i == j:
                expect = pi_monomial(a.star(units[i]), prec).inverse()
                r = x.eq_residual(expect)
                min_diag = r if min_diag is None else min(min_diag, r)
            else:
                r = x.prec if x.is_zero() else x.val
                min_off = r if min_off is None else min(min_off, r)
            row.append(r)
        residuals.append(row)
    out = {
        "level": str(f), "ell": ell,
        "units": [str(u) for u in units],
        "residuals": residuals,
        "min_diag": min_diag if min_diag is not None else 0,
    }
    if min_off is not None:
        out["min_offdiag"] = min_off
    return out


# ---------------------------------------------------------------------------
# relation verifier


def _as_row(p, n: int) -> tuple:
    if isinstance(p, TMatrix):
        if p.nrows != 1 or p.ncols != n:
            raise DomainError("relation row has the wrong shape")
        return p.rows[0]
    row = tuple(p)
    if len(row) != n:
        raise DomainError("relation row has the wrong shape")
    return row


def verify_relation(phi: TMatrix, psi: TMatrix, p_row, rho,
                    threshold: int | None = None) -> dict:
    """Verify a candidate linear relation against a twist equation.

    Preconditions (DomainError when violated): phi is square, psi is a
    column with psi^(-1) = phi psi to precision, and det phi = c (t - T)^s
    under exact synthetic division.  The candidate (p_row, rho) — a row of
    polynomials in t and its claimed specialization at t = T — is then
    accepted iff p_row(T) = rho and p_row . psi vanishes identically, both
    to the residual threshold (default: half the working precision).
    """
    n = phi.nrows
    if phi.ncols != n:
        raise DomainError("twist-equation matrix must be square")
    if psi.ncols != 1 or psi.nrows != n:
        raise DomainError("solution column has the wrong shape")
    prow = _as_row(p_row, n)
    rrow = tuple(rho)
    if len(rrow) != n:
        raise DomainError("target row has the wrong shape")
    gf = phi[0, 0].gf
    workprec = min(min(e.min_prec() for r in phi.rows for e in r),
                   min(e.min_prec() for r in psi.rows for e in r))
    if threshold is None:
        threshold = max(8, workprec // 2)
    fe = _mat_eq_residual(psi, phi.twist(1, workprec) * psi.twist(1, workprec))
    if fe < threshold:
        raise DomainError(
            f"twist-equation precondition fails: residual {fe} < {threshold}")
    shape = det_tT_shape(phi, workprec)
    t0 = LaurentNum.from_poly(Poly.gen(gf), workprec)
    val_res: int | None = None
    for pi, ri in zip(prow, rrow):
        r = _series_eval_poly(pi, t0).eq_residual(ri)
        val_res = r if val_res is None else min(val_res, r)
    comb = None
    for pi, (si,) in zip(prow, psi.rows):
        term = pi * si
        comb = term if comb is None else comb + term
    ser_res = min((c.prec if c.is_zero() else c.val) for c in comb.c)
    accepted = val_res >= threshold and ser_res >= threshold
    return {
        "n": n,
        "fe_residual": fe,
        "det_shape": shape,
        "value_residual": val_res,
        "series_residual": ser_res,
        "threshold": threshold,
        "accepted": accepted,
    }
