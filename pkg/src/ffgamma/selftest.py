"""End-to-end acceptance checks.

Each check exercises one headline guarantee of the library -- an identity
residual at fixed precision, exact agreement of two independent oracles,
or an exact algebraic identity -- and returns a record

    {"name", "passed", "details", "elapsed", "budget"}

where `budget` is the wall-clock allowance in seconds and `passed` already
accounts for it.  `run_all` executes every check in order; it is what the
CLI `selftest` subcommand drives.  All randomness is seeded, so repeated
runs produce identical records up to timings.
"""

from __future__ import annotations

import inspect
import random
import time

from .ffarith import GF, LaurentNum, Poly, Rat, monic_divisors, monic_polys, unit_count
from .tseries import TSeries
from .carlitz import (BivarZ, adj_div_poly, adj_from_div, cyclotomic, dfac,
                      div_poly, e_star, e_star_via_digits, omega, omega_at,
                      omega_minus1, period, twisted_to_bivar)
from .gammaeval import (Cycle, moore_det, moore_prod, pi_monomial,
                        verify_gauss, verify_reflection,
                        verify_reflection_closed, verify_translation)
from .brackets import bracket, equiv_f, unit_residues
from .distribution import decide_dependence, equiv_lattice, quotient_rank, rtilde, vec_to_cycle
from .coleman import (count_bracket_zeros, interp_sum_i, interp_sum_ii,
                      pi_from_product, verify_interp, verify_zero)
from .motive import psi_fe_residual, specialize_check

__all__ = [
    "check_period_link", "check_omega_twist", "check_two_oracle",
    "check_rank_formula", "check_dependence_example", "check_interp_sums",
    "check_coleman_values", "check_functional_equations",
    "check_matrix_layer", "check_exact_identities", "check_digit_formula",
    "run_all",
]


def _res(x: LaurentNum) -> int:
    """Residual valuation: prec when x is zero to precision, else min(val, prec)."""
    return x.prec if x.is_zero() else min(x.val, x.prec)


def _record(name: str, budget: float, started: float, ok: bool, details: str) -> dict:
    elapsed = time.perf_counter() - started
    return {"name": name, "passed": bool(ok) and elapsed < budget,
            "details": details, "elapsed": round(elapsed, 3), "budget": budget}


# -- individual checks --------------------------------------------------------


def check_period_link() -> dict:
    """period * Omega(T) + 1 vanishes u-adically (Omega(T) = -1/period)."""
    t0 = time.perf_counter()
    q, prec = 3, 256
    gf = GF.get(q)
    tv = LaurentNum.t_elem(gf, prec)
    r = period(q, prec) * omega_at(q, tv, prec, 64) + LaurentNum.one(gf, prec)
    res = _res(r)
    return _record("period-omega-link", 1.0, t0, res >= 200,
                   f"residual {res} (need 200)")


def check_omega_twist() -> dict:
    """Omega^(-1) - (t - T)*Omega = 0 coefficientwise through t-degree 64."""
    t0 = time.perf_counter()
    q, prec, deg = 3, 256, 64
    gf = GF.get(q)
    trunc = deg + 2
    minus_t = LaurentNum.t_elem(gf, prec).scale(gf.neg(1))
    lin = TSeries.from_laurent_coeffs(
        gf, [minus_t, LaurentNum.one(gf, prec)], trunc, prec)
    diff = omega_minus1(q, prec, trunc) - lin * omega(q, prec, trunc)
    worst = min(_res(diff.c[i]) for i in range(deg + 1))
    return _record("omega-twist-equation", 1.0, t0, worst >= 200,
                   f"worst coefficient residual {worst} through t-degree {deg} (need 200)")


def _combo_levels() -> list[tuple[int, Poly]]:
    out = []
    for q, coeffs in [(2, (0, 0, 1)), (2, (0, 1, 1)), (2, (0, 0, 0, 1)),
                      (2, (1, 1, 0, 1)),
                      (3, (0, 0, 1)), (3, (0, 2, 1)), (3, (0, 0, 0, 1))]:
        out.append((q, Poly(GF.get(q), list(coeffs))))
    return out


def check_two_oracle(seed: int = 0) -> dict:
    """equiv_f and equiv_lattice agree on 500 random cycle pairs.

    Half the pairs are forced equivalent by adding a random element of the
    relation lattice, so both branches of the answer get exercised.
    """
    t0 = time.perf_counter()
    rng = random.Random(seed)
    levels = _combo_levels()
    counts = [72, 72, 72, 71, 71, 71, 71]
    mismatches = 0
    checked = 0
    forced_bad = 0
    for (q, f), m in zip(levels, counts):
        dim = q ** f.degree
        basis = rtilde(f).basis()
        for k in range(m):
            a = vec_to_cycle([rng.randrange(-2, 3) for _ in range(dim)], f)
            if k % 2 == 0:
                shift = [0] * dim
                for row in rng.sample(basis, min(2, len(basis))):
                    c = rng.randrange(-2, 3)
                    shift = [s + c * r for s, r in zip(shift, row)]
                b = a + vec_to_cycle(shift, f)
                forced = True
            else:
                b = vec_to_cycle([rng.randrange(-2, 3) for _ in range(dim)], f)
                forced = False
            r1 = equiv_f(a, b)
            r2 = equiv_lattice(a, b, f)
            checked += 1
            if r1 != r2:
                mismatches += 1
            if forced and not r1:
                forced_bad += 1
    ok = mismatches == 0 and forced_bad == 0 and checked == 500
    return _record("two-oracle-equivalence", 30.0, t0, ok,
                   f"{checked} pairs over {len(levels)} levels, "
                   f"{mismatches} oracle mismatches, {forced_bad} forced pairs missed")


def check_rank_formula() -> dict:
    """Quotient rank equals 1 + (q-2)/(q-1) * #units for every test level."""
    t0 = time.perf_counter()
    bad = []
    for q, f in _combo_levels():
        want = 1 + (q - 2) * unit_count(f) // (q - 1)
        got = quotient_rank(f)
        if got != want:
            bad.append(f"q={q} f={f}: {got} != {want}")
    gf = GF.get(3)
    r = quotient_rank(Poly(gf, [0, 2, 1]))
    if r != 3:
        bad.append(f"q=3 f=T^2+2T: rank {r} != 3")
    return _record("quotient-rank-formula", 10.0, t0, not bad,
                   "; ".join(bad) if bad else "formula holds at 7 levels, rank 3 at q=3 T^2+2T")


def check_dependence_example() -> dict:
    """[1/(T^2-T)], [(T+1)/(T^2-T)] and [1/T] fall into a single class at q=3."""
    t0 = time.perf_counter()
    gf = GF.get(3)
    f = Poly(gf, [0, 2, 1])
    cycles = [Cycle(f, {Poly.one(gf): 1}),
              Cycle(f, {Poly(gf, [1, 1]): 1}),
              Cycle(f, {Poly(gf, [2, 1]): 1})]
    out = decide_dependence(cycles, f)
    ok = out["classes"] == [[0, 1, 2]] and not out["independent"]
    return _record("dependence-example", 5.0, t0, ok,
                   f"classes {out['classes']}, independent={out['independent']}")


def check_interp_sums() -> dict:
    """Both dual-family interpolation sums vanish to high precision.

    Part one over every unit and twist order N <= 5, part two over the
    monic units, at both degree-2 test levels.
    """
    t0 = time.perf_counter()
    gf = GF.get(3)
    prec = 256
    worst_i, worst_ii = prec, prec
    n_i = n_ii = 0
    for coeffs in [(0, 0, 1), (0, 2, 1)]:
        f = Poly(gf, list(coeffs))
        units = unit_residues(f)
        for a in units:
            for N in range(6):
                worst_i = min(worst_i, interp_sum_i(f, a, N, prec))
                n_i += 1
            if a.is_monic():
                worst_ii = min(worst_ii, interp_sum_ii(f, a, prec))
                n_ii += 1
    ok = worst_i >= 200 and worst_ii >= 200
    return _record("interpolation-sums", 30.0, t0, ok,
                   f"part one worst {worst_i} over {n_i} cases, "
                   f"part two worst {worst_ii} over {n_ii} cases (need 200)")


def check_coleman_values() -> dict:
    """Twisted values of g_x interpolate 1 + psi_N and vanish where predicted."""
    t0 = time.perf_counter()
    gf = GF.get(3)
    prec = 256
    f = Poly(gf, [0, 0, 1])
    xs = [Rat(Poly.one(gf), f), Rat(Poly(gf, [1, 1]), f)]
    units = unit_residues(f)
    worst_interp = prec
    n_interp = 0
    worst_zero = prec
    n_zero = 0
    for x in xs:
        for a in units:
            for N in range(6):
                worst_interp = min(worst_interp, verify_interp(x, f, a, N, prec))
                n_interp += 1
        src = (x.num * (f // x.den)) % f
        fired = [a for a in units if bracket(Rat((a * src) % f, f))]
        if len(fired) != count_bracket_zeros(x, f):
            return _record("coleman-values", 60.0, t0, False,
                           f"zero count {len(fired)} != {count_bracket_zeros(x, f)} at x={x}")
        for a in fired:
            worst_zero = min(worst_zero, verify_zero(x, f, a, prec))
            n_zero += 1
    ok = worst_interp >= 180 and worst_zero >= 180
    return _record("coleman-values", 60.0, t0, ok,
                   f"interpolation worst {worst_interp} over {n_interp} cases, "
                   f"zero-locus worst {worst_zero} over {n_zero} points (need 180)")


def _random_nonintegral(rng: random.Random, gf: GF) -> Rat:
    d = rng.randrange(1, 3)
    den = [rng.randrange(gf.q) for _ in range(d)] + [1]
    while True:
        num = [rng.randrange(gf.q) for _ in range(d)]
        if any(num):
            return Rat(Poly(gf, num), Poly(gf, den))


def _random_nonzero_poly(rng: random.Random, gf: GF, maxdeg: int) -> Poly:
    while True:
        p = Poly(gf, [rng.randrange(gf.q) for _ in range(maxdeg + 1)])
        if not p.is_zero():
            return p


def check_functional_equations(seed: int = 0) -> dict:
    """Translation, reflection and base-f multiplication residuals on random inputs."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    prec = 192
    worst = {"translation": prec, "reflection": prec, "gauss": prec}
    for i in range(20):
        gf = GF.get(2 if i % 2 else 3)
        z = _random_nonintegral(rng, gf)
        a0 = _random_nonzero_poly(rng, gf, rng.randrange(3))
        worst["translation"] = min(worst["translation"],
                                   verify_translation(z, a0, prec))
    for i in range(20):
        gf = GF.get(2 if i % 2 else 3)
        worst["reflection"] = min(worst["reflection"],
                                  verify_reflection(_random_nonintegral(rng, gf), prec))
    for i in range(20):
        gf = GF.get(2 if i % 2 else 3)
        z = _random_nonintegral(rng, gf)
        d = rng.randrange(1, 3)
        f = Poly(gf, [rng.randrange(gf.q) for _ in range(d)] + [1])
        worst["gauss"] = min(worst["gauss"], verify_gauss(z, f, prec))
    closed = min(verify_reflection_closed(q, 256) for q in (2, 3))
    ok = all(v >= 180 for v in worst.values()) and closed >= 200
    return _record("functional-equations", 60.0, t0, ok,
                   f"20-case worsts: translation {worst['translation']}, "
                   f"reflection {worst['reflection']}, gauss {worst['gauss']} (need 180); "
                   f"closed reflection {closed} (need 200)")


def check_matrix_layer() -> dict:
    """Perturbation-matrix product: twist equation and diagonal specialization.

    At the degree-one level the infinite twisted product satisfies its
    defining equation, and conjugating its value at t=T by the torsion
    Vandermonde gives the diagonal of inverse product values, cross-checked
    against the independent factor-by-factor product.
    """
    t0 = time.perf_counter()
    gf = GF.get(3)
    prec, trunc_t = 768, 32
    f = Poly(gf, [0, 1])
    a = Cycle(f, {Poly.one(gf): 1})
    fe = psi_fe_residual(a, trunc_t, prec)
    sp = specialize_check(a, trunc_t, prec)
    cross = prec
    for u in unit_residues(f):
        lhs = pi_monomial(a.star(u), prec).inverse()
        rhs = pi_from_product(a, u, prec)
        cross = min(cross, lhs.eq_residual(rhs))
    ok = fe >= 150 and sp["min_diag"] >= 150 and sp["min_offdiag"] >= 150 and cross >= 150
    return _record("matrix-layer", 120.0, t0, ok,
                   f"twist-equation residual {fe}, diagonal {sp['min_diag']}, "
                   f"off-diagonal {sp['min_offdiag']}, product cross-check {cross} (need 150)")


def check_exact_identities(seed: int = 0) -> dict:
    """Exact identities: composition law, adjoint closed form, cyclotomic
    factorization, and the q-power determinant identity."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    bad = []

    gf = GF.get(3)
    for _ in range(50):
        a = _random_nonzero_poly(rng, gf, rng.randrange(4))
        b = _random_nonzero_poly(rng, gf, rng.randrange(4))
        if div_poly(a) * div_poly(b) != div_poly(a * b):
            bad.append(f"composition fails at a={a}, b={b}")
            break

    for d in range(1, 5):
        for fm in monic_polys(gf, d):
            if adj_div_poly(fm) != adj_from_div(fm):
                bad.append(f"adjoint mismatch at f={fm}")
                break

    f2 = Poly(gf, [0, 0, 1])
    acc = None
    for dv in monic_divisors(f2):
        factor = (BivarZ(gf, (Poly.zero(gf, "t"), Poly.one(gf, "t")))
                  if dv.degree == 0 else cyclotomic(dv))
        acc = factor if acc is None else acc * factor
    if acc != twisted_to_bivar(div_poly(f2)):
        bad.append("cyclotomic factor product differs from C_{T^2}")

    gf2 = GF.get(2)
    xs = []
    for m in (3, 2, 1, 0):
        cs = [0] * (m + 1)
        cs[m] = 1
        xs.append(Poly(gf2, cs))
    md = moore_det(xs, 2)
    prod = Poly.one(gf2)
    for i in range(4):
        prod = prod * dfac(2, i)
    if md != moore_prod(xs, 2) or md != prod:
        bad.append("q-power determinant identity fails at q=2 N=3")

    return _record("exact-identities", 30.0, t0, not bad,
                   "; ".join(bad) if bad else
                   "composition (50 pairs), adjoint (deg <= 4), cyclotomic product, "
                   "determinant identity: all exact")


def check_digit_formula() -> dict:
    """Digit formula for e* agrees with the series route on 100 coefficients."""
    t0 = time.perf_counter()
    gf = GF.get(3)
    prec = 128
    xs = [Rat(Poly.one(gf), Poly(gf, [0, 0, 1])),
          Rat(Poly.one(gf), Poly(gf, [0, 2, 1])),
          Rat(Poly(gf, [1, 1]), Poly(gf, [0, 0, 0, 1]))]
    worst = prec
    for x in xs:
        s = e_star(x, prec)
        d = e_star_via_digits(x, prec)
        if s.val != d.val:
            return _record("digit-formula", 5.0, t0, False,
                           f"leading exponents differ at x={x}: {s.val} vs {d.val}")
        worst = min(worst, s.eq_residual(d) - s.val)
    return _record("digit-formula", 5.0, t0, worst >= 100,
                   f"worst agreement depth {worst} coefficients past the leading term (need 100)")


# -- driver -------------------------------------------------------------------


_CHECKS = (check_period_link, check_omega_twist, check_two_oracle,
           check_rank_formula, check_dependence_example, check_interp_sums,
           check_coleman_values, check_functional_equations,
           check_matrix_layer, check_exact_identities, check_digit_formula)


def run_all(seed: int = 0) -> dict:
    """Run every acceptance check in order; `passed` is the conjunction."""
    results = []
    for fn in _CHECKS:
        if "seed" in inspect.signature(fn).parameters:
            results.append(fn(seed=seed))
        else:
            results.append(fn())
    return {"results": results, "passed": all(r["passed"] for r in results)}
