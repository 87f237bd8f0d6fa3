"""Command-line front end.

One subcommand per library entry point, JSON-lines on stdout (one record
per result, keys sorted), and a short human summary on stderr unless
--json is given.  Exit codes: 0 success, 1 domain error, 2 verification
failure, 3 usage error.

Configuration comes from defaults, then an optional key=value file
(--config PATH), then flags; later sources win.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .ffarith import (GF, DomainError, LaurentNum, ParseError, Poly, Rat,
                      parse_elem, unit_count)
from .tseries import ConvergenceError, TailBoundError
from . import brackets, carlitz, coleman, distribution, gammaeval, motive, selftest
from .gammaeval import Cycle

__all__ = ["Config", "main"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_USAGE = 3

_CONFIG_KEYS = ("q", "prec", "trunc_t", "deg_f_cap", "seed")


@dataclass
class Config:
    """Resolved run configuration; prec defaults to 128*(q-1)."""
    q: int = 3
    prec: int = 256
    trunc_t: int = 64
    deg_f_cap: int = 6
    seed: int = 0


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            try:
                out[key] = int(val.strip())
            except ValueError:
                raise ValueError(f"line {lineno}: {key} needs an integer") from None
    return out


def _build_config(parser: _Parser, args) -> Config:
    vals = {"q": 3, "prec": 0, "trunc_t": 64, "deg_f_cap": 6, "seed": 0}
    if args.config is not None:
        try:
            vals.update(_read_config(args.config))
        except OSError as ex:
            parser.error(f"--config: {ex}")
        except ValueError as ex:
            parser.error(f"--config {args.config}: {ex}")
    for key in ("q", "prec", "trunc_t", "seed"):
        flag = getattr(args, key, None)
        if flag is not None:
            vals[key] = flag
    try:
        GF.get(vals["q"])
    except DomainError as ex:
        parser.error(str(ex))
    prec = vals["prec"] or 128 * (vals["q"] - 1)
    if prec < 16:
        parser.error("prec must be at least 16")
    if vals["trunc_t"] < 1 or vals["deg_f_cap"] < 1:
        parser.error("trunc_t and deg_f_cap must be positive")
    return Config(q=vals["q"], prec=prec, trunc_t=vals["trunc_t"],
                  deg_f_cap=vals["deg_f_cap"], seed=vals["seed"])


# -- input helpers -------------------------------------------------------------


def _need(parser: _Parser, args, name: str) -> str:
    val = getattr(args, name)
    if val is None:
        parser.error(f"--{name} is required for this subcommand")
    return val


def _rat(cfg: Config, text: str) -> Rat:
    return parse_elem(text, cfg.q)


def _poly(cfg: Config, text: str, flag: str) -> Poly:
    r = _rat(cfg, text)
    if not r.is_poly():
        raise ParseError(f"{flag} {text!r}: expected a polynomial in T")
    return r.num


def _level(cfg: Config, text: str) -> Poly:
    f = _poly(cfg, text, "--f")
    if f.degree > cfg.deg_f_cap:
        raise DomainError(
            f"level degree {f.degree} exceeds the configured cap {cfg.deg_f_cap}")
    return f


def _symbol_cycle(f: Poly, x: Rat) -> Cycle:
    """The one-term cycle [x] at level f; x must have denominator dividing f."""
    rem = f % x.den
    if not rem.is_zero():
        raise DomainError(f"denominator of {x} does not divide the level {f}")
    return Cycle(f, {(x.num * (f // x.den)) % f: 1})


def _threshold(cfg: Config) -> int:
    return max(8, cfg.prec // 2)


def _emit(args, record: dict, human: str | None = None) -> None:
    sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    if human and not args.json:
        sys.stderr.write(human + "\n")


def _value_record(op: str, inputs: dict, value: LaurentNum, cfg: Config) -> dict:
    return {"op": op, "inputs": inputs, "result": value.to_json(),
            "q": cfg.q, "prec": cfg.prec}


def _value_human(op: str, value: LaurentNum) -> str:
    if value.is_zero():
        return f"{op}: 0 to precision u^{value.prec}"
    return f"{op}: leading exponent {value.val}, known mod u^{value.prec}"


# -- subcommand handlers --------------------------------------------------------


def _cmd_period(parser, args, cfg):
    v = carlitz.period(cfg.q, cfg.prec)
    _emit(args, _value_record("period", {}, v, cfg), _value_human("period", v))
    return EXIT_OK


def _cmd_omega_at(parser, args, cfg):
    xs = _need(parser, args, "x")
    t0 = LaurentNum.from_rat(_rat(cfg, xs), cfg.prec)
    v = carlitz.omega_at(cfg.q, t0, cfg.prec, cfg.trunc_t)
    _emit(args, _value_record("omega-at", {"x": xs}, v, cfg),
          _value_human("omega-at", v))
    return EXIT_OK


def _cmd_exp(parser, args, cfg):
    xs = _need(parser, args, "x")
    z = LaurentNum.from_rat(_rat(cfg, xs), cfg.prec)
    v = carlitz.carlitz_exp(z, cfg.prec)
    _emit(args, _value_record("exp", {"x": xs}, v, cfg), _value_human("exp", v))
    return EXIT_OK


def _cmd_e(parser, args, cfg):
    xs = _need(parser, args, "x")
    v = carlitz.e_torsion(_rat(cfg, xs), cfg.prec)
    _emit(args, _value_record("e", {"x": xs}, v, cfg), _value_human("e", v))
    return EXIT_OK


def _cmd_estar(parser, args, cfg):
    xs = _need(parser, args, "x")
    v = carlitz.e_star(_rat(cfg, xs), cfg.prec)
    _emit(args, _value_record("estar", {"x": xs}, v, cfg), _value_human("estar", v))
    return EXIT_OK


def _cmd_divpoly(parser, args, cfg):
    s = _need(parser, args, "a")
    tp = carlitz.div_poly(_poly(cfg, s, "--a"))
    _emit(args, {"op": "divpoly", "inputs": {"a": s}, "result": str(tp),
                 "q": cfg.q, "prec": cfg.prec}, f"divpoly: {tp}")
    return EXIT_OK


def _cmd_adjpoly(parser, args, cfg):
    s = _need(parser, args, "f")
    tp = carlitz.adj_div_poly(_poly(cfg, s, "--f"))
    _emit(args, {"op": "adjpoly", "inputs": {"f": s}, "result": str(tp),
                 "q": cfg.q, "prec": cfg.prec}, f"adjpoly: {tp}")
    return EXIT_OK


def _cmd_cyclo(parser, args, cfg):
    s = _need(parser, args, "f")
    bz = carlitz.cyclotomic(_poly(cfg, s, "--f"))
    _emit(args, {"op": "cyclo", "inputs": {"f": s}, "result": str(bz),
                 "q": cfg.q, "prec": cfg.prec}, f"cyclo: {bz}")
    return EXIT_OK


def _cmd_psi(parser, args, cfg):
    xs = _need(parser, args, "x")
    if args.N is None:
        parser.error("--N is required for this subcommand")
    v = gammaeval.psi_value(_rat(cfg, xs), args.N, cfg.prec)
    _emit(args, _value_record("psi", {"x": xs, "N": args.N}, v, cfg),
          _value_human("psi", v))
    return EXIT_OK


def _cmd_pi(parser, args, cfg):
    xs = _need(parser, args, "x")
    v = gammaeval.pi_value(_rat(cfg, xs), cfg.prec)
    _emit(args, _value_record("pi", {"x": xs}, v, cfg), _value_human("pi", v))
    return EXIT_OK


def _cmd_gamma(parser, args, cfg):
    xs = _need(parser, args, "x")
    v = gammaeval.gamma_value(_rat(cfg, xs), cfg.prec)
    _emit(args, _value_record("gamma", {"x": xs}, v, cfg), _value_human("gamma", v))
    return EXIT_OK


def _cmd_verify_fe(parser, args, cfg):
    which = args.which
    thr = _threshold(cfg)
    inputs: dict = {"which": which}
    if which == "translation":
        xs, as_ = _need(parser, args, "x"), _need(parser, args, "a")
        inputs.update(x=xs, a=as_)
        res = gammaeval.verify_translation(
            _rat(cfg, xs), _poly(cfg, as_, "--a"), cfg.prec)
    elif which == "reflection":
        xs = _need(parser, args, "x")
        inputs.update(x=xs)
        res = gammaeval.verify_reflection(_rat(cfg, xs), cfg.prec)
    elif which == "gauss":
        xs, fs = _need(parser, args, "x"), _need(parser, args, "f")
        inputs.update(x=xs, f=fs)
        res = gammaeval.verify_gauss(_rat(cfg, xs), _level(cfg, fs), cfg.prec)
    else:
        res = gammaeval.verify_reflection_closed(cfg.q, cfg.prec)
    _emit(args, {"op": "verify-fe", "inputs": inputs, "residual": res,
                 "q": cfg.q, "prec": cfg.prec},
          f"verify-fe {which}: residual valuation {res} (threshold {thr})")
    return EXIT_OK if res >= thr else EXIT_VERIFY


def _cmd_bracket(parser, args, cfg):
    xs = _need(parser, args, "x")
    n = args.N if args.N is not None else 0
    val = brackets.bracket_N(_rat(cfg, xs), n)
    _emit(args, {"op": "bracket", "inputs": {"x": xs, "N": n}, "result": val,
                 "q": cfg.q, "prec": cfg.prec}, f"bracket: {val}")
    return EXIT_OK


def _cmd_equiv(parser, args, cfg):
    f = _level(cfg, _need(parser, args, "f"))
    a = _symbol_cycle(f, _rat(cfg, args.symbols[0]))
    b = _symbol_cycle(f, _rat(cfg, args.symbols[1]))
    via_brackets = brackets.equiv_f(a, b)
    via_lattice = distribution.equiv_lattice(a, b, f)
    rec = {"op": "equiv",
           "inputs": {"f": args.f, "symbols": list(args.symbols)},
           "result": {"equivalent": via_brackets, "brackets": via_brackets,
                      "lattice": via_lattice},
           "q": cfg.q, "prec": cfg.prec}
    if via_brackets != via_lattice:
        _emit(args, rec, "equiv: ORACLE DISAGREEMENT")
        return EXIT_VERIFY
    _emit(args, rec, f"equiv: {'equivalent' if via_brackets else 'not equivalent'}")
    return EXIT_OK


def _cmd_rank(parser, args, cfg):
    f = _level(cfg, _need(parser, args, "f"))
    r = distribution.quotient_rank(f)
    _emit(args, {"op": "rank", "inputs": {"f": args.f}, "result": {"rank": r},
                 "q": cfg.q, "prec": cfg.prec}, f"rank: {r}")
    return EXIT_OK


def _cmd_decide(parser, args, cfg):
    f = _level(cfg, _need(parser, args, "f"))
    cycles = [_symbol_cycle(f, _rat(cfg, s)) for s in args.symbols]
    out = distribution.decide_dependence(cycles, f)
    _emit(args, {"op": "decide",
                 "inputs": {"f": args.f, "symbols": list(args.symbols)},
                 "result": out, "q": cfg.q, "prec": cfg.prec},
          f"decide: {'independent' if out['independent'] else 'dependent'}, "
          f"classes {out['classes']}")
    return EXIT_OK


def _cmd_basis(parser, args, cfg):
    f = _level(cfg, _need(parser, args, "f"))
    out = distribution.basis_Bf(f)
    result = {"residues": [str(r) for r in out["residues"]],
              "includes_period": out["includes_period"], "size": out["size"]}
    _emit(args, {"op": "basis", "inputs": {"f": args.f}, "result": result,
                 "q": cfg.q, "prec": cfg.prec},
          f"basis: {result['size']} slots ({len(result['residues'])} residues + period)")
    return EXIT_OK


def _cmd_coleman_verify(parser, args, cfg):
    f = _level(cfg, _need(parser, args, "f"))
    xs = _need(parser, args, "x")
    x = _rat(cfg, xs)
    n_cap = args.N if args.N is not None else 5
    if n_cap < 0:
        parser.error("--N must be nonnegative")
    thr = _threshold(cfg)
    units = sorted(brackets.unit_residues(f), key=str)
    worst = cfg.prec
    for a in units:
        for n in range(n_cap + 1):
            res = coleman.verify_interp(x, f, a, n, cfg.prec)
            worst = min(worst, res)
            _emit(args, {"op": "coleman-verify",
                         "inputs": {"check": "interpolation", "x": xs,
                                    "f": args.f, "a": str(a), "N": n},
                         "residual": res, "q": cfg.q, "prec": cfg.prec})
    rem = f % x.den
    if not rem.is_zero():
        raise DomainError(f"denominator of {x} does not divide the level {f}")
    src = (x.num * (f // x.den)) % f
    zeros = 0
    for a in units:
        if not brackets.bracket(Rat((a * src) % f, f)):
            continue
        zeros += 1
        res = coleman.verify_zero(x, f, a, cfg.prec)
        worst = min(worst, res)
        _emit(args, {"op": "coleman-verify",
                     "inputs": {"check": "zero-locus", "x": xs,
                                "f": args.f, "a": str(a)},
                     "residual": res, "q": cfg.q, "prec": cfg.prec})
    if not args.json:
        sys.stderr.write(
            f"coleman-verify: worst residual {worst} over {len(units) * (n_cap + 1)} "
            f"interpolation cases and {zeros} zero-locus points (threshold {thr})\n")
    return EXIT_OK if worst >= thr else EXIT_VERIFY


def _cmd_motive_verify(parser, args, cfg):
    f = _level(cfg, _need(parser, args, "f"))
    ell = unit_count(f)
    if ell > 8:
        raise DomainError(f"matrix size {ell} exceeds the supported cap 8")
    cyc = Cycle(f, {})
    for s in args.symbols:
        cyc = cyc + _symbol_cycle(f, _rat(cfg, s))
    thr = _threshold(cfg)
    inputs = {"f": args.f, "symbols": list(args.symbols)}
    fe = motive.psi_fe_residual(cyc, cfg.trunc_t, cfg.prec)
    _emit(args, {"op": "motive-verify",
                 "inputs": dict(inputs, check="twist-equation"),
                 "residual": fe, "q": cfg.q, "prec": cfg.prec})
    sp = motive.specialize_check(cyc, cfg.trunc_t, cfg.prec)
    worst = fe
    for i, u in enumerate(sp["units"]):
        res = sp["residuals"][i][i]
        worst = min(worst, res)
        _emit(args, {"op": "motive-verify",
                     "inputs": dict(inputs, check="diagonal", unit=u),
                     "residual": res, "q": cfg.q, "prec": cfg.prec})
    worst = min(worst, sp["min_offdiag"])
    _emit(args, {"op": "motive-verify",
                 "inputs": dict(inputs, check="off-diagonal"),
                 "residual": sp["min_offdiag"], "q": cfg.q, "prec": cfg.prec})
    if not args.json:
        sys.stderr.write(
            f"motive-verify: twist-equation {fe}, min diagonal "
            f"{sp['min_diag']}, off-diagonal {sp['min_offdiag']} (threshold {thr})\n")
    return EXIT_OK if worst >= thr else EXIT_VERIFY


def _cmd_selftest(parser, args, cfg):
    out = selftest.run_all(cfg.seed)
    for rec in out["results"]:
        _emit(args, {"op": "selftest", "inputs": {"name": rec["name"]},
                     "result": {"passed": rec["passed"], "details": rec["details"],
                                "budget": rec["budget"]},
                     "q": cfg.q, "prec": cfg.prec},
              f"{'PASS' if rec['passed'] else 'FAIL'} {rec['name']} "
              f"({rec['elapsed']}s/{rec['budget']}s): {rec['details']}")
    if not args.json:
        sys.stderr.write("selftest: all checks passed\n" if out["passed"]
                         else "selftest: FAILURES above\n")
    return EXIT_OK if out["passed"] else EXIT_VERIFY


# -- parser ---------------------------------------------------------------------


_HANDLERS = {
    "period": (_cmd_period, "fundamental period of the exponential lattice"),
    "omega-at": (_cmd_omega_at, "evaluate the Omega series at a point"),
    "exp": (_cmd_exp, "module exponential of a rational argument"),
    "e": (_cmd_e, "torsion value e(x)"),
    "estar": (_cmd_estar, "adjoint torsion value e*(x)"),
    "divpoly": (_cmd_divpoly, "division polynomial C_a"),
    "adjpoly": (_cmd_adjpoly, "adjoint division polynomial of a monic level"),
    "cyclo": (_cmd_cyclo, "cyclotomic factor of the division polynomial"),
    "psi": (_cmd_psi, "degree-N block value psi_N(x)"),
    "pi": (_cmd_pi, "factorial-product value Pi(x)"),
    "gamma": (_cmd_gamma, "Gamma value x^(-1) Pi(x)"),
    "verify-fe": (_cmd_verify_fe, "check a functional equation residual"),
    "bracket": (_cmd_bracket, "order-N diamond bracket of x"),
    "equiv": (_cmd_equiv, "compare two torsion symbols under both oracles"),
    "rank": (_cmd_rank, "rank of the symbol group modulo known relations"),
    "decide": (_cmd_decide, "partition symbols into equivalence classes"),
    "basis": (_cmd_basis, "explicit basis slots at a prime-power level"),
    "coleman-verify": (_cmd_coleman_verify,
                       "interpolation and zero-locus sweep for g_x"),
    "motive-verify": (_cmd_motive_verify,
                      "twist equation and diagonal specialization of the matrix product"),
    "selftest": (_cmd_selftest, "run the acceptance suite"),
}


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field size (prime power <= 512)")
    common.add_argument("--prec", type=int, help="u-adic precision (default 128*(q-1))")
    common.add_argument("--trunc-t", dest="trunc_t", type=int,
                        help="t-series truncation length (default 64)")
    common.add_argument("--f", help="level / modulus polynomial")
    common.add_argument("--x", help="rational argument")
    common.add_argument("--a", help="polynomial argument")
    common.add_argument("--N", type=int, help="twist / bracket order")
    common.add_argument("--json", action="store_true",
                        help="suppress the human summary on stderr")
    common.add_argument("--config", metavar="PATH", help="key=value config file")
    common.add_argument("--seed", type=int, help="seed for randomized suites")

    parser = _Parser(prog="ffgamma",
                     description="exact function-field gamma-value toolkit")
    sub = parser.add_subparsers(dest="op", required=True, parser_class=_Parser,
                                metavar="subcommand")
    for name, (handler, help_text) in _HANDLERS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        if name == "verify-fe":
            p.add_argument("which",
                           choices=("translation", "reflection", "gauss", "closed"),
                           help="which functional equation to check")
        elif name == "equiv":
            p.add_argument("symbols", nargs=2, metavar="SYMBOL",
                           help="two rational symbols x with den(x) | f")
        elif name in ("decide", "motive-verify"):
            p.add_argument("symbols", nargs="+", metavar="SYMBOL",
                           help="rational symbols x with den(x) | f")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = _build_config(parser, args)
    try:
        return args.handler(parser, args, cfg)
    except ParseError as ex:
        parser.error(str(ex))
    except (DomainError, ConvergenceError, TailBoundError) as ex:
        sys.stderr.write(f"error: {ex}\n")
        return EXIT_DOMAIN
    except RuntimeError as ex:
        sys.stderr.write(f"verification failure: {ex}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
