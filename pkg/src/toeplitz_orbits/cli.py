"""Command-line front end.

Every verdict printed here comes from a library call; this module only
parses arguments, orchestrates and formats.  Exit status: 0 success,
1 verdict failure, 2 input error.  Diagnostics go to stderr prefixed with
``error[<kind>]:`` or ``verdict[fail]:``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from fractions import Fraction

from . import constructions as cons
from . import ntcore as nt
from . import orbitstats as ost
from .words import load_tpv, save_tpv, dumps_tpv

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class PolynomialSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class InputError(ValueError):
    pass


# ----------------------------------------------------------------------------
# polynomial parsing

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\d*\.\d+)|(\d+)|([mx])|([-+*^])|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        start = mt.start() + (len(mt.group(0)) - len(mt.group(0).lstrip()))
        dec, num, var, op, bad = mt.groups()
        if dec is not None:
            raise PolynomialSyntaxError(f"non-integer coefficient {dec!r}", start)
        if bad is not None:
            raise PolynomialSyntaxError(f"unexpected {bad!r}", start)
        kind = "num" if num else "var" if var else "op"
        toks.append((kind, num or var or op, start))
        pos = mt.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_polynomial(text: str) -> nt.IntPolynomial:
    """Integer polynomial in m (or x) with + - * ^ and literal integer exponents."""
    toks = _tokenize(text)
    i = 0
    variable = None

    def peek():
        return toks[i]

    def take():
        nonlocal i
        tok = toks[i]
        i += 1
        return tok

    def factor():
        nonlocal variable
        kind, val, pos = take()
        if kind == "num":
            base = nt.IntPolynomial((int(val),))
        elif kind == "var":
            if variable is not None and val != variable:
                raise PolynomialSyntaxError("mixed variables", pos)
            variable = val
            base = nt.IntPolynomial.x()
        else:
            raise PolynomialSyntaxError(f"expected a number or variable, got {val or 'end'!r}", pos)
        if peek()[1] == "^" and peek()[0] == "op":
            take()
            ekind, eval_, epos = take()
            if ekind != "num":
                raise PolynomialSyntaxError("exponent must be an integer literal", epos)
            out = nt.IntPolynomial((1,))
            for _ in range(int(eval_)):
                out = out * base
            return out
        return base

    def term():
        out = factor()
        while peek()[:2] == ("op", "*"):
            take()
            out = out * factor()
        return out

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    poly = term() * sign
    while peek()[0] == "op" and peek()[1] in "+-":
        s = -1 if take()[1] == "-" else 1
        poly = poly + term() * s
    kind, val, pos = peek()
    if kind != "end":
        raise PolynomialSyntaxError(f"unexpected {val!r}", pos)
    return poly


# ----------------------------------------------------------------------------
# argument helpers


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in re.split(r"[,\s]+", text.strip()) if v]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _poly_arg(text: str) -> nt.IntPolynomial:
    try:
        return parse_polynomial(text)
    except PolynomialSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _cylinder(text: str) -> ost.CylinderFunction:
    if text == "G":
        return ost.CylinderFunction.G()
    if re.fullmatch(r"[01]+", text) and len(text) % 2 == 1:
        return ost.CylinderFunction.indicator(text)
    raise InputError(f"cylinder must be G or an odd-length 0/1 window, got {text!r}")


def _increasing(values: list[int], what: str) -> list[int]:
    if not values or any(b <= a for a, b in zip(values, values[1:])) or values[0] < 1:
        raise InputError(f"{what} must be positive and strictly increasing")
    return values


def _frac_json(v: Fraction) -> dict:
    return {"value": ost.frac_str(v), "decimal": ost.frac_dec(v)}


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=1) + "\n")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


GNUPLOT = """set datafile separator ','
set key autotitle columnhead
set xlabel 'N'
set ylabel 'average'
set logscale x
plot '{csv}' using 1:6 with lines title 'low', '' using 1:7 with lines title 'high'
"""


# ----------------------------------------------------------------------------
# commands


def _config(args, kind: str) -> cons.ConstructionConfig:
    mode = cons.STRICT if args.strict else cons.RELAXED
    kw = dict(
        kind=kind,
        mode=mode,
        fill_policy=args.fill,
        seed=args.seed,
        budget=args.budget,
        levels=args.levels,
    )
    if kind == "IWANIK":
        kw["poly"] = args.poly
        kw["tower"] = args.tower
    else:
        kw["k"], kw["l"] = args.k, args.l
        if kind == "A":
            kw["primes"] = args.primes
        else:
            kw["tower"] = args.tower
    if mode == cons.STRICT:
        kw["primes"] = kw["tower"] = None
    elif kw.get("primes") is None and kw.get("tower") is None:
        raise InputError("--relaxed needs --primes or --tower")
    return cons.ConstructionConfig(**kw)


def cmd_construct(args, kind: str) -> int:
    cfg = _config(args, kind)
    try:
        pair = cons.build(cfg)
    except cons.StrictInfeasible as exc:
        print(f"verdict[fail]: strict condition {exc.condition} infeasible: {exc}", file=sys.stderr)
        if exc.plan is not None:
            _emit_json({"report_version": 1, "plan": exc.plan.as_dict()}, sys.stdout)
        return EXIT_FAIL
    except cons.BudgetExceeded as exc:
        print(f"verdict[fail]: budget exceeded: {exc}", file=sys.stderr)
        if exc.plan is not None:
            _emit_json({"report_version": 1, "plan": exc.plan.as_dict()}, sys.stdout)
        return EXIT_FAIL
    if args.output in (None, "-"):
        sys.stdout.write(dumps_tpv(pair))
    else:
        save_tpv(pair, args.output)
    return EXIT_OK


def cmd_nt(args) -> int:
    out = sys.stdout
    if args.ntcmd == "rho":
        if args.a is None:
            print(nt.rho_max(args.k, args.n), file=out)
        else:
            print(nt.rho(args.k, args.N, args.n, args.a), file=out)
    elif args.ntcmd == "residues":
        rs = nt.power_residues(args.n, args.k, units_only=args.units)
        print(" ".join(map(str, rs.to_list())), file=out)
    elif args.ntcmd == "perm":
        if args.lift is not None:
            ok = nt.lift_criterion(args.poly, args.lift)
            print(f"lift criterion mod {args.lift}^2: {'PERMUTATION' if ok else 'NOT-PERMUTATION'}", file=out)
        else:
            ok = nt.is_permutation_mod_factored(args.poly, args.n)
            print("PERMUTATION" if ok else "NOT-PERMUTATION", file=out)
    elif args.ntcmd == "dickson":
        D = nt.dickson(args.n, args.alpha)
        if args.x is None:
            print(nt.format_polynomial(D, "x"), file=out)
        else:
            lhs, rhs = nt.dickson_functional_value(args.n, args.alpha, Fraction(args.x))
            print(f"{lhs} {rhs} {'EQUAL' if lhs == rhs else 'DIFFERENT'}", file=out)
            if lhs != rhs:
                return EXIT_FAIL
    elif args.ntcmd == "weil":
        try:
            c = nt.weil_count(args.p, args.k, args.l, args.a)
        except nt.WeilBoundViolation as exc:
            print(f"verdict[fail]: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"{c} (bound {nt.weil_bound(args.p, args.k, args.l):.2f}) OK", file=out)
    elif args.ntcmd == "aset":
        res = nt.build_a_set(args.n, args.k, args.l)
        _emit_json(
            {
                "report_version": 1,
                "n": args.n,
                "size": res.size,
                "est1_bound": res.est1_bound,
                "est1_holds": res.est1_holds,
                "strict_hypotheses": res.strict,
                "members": res.aset.to_list() if args.members else None,
            },
            out,
        )
    return EXIT_OK


def _average_rows(args, pair, F):
    grid = _increasing(args.N, "--N")
    jobs = [(r, N) for r in args.shift for N in grid]

    def run(job):
        return ost.birkhoff_average(pair, args.poly, job[0], job[1], F)

    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(args.threads) as ex:
            vals = list(ex.map(run, jobs))
    else:
        vals = [run(j) for j in jobs]
    return jobs, vals


def cmd_average(args) -> int:
    pair = load_tpv(args.pair)
    F = _cylinder(args.cylinder)
    jobs, vals = _average_rows(args, pair, F)
    fh, close = _open_out(args.output)
    try:
        w = csv.writer(fh, lineterminator="\n")
        head = ["N", "low", "high", "resolved", "unresolved", "low_decimal", "high_decimal"]
        if len(args.shift) > 1:
            head.append("shift")
        w.writerow(head)
        for (r, N), iv in zip(jobs, vals):
            row = iv.as_row(N) + [ost.frac_dec(iv.low), ost.frac_dec(iv.high)]
            if len(args.shift) > 1:
                row.append(str(r))
            w.writerow(row)
    finally:
        if close:
            fh.close()
    if args.gnuplot:
        with open(args.gnuplot, "w") as g:
            g.write(GNUPLOT.format(csv=args.output or "-"))
    return EXIT_OK


def cmd_checkpoints(args) -> int:
    pair = load_tpv(args.pair)
    try:
        rep = ost.checkpoint_report(pair, args.poly)
    except ost.MissingCheckpoints as exc:
        raise InputError(str(exc)) from exc
    _emit_json(rep.as_dict(), sys.stdout)
    if args.require_alternation and not rep.alternates:
        print("verdict[fail]: checkpoint averages do not alternate in sign", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_probe(args) -> int:
    pair = load_tpv(args.pair)
    F = _cylinder(args.cylinder)
    grid = _increasing(args.N, "--N")
    rep = ost.convergence_probe(
        pair, args.poly, F, args.shift, grid, t=args.level, slack=not args.no_slack, workers=args.threads
    )
    _emit_json(
        {
            "report_version": 1,
            "level": rep.level,
            "n": rep.n,
            "shift_question_density": rep.density.value,
            "density_argmax": rep.density.argmax,
            "density_exact": rep.density.exact,
            "eps": _frac_json(rep.eps),
            "ok": rep.ok,
            "oscillations": [
                {
                    "shift": o.shift,
                    "N1": o.N1,
                    "N2": o.N2,
                    "oscillation": _frac_json(o.value),
                    "bound": _frac_json(o.bound),
                    "holds": o.holds,
                }
                for o in rep.oscillations
            ],
        },
        sys.stdout,
    )
    if not rep.ok:
        print("verdict[fail]: oscillation exceeds the convergence bound", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_equi(args) -> int:
    pair = load_tpv(args.pair)
    F = _cylinder(args.cylinder)
    tol_text = os.environ.get("TOL_OVERRIDE", args.tol)
    try:
        tol = Fraction(tol_text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad tolerance {tol_text!r}") from exc
    try:
        rep = ost.equidistribution_check(pair, args.poly, F, tol, r=args.shift)
    except ost.NotPermutation as exc:
        raise InputError(str(exc)) from exc
    _emit_json(
        {
            "report_version": 1,
            "orbit": [ost.frac_str(rep.orbit.low), ost.frac_str(rep.orbit.high)],
            "measure": [ost.frac_str(rep.measure.low), ost.frac_str(rep.measure.high)],
            "tol": ost.frac_str(rep.tol),
            "passed": rep.passed,
            "identity_diff": ost.frac_str(rep.identity_diff),
            "identity_bound": ost.frac_str(rep.identity_bound),
            "identity_holds": rep.identity_holds,
        },
        sys.stdout,
    )
    if not (rep.passed and rep.identity_holds):
        print("verdict[fail]: equidistribution check failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_density(args) -> int:
    pair = load_tpv(args.pair)
    rep = ost.density_verdict(pair, args.poly, args.level)
    _emit_json(
        {
            "report_version": 1,
            "verdict": rep.verdict.value,
            "essential_periods": rep.essential,
            "witness_period": rep.witness_period,
            "missing_residues": rep.missing,
        },
        sys.stdout,
    )
    return EXIT_OK


def cmd_ap(args) -> int:
    cfg = cons.ConstructionConfig("IWANIK", poly=args.poly, tower=args.tower)
    _, blocks = cons.build_iwanik(cfg)
    pairs = [(args.t, args.s)] if args.t is not None else [
        (t, s) for s in range(len(blocks.levels)) for t in range(s)
    ]
    entries = [e for t, s in pairs for e in ost.iwanik_ap_check(blocks, t, s)]
    ok = all(e.matches for e in entries)
    _emit_json(
        {
            "report_version": 1,
            "ratios": blocks.ratios(),
            "all_match": ok,
            "entries": [
                {
                    "t": e.t,
                    "s": e.s,
                    "eps": e.e,
                    "eps_prime": e.e2,
                    "ap": ost.frac_str(e.value),
                    "closed_form": ost.frac_str(e.expected),
                    "matches": e.matches,
                }
                for e in entries
            ],
        },
        sys.stdout,
    )
    if not ok:
        print("verdict[fail]: ap values differ from the closed form", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    pair = load_tpv(args.pair)
    rep = cons.verify_construction_invariants(pair, args.kind)
    _emit_json({"report_version": 1, **rep.as_dict()}, sys.stdout)
    if not rep.ok:
        print("verdict[fail]: construction invariants violated", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toeplitz-orbits", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker threads for average/probe")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def construct(name, kind):
        c = sub.add_parser(name, help=f"build construction {kind} and emit TPV1")
        if kind == "IWANIK":
            c.add_argument("--poly", type=_poly_arg, required=True)
            c.add_argument("--tower", type=_int_list, help="block ratios m_0,m_1,...")
        else:
            c.add_argument("--k", type=int, required=True)
            c.add_argument("--l", type=int, required=True)
            if kind == "A":
                c.add_argument("--primes", type=_int_list)
            else:
                c.add_argument("--tower", type=_int_list, help="moduli n_1,n_2,...")
        g = c.add_mutually_exclusive_group()
        g.add_argument("--strict", action="store_true")
        g.add_argument("--relaxed", action="store_true")
        c.add_argument("--levels", type=int, default=1)
        c.add_argument("--fill", choices=["zero", "one", "seeded"], default="zero")
        c.add_argument("--seed", type=int)
        c.add_argument("--budget", type=int, default=cons.DEFAULT_BUDGET)
        c.add_argument("-o", "--output")
        c.set_defaults(func=lambda a, kind=kind: cmd_construct(a, kind))

    construct("construct-a", "A")
    construct("construct-b", "B")
    construct("construct-iwanik", "IWANIK")

    n = sub.add_parser("nt", help="number-theoretic primitives")
    nsub = n.add_subparsers(dest="ntcmd", required=True, parser_class=_Parser)
    r = nsub.add_parser("rho")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--N", type=int)
    r.add_argument("--a", type=int, help="omit for the maximum over a")
    r = nsub.add_parser("residues")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--units", action="store_true")
    r = nsub.add_parser("perm")
    r.add_argument("--poly", type=_poly_arg, required=True)
    r.add_argument("--n", type=int)
    r.add_argument("--lift", type=int, metavar="P")
    r = nsub.add_parser("dickson")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--alpha", type=int, required=True)
    r.add_argument("--x", help="rational x for the functional identity")
    r = nsub.add_parser("weil")
    for name in ("p", "k", "l", "a"):
        r.add_argument(f"--{name}", type=int, required=True)
    r = nsub.add_parser("aset")
    for name in ("n", "k", "l"):
        r.add_argument(f"--{name}", type=int, required=True)
    r.add_argument("--members", action="store_true")
    n.set_defaults(func=cmd_nt)

    def analysis(name, func, poly_required=True):
        c = sub.add_parser(name)
        c.add_argument("--pair", required=True)
        c.add_argument("--poly", type=_poly_arg, required=poly_required)
        c.set_defaults(func=func)
        return c

    c = analysis("average", cmd_average)
    c.add_argument("--N", type=_int_list, required=True)
    c.add_argument("--shift", type=_int_list, default=[0])
    c.add_argument("--cylinder", default="G")
    c.add_argument("-o", "--output")
    c.add_argument("--gnuplot", metavar="FILE", help="also write a gnuplot script for the CSV")

    c = analysis("checkpoints", cmd_checkpoints, poly_required=False)
    c.add_argument("--require-alternation", action="store_true")

    c = analysis("probe", cmd_probe)
    c.add_argument("--N", type=_int_list, required=True)
    c.add_argument("--shift", type=_int_list, default=[0])
    c.add_argument("--cylinder", default="G")
    c.add_argument("--level", type=int)
    c.add_argument("--no-slack", action="store_true", help="compare with 8 eps alone")

    c = analysis("equi", cmd_equi)
    c.add_argument("--cylinder", default="G")
    c.add_argument("--tol", default="0")
    c.add_argument("--shift", type=int, default=0)

    c = analysis("density", cmd_density)
    c.add_argument("--level", type=int)

    c = sub.add_parser("ap", help="ap frequencies of a block construction")
    c.add_argument("--poly", type=_poly_arg, required=True)
    c.add_argument("--tower", type=_int_list, required=True)
    c.add_argument("--t", type=int)
    c.add_argument("--s", type=int)
    c.set_defaults(func=cmd_ap)

    c = sub.add_parser("verify", help="re-check construction invariants of a TPV1 file")
    c.add_argument("--pair", required=True)
    c.add_argument("--kind")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "nt" and args.ntcmd == "rho" and args.a is not None and args.N is None:
            raise InputError("nt rho --a needs --N")
        if args.command == "nt" and args.ntcmd == "perm" and (args.n is None) == (args.lift is None):
            raise InputError("nt perm needs exactly one of --n and --lift")
        if args.command == "ap" and (args.t is None) != (args.s is None):
            raise InputError("ap needs both --t and --s or neither")
        return args.func(args)
    except (InputError, cons.ConstructionError, nt.HypothesisError, nt.BoundExceeded) as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
