"""Command-line front end: ``dp compute | scan | verify | recurrence | factor-psi | cm-degree``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from functools import partial

from . import __version__
from .counting import DEFAULT_ENUM_BUDGET, ap
from .curves import Curve
from .engine import (
    ADDITIVE,
    CSV_HEADER,
    DpResult,
    LowerBound,
    cm_oracle_sweep,
    dp,
    dp_cm_x,
    dp_cm_y,
    dp_consistency_sweep,
    good_curves,
    parallel_map,
    recurrence_scan,
    tate_sweep,
)
from .errors import BudgetExceeded, PdegError
from .lifts import canonical_by_rank, is_canonical_lift, verify_rank_lemma
from .local_arith import ord_mod_p, primality, primes_between
from .padic_poly import DEFAULT_MAX_P, DEFAULT_PRECISION, division_polynomial, factor_with_retry

EXIT_OK, EXIT_ERROR, EXIT_UNSUPPORTED, EXIT_USAGE = 0, 1, 2, 64
SCHEMA_VERSION = "1"
SUITES = ("lemma31", "canonical", "cm-oracle", "mod-p2", "tate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _curve(text: str) -> Curve:
    try:
        E = Curve.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad curve {text!r}: {exc}") from None
    if E.is_singular:
        raise UsageError(f"E_{{{E}}} is singular")
    return E


def _prime(p: int) -> int:
    if p < 5:
        raise UsageError(f"p = {p}: primes below 5 are not supported")
    if primality(p) == "composite":
        raise UsageError(f"{p} is not prime")
    return p


def _prime_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise UsageError(f"bad prime range {text!r}; expected LO..HI") from None
    if lo < 0 or hi < 0:
        raise UsageError("prime range bounds must be non-negative")
    return lo, hi


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dp", description="p-degrees of elliptic curves y^2 = x^3 + Ax + B over Q_p.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-enum", type=_positive, default=DEFAULT_ENUM_BUDGET)
    common.add_argument("--budget-p", type=_positive, default=DEFAULT_MAX_P,
                        help="largest p for psi_p factorization")
    common.add_argument("--precision", type=_positive, default=DEFAULT_PRECISION)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", parents=[common], help="d_p for one curve and prime")
    c.add_argument("-c", "--curve", required=True)
    c.add_argument("-p", "--prime", type=int, required=True)
    c.add_argument("--no-fuse", action="store_true", help="skip the brute-force refinement")

    s = sub.add_parser("scan", parents=[common], help="d_p over a range of primes")
    s.add_argument("-c", "--curve", required=True)
    s.add_argument("--primes", required=True, metavar="LO..HI")
    s.add_argument("--no-fuse", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="run a verification sweep")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("-p", "--prime", type=int, default=5)
    v.add_argument("-d", type=_positive, default=1)
    v.add_argument("-j", type=int, default=2)
    v.add_argument("--pmax", type=int, default=None)
    v.add_argument("--bound", type=int, default=3)
    v.add_argument("--count", type=_positive, default=20)
    v.add_argument("--samples", type=int, default=50)

    r = sub.add_parser("recurrence", parents=[common], help="primes of the form a_k^2 + a_{k+1}^2")
    r.add_argument("-k", type=int, required=True)

    f = sub.add_parser("factor-psi", parents=[common], help="factor psi_p over Q_p")
    f.add_argument("-c", "--curve", required=True)
    f.add_argument("-p", "--prime", type=int, required=True)

    m = sub.add_parser("cm-degree", parents=[common], help="d_p of y^2 = x^3 + Dx or y^2 = x^3 + D")
    m.add_argument("-D", type=int, required=True)
    m.add_argument("--mode", choices=("x", "y"), default="x")
    group = m.add_mutually_exclusive_group(required=True)
    group.add_argument("-p", "--prime", type=int)
    group.add_argument("--primes", metavar="LO..HI")
    return parser


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit_json(obj, out):
    out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _envelope(kind: str, payload) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "data": payload}


def _emit_results(results: list[DpResult], fmt: str, out, single: bool = False):
    if fmt == "json":
        payload = results[0].to_dict() if single else [r.to_dict() for r in results]
        _emit_json(_envelope("dp-result" if single else "dp-table", payload), out)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in results:
            w.writerow(r.csv_row())
        out.write(buf.getvalue())
    else:
        out.write("\n\n".join(r.text() for r in results) + ("\n" if results else ""))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_compute(args, out) -> int:
    E = _curve(args.curve)
    p = _prime(args.prime)
    r = dp(E, p, fuse_bruteforce=not args.no_fuse, max_bruteforce_p=args.budget_p, seed=args.seed)
    _emit_results([r], args.format, out, single=True)
    if r.classification == ADDITIVE:
        sys.stderr.write("additive reduction unsupported\n")
        return EXIT_UNSUPPORTED
    return EXIT_OK


def _scan_one(p: int, curve: str, fuse: bool, budget_p: int, seed: int) -> DpResult | None:
    E = Curve.parse(curve)
    try:
        r = dp(E, p, fuse_bruteforce=fuse, max_bruteforce_p=budget_p, seed=seed)
    except BudgetExceeded as exc:
        return DpResult(str(E), p, "budget-exceeded", LowerBound(1), [f"budget:{exc}"])
    return None if r.classification == ADDITIVE else r


def cmd_scan(args, out) -> int:
    E = _curve(args.curve)
    lo, hi = _prime_range(args.primes)
    primes = [p for p in primes_between(max(lo, 5), hi)]
    fn = partial(_scan_one, curve=str(E), fuse=not args.no_fuse, budget_p=args.budget_p, seed=args.seed)
    rows = [r for r in parallel_map(fn, primes) if r is not None]
    rows.sort(key=lambda r: r.p)
    _emit_results(rows, args.format, out)
    return EXIT_OK


def _sample_curves(p: int, bound: int, count: int) -> list[tuple[int, int]]:
    return good_curves(bound, p)[:count]


def _verify_lemma31(args) -> dict:
    p = _prime(args.prime)
    if args.j < 2:
        raise UsageError("-j must be >= 2")
    rows = []
    for A, B in _sample_curves(p, args.bound, args.count):
        rep = verify_rank_lemma((A, B), p, args.d, args.j, args.budget_enum)
        rows.append({"curve": f"{A},{B}", "measured": rep.measured, "predicted": rep.predicted, "r": rep.r,
                     "ok": rep.ok})
    return {"checked": len(rows), "violations": [r for r in rows if not r["ok"]], "rows": rows}


def _verify_canonical(args) -> dict:
    primes = primes_between(5, args.pmax or 7)
    rows = []
    for p in primes:
        for A, B in good_curves(args.bound, p):
            if ap((A, B), p) % p != 1:
                continue
            ob = is_canonical_lift((A, B), p, seed=args.seed)
            rk = canonical_by_rank((A, B), p, args.budget_enum)
            rows.append({"curve": f"{A},{B}", "p": p, "obstruction": ob, "rank": rk, "ok": ob == rk})
    return {"checked": len(rows), "violations": [r for r in rows if not r["ok"]], "rows": rows}


def _verify_cm(args) -> dict:
    rep = cm_oracle_sweep(args.pmax or 1000)
    return {"checked": rep["checked"], "violations": rep["mismatches"]}


def _verify_mod_p2(args) -> dict:
    primes = tuple(primes_between(5, args.pmax or 7))
    rep = dp_consistency_sweep(args.bound, primes, args.samples, args.seed)
    return {"checked": rep["checked"], "violations": rep["violations"] + rep["bruteforce_conflicts"],
            "divisibility": rep["divisibility"]}


def _verify_tate(args) -> dict:
    primes = tuple(primes_between(5, args.pmax or 11))
    rep = tate_sweep(primes, args.count)
    return {"checked": rep["checked"], "violations": rep["mismatches"]}


def cmd_verify(args, out) -> int:
    runner = {"lemma31": _verify_lemma31, "canonical": _verify_canonical, "cm-oracle": _verify_cm,
              "mod-p2": _verify_mod_p2, "tate": _verify_tate}[args.suite]
    rep = runner(args)
    n_bad = len(rep["violations"])
    if args.format == "json":
        _emit_json(_envelope("verify-report", {"suite": args.suite, **rep}), out)
    else:
        out.write(f"suite {args.suite}: {rep['checked']} checked, {rep['checked'] - n_bad} passed, "
                  f"{n_bad} violations\n")
        for v in rep["violations"]:
            out.write(f"  violation: {json.dumps(v, sort_keys=True)}\n")
    return EXIT_OK if n_bad == 0 else EXIT_ERROR


def cmd_recurrence(args, out) -> int:
    if args.k < 0:
        raise UsageError("-k must be >= 0")
    try:
        rows = recurrence_scan(args.k, seed=args.seed)
    except OverflowError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    if args.format == "json":
        _emit_json(_envelope("recurrence", [r.to_dict() for r in rows]), out)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "a_k", "a_k+1", "p", "primality", "s", "ord_p_2s"])
        for r in rows:
            w.writerow([r.k, r.a_k, r.a_k1, r.p, r.primality, "" if r.s is None else r.s,
                        "" if r.ord_p_2s is None else r.ord_p_2s])
        out.write(buf.getvalue())
    else:
        for r in rows:
            line = f"k={r.k}  a_k={r.a_k}  a_k+1={r.a_k1}  p={r.p}  {r.primality}"
            if r.ord_p_2s is not None:
                line += f"  s={r.s}  ord_p(2s)={r.ord_p_2s}"
            out.write(line + "\n")
    return EXIT_OK


def cmd_factor_psi(args, out) -> int:
    E = _curve(args.curve)
    p = _prime(args.prime)
    if p > args.budget_p:
        raise BudgetExceeded(f"p = {p} exceeds the factorization budget {args.budget_p}")
    Em = E.p_minimal(p)
    psi = division_polynomial(Em.A, Em.B, p)
    rep = factor_with_retry(psi, p, curve=(Em.A, Em.B), prec=args.precision)
    rep.curve = str(E)
    if args.format == "json":
        _emit_json(_envelope("factor-report", rep.to_dict()), out)
        return EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "status", "root_valuation", "ramification", "point_degree_lo", "point_degree_hi"])
        for f in rep.factors:
            lo, hi = f.point_degree
            w.writerow([f.degree, f.status, f.root_valuation, f.ramification, lo, hi])
        out.write(buf.getvalue())
        return EXIT_OK
    out.write(f"psi_{p} of [{E}] over Q_{p}: degrees {rep.degrees}\n")
    for f in rep.factors:
        lo, hi = f.point_degree
        pd = str(lo) if lo == hi else f"{{{lo}, {hi}}}" if hi == 2 * lo else f"[{lo}, {hi}]"
        out.write(f"- degree {f.degree}: {f.status}, {f.ramification}, root valuation {f.root_valuation}, "
                  f"point degree {pd}\n")
        if f.reason:
            out.write(f"  note: {f.reason}\n")
        for i in range(f.degree - 1, -1, -1):
            out.write(f"  coeff x^{i}: {f.coefficients[i]}\n")
    lo, hi = rep.point_interval
    out.write(f"d_p in [{lo}, {hi}]\n")
    return EXIT_OK


def cmd_cm_degree(args, out) -> int:
    fn = dp_cm_x if args.mode == "x" else dp_cm_y
    if args.prime is not None:
        primes = [_prime(args.prime)]
    else:
        lo, hi = _prime_range(args.primes)
        primes = [p for p in primes_between(max(lo, 5), hi) if (6 * args.D) % p]
    rows = []
    for p in primes:
        r = fn(args.D, p)
        if r.classification != "supersingular":
            a = ap(Curve.parse(r.curve), p)
            r.a_p, r.ord_a_p = a, ord_mod_p(a, p)
        rows.append(r)
    _emit_results(rows, args.format, out, single=args.prime is not None)
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "recurrence": cmd_recurrence,
    "factor-psi": cmd_factor_psi,
    "cm-degree": cmd_cm_degree,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"dp: usage error: {exc}\n")
        return EXIT_USAGE
    except (PdegError, ArithmeticError) as exc:
        sys.stderr.write(f"dp: error: {exc}\n")
        return EXIT_ERROR


def main_entry():  # console-script wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
