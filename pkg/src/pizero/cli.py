"""Command-line entry point: ``pizero <subcommand> ...``.

Exit codes
----------
0  success
1  a verified bound failed (``orders``)
2  invalid arguments, including a singular curve
3  output path not writable
4  empty input
5  ell <= n for ``nori``
6  enumeration budget exceeded (partial report written)
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from sympy import primerange

from .counting import (
    DEFAULT_COUNT_BUDGET,
    GroupSpec,
    ScalingTable,
    UnsupportedFamily,
    count_slice,
    verify_gpbound,
)
from .detector import PRESETS, PRESETS_VERSION, density_test, parse_spec
from .envelope import (
    DEFAULT_ENUM_BUDGET,
    DEFAULT_SEED,
    BudgetExceeded,
    FiniteSubgroup,
    classify_gl2_image,
    nori_lie_dimension,
)
from .frobenius import (
    ApTableError,
    CurveSpec,
    frobenius_stream,
    ingest_csv,
    persist_csv,
    reduce_stream,
)

EXIT_OK = 0
EXIT_BOUND_FAILED = 1
EXIT_USAGE = 2
EXIT_UNWRITABLE = 3
EXIT_EMPTY = 4
EXIT_ELL_TOO_SMALL = 5
EXIT_BUDGET = 6


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _curve(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise CliError(f"--curve expects 'A,B', got {text!r}", EXIT_USAGE) from None
    try:
        return CurveSpec(a, b, label=f"y^2 = x^3 + {a}x + {b}")
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _ell_range(text):
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise CliError(f"--ell-range expects 'a..b', got {text!r}", EXIT_USAGE) from None
    ells = list(primerange(lo, hi + 1))
    if not ells:
        raise CliError(f"no primes in {text}", EXIT_USAGE)
    return ells


def _spec(text):
    try:
        return parse_spec(text)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path, text):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_UNWRITABLE) from None


def _emit(args, report, text=None):
    body = _dumps(report)
    if getattr(args, "json_out", None):
        _write(args.json_out, body)
    if args.format == "text" and text is not None:
        sys.stdout.write(text + "\n")
    else:
        sys.stdout.write(body)


# --------------------------------------------------------------------------
# subcommands


def cmd_ap_scan(args):
    curve = _curve(args.curve)
    if args.cutoff < 3:
        raise CliError("--cutoff must be at least 3", EXIT_USAGE)
    records = frobenius_stream(curve, args.cutoff)
    try:
        persist_csv(records, args.out)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_UNWRITABLE) from None
    bad = curve.bad_primes(args.cutoff)
    print(f"bad primes below {args.cutoff}: {bad}", file=sys.stderr)
    report = {
        "curve": [curve.A, curve.B],
        "discriminant": curve.discriminant,
        "cutoff": args.cutoff,
        "records": len(records),
        "bad_primes": bad,
        "out": args.out,
    }
    _emit(args, report, f"{len(records)} records written to {args.out}; bad primes {bad}")
    return EXIT_OK


def _load_records(args):
    if bool(args.input) == bool(args.curve):
        raise CliError("give exactly one of --in or --curve", EXIT_USAGE)
    if args.input:
        try:
            records = ingest_csv(args.input)
        except ApTableError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        except OSError as exc:
            raise CliError(f"cannot read {args.input}: {exc}", EXIT_USAGE) from None
        cutoff = args.cutoff
        source = {"csv": args.input}
        bad = []
    else:
        if args.cutoff is None or args.cutoff < 3:
            raise CliError("--curve needs --cutoff >= 3", EXIT_USAGE)
        curve = _curve(args.curve)
        records = frobenius_stream(curve, args.cutoff)
        cutoff = args.cutoff
        source = {"curve": [curve.A, curve.B]}
        bad = curve.bad_primes(args.cutoff)
    if not records:
        raise CliError("no Frobenius records in the input", EXIT_EMPTY)
    return records, cutoff, source, bad


def cmd_detect(args):
    records, cutoff, source, bad = _load_records(args)
    spec = _spec(args.spec)
    expected = None
    if args.expected:
        try:
            frac = Fraction(args.expected)
        except ValueError:
            raise CliError(f"--expected expects k/N, got {args.expected!r}", EXIT_USAGE) from None
        expected = (frac.numerator, frac.denominator)
    char0 = density_test(records, spec, expected=expected, cutoff=cutoff)
    report = {
        "source": source,
        "bad_primes": bad,
        "presets_version": PRESETS_VERSION,
        "density": char0.to_dict(),
    }
    lines = [f"density of f o chi = 0: {char0.zeros}/{char0.tested} = {float(char0.estimate):.4f}"]
    if args.mod is not None:
        ell = args.mod
        try:
            mod = density_test(records, spec, ell=ell, cutoff=cutoff)
            verdict = classify_gl2_image(reduce_stream(records, ell), ell)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        report["mod_density"] = mod.to_dict()
        report["classification"] = verdict.to_dict()
        lines.append(f"mod {ell}: density {float(mod.estimate):.4f}, skipped {mod.skipped}; "
                     f"image {verdict.kind}, pi0 = {verdict.pi0}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def _load_generators(path, ell):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read generators from {path}: {exc}", EXIT_USAGE) from None
    if isinstance(data, dict):
        ell = ell if ell is not None else data.get("ell")
        data = data.get("generators")
    if ell is None:
        raise CliError("ell not given (use --ell or an 'ell' key)", EXIT_USAGE)
    if not isinstance(data, list) or not data:
        raise CliError("generators must be a non-empty list of integer matrices", EXIT_USAGE)
    return data, int(ell)


def cmd_nori(args):
    gens, ell = _load_generators(args.generators, args.ell)
    try:
        group = FiniteSubgroup(ell, gens)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    if ell <= group.n:
        raise CliError(f"need ell > n (ell={ell}, n={group.n})", EXIT_ELL_TOO_SMALL)
    report = nori_lie_dimension(group, budget=args.budget, seed=args.seed)
    text = (f"ell={ell} n={group.n}: {report.ell_elements} ell-elements, "
            f"lie dimension {report.lie_dimension}, |Gamma+| = {report.plus_subgroup_order}, "
            f"|Gamma| = {report.group_order}, exhaustive={report.exhaustive}")
    _emit(args, report.to_dict(), text)
    return EXIT_OK


def _group(family, ell):
    try:
        return GroupSpec.parse(family, ell)
    except (UnsupportedFamily, ValueError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def cmd_orders(args):
    ells = _ell_range(args.ell_range)
    G = _group(args.family, ells[0])
    try:
        reports = verify_gpbound(G, ells)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    ok = all(r.lower_ok and r.upper_ok for r in reports)
    payload = {"family": G.name, "dimension": G.dimension, "rank": G.rank,
               "all_pass": ok, "rows": [r.to_dict() for r in reports]}
    lines = [f"{G.name}: dim {G.dimension}, rank {G.rank}",
             f"{'ell':>5} {'|A(F_l)|':>24} {'/(l-1)^d':>10} {'/(l+1)^d':>10} ok"]
    for r in reports:
        lines.append(f"{r.ell:>5} {r.order:>24} {float(r.lower_ratio):>10.4f} "
                     f"{float(r.upper_ratio):>10.4f} {r.lower_ok and r.upper_ok}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_BOUND_FAILED


def cmd_slice(args):
    ells = [ell for ell in _ell_range(args.ell_range) if ell > 2]
    if not ells:
        raise CliError("slice needs odd primes", EXIT_USAGE)
    G = _group(args.family, ells[0])
    spec = _spec(args.spec)
    table = ScalingTable(G.name, str(spec), G.connected)
    partial = False
    for ell in ells:
        try:
            table.rows.append(count_slice(G.with_ell(ell), spec, args.budget))
        except BudgetExceeded as exc:
            partial = True
            print(f"budget exceeded at ell={ell}: {exc}", file=sys.stderr)
            break
    if not table.rows:
        _emit(args, {"group": G.name, "spec": str(spec), "partial": True, "rows": []})
        return EXIT_BUDGET
    payload = table.to_dict()
    payload["partial"] = partial
    if args.csv_out:
        rows = ["ell,order,slice_count,slice_fraction"]
        rows += [f"{r.ell},{r.order},{r.slice_count},{r.slice_fraction}" for r in table.rows]
        _write(args.csv_out, "\n".join(rows) + "\n")
    _emit(args, payload, table.to_text())
    return EXIT_BUDGET if partial else EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(prog="pizero", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file with default option values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--json-out", help="also write the JSON report to this path")
        return p

    p = common(sub.add_parser("ap-scan", help="write a p,ap table for a curve"))
    p.add_argument("--curve", required=True, help="A,B for y^2 = x^3 + Ax + B")
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ap_scan)

    p = common(sub.add_parser("detect", help="density test, optionally with a mod-ell verdict"))
    p.add_argument("--in", dest="input", help="CSV table with header p,ap")
    p.add_argument("--curve")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--spec", default="cartan2",
                   help=f"preset ({', '.join(sorted(PRESETS))}) or triples 'a,b,m;...'")
    p.add_argument("--mod", type=int, help="also reduce mod this prime and classify the image")
    p.add_argument("--expected", help="expected density k/|pi0|")
    p.set_defaults(func=cmd_detect)

    p = common(sub.add_parser("nori", help="Nori Lie data of a finite matrix group"))
    p.add_argument("--generators", required=True, help="JSON list of integer matrices")
    p.add_argument("--ell", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_ENUM_BUDGET)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_nori)

    p = common(sub.add_parser("orders", help="verify (l-1)^d <= |A(F_l)| <= (l+1)^d"))
    p.add_argument("--family", required=True)
    p.add_argument("--ell-range", required=True, help="a..b")
    p.set_defaults(func=cmd_orders)

    p = common(sub.add_parser("slice", help="exhaustive counts of the detector slice"))
    p.add_argument("--family", required=True)
    p.add_argument("--spec", default="cartan2")
    p.add_argument("--ell-range", required=True, help="a..b")
    p.add_argument("--budget", type=int, default=DEFAULT_COUNT_BUDGET)
    p.add_argument("--csv-out", help="write ell,order,slice_count,slice_fraction rows here")
    p.set_defaults(func=cmd_slice)
    return parser


def _glue_negative_values(argv):
    # argparse rejects "--curve -1,0"; rewrite to "--curve=-1,0"
    out = []
    it = iter(range(len(argv)))
    for i in it:
        a = argv[i]
        if a in ("--curve", "--expected") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(a)
    return out


def main(argv=None):
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        defaults = {k.replace("-", "_"): v for k, v in config.items()}
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
