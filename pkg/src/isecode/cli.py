"""Batch command-line front end: bound, construct, search, verify, correlate, table.

Exit codes: 0 success, 2 precondition refusal, 3 timeout or partial result,
4 I/O or parse error.  Machine formats render rationals as "p/q"; text output
appends a decimal approximation in parentheses.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from itertools import product as iproduct

from .constructions import (
    binary_majority_density,
    binary_majority_family,
    block_product_family,
    lift_family,
    symbol_majority_density,
    symbol_majority_family,
    window_threshold_family,
)
from .families import FamilyFormatError, load_family, save_family
from .measures import (
    CapacityError,
    ParameterError,
    best_window_measure,
    format_rational,
    parse_rational,
    power_bound,
    window_measure,
    window_product_bound,
)
from .correlation import (
    exhaustive_correlation,
    random_complete_family,
    random_correlation_trials,
)
from .search import SearchTimeout, max_family
from .words import SpaceParams


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ParameterError(f"expected a comma list of integers, got {text!r}") from exc


def _parse_rationals(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(tok) for tok in text.split(",") if tok.strip() != "")


def _scalar(value, fmt: str):
    if isinstance(value, Fraction):
        if fmt == "text":
            return f"{format_rational(value)} (~{float(value):.6g})"
        return format_rational(value)
    return value


def _normalize(obj, fmt: str):
    if isinstance(obj, dict):
        return {k: _normalize(v, fmt) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v, fmt) for v in obj]
    return _scalar(obj, fmt)


def _flatten(obj, prefix: str = "", out=None):
    out = {} if out is None else out
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(v, f"{prefix}{k}.", out)
    else:
        out[prefix.rstrip(".")] = obj
    return out


def _emit_report(report: dict, fmt: str, out) -> None:
    report = _normalize(report, fmt)
    if fmt == "json":
        print(json.dumps(report, indent=2), file=out)
    elif fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(["key", "value"])
        for key, value in _flatten(report).items():
            if isinstance(value, list):
                value = ";".join(str(v) for v in value)
            writer.writerow([key, value])
    else:
        for key, value in _flatten(report).items():
            if isinstance(value, list):
                value = ", ".join(str(v) for v in value)
            print(f"{key}: {value}", file=out)


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    rows = [_normalize(r, fmt) for r in rows]
    if fmt == "json":
        print(json.dumps(rows, indent=2), file=out)
        return
    if not rows:
        return
    writer = csv.writer(out)
    header = list(rows[0].keys())
    writer.writerow(header)
    for row in rows:
        writer.writerow([row.get(k, "") for k in header])


def _open_out(args):
    if getattr(args, "output", None) and args.command in ("table", "correlate"):
        return open(args.output, "w", newline="")
    return None


# -- bound --------------------------------------------------------------------


def cmd_bound(args) -> int:
    t = _parse_ints(args.t)
    report: dict = {"command": "bound", "n": args.n, "s": args.s, "t": list(t)}
    any_applicable = False
    try:
        value = power_bound(args.n, args.s, t)
        report["power_bound"] = {"applicable": True, "count": value}
        any_applicable = True
    except ParameterError as exc:
        report["power_bound"] = {"applicable": False, "reason": str(exc)}
    try:
        bound = window_product_bound(args.n, args.s, t)
        report["product_bound"] = {
            "applicable": True,
            "count": bound.count,
            "density": bound.density,
            "windows": list(bound.windows),
        }
        any_applicable = True
    except CapacityError as exc:
        report["product_bound"] = {
            "applicable": False,
            "reason": str(exc),
            "deficit": exc.deficit,
        }
    except ParameterError as exc:
        report["product_bound"] = {"applicable": False, "reason": str(exc)}
    _emit_report(report, args.format, sys.stdout)
    if not any_applicable:
        print("refusal: neither bound applies to these parameters", file=sys.stderr)
        return 2
    return 0


# -- construct ------------------------------------------------------------------


def cmd_construct(args) -> int:
    t = _parse_ints(args.t) if args.t else ()
    report: dict = {"command": "construct", "kind": args.kind}
    family = None
    if args.kind == "product":
        if args.density_only:
            bound = window_product_bound(args.n, args.s, t)
            density = bound.density
        else:
            built = block_product_family(args.n, args.s, t)
            family, density = built.family, built.density
            report["blocks"] = [
                {
                    "symbol": b.symbol,
                    "positions": list(b.positions),
                    "window": list(b.window),
                    "t": b.t,
                    "radius": b.radius,
                }
                for b in built.blocks
            ]
        report.update({"n": args.n, "s": args.s, "t": list(t)})
    elif args.kind == "binary-majority":
        x1 = _parse_ints(args.x1 or "")
        x2 = _parse_ints(args.x2 or "")
        if args.density_only:
            density = binary_majority_density(len(set(x1)), len(set(x2)), t)
        else:
            family = binary_majority_family(args.n, x1, x2, t)
            density = family.density()
        report.update({"n": args.n, "s": 2, "t": list(t), "x1": sorted(set(x1)), "x2": sorted(set(x2))})
    elif args.kind == "symbol-majority":
        if len(t) != 1:
            raise ParameterError("symbol-majority takes a single threshold, e.g. -t 2")
        x = _parse_ints(args.x or "")
        if args.density_only:
            density = symbol_majority_density(args.s, len(set(x)), t[0])
        else:
            family = symbol_majority_family(args.n, args.s, x, t[0])
            density = family.density()
        report.update({"n": args.n, "s": args.s, "t": list(t), "x": sorted(set(x))})
    elif args.kind == "window":
        if len(t) != 1:
            raise ParameterError("window takes a single threshold, e.g. -t 2")
        if args.density_only:
            density = window_measure(t[0], args.radius, Fraction(1, 2))
        else:
            family = lift_family(window_threshold_family(args.n, t[0], args.radius), 1, 2)
            density = family.density()
        report.update({"n": args.n, "s": 2, "t": list(t), "radius": args.radius})
    else:  # pragma: no cover - argparse restricts choices
        raise ParameterError(f"unknown construction {args.kind!r}")
    report["density"] = density
    if args.density_only:
        if args.format == "text":
            print(format_rational(density))
        else:
            _emit_report(report, args.format, sys.stdout)
        return 0
    report["size"] = len(family)
    if args.output:
        save_family(family, args.output, binary=True if args.binary else None)
        report["output"] = args.output
    _emit_report(report, args.format, sys.stdout)
    return 0


# -- search ---------------------------------------------------------------------


def cmd_search(args) -> int:
    t = _parse_ints(args.t)
    result = max_family(
        args.n,
        args.s,
        t,
        threads=args.threads,
        timeout_ms=args.timeout_ms,
        canonical_seed=args.canonical_seed,
    )
    witness_file = None
    if args.output:
        save_family(result.witness, args.output, binary=True if args.binary else None)
        witness_file = args.output
    report = {
        "n": args.n,
        "s": args.s,
        "t": list(t),
        "max": result.max_size,
        "witness_file": witness_file,
        "nodes": result.nodes,
        "ms": int(result.elapsed * 1000),
        "complete": result.complete,
        "density": result.density(),
    }
    _emit_report(report, args.format, sys.stdout)
    if not result.complete:
        print("timeout: the reported size is a lower bound only", file=sys.stderr)
        return 3
    return 0


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    family = load_family(args.family, binary=True if args.binary else None)
    params = family.params
    report: dict = {
        "command": "verify",
        "path": args.family,
        "s": params.s,
        "n": params.n,
        "size": len(family),
        "density": family.density(),
    }
    report["complete_for"] = {
        str(sym): family.is_pinned_complete({sym}) for sym in range(1, params.s + 1)
    }
    if args.t:
        t = _parse_ints(args.t)
        report["t"] = list(t)
        report["intersecting"] = family.is_t_intersecting(t)
        try:
            value = power_bound(params.n, params.s, t)
            report["power_bound"] = {
                "applicable": True,
                "count": value,
                "size_within": len(family) <= value,
            }
        except ParameterError as exc:
            report["power_bound"] = {"applicable": False, "reason": str(exc)}
        try:
            bound = window_product_bound(params.n, params.s, t)
            report["product_bound"] = {
                "applicable": True,
                "count": bound.count,
                "density": bound.density,
                "size_within": len(family) <= bound.count,
            }
        except ParameterError as exc:
            report["product_bound"] = {"applicable": False, "reason": str(exc)}
    _emit_report(report, args.format, sys.stdout)
    return 0


# -- correlate --------------------------------------------------------------------


def cmd_correlate(args) -> int:
    pins_a = _parse_ints(args.pins_a)
    pins_b = _parse_ints(args.pins_b)
    if args.exhaustive:
        checks = exhaustive_correlation(args.s, pins_a, pins_b)
        mode = "exhaustive"
        n = 1
    else:
        densities = _parse_rationals(args.rho)
        checks = random_correlation_trials(
            args.s,
            args.n,
            pins_a,
            pins_b,
            args.trials,
            seed_base=args.seed,
            densities=densities,
        )
        mode = "random"
        n = args.n
    rows = [
        {
            "seed": c.seed,
            "trial_density": c.trial_density,
            "size_a": c.size_a,
            "size_b": c.size_b,
            "common": c.common,
            "lhs": c.lhs,
            "rhs": c.rhs,
            "slack": c.slack,
        }
        for c in checks
    ]
    report = {
        "command": "correlate",
        "mode": mode,
        "s": args.s,
        "n": n,
        "pins_a": sorted(set(pins_a)),
        "pins_b": sorted(set(pins_b)),
        "checks": len(checks),
        "min_slack": min((c.slack for c in checks), default=0),
        "violations": sum(1 for c in checks if not c.holds),
    }
    # A violation would mean an implementation bug: dump both families so the
    # exact pair can be replayed.
    failing = [c for c in checks if not c.holds and c.seed is not None]
    if failing:
        replay = []
        params = SpaceParams(args.s, n)
        for c in failing:
            fam_a = random_complete_family(params, pins_a, c.trial_density, 2 * c.seed)
            fam_b = random_complete_family(params, pins_b, c.trial_density, 2 * c.seed + 1)
            for fam, side in ((fam_a, "a"), (fam_b, "b")):
                path = f"violation_seed{c.seed}_{side}.fam"
                save_family(fam, path)
                replay.append(path)
        report["replay_files"] = replay
    out = _open_out(args)
    stream = out or sys.stdout
    try:
        if args.format == "csv":
            _emit_rows(rows, "csv", stream)
        elif args.format == "json":
            report["trials"] = rows
            _emit_report(report, "json", stream)
        else:
            _emit_report(report, "text", stream)
    finally:
        if out:
            out.close()
    return 0


# -- table ------------------------------------------------------------------------


def _demand_sweep(s: int, n: int, t_max: int):
    for t in iproduct(range(min(t_max, n) + 1), repeat=s):
        if sum(t) <= n:
            yield t


def cmd_table(args) -> int:
    rows: list[dict] = []
    if args.what in ("bounds", "oracle"):
        t_max = args.t_max if args.t_max is not None else args.n_max
        for n in range(1, args.n_max + 1):
            for t in _demand_sweep(args.s, n, t_max):
                row: dict = {"n": n, "s": args.s, "t": ",".join(map(str, t))}
                try:
                    row["power_bound"] = power_bound(n, args.s, t)
                except ParameterError:
                    row["power_bound"] = ""
                try:
                    bound = window_product_bound(n, args.s, t)
                    row["product_count"] = bound.count
                    row["product_density"] = bound.density
                except ParameterError:
                    row["product_count"] = ""
                    row["product_density"] = ""
                if args.what == "oracle":
                    result = max_family(n, args.s, t, timeout_ms=args.timeout_ms)
                    row["oracle_max"] = result.max_size
                    row["oracle_density"] = result.density()
                    row["oracle_complete"] = result.complete
                rows.append(row)
    elif args.what == "measures":
        p = parse_rational(args.p) if args.p else Fraction(1, args.s)
        t_max = args.t_max if args.t_max is not None else args.n
        for t in range(0, min(t_max, args.n) + 1):
            sel = best_window_measure(args.n, t, p)
            rows.append(
                {
                    "n": args.n,
                    "t": t,
                    "p": p,
                    "radius": sel.radius,
                    "radius_cap": sel.radius_cap,
                    "value": sel.value,
                }
            )
    out = _open_out(args)
    stream = out or sys.stdout
    try:
        _emit_rows(rows, "json" if args.format == "json" else "csv", stream)
    finally:
        if out:
            out.close()
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isecode",
        description="Exact computations on intersection-constrained word families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, n=False, s=False, t=False):
        if n:
            p.add_argument("-n", type=int, required=True, help="word length")
        if s:
            p.add_argument("-s", type=int, required=True, help="alphabet size")
        if t:
            p.add_argument("-t", type=str, help="demand vector, e.g. 1,1,0")
        p.add_argument(
            "--format",
            choices=("text", "json", "csv"),
            default="text",
            help="output format",
        )

    p = sub.add_parser("bound", help="size bounds for a demand vector")
    common(p, n=True, s=True, t=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("construct", help="build an explicit family")
    p.add_argument(
        "kind", choices=("product", "binary-majority", "symbol-majority", "window")
    )
    common(p, n=True, t=True)
    p.add_argument("-s", type=int, default=2, help="alphabet size (default 2)")
    p.add_argument("--x1", type=str, help="first block positions, e.g. 1,2,3")
    p.add_argument("--x2", type=str, help="second block positions")
    p.add_argument("--x", type=str, help="block positions for symbol-majority")
    p.add_argument("-r", "--radius", type=int, default=0, help="window radius")
    p.add_argument("-o", "--output", type=str, help="family file to write")
    p.add_argument("--binary", action="store_true", help="force the binary file format")
    p.add_argument(
        "--density-only",
        action="store_true",
        help="emit only the exact density, without materializing",
    )
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exact maximum family via branch and bound")
    common(p, n=True, s=True, t=True)
    p.add_argument("--timeout-ms", type=int, default=60_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument(
        "--canonical-seed",
        action="store_true",
        help="restrict to families containing the canonical fixed word (speed heuristic)",
    )
    p.add_argument("-o", "--output", type=str, help="witness family file to write")
    p.add_argument("--binary", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="report properties of a family file")
    p.add_argument("family", type=str)
    p.add_argument("-t", type=str, help="demand vector to test")
    p.add_argument("--binary", action="store_true", help="read the binary file format")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("correlate", help="negative-correlation checks")
    common(p, s=True)
    p.add_argument("-n", type=int, default=2, help="word length (random mode)")
    p.add_argument("--pins-a", type=str, required=True, help="pinned symbols of side A")
    p.add_argument("--pins-b", type=str, required=True, help="pinned symbols of side B")
    p.add_argument("--exhaustive", action="store_true", help="all complete pairs at n = 1")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=str, default="1/8,1/4,1/2", help="trial densities")
    p.add_argument("-o", "--output", type=str)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("table", help="sweep a parameter grid")
    p.add_argument("--what", choices=("bounds", "oracle", "measures"), default="bounds")
    p.add_argument("-s", type=int, default=3)
    p.add_argument("-n", type=int, default=8, help="ground-set size for measures")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--t-max", type=int, default=None)
    p.add_argument("-p", type=str, help="bias as p/q (measures)")
    p.add_argument("--timeout-ms", type=int, default=60_000)
    p.add_argument("-o", "--output", type=str)
    p.add_argument("--format", choices=("text", "json", "csv"), default="csv")
    p.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SearchTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return 3
    except FamilyFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 4
    except ParameterError as exc:
        print(f"refusal: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
