"""Command line front end.

Every subcommand writes to ``--out`` (stdout by default) and can record its
fully parsed configuration with ``--save-config``; ``--config FILE`` replays
such a record and reproduces the output byte for byte.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 regime error,
4 cap exceeded.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .analysis import (
    bound_curve,
    classify,
    pepys_sequence,
    region_grid,
    write_bounds_csv,
    write_region_csv,
)
from .core import (
    Params,
    Stakes,
    as_fraction,
    format_decimal,
    format_fraction,
    tail_dp,
    tail_enum,
    tail_mc,
)
from .errors import RegimeError, SizeCapError, StructureError
from .families import enumerate_threshold_families
from .optimizer import conjecture_scan, csoka_check, dumps, optimize_exhaustive, optimize_local

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_REGIME = 3
EXIT_CAP = 4


def _rational(text: str) -> str:
    # validated here, kept as text so configs serialize verbatim
    as_fraction(text)
    return text


def _params(args) -> Params:
    return Params(as_fraction(args.p), as_fraction(args.t))


def cmd_tail(args, out: io.StringIO) -> None:
    stakes = Stakes.parse(args.stakes, normalize=args.normalize)
    params = _params(args)
    engines: dict[str, Callable] = {
        "enum": lambda: tail_enum(stakes, params),
        "dp": lambda: tail_dp(stakes, params),
        "mc": lambda: tail_mc(stakes, params, args.samples, args.seed),
    }
    result = engines[args.method]()
    if args.format == "json":
        payload = {
            "stakes": stakes.to_strings(),
            "p": format_fraction(params.p),
            "t": format_fraction(params.t),
            "value": format_fraction(result.value),
            "method": result.method,
            "stderr": result.stderr,
        }
        out.write(dumps(payload))
        return
    out.write(f"{format_fraction(result.value)}\n")
    out.write(f"{format_decimal(result.value, args.decimals)}\n")
    if result.stderr is not None:
        out.write(f"stderr {result.stderr:.{args.decimals}g}\n")


def cmd_region(args, out: io.StringIO) -> None:
    points = region_grid(args.resolution)
    if args.format == "json":
        out.write(
            dumps(
                {
                    "resolution": args.resolution,
                    "points": [
                        {
                            "p": format_fraction(pt.p),
                            "t": format_fraction(pt.t),
                            "status": pt.verdict.status,
                            "citation": pt.verdict.justification,
                        }
                        for pt in points
                    ],
                }
            )
        )
    else:
        write_region_csv(points, out)


def cmd_bounds(args, out: io.StringIO) -> None:
    write_bounds_csv(bound_curve(args.resolution), out, args.decimals)


def cmd_classify(args, out: io.StringIO) -> None:
    verdict = classify(_params(args))
    payload = {
        "p": args.p,
        "t": args.t,
        "status": verdict.status,
        "citation": verdict.justification,
        "witness": None
        if verdict.witness is None
        else {
            "strategy": verdict.witness.describe(),
            "value": format_fraction(verdict.witness.value),
        },
    }
    out.write(dumps(payload))


def _write_counterexamples(path: str | None, items: list[dict]) -> None:
    if path and items:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps({"counterexamples": items}))


def cmd_conjecture(args, out: io.StringIO) -> None:
    verdict = csoka_check(_params(args), args.n_max, force=args.force)
    payload = verdict.to_json()
    out.write(dumps(payload))
    if not verdict.confirmed:
        _write_counterexamples(
            args.counterexample_out,
            [{"p": payload["p"], "t": payload["t"], "stakes": payload["counterexample"]}],
        )


def cmd_scan(args, out: io.StringIO) -> None:
    g = args.grid
    points = [Params(Fraction(i, g), Fraction(j, g)) for i in range(1, g + 1) for j in range(i, g + 1)]
    summary = conjecture_scan(points, args.n_max, force=args.force)
    out.write(dumps(summary))
    _write_counterexamples(args.counterexample_out, summary["counterexamples"])


def cmd_optimize(args, out: io.StringIO) -> None:
    params = _params(args)
    if args.mode == "exhaustive":
        report = optimize_exhaustive(params, args.n, force=args.force)
    else:
        report = optimize_local(
            params, args.n, args.denominator_cap, args.restarts, args.seed, args.max_steps
        )
    out.write(dumps(report.to_json()))


def cmd_families(args, out: io.StringIO) -> None:
    found = enumerate_threshold_families(
        args.n, as_fraction(args.t), canonical_only=not args.all, force=args.force
    )
    out.write(
        dumps(
            {
                "n": args.n,
                "t": args.t,
                "families": [{**fam.to_json(), "witness": w.to_json()} for fam, w in found],
            }
        )
    )


def cmd_pepys(args, out: io.StringIO, err=None) -> None:
    a, p = args.a, as_fraction(args.p)
    if a < 2 or args.k_max < 1 or p <= 0:
        raise ValueError("need a >= 2, k_max >= 1 and p > 0")
    if p > Fraction(1, a):
        print(
            f"warning: p = {format_fraction(p)} > 1/{a}; strict decrease is only established for p <= 1/a",
            file=err or sys.stderr,
        )
    seq = pepys_sequence(a, p, args.k_max)
    decreasing = all(x > y for x, y in zip(seq, seq[1:]))
    out.write("k,bets,probability,decimal\n")
    for k, v in enumerate(seq, start=1):
        out.write(f"{k},{k * a},{format_fraction(v)},{format_decimal(v, args.decimals)}\n")
    out.write(f"# strictly decreasing: {'yes' if decreasing else 'no'}\n")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--decimals", type=int, default=12, help="digits for decimal rendering")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--save-config", default=None, help="write the parsed run configuration as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boldplay", description="Tail probabilities of weighted Bernoulli sums."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="replay a configuration saved with --save-config")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("tail", help="exact or sampled P(S >= t) for given stakes")
    p.add_argument("--stakes", required=True, help="comma separated rationals, e.g. 1/2,1/4,1/4")
    p.add_argument("--p", required=True, type=_rational)
    p.add_argument("--t", required=True, type=_rational)
    p.add_argument("--method", choices=("enum", "dp", "mc"), default="enum")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--normalize", action="store_true", help="rescale stakes to sum to one")
    _common(p)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("region", help="settled-region grid as CSV")
    p.add_argument("--resolution", type=int, default=100)
    _common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("bounds", help="bounds on the diagonal p = t as CSV")
    p.add_argument("--resolution", type=int, default=1000)
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("classify", help="verdict on bold play at one point")
    p.add_argument("--p", required=True, type=_rational)
    p.add_argument("--t", required=True, type=_rational)
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("conjecture", help="exhaustive check that an average is optimal at one point")
    p.add_argument("--p", required=True, type=_rational)
    p.add_argument("--t", required=True, type=_rational)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--force", action="store_true", help="allow n_max = 6 (slow)")
    p.add_argument("--counterexample-out", default=None)
    _common(p)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("scan", help="conjecture check over the grid (i/g, j/g) with p <= t")
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--force", action="store_true")
    p.add_argument("--counterexample-out", default=None)
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimize", help="search for maximizing stakes")
    p.add_argument("--p", required=True, type=_rational)
    p.add_argument("--t", required=True, type=_rational)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--mode", choices=("exhaustive", "local"), default="exhaustive")
    p.add_argument("--denominator-cap", type=int, default=60)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--force", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("families", help="threshold families on {1..n} with witness stakes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", required=True, type=_rational)
    p.add_argument("--all", action="store_true", help="include every permutation, not just canonical families")
    p.add_argument("--force", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("pepys", help="P(Bin(k a, p) >= k) for k = 1..k_max")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--p", required=True, type=_rational)
    p.add_argument("--k-max", type=int, default=3)
    _common(p)
    p.set_defaults(func=cmd_pepys)
    return parser


_COMMANDS = {
    "tail": cmd_tail,
    "region": cmd_region,
    "bounds": cmd_bounds,
    "classify": cmd_classify,
    "conjecture": cmd_conjecture,
    "scan": cmd_scan,
    "optimize": cmd_optimize,
    "families": cmd_families,
    "pepys": cmd_pepys,
}


def _config_of(args: argparse.Namespace) -> dict:
    options = {k: v for k, v in vars(args).items() if k not in ("func", "config", "save_config")}
    return options


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                options = json.load(fh)
        except (OSError, ValueError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if options.get("command") not in _COMMANDS:
            print("error: config names no known command", file=sys.stderr)
            return EXIT_USAGE
        args = argparse.Namespace(**options, func=_COMMANDS[options["command"]], save_config=None)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    out = io.StringIO()
    try:
        args.func(args, out)
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except SizeCapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (StructureError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out.getvalue())
        else:
            sys.stdout.write(out.getvalue())
        if args.save_config:
            with open(args.save_config, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(dumps(_config_of(args)))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
