"""Command-line entry point.

Exit status: 0 success, 1 a check or quantization failed, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DegenerateNodeError, InvalidParameterError, NodeLawViolation, QuantizationError
from .figures import EXACT_HEADER, ScanConfig, exact_rows, exact_table, format_rows, join_deviations, write_csv, write_figure12, write_figure3
from .ritz import DEFAULT_BASIS_SIZE
from .validate import run_checks


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _scan_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--basis-size", type=int, default=DEFAULT_BASIS_SIZE)
    p.add_argument("--lambda-min", type=float, default=-40.0)
    p.add_argument("--lambda-max", type=float, default=0.0)
    p.add_argument("--lambda-steps", type=int, default=201)
    p.add_argument("--nu-max", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rationalqes",
        description="Exact and Rayleigh-Ritz spectra of -d2/dx2 + x^2 + lambda x^2/(1+g x^2).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="table of exact states (n, i, lambda, E, nu)")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--s", type=int, choices=(0, 1), default=0)
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--out", type=Path, default=None, help="CSV file (default: print to stdout)")

    for name, s in (("figure1", 0), ("figure2", 1)):
        p = sub.add_parser(name, help=f"Ritz curves and exact points, {'even' if s == 0 else 'odd'} states")
        _scan_args(p)
        p.set_defaults(s=s)

    p = sub.add_parser("figure3", help="E_0^(n,1) against g")
    p.add_argument("--g-list", type=_float_list, default=[0.2, 0.5, 1.0])
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p = sub.add_parser("validate", help="run the self-check suite")
    p.add_argument("--quick", action="store_true", help="fast subset")
    p.add_argument("--basis-size", type=int, default=DEFAULT_BASIS_SIZE)
    # negative control for tests: shift every exact lambda before the residual check
    p.add_argument("--perturb-lambda", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _cmd_exact(args) -> int:
    rows = exact_rows(exact_table(args.n_max, args.s, args.g))
    if args.out is not None:
        write_csv(args.out, EXACT_HEADER, rows)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        print(",".join(EXACT_HEADER))
        for r in format_rows(rows):
            print(",".join(r))
    return 0


def _cmd_figure12(args) -> int:
    cfg = ScanConfig(
        g=args.g,
        s=args.s,
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        lambda_steps=args.lambda_steps,
        basis_size=args.basis_size,
        nu_max=args.nu_max,
        n_max=args.n_max,
    )
    cpath, ppath, curves, points = write_figure12(cfg, args.out, args.command)
    dev = join_deviations(curves, points)
    worst = f"{dev.max():.3e}" if dev.size else "n/a"
    print(f"wrote {cpath} ({len(curves.lambdas)} rows) and {ppath} ({len(points)} points); max |curve - exact| = {worst}")
    return 0


def _cmd_figure3(args) -> int:
    path = write_figure3(args.g_list, args.n_max, args.out)
    print(f"wrote {path}")
    return 0


def _cmd_validate(args) -> int:
    results = run_checks(quick=args.quick, basis_size=args.basis_size, perturb=args.perturb_lambda)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


COMMANDS = {
    "exact": _cmd_exact,
    "figure1": _cmd_figure12,
    "figure2": _cmd_figure12,
    "figure3": _cmd_figure3,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuantizationError, DegenerateNodeError, NodeLawViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
