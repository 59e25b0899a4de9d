"""Command-line entry point: ``ballspectral {solve,sweep,summary}``.

Exit codes: 0 success, 1 invalid input, 2 failed ``--check``.
"""

import argparse
import logging
import sys

from .config import ConfigError, RunConfig, load_config, parse_degrees
from .harness import COND_EXPONENT_RANGE, SummaryError, convergence_summary, read_csv, run_case, write_csv

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2


def _add_run_flags(p):
    p.add_argument("--config", help="key = value config file; flags override its entries")
    p.add_argument("--case", choices=("planar-quadratic", "ellipsoid", "star", "custom"))
    p.add_argument("--mode", choices=("helmholtz", "poisson"))
    p.add_argument("--degrees", help="comma list or start:stop[:step]")
    p.add_argument("--quad", help="'auto' or integer quadrature order q")
    p.add_argument("--out", help="CSV output path, '-' for stdout")
    p.add_argument("--jobs", type=int, default=1, help="degrees solved concurrently")


def build_parser():
    parser = argparse.ArgumentParser(prog="ballspectral", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("solve", help="solve at a single degree"))
    _add_run_flags(sub.add_parser("sweep", help="solve over a list of degrees"))
    summ = sub.add_parser("summary", help="fit convergence and conditioning slopes from a CSV")
    summ.add_argument("csv", help="CSV written by sweep ('-' for stdin)")
    summ.add_argument("--min-n", type=int, default=None, help="ignore rows with n below this")
    summ.add_argument("--check", action="store_true", help="exit 2 unless the fits pass")
    return parser


def _config_from_args(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.case:
        cfg.case = args.case
    if args.mode:
        cfg.mode = args.mode
    if args.degrees:
        cfg.degrees = parse_degrees(args.degrees)
    if args.quad:
        if args.quad.strip().lower() == "auto":
            cfg.quad = None
        else:
            try:
                cfg.quad = int(args.quad)
            except ValueError:
                raise ConfigError("quad", f"expected 'auto' or an integer, got {args.quad!r}") from None
    if args.out:
        cfg.out = args.out
    return cfg.validate()


def _run(args, single):
    cfg = _config_from_args(args)
    if single and len(cfg.degrees) != 1:
        raise ConfigError("degrees", "solve takes exactly one degree; use sweep for several")
    reports = run_case(cfg, jobs=max(1, args.jobs))
    if cfg.out == "-":
        write_csv(reports, sys.stdout)
    else:
        with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
            write_csv(reports, fh)
    return EXIT_OK


def _summary(args):
    if args.csv == "-":
        rows = read_csv(sys.stdin)
    else:
        with open(args.csv, newline="", encoding="utf-8") as fh:
            rows = read_csv(fh)
    s = convergence_summary(rows, min_n=args.min_n)
    lo, hi = COND_EXPONENT_RANGE
    print(f"rows              {s.rows}")
    print(f"error slope       {s.error_slope:.4f} log10/degree (R^2 {s.error_r2:.4f})")
    print(f"cond exponent     {s.cond_exponent:.4f} vs N (R^2 {s.cond_r2:.4f}), band [{lo}, {hi}]")
    if args.check:
        ok = s.passes()
        print("check             " + ("PASS" if ok else "FAIL"))
        return EXIT_OK if ok else EXIT_CHECK
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "summary":
            return _summary(args)
        return _run(args, single=args.command == "solve")
    except (ConfigError, SummaryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
