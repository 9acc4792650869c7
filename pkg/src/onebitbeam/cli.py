"""Command-line front end: run experiments and dump likelihood scans."""

from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, load_config, run_experiment, scan_objective


def _parse_grid(spec: str) -> tuple[float, float, float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("theta grid must look like lo:hi:step")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("theta grid values must be numeric") from None
    return lo, hi, step


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onebitbeam",
        description="1-bit angle estimation and analog beamforming experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte-Carlo experiment and write CSV rows")
    run_p.add_argument("--config", required=True, help="YAML experiment config")
    run_p.add_argument("--out", required=True, help="output CSV path")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.add_argument("--parallel", type=int, default=1, help="worker processes")

    scan_p = sub.add_parser("scan-objective", help="dump an elevation likelihood curve")
    scan_p.add_argument("--config", required=True, help="YAML experiment config")
    scan_p.add_argument("--theta-grid", required=True, type=_parse_grid, metavar="LO:HI:STEP")
    scan_p.add_argument("--out", required=True, help="output CSV path")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "run":
            rows = run_experiment(config, out_path=args.out, seed=args.seed, parallel=args.parallel)
            print(f"wrote {len(rows)} rows to {args.out}")
        else:
            lo, hi, step = args.theta_grid
            thetas, _ = scan_objective(config, lo, hi, step, out_path=args.out)
            print(f"wrote {len(thetas)} grid points to {args.out}")
    except (ConfigError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
