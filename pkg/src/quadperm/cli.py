"""Command-line entry point: ``quadperm verify | diagnose | bounds``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .core import Triple
from .gf2field import FieldError
from .gf2tower import make_tower
from .harness import CHECKS, ConfigError, RunConfig, run_bound_table, run_diagnose, run_verify

EXIT_OK, EXIT_DISCREPANCY, EXIT_USAGE = 0, 1, 2


def _checks(text: str) -> tuple[str, ...]:
    if text == "all":
        return CHECKS
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in items if s not in CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadperm", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="check the permutation criterion over many triples")
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    v.add_argument("--samples", type=int, default=0)
    v.add_argument("--seed", type=int)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out", default="-", help="output path, '-' for stdout")
    v.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    v.add_argument("--checks", type=_checks, default=("theorem",),
                   help=f"comma list from {','.join(CHECKS)} or 'all'")
    v.add_argument("--brute-limit", type=int, default=None,
                   help="brute-force cross-check only the first N triples (default: all for m <= 6)")
    v.add_argument("--summary-only", action="store_true", help="write only the summary line")

    d = sub.add_parser("diagnose", help="full report for a single triple")
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--a1", required=True)
    d.add_argument("--a2", required=True)
    d.add_argument("--a3", required=True)

    b = sub.add_parser("bounds", help="point-count lower bounds for degree-4 curves")
    b.add_argument("--m-min", type=int, default=4)
    b.add_argument("--m-max", type=int, default=20)
    b.add_argument("--format", choices=("text", "json"), default="text")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.cmd == "verify":
            cfg = RunConfig(m=args.m, mode=args.mode, sample_count=args.samples, seed=args.seed,
                            parallelism=args.jobs, output=args.out, checks=args.checks,
                            fmt=args.format, brute_limit=args.brute_limit,
                            records=not args.summary_only)
            summary = run_verify(cfg)
            return EXIT_OK if summary["passed"] else EXIT_DISCREPANCY
        if args.cmd == "diagnose":
            T = make_tower(args.m)
            rec = run_diagnose(Triple.from_hex(args.a1, args.a2, args.a3, T), args.m)
            print(json.dumps(rec, indent=2))
            return EXIT_OK if rec["discrepancy"] is None else EXIT_DISCREPANCY
        table = run_bound_table(args.m_min, args.m_max)
        print(json.dumps(table.to_json(), indent=2) if args.format == "json" else table.render())
        return EXIT_OK
    except (ConfigError, FieldError) as e:
        print(f"quadperm: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
