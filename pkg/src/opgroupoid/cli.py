"""Command line entry point for the property harness."""
from __future__ import annotations

import argparse
import sys

from .harness import DEFAULT_SUITES, SuiteConfig, run_suites, write_report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opgroupoid",
        description="Run the randomized structural property suites at matrix scale.",
    )
    parser.add_argument("--dim", type=int, default=6, help="ambient matrix size")
    parser.add_argument("--rank", type=int, default=2, help="rank of the base projection")
    parser.add_argument("--seed", type=int, default=12345, help="64-bit stream seed")
    parser.add_argument("--samples", type=int, default=200, help="samples per property")
    parser.add_argument("--tol-eq", type=float, default=1e-8, help="operator equality tolerance")
    parser.add_argument("--tol-fd", type=float, default=1e-4, help="finite-difference tolerance")
    parser.add_argument("--fd-step", type=float, default=1e-5, help="finite-difference step")
    parser.add_argument(
        "--suite",
        action="append",
        choices=sorted(DEFAULT_SUITES),
        help="suite to run (repeatable; default all)",
    )
    parser.add_argument("--report", metavar="PATH", help="write the JSON report here")
    parser.add_argument("--list", action="store_true", help="list suites and exit")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        from .suites import SUITE_DESCRIPTIONS

        for name in DEFAULT_SUITES:
            print(f"{name:12s} {SUITE_DESCRIPTIONS[name]}")
        return 0

    suites = tuple(args.suite) if args.suite else DEFAULT_SUITES
    cfg = SuiteConfig(
        dim=args.dim,
        rank=args.rank,
        seed=args.seed,
        samples=args.samples,
        tol_eq=args.tol_eq,
        tol_fd=args.tol_fd,
        fd_step=args.fd_step,
        suites=suites,
    )
    report = run_suites(cfg)
    for suite in report["suites"]:
        for prop in suite["properties"]:
            status = "PASS" if prop["passed"] else "FAIL"
            line = (
                f"{status} {suite['suite']}/{prop['name']}: "
                f"max {prop['max_residual']:.3e} tol {prop['tolerance']:.1e} "
                f"({prop['samples']} samples)"
            )
            if prop["error"]:
                line += f"  [{prop['error']}]"
            print(line)
    print("overall:", "PASS" if report["passed"] else "FAIL")
    if args.report:
        write_report(report, args.report)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
