"""Command line entry point: ``enriqueslab --suite vinberg --report out.json``.

Exit status is 0 when every check passes, 1 when a check fails or an export cannot be
written, and 2 on a usage error.
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from enriqueslab.io import EXPORT_KINDS, export
from enriqueslab.runners import SUITES, RunConfig, run


def build_parser() -> argparse.ArgumentParser:
    """Parser for the command line flags."""
    parser = argparse.ArgumentParser(
        prog="enriqueslab",
        description="Exact verification of the Enriques surface computations.",
    )
    parser.add_argument("--suite", choices=("all", *SUITES), default="all")
    parser.add_argument(
        "--config-index",
        type=int,
        default=0,
        help="contraction configuration in canonical order (default: 0)",
    )
    parser.add_argument("--export", choices=EXPORT_KINDS, help="write an export instead")
    parser.add_argument("--out", type=Path, help="destination of --export")
    parser.add_argument("--seed", type=int, default=0, help="seed of randomised checks")
    parser.add_argument("--workers", type=int, default=1, help="threads running checks")
    parser.add_argument("--report", type=Path, help="write the JSON report here")
    parser.add_argument(
        "--no-timings", action="store_true", help="omit elapsed times from the report"
    )
    parser.add_argument("--progress", action="store_true", help="show a progress bar")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.export and args.out is None:
        parser.error("--export needs --out")
    if args.out is not None and not args.export:
        parser.error("--out is only used with --export")
    try:
        config = RunConfig(
            args.suite, args.config_index, args.seed, args.workers, args.progress
        )
    except ValueError as exc:
        parser.error(str(exc))

    if args.export:
        try:
            path = export(args.export, args.out, config.config_index)
        except (OSError, IndexError) as exc:
            print(f"enriqueslab: {exc}", file=sys.stderr)
            return 1
        print(path)
        return 0

    report = run(config.suite, config)
    text = report.to_json(timings=not args.no_timings)
    if args.report is None:
        print(text)
    else:
        try:
            args.report.write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            message = f"enriqueslab: cannot write report to {args.report}: {exc}"
            print(message, file=sys.stderr)
            return 1
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
