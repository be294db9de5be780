"""Command-line entry point.

    quadnet run --config job.cfg [--set render.resolution=300] [--threads 4]

Exit codes: 0 on success, 1 when a verify job fails its check, 2 on usage
or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, apply_overrides, parse_config
from .jobs import JobError, run_job

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadnet",
        description="Render and analyze Mandelbrot/Julia-type sets of coupled "
                    "quadratic-map networks.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a job described by a config file")
    run.add_argument("--config", required=True, type=Path, help="job config path")
    run.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="SECTION.KEY=VALUE",
                     help="override a config value (repeatable)")
    run.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: hardware count)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        text = args.config.read_text()
    except OSError as err:
        print(f"error: cannot read config {args.config}: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        text = apply_overrides(text, args.overrides)
        spec = parse_config(text)
    except ConfigError as err:
        print(f"error: {args.config}: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        manifest = run_job(spec, threads=args.threads)
    except JobError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    for rel, digest in manifest.files:
        print(f"{digest}  {spec.output_dir}/{rel}")
    if manifest.verify_passed is not None:
        print(f"verify {spec.check}: {'PASS' if manifest.verify_passed else 'FAIL'}")
        if not manifest.verify_passed:
            return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
