"""
Command-line front end: ``formkit <command> --input SPEC [options]``.

Exit codes: 0 all checks pass (or inconclusive), 1 a check failed, 2 the
spec could not be read or parsed, 3 a numeric guard tripped.
"""

import argparse
from dataclasses import replace
import sys

from .errors import NumericError, SpecError
from .reports import (
    COMMANDS,
    dumps,
    load_spec,
    run_command,
    run_verify,
    stamp,
    to_text,
)

EXIT_PASS, EXIT_FAIL, EXIT_SPEC, EXIT_NUMERIC = 0, 1, 2, 3


def _dims(text):
    try:
        dims = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not dims or any(d <= 0 for d in dims) or dims != sorted(set(dims)):
        raise argparse.ArgumentTypeError("dims must be strictly ascending positive integers")
    return tuple(dims)


def build_parser():
    p = argparse.ArgumentParser(
        prog="formkit",
        description="Verify representation theorems for sesquilinear forms on numeric instances.",
    )
    p.add_argument("command", choices=[*COMMANDS, "verify"])
    p.add_argument("--input", help="spec file (corpus directory for verify)")
    p.add_argument("--output", help="write the report here instead of standard output")
    p.add_argument("--tol", type=float, help="override the relative residual tolerance")
    p.add_argument("--dims", type=_dims, help="truncation sweep, e.g. 8,32,128")
    p.add_argument("--seed", type=int, help="sampling seed (default: the spec's seed)")
    p.add_argument("--samples", type=int, help="random vector pairs per sampled check")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for verify")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    return p


def _run(args):
    if args.command == "verify":
        return run_verify(args.input, args.seed, args.dims, args.samples, args.tol, args.jobs)
    if not args.input:
        raise SpecError(f"{args.command} needs --input")
    spec = load_spec(args.input)
    if args.tol is not None:
        try:
            spec = replace(spec, tolerances=replace(spec.tolerances, rel_tol=args.tol))
        except ValueError as exc:
            raise SpecError(f"--tol: {exc}") from None
    return run_command(args.command, spec, args.seed, args.dims, args.samples)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report = _run(args)
    except SpecError as exc:
        print(f"formkit: spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except NumericError as exc:
        print(f"formkit: numeric error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if not args.no_timestamp:
        stamp(report)
    text = dumps(report) if args.format == "json" else to_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if report["overall"] == "fail" else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
