"""Command-line front end: ``rsp validate|nf|check|gen|bench``."""

from __future__ import annotations

import argparse
import json
import sys

from .bench import format_table, run_bench
from .collector import Collector
from .consistency import (ABORTED, CONSISTENT, check_overlap, check_solvable)
from .corpus import family
from .errors import PresentationSyntaxError, PresentationValidationError, RSPError
from .presentation import parse, serialize, validate
from .words import parse_word

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _read(path):
    with open(path) as fh:
        return fh.read()


def _load(path):
    return parse(_read(path))


def _verdict_exit(*verdicts):
    if any(v == ABORTED for v in verdicts):
        return EXIT_ERROR
    return EXIT_OK if all(v == CONSISTENT for v in verdicts) else EXIT_FAIL


def cmd_validate(args):
    try:
        p = _load(args.file)
    except PresentationValidationError as exc:
        for v in exc.violations:
            print(v)
        return EXIT_FAIL
    print(f"ok: {p.m} generators, {p.r} blocks")
    return EXIT_OK if not validate(p) else EXIT_FAIL


def cmd_nf(args):
    p = _load(args.file)
    rep = check_solvable(p)
    if not rep.consistent:
        print(f"refusing: presentation is {rep.verdict}", file=sys.stderr)
        print(rep.summary(p), file=sys.stderr)
        return EXIT_FAIL if rep.verdict != ABORTED else EXIT_ERROR
    word = parse_word(args.word, p.index)
    print(p.word_text(Collector(p, table=rep.table).collect(word)))
    return EXIT_OK


def cmd_check(args):
    p = _load(args.file)
    methods = ["solv", "overlap"] if args.method == "both" else [args.method]
    reports = [check_solvable(p) if m == "solv" else check_overlap(p) for m in methods]
    agree = len({r.verdict for r in reports}) == 1
    if args.json:
        doc = {"reports": [r.to_dict(p) for r in reports]}
        if args.method == "both":
            doc["agree"] = agree
        print(json.dumps(doc, indent=2))
    else:
        for r in reports:
            print(r.summary(p))
        if args.method == "both":
            print(f"agree: {'yes' if agree else 'NO'}")
    return _verdict_exit(*(r.verdict for r in reports))


def cmd_gen(args):
    text = serialize(family(args.family))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args):
    records = run_bench(args.inputs, args.methods, args.reps)
    if args.json:
        print(json.dumps({"records": [r.to_dict() for r in records]}, indent=2))
    else:
        print(format_table(records))
    return _verdict_exit(*(r.verdict for r in records))


def build_parser():
    ap = argparse.ArgumentParser(prog="rsp", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="parse and validate a presentation file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("nf", help="normal form of a word")
    sp.add_argument("file")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_nf)

    sp = sub.add_parser("check", help="consistency check")
    sp.add_argument("file")
    sp.add_argument("--method", choices=["solv", "overlap", "both"], default="solv")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gen", help="emit a family member, e.g. 'ut(16,2)' or 'tower(3,6)'")
    sp.add_argument("family")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bench", help="time both checkers on several inputs")
    sp.add_argument("--inputs", nargs="+", required=True,
                    help="presentation files or family specs")
    sp.add_argument("--methods", nargs="+", choices=["solv", "overlap"],
                    default=["solv", "overlap"])
    sp.add_argument("--reps", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PresentationSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PresentationValidationError as exc:
        print(f"invalid presentation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, ValueError, RSPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
