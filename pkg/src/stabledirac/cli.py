"""Command line interface.

``stabledirac verify <file> [--seed N] [--trials N] [--json]`` checks one
document; ``stabledirac corpus list`` and ``stabledirac corpus run <name|all>``
work on the shipped fixtures.  Exit codes: 0 pass, 1 a condition failed,
2 parse or usage error, 3 precondition refusal.
"""

from __future__ import annotations

import argparse
import json
import sys

from .corpus import FIXTURES, get_fixture, load_fixture
from .docfmt import DocError, parse_document
from .runner import EXIT_FAIL, EXIT_PARSE, EXIT_PASS, RunResult, run

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabledirac", description="Verify stable Dirac and generalized "
                                     "complex structures given in structure documents.")
    sub = parser.add_subparsers(dest="command", required=True)

    def sampling(p):
        p.add_argument("--seed", type=int, default=None, help="seed for rank and guard sampling")
        p.add_argument("--trials", type=int, default=None, help="number of sample points (default 7)")
        p.add_argument("--json", action="store_true", help="emit the report as JSON")

    verify = sub.add_parser("verify", help="check a structure document")
    verify.add_argument("file", help="document path, or - for stdin")
    sampling(verify)

    corpus = sub.add_parser("corpus", help="shipped fixtures")
    csub = corpus.add_subparsers(dest="corpus_command", required=True)
    csub.add_parser("list", help="list fixtures")
    crun = csub.add_parser("run", help="run a fixture, or all of them")
    crun.add_argument("name")
    sampling(crun)
    return parser


def _emit(result: RunResult, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(result.to_dict(), indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(result.render())


def _verify(args, out, err) -> int:
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    try:
        result = run(parse_document(text), seed=args.seed, trials=args.trials)
    except DocError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    _emit(result, args.json, out)
    return result.exit_code


def _corpus_run(args, out, err) -> int:
    if args.name == "all":
        names = [f.name for f in FIXTURES]
    else:
        try:
            names = [get_fixture(args.name).name]
        except KeyError as exc:
            err.write(f"error: {exc.args[0]}\n")
            return EXIT_PARSE
    if len(names) == 1:
        result = run(load_fixture(names[0]), seed=args.seed, trials=args.trials)
        _emit(result, args.json, out)
        return result.exit_code
    summary = []
    mismatches = 0
    for name in names:
        fx = get_fixture(name)
        result = run(load_fixture(name), seed=args.seed, trials=args.trials)
        failed = sorted({c.key for r in result.reports for c in r.failures()})
        ok = (result.exit_code == EXIT_PASS) if fx.expect_pass else (fx.designated in failed)
        mismatches += not ok
        summary.append({"fixture": name, "verdict": result.verdict, "expected": "PASS" if fx.expect_pass
                        else f"FAIL on {fx.designated}", "as_expected": ok, "report": result})
    if args.json:
        payload = [{**{k: v for k, v in s.items() if k != "report"}, "report": s["report"].to_dict()}
                   for s in summary]
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        for s in summary:
            out.write(f"### {s['fixture']}\n")
            out.write(s["report"].render())
            out.write(f"expected {s['expected']}: {'ok' if s['as_expected'] else 'MISMATCH'}\n\n")
        out.write(f"{len(names) - mismatches}/{len(names)} fixtures behaved as expected\n")
    return EXIT_PASS if not mismatches else EXIT_FAIL


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args, out, err)
    if args.corpus_command == "list":
        width = max(len(f.name) for f in FIXTURES)
        for f in FIXTURES:
            tag = "pass" if f.expect_pass else f"fail:{f.designated}"
            out.write(f"{f.name:<{width}}  {tag:<26}  {f.description}\n")
        return EXIT_PASS
    return _corpus_run(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
