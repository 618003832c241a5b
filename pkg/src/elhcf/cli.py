"""``elhcf`` command line: validate, check, explain, materialize.

Exit codes: 0 success, 1 usage, 2 parse/validation, 3 request already
fulfilled, 4 I/O.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .counterfactual import RankedCounterfactual, RequestFulfilledError, explain
from .model import ChangeSet, CounterfactualRequest, Direction, SignatureError, sorted_assertions
from .parser import ParseError, check_kb, format_concept, parse_concept, serialize_kb
from .reasoner import instance_check, materialize
from .verbalizer import load_labels, verbalize

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_FULFILLED, EXIT_IO = 0, 1, 2, 3, 4
SCHEMA_VERSION = 1


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Exit(EXIT_USAGE, f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Exit(EXIT_IO, f"cannot read {path}: {e.strerror or e}")


def _load_kb(path: str):
    kb, diags = check_kb(_read(path))
    for d in diags:
        if d.severity == "warning":
            print(f"{path}:{d}", file=sys.stderr)
    if kb is None:
        raise _Exit(EXIT_INVALID, "\n".join(f"{path}:{d}" for d in diags if d.severity == "error"))
    return kb


def _concept(text: str):
    try:
        return parse_concept(text)
    except ParseError as e:
        raise _Exit(EXIT_INVALID, "\n".join(f"concept:{d}" for d in e.diagnostics))


def _individual(kb, name: str):
    try:
        kb.require_individual(name)
    except SignatureError as e:
        raise _Exit(EXIT_INVALID, str(e))


@dataclass
class ExplainReport:
    concept: str
    individual: str
    direction: str
    rank: str
    materialized: bool
    candidates_total: int
    counterfactuals: list
    infeasible: bool
    message: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "request": {"concept": self.concept, "individual": self.individual,
                        "direction": self.direction},
            "rank": self.rank,
            "materialized": self.materialized,
            "candidatesTotal": self.candidates_total,
            "infeasible": self.infeasible,
            "message": self.message,
            "counterfactuals": self.counterfactuals,
        }


def build_report(kb, request: CounterfactualRequest, rank="min", materialized=True,
                 max_candidates=None, labels=None) -> ExplainReport:
    exp = explain(kb, request, rank=rank, materialized=materialized)
    entries = []
    for rc in exp.counterfactuals[:max_candidates]:
        entries.append({
            "rank": rc.rank,
            "removed": [str(a) for a in sorted_assertions(rc.change_set.removed)],
            "added": [str(a) for a in sorted_assertions(rc.change_set.added)],
            "editDistance": rc.edit_distance,
            "lMin": rc.l_min,
            "lMean": None if rc.l_mean is None else float(rc.l_mean),
            "lMeanExact": None if rc.l_mean is None else str(rc.l_mean),
            "sentence": verbalize(rc, request, labels),
        })
    message = None
    if exp.infeasible:
        message = verbalize(RankedCounterfactual(ChangeSet.infeasible(), 0), request, labels)
    return ExplainReport(format_concept(request.concept), request.individual,
                         request.direction.value, rank, materialized,
                         exp.candidates_total, entries, exp.infeasible, message)


def _fmt_score(v) -> str:
    return "-" if v is None else (f"{v:.4g}" if isinstance(v, float) else str(v))


def cmd_validate(args) -> int:
    kb = _load_kb(args.kb)
    sig = kb.signature
    print(f"ok: {len(kb.tbox)} TBox axioms, {len(kb.abox)} ABox assertions, "
          f"{len(sig.concepts)} concepts, {len(sig.roles)} roles, {len(sig.individuals)} individuals")
    return EXIT_OK


def cmd_check(args) -> int:
    kb = _load_kb(args.kb)
    c = _concept(args.concept)
    _individual(kb, args.individual)
    print("true" if instance_check(kb, c, args.individual) else "false")
    return EXIT_OK


def cmd_explain(args) -> int:
    kb = _load_kb(args.kb)
    c = _concept(args.concept)
    _individual(kb, args.individual)
    labels = None
    if args.labels:
        try:
            labels = load_labels(args.labels)
        except OSError as e:
            raise _Exit(EXIT_IO, f"cannot read {args.labels}: {e.strerror or e}")
        except ValueError as e:
            raise _Exit(EXIT_INVALID, str(e))
    request = CounterfactualRequest(c, args.individual, Direction(args.direction))
    try:
        report = build_report(kb, request, args.rank, args.materialize == "on",
                              args.max_candidates, labels)
    except RequestFulfilledError:
        holds = "already holds" if request.direction is Direction.ADD else "does not hold"
        raise _Exit(EXIT_FULFILLED,
                    f"{args.concept!r} {holds} for {args.individual!r}; the request is already fulfilled")
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2))
        return EXIT_OK
    print(f"request: {report.direction} ({report.concept})({report.individual})  "
          f"materialized={'on' if report.materialized else 'off'}  "
          f"candidates={report.candidates_total}  rank={report.rank}")
    if report.infeasible:
        print(report.message)
    for e in report.counterfactuals:
        print(f"{e['rank']}. [edit distance {e['editDistance']}, l_min {_fmt_score(e['lMin'])}, "
              f"l_mean {_fmt_score(e['lMean'])}] {e['sentence']}")
    return EXIT_OK


def cmd_materialize(args) -> int:
    kb = _load_kb(args.kb)
    text = serialize_kb(materialize(kb))
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise _Exit(EXIT_IO, f"cannot write {args.out}: {e.strerror or e}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="elhcf", description="Counterfactual explanations for ELH concept assertions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    v = sub.add_parser("validate", help="parse a KB file and report problems")
    v.add_argument("--kb", required=True)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("check", help="decide whether K entails C(x)")
    c.add_argument("--kb", required=True)
    c.add_argument("--concept", required=True)
    c.add_argument("--individual", required=True)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("explain", help="compute and rank counterfactual explanations")
    e.add_argument("--kb", required=True)
    e.add_argument("--concept", required=True)
    e.add_argument("--individual", required=True)
    e.add_argument("--direction", choices=["rem", "add"], default="rem")
    e.add_argument("--rank", choices=["min", "mean"], default="min")
    e.add_argument("--format", choices=["text", "json"], default="text")
    e.add_argument("--max-candidates", type=int, default=None,
                   help="show at most N counterfactuals (the search itself is never cut short)")
    e.add_argument("--materialize", choices=["on", "off"], default="on")
    e.add_argument("--labels", help="file of 'symbol<TAB>display text' lines")
    e.set_defaults(func=cmd_explain)

    m = sub.add_parser("materialize", help="write the KB with all entailed assertions")
    m.add_argument("--kb", required=True)
    m.add_argument("--out", help="output path (default: stdout)")
    m.set_defaults(func=cmd_materialize)
    return p


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if getattr(args, "max_candidates", None) is not None and args.max_candidates < 0:
            raise _Exit(EXIT_USAGE, "--max-candidates must be non-negative")
        return args.func(args)
    except _Exit as e:
        if e.message:
            print(e.message, file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
