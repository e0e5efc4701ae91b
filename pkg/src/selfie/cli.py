"""Command-line front end.

    selfie check --theory itrev.thy --heuristic naive_generalization
    selfie recommend --theory itrev.thy
    selfie parse --theory itrev.thy

Exit status: 0 success (for ``check``: every verdict true), 1 some verdict
false, 2 usage, load or evaluation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from . import heuristics as H
from . import lang as L
from .interp import DEFAULT_MAX_DEPTH, EvalError, judge
from .table import LookupTable
from .terms import print_term
from .theory import Theory, TheoryError, parse_candidate, parse_theory

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
HEURISTIC_PATH_ENV = "SELFIE_HEURISTIC_PATH"


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theory", metavar="PATH", help="theory file with definitions, goal and candidates")
    common.add_argument(
        "--heuristics", metavar="PATH", action="append", default=[],
        help="assertion file to load (repeatable); later files override earlier names",
    )
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-semantic-depth", type=int, default=DEFAULT_MAX_DEPTH, metavar="N")

    parser = argparse.ArgumentParser(prog="selfie", description="Judge arguments to an induction tactic.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="evaluate one heuristic on each candidate")
    check.add_argument("--heuristic", metavar="NAME", required=True)
    check.add_argument(
        "--candidate", metavar="TEXT", action="append", default=[],
        help='candidate such as "induct xs arbitrary: ys" (replaces those in the theory)',
    )

    rec = sub.add_parser("recommend", parents=[common], help="rank candidates with the heuristic suite")
    rec.add_argument("--max-induction-vars", type=int, default=1, metavar="N")
    rec.add_argument("--max-arbitrary", type=int, default=2, metavar="N")
    rec.add_argument("--max-candidates", type=int, default=64, metavar="N")

    sub.add_parser("parse", parents=[common], help="dump parsed terms, lookup tables and assertions")
    return parser


# -- loading -----------------------------------------------------------------

def load_theory(path: Optional[str]) -> Theory:
    if not path:
        raise UsageError("--theory is required")
    return parse_theory(_read(path), path)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def heuristic_files(explicit: list[str]) -> list[str]:
    """Files from $SELFIE_HEURISTIC_PATH (files or directories of *.selfie), then explicit ones."""
    files: list[str] = []
    for entry in filter(None, os.environ.get(HEURISTIC_PATH_ENV, "").split(os.pathsep)):
        p = Path(entry)
        if p.is_dir():
            files.extend(str(f) for f in sorted(p.glob("*.selfie")))
        elif p.is_file():
            files.append(entry)
    return files + list(explicit)


def load_user_definitions(paths: list[str], constant_names=frozenset()) -> dict[str, L.Assertion]:
    """Parse user heuristic files on top of the shipped ones.

    Returns only the user definitions; each file sees everything loaded before it.
    """
    user: dict[str, L.Assertion] = {}
    for path in paths:
        known = {**H.shipped_definitions(), **user}
        source = _read(path)
        defs = L.parse_assertion(source, constant_names, path, known=known)
        diagnostics = [d for d in L.static_check({**known, **defs}) if d.severity == "error"]
        if diagnostics:
            raise UsageError("\n".join(f"{path}: {d}" for d in diagnostics))
        user.update(defs)
    return user


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> tuple[int, object]:
    theory = load_theory(args.theory)
    user = load_user_definitions(heuristic_files(args.heuristics), theory.context.constant_names)
    defs = {**H.shipped_definitions(), **user}
    if args.heuristic not in defs:
        raise UsageError(f"unknown heuristic {args.heuristic!r}; known: {', '.join(defs)}")
    assertion = L.close_over(defs, args.heuristic)
    candidates = [parse_candidate(c, theory) for c in args.candidate] or theory.candidates
    if not candidates:
        raise UsageError("no candidates: add 'try induct ...' to the theory or pass --candidate")
    records = []
    for cand in candidates:
        verdict = judge(args.heuristic, assertion, theory.goal, cand, theory.context, args.max_semantic_depth)
        records.append({"candidate": cand.to_json(), "candidate_text": cand.describe(), **verdict.to_json()})
    status = EXIT_OK if all(r["verdict"] for r in records) else EXIT_FALSE
    return status, {"theory": args.theory, "goal": print_term(theory.goal), "results": records}


def cmd_recommend(args) -> tuple[int, object]:
    theory = load_theory(args.theory)
    user = load_user_definitions(heuristic_files(args.heuristics), theory.context.constant_names)
    suite = build_suite(user)
    if theory.candidates:
        candidates, source = theory.candidates, "theory"
    else:
        limits = H.CandidateLimits(args.max_induction_vars, args.max_arbitrary, args.max_candidates)
        candidates, source = H.generate_candidates(theory.goal, theory.context, limits), "generated"
    scores = H.score_candidates(theory.goal, candidates, theory.context, suite, args.max_semantic_depth)
    ranking = [{"rank": i + 1, **s.to_json()} for i, s in enumerate(scores)]
    return EXIT_OK, {
        "theory": args.theory,
        "goal": print_term(theory.goal),
        "candidate_source": source,
        "suite": [h.name for h in suite],
        "ranking": ranking,
    }


def build_suite(user: dict[str, L.Assertion]) -> H.HeuristicSuite:
    """Standard suite (user files may redefine its members) plus every
    non-lambda top-level definition the user files add."""
    defs = {**H.shipped_definitions(), **user}
    extra = [n for n, a in user.items() if n not in H.STANDARD_NAMES and not isinstance(a, L.Lambda)]
    return H.HeuristicSuite.from_definitions(defs, [*H.STANDARD_NAMES, *extra])


def cmd_parse(args) -> tuple[int, object]:
    if not args.theory and not args.heuristics:
        raise UsageError("parse needs --theory and/or --heuristics")
    out: dict = {}
    constant_names = frozenset()
    if args.theory:
        theory = load_theory(args.theory)
        constant_names = theory.context.constant_names
        out["definitions"] = {
            name: {"command": d.command.value, "clauses": [print_term(c) for c in d.clauses]}
            for name, d in theory.context.definitions.items()
        }
        out["goal"] = {"name": theory.goal_name, "term": print_term(theory.goal), "ast": repr(theory.goal)}
        out["goal_table"] = LookupTable(theory.goal).dump()
        out["candidates"] = [c.describe() for c in theory.candidates]
    if args.heuristics:
        user = load_user_definitions(args.heuristics, constant_names)
        out["heuristics"] = {name: L.print_assertion(a) for name, a in user.items()}
    return EXIT_OK, out


COMMANDS = {"check": cmd_check, "recommend": cmd_recommend, "parse": cmd_parse}


# -- output ------------------------------------------------------------------

def render_text(command: str, report: dict) -> str:
    lines = []
    if command == "check":
        for r in report["results"]:
            mark = "PASS" if r["verdict"] else "FAIL"
            lines.append(f"{mark}  {r['heuristic_name']}  [{r['candidate_text']}]")
            lines.extend(f"      warning: {w}" for w in r["warnings"])
    elif command == "recommend":
        lines.append(f"goal: {report['goal']}")
        for r in report["ranking"]:
            lines.append(f"{r['rank']:>3}. {r['candidate_text']}  (score {r['total']})")
            for v in r["verdicts"]:
                lines.append(f"       {'+' if v['verdict'] else '-'} {v['heuristic_name']}")
    else:
        for name, d in report.get("definitions", {}).items():
            lines.append(f"{d['command']} {name}")
            lines.extend(f"  {c}" for c in d["clauses"])
        if "goal" in report:
            lines.append(f"lemma {report['goal']['name']}: {report['goal']['term']}")
            lines.extend(report["goal_table"])
            lines.extend(f"try {c}" for c in report["candidates"])
        for name, text in report.get("heuristics", {}).items():
            lines.append(f"{name} :=\n  {text}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, report = COMMANDS[args.command](args)
    except (UsageError, TheoryError, L.AssertionSyntaxError, EvalError) as e:
        print(f"selfie: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:  # keep the documented exit codes even on bugs
        print(f"selfie: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(render_text(args.command, report))
    return status


if __name__ == "__main__":
    sys.exit(main())
