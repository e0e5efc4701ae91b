"""Shipped heuristics, candidate generation and suite scoring."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from typing import Iterable, Optional

from .. import lang as L
from ..interp import DEFAULT_MAX_DEPTH, EvalError, Evaluator, Verdict
from ..terms import FreeVar, Term, free_vars
from ..theory import InductArguments, ProofContext

ASSET_FILES = (
    "naive_generalization.selfie",
    "semantic_generalization.selfie",
    "induction_term_occurs.selfie",
)
STANDARD_NAMES = (
    "naive_generalization",
    "generalize_only_what_should_be_generalized",
    "induction_term_occurs",
)


def asset_source(filename: str) -> str:
    return resources.files(__package__).joinpath(filename).read_text(encoding="utf-8")


def shipped_definitions() -> dict[str, L.Assertion]:
    """All definitions from the bundled ``.selfie`` files, in file order."""
    defs: dict[str, L.Assertion] = {}
    for filename in ASSET_FILES:
        defs.update(L.parse_assertion(asset_source(filename), path=filename))
    return defs


def naive_generalization() -> L.Assertion:
    return shipped_definitions()["naive_generalization"]


def semantic_generalization() -> tuple[L.Assertion, L.Assertion]:
    """(outer, inner): the outer heuristic refers to the inner one by name."""
    defs = shipped_definitions()
    return defs["generalize_only_what_should_be_generalized"], defs["generalize_nth_argument_of"]


@dataclass(frozen=True)
class Heuristic:
    name: str
    assertion: L.Assertion  # closed over the definitions it uses
    weight: Fraction = Fraction(1)


@dataclass
class HeuristicSuite:
    heuristics: list[Heuristic] = field(default_factory=list)

    def __post_init__(self):
        names = [h.name for h in self.heuristics]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate heuristic names in suite: {names}")

    def __len__(self):
        return len(self.heuristics)

    def __iter__(self):
        return iter(self.heuristics)

    @property
    def total_weight(self) -> Fraction:
        return sum((h.weight for h in self.heuristics), Fraction(0))

    @classmethod
    def from_definitions(cls, defs: dict[str, L.Assertion], names: Iterable[str], weights=None) -> "HeuristicSuite":
        weights = weights or {}
        return cls([
            Heuristic(n, L.close_over(defs, n), Fraction(weights.get(n, 1)))
            for n in names
        ])


def standard_suite(defs: Optional[dict[str, L.Assertion]] = None) -> HeuristicSuite:
    """The three bundled heuristics with unit weights.

    ``defs`` may override shipped definitions by name.
    """
    merged = shipped_definitions()
    if defs:
        merged.update(defs)
    return HeuristicSuite.from_definitions(merged, STANDARD_NAMES)


@dataclass
class Score:
    candidate: InductArguments
    satisfied: set[str]
    total: Fraction
    per_heuristic: dict[str, Verdict]

    def to_json(self) -> dict:
        return {
            "candidate": self.candidate.to_json(),
            "candidate_text": self.candidate.describe(),
            "total": _number(self.total),
            "satisfied": sorted(self.satisfied),
            "verdicts": [v.to_json() for v in self.per_heuristic.values()],
        }


def _number(x: Fraction):
    return int(x) if x.denominator == 1 else float(x)


def judge_safely(h: Heuristic, goal: Term, args: InductArguments, ctx: ProofContext, max_depth: int) -> Verdict:
    """Like :func:`interp.judge` but turns evaluation errors into a false verdict."""
    ev = Evaluator(ctx, max_depth=max_depth)
    try:
        result = ev.evaluate(h.assertion, goal, args)
    except EvalError as e:
        return Verdict(h.name, False, ev.warnings + [str(e)], ev.stats, e)
    return Verdict(h.name, result, ev.warnings, ev.stats)


def score_candidate(goal, args, ctx, suite: HeuristicSuite, max_depth=DEFAULT_MAX_DEPTH) -> Score:
    per = {h.name: judge_safely(h, goal, args, ctx, max_depth) for h in suite}
    satisfied = {n for n, v in per.items() if v.verdict}
    total = sum((h.weight for h in suite if h.name in satisfied), Fraction(0))
    return Score(args, satisfied, total, per)


def score_candidates(
    goal: Term,
    candidates: list[InductArguments],
    ctx: ProofContext,
    suite: HeuristicSuite,
    max_depth: int = DEFAULT_MAX_DEPTH,
    workers: int = 1,
) -> list[Score]:
    """Score every candidate; best first, ties kept in candidate order."""
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            scores = list(pool.map(lambda c: score_candidate(goal, c, ctx, suite, max_depth), candidates))
    else:
        scores = [score_candidate(goal, c, ctx, suite, max_depth) for c in candidates]
    # sorted() is stable, which gives the tie-break for free
    return sorted(scores, key=lambda s: s.total, reverse=True)


@dataclass(frozen=True)
class CandidateLimits:
    max_induction_vars: int = 1
    max_arbitrary: int = 2
    max_candidates: int = 64


def _subsets(items: list, max_size: int, min_size: int = 0):
    for k in range(min_size, min(max_size, len(items)) + 1):
        yield from combinations(items, k)


def generate_candidates(goal: Term, ctx: ProofContext = None, limits: CandidateLimits = CandidateLimits()) -> list[InductArguments]:
    """Induct on subsets of the goal's free variables, generalizing subsets of the rest.

    Variables are taken in order of first occurrence; smaller sets come first.
    """
    names = free_vars(goal)
    out: list[InductArguments] = []
    for induct in _subsets(names, limits.max_induction_vars, min_size=1):
        rest = [n for n in names if n not in induct]
        for arbitrary in _subsets(rest, limits.max_arbitrary):
            out.append(InductArguments(
                tuple(FreeVar(n) for n in induct),
                tuple(FreeVar(n) for n in arbitrary),
            ))
            if len(out) >= limits.max_candidates:
                return out
    return out
