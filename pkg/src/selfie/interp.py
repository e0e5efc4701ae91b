"""Evaluation of assertions against a goal, its induct arguments and definitions.

Quantifiers over terms, occurrences and numbers range over the lookup table of
the *current* context: the goal at the outer level, a single defining clause
inside a semantic construct. Only terms, numbers and booleans cross between
the two.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from . import lang as L
from .table import LookupTable
from .terms import EQ, Constant, FreeVar, Path, Term
from .theory import RECURSIVE_COMMANDS, DefinitionCommand, InductArguments, ProofContext

DEFAULT_MAX_DEPTH = 3


class ErrorKind(enum.Enum):
    TYPE_MISMATCH = "TypeMismatch"
    UNBOUND_VARIABLE = "UnboundVariable"
    OCCURRENCE_CROSSED_BOUNDARY = "OccurrenceCrossedBoundary"
    MODIFIER_IN_INNER_CONTEXT = "ModifierInInnerContext"
    NO_DEFINITION = "NoDefinition"
    DEPTH_LIMIT_EXCEEDED = "DepthLimitExceeded"
    NOT_A_BOOLEAN = "NotABoolean"


class EvalError(Exception):
    def __init__(self, kind: ErrorKind, construct: str, message: str, pos=None):
        self.kind = kind
        self.construct = construct
        self.pos = pos
        where = f" at {pos[0]}:{pos[1]}" if pos else ""
        super().__init__(f"{kind.value} in {construct}{where}: {message}")


# -- values ------------------------------------------------------------------

@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class TermV:
    term: Term


@dataclass(frozen=True)
class Occurrence:
    path: Path
    owner: LookupTable = field(compare=False, repr=False)


@dataclass(frozen=True)
class RuleV:
    name: str


@dataclass(frozen=True)
class CommandV:
    command: DefinitionCommand


@dataclass(frozen=True)
class Closure:
    params: tuple[str, ...]
    body: L.Assertion
    env: dict = field(compare=False, repr=False)


Value = Union[bool, Number, TermV, Occurrence, RuleV, CommandV, Closure]


def describe(v: Value) -> str:
    if isinstance(v, bool):
        return "boolean"
    return type(v).__name__


# -- contexts ----------------------------------------------------------------

@dataclass(frozen=True)
class Outer:
    table: LookupTable
    args: InductArguments
    ctx: ProofContext
    depth: int = 0


@dataclass(frozen=True)
class Inner:
    table: LookupTable
    defining_constant: str
    ctx: ProofContext
    depth: int
    clause_index: int = 0


EvalContext = Union[Outer, Inner]


@dataclass
class EvalStats:
    quantifier_bindings_tried: int = 0
    semantic_calls: int = 0
    clauses_examined: int = 0
    # (table role, mode) -> number of lookups; role is "goal" or "clause"
    table_accesses: Counter = field(default_factory=Counter)

    def to_json(self) -> dict:
        return {
            "quantifier_bindings_tried": self.quantifier_bindings_tried,
            "semantic_calls": self.semantic_calls,
            "clauses_examined": self.clauses_examined,
        }


class Evaluator:
    """One evaluation run over a fixed proof context.

    ``exhaustive`` keeps quantifiers and semantic constructs going after
    their result is known, so that with ``trace`` every satisfying binding is
    recorded rather than the first. Connectives still short-circuit, since a
    left operand often guards the right one. Verdicts and errors do not change.
    """

    def __init__(
        self,
        ctx: ProofContext,
        max_depth: int = DEFAULT_MAX_DEPTH,
        trace: bool = False,
        exhaustive: bool = False,
    ):
        self.ctx = ctx
        self.max_depth = max_depth
        self.tracing = trace
        self.exhaustive = exhaustive
        self.stats = EvalStats()
        self.warnings: list[str] = []
        self.trace: list[dict[str, Value]] = []
        self.goal_table: Optional[LookupTable] = None
        self._clause_tables: dict[tuple[str, int], LookupTable] = {}

    def evaluate(self, a: L.Assertion, goal: Term, args: InductArguments) -> bool:
        self.goal_table = LookupTable(goal)
        ec = Outer(self.goal_table, args, self.ctx)
        v = self.eval_expr(a, {}, ec)
        if not isinstance(v, bool):
            raise EvalError(ErrorKind.NOT_A_BOOLEAN, "heuristic", f"evaluates to a {describe(v)}")
        return v

    def warn(self, message: str):
        if message not in self.warnings:
            self.warnings.append(message)

    def table(self, ec: EvalContext) -> LookupTable:
        role = "goal" if ec.table is self.goal_table else "clause"
        mode = "outer" if isinstance(ec, Outer) else "inner"
        self.stats.table_accesses[role, mode] += 1
        return ec.table

    # -- expressions -----------------------------------------------------

    def eval_expr(self, a: L.Assertion, env: dict, ec: EvalContext) -> Value:
        if isinstance(a, L.True_):
            return True
        if isinstance(a, L.False_):
            return False
        if isinstance(a, L.Var):
            try:
                return env[a.name]
            except KeyError:
                raise EvalError(ErrorKind.UNBOUND_VARIABLE, a.name, "variable is not bound", a.pos) from None
        if isinstance(a, L.NumberLit):
            return Number(a.value)
        if isinstance(a, L.TermLit):
            return TermV(a.term)
        if isinstance(a, L.CommandLit):
            return CommandV(a.command)
        if isinstance(a, L.Not):
            return not self.boolean(a.arg, env, ec, "!")
        if isinstance(a, L.And):
            return self.boolean(a.left, env, ec, "&") and self.boolean(a.right, env, ec, "&")
        if isinstance(a, L.Or):
            return self.boolean(a.left, env, ec, "|") or self.boolean(a.right, env, ec, "|")
        if isinstance(a, L.Implies):
            return not self.boolean(a.left, env, ec, "->") or self.boolean(a.right, env, ec, "->")
        if isinstance(a, L.QUANTIFIERS):
            domain = self.enumerate_domain(a, env, ec)
            return self.eval_quantifier(a.kind, a.var, domain, a.body, env, ec)
        if isinstance(a, L.Lambda):
            return Closure(a.params, a.body, env)
        if isinstance(a, L.Apply):
            fun = self.eval_expr(a.fun, env, ec)
            args = [self.eval_expr(x, env, ec) for x in a.args]
            return self.apply_closure(fun, args, ec, "application", a.pos)
        if isinstance(a, L.Atomic):
            vals = [self.eval_expr(x, env, ec) for x in a.args]
            return self.eval_atomic(a.name, vals, ec, a.pos)
        if isinstance(a, L.Semantic):
            target = self.eval_expr(a.target, env, ec)
            heuristic = self.eval_expr(a.heuristic, env, ec)
            args = [self.eval_expr(x, env, ec) for x in a.args]
            return self.eval_semantic(a.kind, target, heuristic, args, ec, a.pos)
        if isinstance(a, L.Let):
            bound = self.eval_expr(a.bound, env, ec)
            return self.eval_expr(a.body, {**env, a.name: bound}, ec)
        raise TypeError(f"not an assertion: {a!r}")

    def boolean(self, a: L.Assertion, env: dict, ec: EvalContext, construct: str) -> bool:
        v = self.eval_expr(a, env, ec)
        if not isinstance(v, bool):
            raise EvalError(ErrorKind.TYPE_MISMATCH, construct, f"expected a boolean, got a {describe(v)}")
        return v

    def apply_closure(self, fun: Value, args: list[Value], ec: EvalContext, construct: str, pos=None) -> Value:
        if not isinstance(fun, Closure):
            raise EvalError(ErrorKind.TYPE_MISMATCH, construct, f"cannot apply a {describe(fun)}", pos)
        if len(args) != len(fun.params):
            raise EvalError(
                ErrorKind.TYPE_MISMATCH, construct,
                f"lambda takes {len(fun.params)} argument(s), got {len(args)}", pos,
            )
        env = dict(fun.env)
        env.update(zip(fun.params, args))
        return self.eval_expr(fun.body, env, ec)

    # -- quantifiers -----------------------------------------------------

    def enumerate_domain(self, q, env: dict, ec: EvalContext) -> list[Value]:
        if isinstance(q, L.QuantOccIn):
            t = env.get(q.term_var)
            if not isinstance(t, TermV):
                raise EvalError(
                    ErrorKind.TYPE_MISMATCH, "term_occurrence quantifier",
                    f"{q.term_var!r} must be a term, got {describe(t) if t is not None else 'nothing'}", q.pos,
                )
            table = self.table(ec)
            return [Occurrence(p, table) for p in table.occurrences_of(t.term)]
        if isinstance(q, L.QuantModifier):
            if not isinstance(ec, Outer):
                raise EvalError(
                    ErrorKind.MODIFIER_IN_INNER_CONTEXT, f"term in {q.modifier.value}",
                    "induct arguments are only visible outside semantic constructs", q.pos,
                )
            terms = (
                ec.args.induction_terms
                if q.modifier is L.ModifierKind.INDUCTION_TERM
                else ec.args.arbitrary_terms
            )
            return [TermV(t) for t in terms]
        qtype = q.type
        if qtype is L.SelfieType.RULE:
            if not isinstance(ec, Outer):
                raise EvalError(
                    ErrorKind.MODIFIER_IN_INNER_CONTEXT, "rule quantifier",
                    "induct arguments are only visible outside semantic constructs", q.pos,
                )
            return [RuleV(r) for r in ec.args.rules]
        table = self.table(ec)
        if qtype is L.SelfieType.TERM:
            return [TermV(t) for t in table.all_subterms()]
        if qtype is L.SelfieType.TERM_OCCURRENCE:
            return [Occurrence(p, table) for p in table.all_paths()]
        return [Number(n) for n in table.number_domain()]

    def eval_quantifier(self, kind: str, var: str, domain: list[Value], body, env: dict, ec: EvalContext) -> bool:
        want = kind == L.EXISTS
        result = not want
        for v in domain:
            self.stats.quantifier_bindings_tried += 1
            inner = {**env, var: v}
            holds = self._after_decision(result == want, lambda: self.boolean(body, inner, ec, "quantifier body"))
            if holds and self.tracing:
                self.trace.append(inner)
            if holds == want:
                result = want
                if not self.exhaustive:
                    break
        return result

    def _after_decision(self, decided: bool, thunk):
        """Run ``thunk``; once the verdict is fixed (exhaustive mode only),
        errors no longer matter and count as a non-result."""
        if not decided:
            return thunk()
        try:
            return thunk()
        except EvalError:
            return None

    # -- semantic constructs --------------------------------------------

    def clause_table(self, constant: str, index: int, clause: Term) -> LookupTable:
        key = (constant, index)
        if key not in self._clause_tables:
            self._clause_tables[key] = LookupTable(clause)
        return self._clause_tables[key]

    def eval_semantic(self, kind: str, target: Value, heuristic: Value, args: list[Value], ec: EvalContext, pos=None) -> bool:
        construct = "in_some_definition" if kind == L.SOME else "in_all_definition"
        for v in args:
            if isinstance(v, Occurrence):
                raise EvalError(
                    ErrorKind.OCCURRENCE_CROSSED_BOUNDARY, construct,
                    "term occurrences cannot be passed to a semantic construct", pos,
                )
            if not isinstance(v, (TermV, Number)):
                raise EvalError(
                    ErrorKind.TYPE_MISMATCH, construct,
                    f"arguments must be terms or numbers, got a {describe(v)}", pos,
                )
        if not (isinstance(target, TermV) and isinstance(target.term, Constant)):
            raise EvalError(ErrorKind.TYPE_MISMATCH, construct, f"first argument must be a constant, got {describe(target)}", pos)
        if not isinstance(heuristic, Closure):
            raise EvalError(ErrorKind.TYPE_MISMATCH, construct, f"second argument must be a lambda, got a {describe(heuristic)}", pos)
        depth = ec.depth + 1
        if depth > self.max_depth:
            raise EvalError(
                ErrorKind.DEPTH_LIMIT_EXCEEDED, construct,
                f"semantic constructs nested deeper than {self.max_depth}", pos,
            )
        self.stats.semantic_calls += 1
        name = target.term.name
        definition = ec.ctx.lookup(name)
        if definition is None:
            self.warn(f"{ErrorKind.NO_DEFINITION.value}: {name!r} has no definition in the proof context")
            return kind == L.ALL
        want = kind == L.SOME
        result = not want
        for i, clause in enumerate(definition.clauses):
            self.stats.clauses_examined += 1
            inner = Inner(self.clause_table(name, i, clause), name, ec.ctx, depth, i)
            decided = result == want
            v = self._after_decision(decided, lambda: self.apply_closure(heuristic, args, inner, construct, pos))
            if decided:
                continue
            if not isinstance(v, bool):
                raise EvalError(ErrorKind.TYPE_MISMATCH, construct, f"heuristic returned a {describe(v)}", pos)
            if v == want:
                result = want
                if not self.exhaustive:
                    break
        return result

    # -- atomic assertions -----------------------------------------------

    def eval_atomic(self, name: str, vals: list[Value], ec: EvalContext, pos=None) -> bool:
        sorts = L.ATOMICS.get(name)
        if sorts is None:
            raise EvalError(ErrorKind.TYPE_MISMATCH, name, "unknown atomic assertion", pos)
        if len(vals) != len(sorts):
            raise EvalError(ErrorKind.TYPE_MISMATCH, name, f"takes {len(sorts)} argument(s), got {len(vals)}", pos)
        for sort, v in zip(sorts, vals):
            self._check_sort(name, sort, v, ec, pos)
        return _ATOMIC_IMPL[name](self, ec, *vals)

    def _check_sort(self, name: str, sort: str, v: Value, ec: EvalContext, pos):
        expected = {"occ": Occurrence, "term": TermV, "num": Number, "rule": RuleV, "cmd": CommandV}[sort]
        if not isinstance(v, expected):
            raise EvalError(ErrorKind.TYPE_MISMATCH, name, f"expected {expected.__name__}, got {describe(v)}", pos)
        if sort == "occ" and v.owner is not ec.table:
            raise EvalError(
                ErrorKind.OCCURRENCE_CROSSED_BOUNDARY, name,
                "occurrence belongs to a different syntax tree than the current context", pos,
            )


# -- atomic semantics --------------------------------------------------------

def _head_parent(table: LookupTable, head: Path) -> Optional[Path]:
    """Path of the application spine whose head sits at ``head``, if any."""
    if not head or head[-1] != 1:
        return None
    parent = head[:-1]
    info = table.info(parent)
    return parent if info is not None and info.kind == "application" else None


def _nth_argument(table: LookupTable, n: int, head: Path) -> Optional[Path]:
    parent = _head_parent(table, head)
    if parent is None or n < 1:
        return None
    arg = parent + (n + 1,)
    return arg if table.contains(arg) else None


def _same_occ_terms(ev, ec, o1, o2):
    t = ev.table(ec)
    return t.info(o1.path).subterm_id == t.info(o2.path).subterm_id


def _node_kind(ev, ec, o):
    return ev.table(ec).info(o.path).kind


def _is_nth_argument_of(ev, ec, o1, n, o2):
    return _nth_argument(ev.table(ec), n.value, o2.path) == o1.path


def _is_an_argument_of(ev, ec, o1, o2):
    parent = _head_parent(ev.table(ec), o2.path)
    return parent is not None and o1.path[:-1] == parent and len(o1.path) > len(parent) and o1.path[-1] >= 2


def _is_or_below_nth_argument_of(ev, ec, o1, n, o2):
    arg = _nth_argument(ev.table(ec), n.value, o2.path)
    return arg is not None and o1.path[: len(arg)] == arg


def _is_lhs_of_root(ev, ec, lhs, root):
    t = ev.table(ec)
    if root.path != () or t.info(()).kind != "application":
        return False
    return t.term_at((1,)) == Constant(EQ) and lhs.path == (2,)


def _modifier_index(ev, ec, t, n, which):
    if not isinstance(ec, Outer):
        raise EvalError(
            ErrorKind.MODIFIER_IN_INNER_CONTEXT, f"is_nth_{which}_term",
            "induct arguments are only visible outside semantic constructs",
        )
    terms = ec.args.induction_terms if which == "induction" else ec.args.arbitrary_terms
    return 1 <= n.value <= len(terms) and terms[n.value - 1] == t.term


def _command(ec, t) -> Optional[DefinitionCommand]:
    return ec.ctx.command_of(t.term.name) if isinstance(t.term, Constant) else None


def _is_rule_of(ev, ec, r, o):
    t = ev.table(ec).term_at(o.path)
    return isinstance(t, Constant) and r.name == t.name + ".induct"


_ATOMIC_IMPL = {
    "are_same_term": _same_occ_terms,
    "are_of_same_term": _same_occ_terms,
    "are_same_terms": lambda ev, ec, a, b: a.term == b.term,
    "are_same_number": lambda ev, ec, a, b: a.value == b.value,
    "term_occurrence_is_of_term": lambda ev, ec, o, t: ev.table(ec).term_at(o.path) == t.term,
    "is_in_term_occurrence": lambda ev, ec, o1, o2: o1.path[: len(o2.path)] == o2.path,
    "is_atomic": lambda ev, ec, o: _node_kind(ev, ec, o) in ("constant", "free", "bound"),
    "is_constant": lambda ev, ec, o: _node_kind(ev, ec, o) == "constant",
    "is_free_variable": lambda ev, ec, o: _node_kind(ev, ec, o) == "free",
    "is_lambda": lambda ev, ec, o: _node_kind(ev, ec, o) == "lambda",
    "is_application": lambda ev, ec, o: _node_kind(ev, ec, o) == "application",
    "term_is_free": lambda ev, ec, t: isinstance(t.term, FreeVar),
    "is_nth_argument_of": _is_nth_argument_of,
    "is_an_argument_of": _is_an_argument_of,
    "is_or_below_nth_argument_of": _is_or_below_nth_argument_of,
    "is_nplus1th_child_of": lambda ev, ec, o1, n, o2: o1.path == o2.path + (n.value + 1,),
    "is_root_in_a_location": lambda ev, ec, o: o.path == (),
    "is_lhs_of_root": _is_lhs_of_root,
    "is_nth_induction_term": lambda ev, ec, t, n: _modifier_index(ev, ec, t, n, "induction"),
    "is_nth_arbitrary_term": lambda ev, ec, t, n: _modifier_index(ev, ec, t, n, "arbitrary"),
    "is_rule_of": _is_rule_of,
    "is_defined_with_command": lambda ev, ec, t, c: _command(ec, t) == c.command,
    "is_defined_with_recursion_keyword": lambda ev, ec, t: _command(ec, t) in RECURSIVE_COMMANDS,
    "is_at_deepest": lambda ev, ec, o: len(o.path) == ev.table(ec).max_depth,
}

assert set(_ATOMIC_IMPL) == set(L.ATOMICS)


# -- entry points ------------------------------------------------------------

@dataclass
class Verdict:
    heuristic_name: str
    verdict: bool
    warnings: list[str]
    stats: EvalStats
    error: Optional[EvalError] = None

    def to_json(self) -> dict:
        return {
            "heuristic_name": self.heuristic_name,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
            "eval_stats": self.stats.to_json(),
        }


def evaluate(
    a: L.Assertion,
    goal: Term,
    args: InductArguments,
    ctx: ProofContext,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> bool:
    return Evaluator(ctx, max_depth=max_depth).evaluate(a, goal, args)


def judge(
    name: str,
    a: L.Assertion,
    goal: Term,
    args: InductArguments,
    ctx: ProofContext,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Verdict:
    """Evaluate and package the result; evaluation errors propagate."""
    ev = Evaluator(ctx, max_depth=max_depth)
    result = ev.evaluate(a, goal, args)
    return Verdict(name, result, ev.warnings, ev.stats)
