"""Assertion language: AST, concrete syntax, printer and static lint.

Concrete syntax (ASCII, with the usual logic symbols accepted as synonyms)::

    name := ALL x : term. term_is_free (x) -> EX y : term in arbitrary_term. are_same_terms (x, y)

Quantifiers::

    EX x : term. ...                      ALL x : number. ...
    EX x : term in induction_term. ...    EX x : term in arbitrary_term. ...
    EX o : term_occurrence : t. ...       EX o in t. ...   (occurrences of term t)

Lambdas are ``\\ [a, b]. body`` and are applied with ``f [x, y]``. Atomic
assertions take their arguments in parentheses or brackets. The semantic
constructs are ``in_some_definition (t, heuristic, [args])`` and
``in_all_definition (...)``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from . import terms as T
from .theory import DefinitionCommand


class SelfieType(enum.Enum):
    TERM = "term"
    TERM_OCCURRENCE = "term_occurrence"
    RULE = "rule"
    NUMBER = "number"


class ModifierKind(enum.Enum):
    INDUCTION_TERM = "induction_term"
    ARBITRARY_TERM = "arbitrary_term"


EXISTS = "exists"
FORALL = "forall"
SOME = "some"
ALL = "all"

# argument sorts: occ, term, num, rule, cmd
ATOMICS: dict[str, tuple[str, ...]] = {
    "is_rule_of": ("rule", "occ"),
    "term_occurrence_is_of_term": ("occ", "term"),
    "are_same_term": ("occ", "occ"),
    "are_of_same_term": ("occ", "occ"),
    "are_same_terms": ("term", "term"),
    "is_in_term_occurrence": ("occ", "occ"),
    "is_atomic": ("occ",),
    "is_constant": ("occ",),
    "is_free_variable": ("occ",),
    "is_lambda": ("occ",),
    "is_application": ("occ",),
    "is_an_argument_of": ("occ", "occ"),
    "is_nth_argument_of": ("occ", "num", "occ"),
    "is_nth_induction_term": ("term", "num"),
    "is_nth_arbitrary_term": ("term", "num"),
    "is_at_deepest": ("occ",),
    "term_is_free": ("term",),
    "are_same_number": ("num", "num"),
    "is_defined_with_recursion_keyword": ("term",),
    "is_defined_with_command": ("term", "cmd"),
    "is_or_below_nth_argument_of": ("occ", "num", "occ"),
    "is_root_in_a_location": ("occ",),
    "is_lhs_of_root": ("occ", "occ"),
    "is_nplus1th_child_of": ("occ", "num", "occ"),
}

SEMANTICS = {"in_some_definition": SOME, "in_all_definition": ALL}


# -- AST ---------------------------------------------------------------------

def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class NumberLit:
    value: int


@dataclass(frozen=True)
class TermLit:
    term: T.Term


@dataclass(frozen=True)
class CommandLit:
    command: DefinitionCommand


@dataclass(frozen=True)
class True_:
    pass


@dataclass(frozen=True)
class False_:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Assertion"


@dataclass(frozen=True)
class And:
    left: "Assertion"
    right: "Assertion"


@dataclass(frozen=True)
class Or:
    left: "Assertion"
    right: "Assertion"


@dataclass(frozen=True)
class Implies:
    left: "Assertion"
    right: "Assertion"


@dataclass(frozen=True)
class QuantTyped:
    kind: str
    var: str
    type: SelfieType
    body: "Assertion"
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class QuantModifier:
    kind: str
    var: str
    modifier: ModifierKind
    body: "Assertion"
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class QuantOccIn:
    kind: str
    var: str
    term_var: str
    body: "Assertion"
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class Lambda:
    params: tuple[str, ...]
    body: "Assertion"


@dataclass(frozen=True)
class Apply:
    fun: "Assertion"
    args: tuple["Assertion", ...]
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class Atomic:
    name: str
    args: tuple["Assertion", ...]
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class Semantic:
    kind: str
    target: "Assertion"
    heuristic: "Assertion"
    args: tuple["Assertion", ...]
    pos: Optional[tuple[int, int]] = _pos()


@dataclass(frozen=True)
class Let:
    name: str
    bound: "Assertion"
    body: "Assertion"


Assertion = Union[
    Var, NumberLit, TermLit, CommandLit, True_, False_, Not, And, Or, Implies,
    QuantTyped, QuantModifier, QuantOccIn, Lambda, Apply, Atomic, Semantic, Let,
]

QUANTIFIERS = (QuantTyped, QuantModifier, QuantOccIn)


def subexpressions(a: Assertion):
    """Immediate sub-assertions of ``a``."""
    if isinstance(a, Not):
        return [a.arg]
    if isinstance(a, (And, Or, Implies)):
        return [a.left, a.right]
    if isinstance(a, QUANTIFIERS) or isinstance(a, Lambda):
        return [a.body]
    if isinstance(a, Apply):
        return [a.fun, *a.args]
    if isinstance(a, Atomic):
        return list(a.args)
    if isinstance(a, Semantic):
        return [a.target, a.heuristic, *a.args]
    if isinstance(a, Let):
        return [a.bound, a.body]
    return []


def free_names(a: Assertion) -> set[str]:
    """Names a refers to without binding them."""
    if isinstance(a, Var):
        return {a.name}
    if isinstance(a, QuantOccIn):
        return {a.term_var} | (free_names(a.body) - {a.var})
    if isinstance(a, QUANTIFIERS):
        return free_names(a.body) - {a.var}
    if isinstance(a, Lambda):
        return free_names(a.body) - set(a.params)
    if isinstance(a, Let):
        return free_names(a.bound) | (free_names(a.body) - {a.name})
    out: set[str] = set()
    for s in subexpressions(a):
        out |= free_names(s)
    return out


# -- lexer -------------------------------------------------------------------

class AssertionSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int, path: Optional[str] = None):
        self.line = line
        self.col = col
        self.path = path
        prefix = f"{path}:" if path else "line "
        super().__init__(f"{prefix}{line}:{col}: {message}")


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<name>is_n\+1th_child_of|[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>\d+)
  | (?P<sym>:=|->|→|⟶|[:.,()\[\]&|!\\λ∀∃∈∧∨¬])
    """,
    re.VERBOSE,
)

_SYMBOL_SYNONYMS = {
    "→": "->", "⟶": "->", "∧": "&", "∨": "|", "¬": "!", "λ": "\\",
    "∀": "ALL", "∃": "EX", "∈": "in",
}

_COMMAND_WORDS = {c.value: c for c in DefinitionCommand}
_TYPE_WORDS = {t.value: t for t in SelfieType}
_MODIFIER_WORDS = {m.value: m for m in ModifierKind}
# type and modifier words only occur in quantifier headers, so they stay usable
# as variable names
KEYWORDS = (
    {"EX", "ALL", "in", "let", "True", "False"}
    | set(_COMMAND_WORDS) | set(ATOMICS) | set(SEMANTICS)
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(source: str, path: Optional[str]) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if not m:
            raise AssertionSyntaxError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1, path
            )
        kind, text = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            if kind == "sym":
                text = _SYMBOL_SYNONYMS.get(text, text)
                if text in ("ALL", "EX", "in"):
                    kind = "name"
            if text == "is_n+1th_child_of":
                text = "is_nplus1th_child_of"
            toks.append(_Tok(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text if kind == "ws" or kind == "string" else ""):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, source: str, constant_names, path: Optional[str]):
        self.path = path
        self.toks = _lex(source, path)
        self.i = 0
        self.constant_names = frozenset(constant_names)
        self.scope: list[str] = []
        self.globals: list[str] = []

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("sym", "name") and tok.text == text

    def error(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise AssertionSyntaxError(message, tok.line, tok.col, self.path)

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            found = self.peek().text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        return self.next()

    def ident(self) -> _Tok:
        tok = self.next()
        if tok.kind != "name" or tok.text in KEYWORDS:
            self.error(f"expected a variable name, found {tok.text or 'end of input'!r}", tok)
        return tok

    # file := (NAME ":=" assertion)+
    def file(self) -> dict[str, Assertion]:
        defs: dict[str, Assertion] = {}
        if self.peek().kind == "eof":
            self.error("no definitions found")
        while self.peek().kind != "eof":
            name_tok = self.ident()
            if name_tok.text in defs:
                self.error(f"duplicate definition {name_tok.text!r}", name_tok)
            self.expect(":=")
            defs[name_tok.text] = self.assertion()
            self.globals.append(name_tok.text)
        return defs

    def single(self) -> Assertion:
        a = self.assertion()
        if self.peek().kind != "eof":
            self.error(f"unexpected {self.peek().text!r}")
        return a

    def assertion(self) -> Assertion:
        return self.implies()

    def implies(self) -> Assertion:
        left = self.disjunction()
        if self.at("->"):
            self.next()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Assertion:
        left = self.conjunction()
        while self.at("|"):
            self.next()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Assertion:
        left = self.unary()
        while self.at("&"):
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> Assertion:
        if self.at("!"):
            self.next()
            return Not(self.unary())
        if self.at("EX") or self.at("ALL"):
            return self.quantifier()
        if self.at("\\"):
            return self.lambda_()
        if self.at("let"):
            return self.let()
        return self.postfix()

    def bind(self, names, body_fn):
        self.scope.extend(names)
        try:
            return body_fn()
        finally:
            del self.scope[len(self.scope) - len(names):]

    def quantifier(self) -> Assertion:
        start = self.next()
        kind = EXISTS if start.text == "EX" else FORALL
        pos = (start.line, start.col)
        var = self.ident().text
        if self.at("in"):
            self.next()
            term_var = self.bound_name()
            if self.at(":"):
                self.next()
                self.expect("term")
            self.expect(".")
            return QuantOccIn(kind, var, term_var, self.bind([var], self.assertion), pos)
        self.expect(":")
        type_tok = self.next()
        if type_tok.text not in _TYPE_WORDS:
            self.error(f"unknown type {type_tok.text!r}", type_tok)
        qtype = _TYPE_WORDS[type_tok.text]
        if qtype is SelfieType.TERM and self.at("in"):
            self.next()
            mod_tok = self.next()
            if mod_tok.text not in _MODIFIER_WORDS:
                self.error(f"expected induction_term or arbitrary_term, found {mod_tok.text!r}", mod_tok)
            self.expect(".")
            modifier = _MODIFIER_WORDS[mod_tok.text]
            return QuantModifier(kind, var, modifier, self.bind([var], self.assertion), pos)
        if qtype is SelfieType.TERM_OCCURRENCE and (self.at(":") or self.at("in")):
            self.next()
            term_var = self.bound_name()
            if self.at(":"):
                self.next()
                self.expect("term")
            self.expect(".")
            return QuantOccIn(kind, var, term_var, self.bind([var], self.assertion), pos)
        self.expect(".")
        return QuantTyped(kind, var, qtype, self.bind([var], self.assertion), pos)

    def bound_name(self) -> str:
        tok = self.ident()
        if tok.text not in self.scope and tok.text not in self.globals:
            self.error(f"unbound variable {tok.text!r}", tok)
        return tok.text

    def lambda_(self) -> Assertion:
        self.next()
        self.expect("[")
        params = []
        if not self.at("]"):
            params.append(self.ident().text)
            while self.at(","):
                self.next()
                params.append(self.ident().text)
        self.expect("]")
        if len(set(params)) != len(params):
            self.error("lambda parameters must be distinct")
        self.expect(".")
        return Lambda(tuple(params), self.bind(params, self.assertion))

    def let(self) -> Assertion:
        self.next()
        name = self.ident().text
        self.expect(":=")
        bound = self.assertion()
        self.expect("in")
        return Let(name, bound, self.bind([name], self.assertion))

    def postfix(self) -> Assertion:
        a = self.primary()
        while self.at("["):
            tok = self.peek()
            args = self.arg_list("[", "]")
            a = Apply(a, tuple(args), (tok.line, tok.col))
        return a

    def arg_list(self, open_: str, close: str) -> list[Assertion]:
        self.expect(open_)
        args = []
        if not self.at(close):
            args.append(self.assertion())
            while self.at(","):
                self.next()
                args.append(self.assertion())
        self.expect(close)
        return args

    def primary(self) -> Assertion:
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return NumberLit(int(tok.text))
        if tok.kind == "string":
            self.next()
            try:
                return TermLit(T.parse_term(tok.text[1:-1], self.constant_names))
            except T.TermSyntaxError as e:
                self.error(f"in term literal: {e}", tok)
        if self.at("("):
            self.next()
            a = self.assertion()
            self.expect(")")
            return a
        if tok.kind != "name":
            self.error(f"expected an assertion, found {tok.text or 'end of input'!r}")
        self.next()
        if tok.text == "True":
            return True_()
        if tok.text == "False":
            return False_()
        if tok.text in _COMMAND_WORDS:
            return CommandLit(_COMMAND_WORDS[tok.text])
        if tok.text in ATOMICS:
            return self.atomic(tok)
        if tok.text in SEMANTICS:
            return self.semantic(tok)
        if tok.text in KEYWORDS:
            self.error(f"unexpected keyword {tok.text!r}", tok)
        if tok.text not in self.scope and tok.text not in self.globals:
            if self.at("(") or self.at("["):
                self.error(f"unknown atomic assertion {tok.text!r}", tok)
            self.error(f"unbound variable {tok.text!r}", tok)
        return Var(tok.text, (tok.line, tok.col))

    def _open(self) -> tuple[str, str]:
        if self.at("("):
            return "(", ")"
        if self.at("["):
            return "[", "]"
        self.error(f"expected '(' or '[' for arguments, found {self.peek().text!r}")

    def atomic(self, tok: _Tok) -> Assertion:
        args = self.arg_list(*self._open())
        arity = len(ATOMICS[tok.text])
        if len(args) != arity:
            self.error(f"{tok.text} takes {arity} argument(s), got {len(args)}", tok)
        return Atomic(tok.text, tuple(args), (tok.line, tok.col))

    def semantic(self, tok: _Tok) -> Assertion:
        open_, close = self._open()
        self.next()
        target = self.assertion()
        self.expect(",")
        heuristic = self.assertion()
        self.expect(",")
        args = self.arg_list("[", "]")
        self.expect(close)
        return Semantic(SEMANTICS[tok.text], target, heuristic, tuple(args), (tok.line, tok.col))


def parse_assertion(
    source: str, constant_names=frozenset(), path: Optional[str] = None, known=()
) -> dict[str, Assertion]:
    """Parse a file of ``name := assertion`` definitions, in order.

    ``constant_names`` decides which names in quoted term literals are
    constants; ``known`` lists definitions from other files the source may use.
    """
    p = _Parser(source, constant_names, path)
    p.globals = list(known)
    return p.file()


def parse_expression(source: str, constant_names=frozenset(), bound=()) -> Assertion:
    """Parse one assertion; ``bound`` lists names to treat as already in scope."""
    p = _Parser(source, constant_names, None)
    p.globals = list(bound)
    return p.single()


# -- printer -----------------------------------------------------------------

_PREC_QUANT, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = range(6)
_KIND_WORD = {EXISTS: "EX", FORALL: "ALL"}


def print_assertion(a: Assertion) -> str:
    return _pr(a, 0, True)


def _paren(text: str, mine: int, ctx: int) -> str:
    return f"({text})" if mine < ctx else text


def _args(args) -> str:
    return ", ".join(_pr(x, 0, True) for x in args)


def _pr(a: Assertion, ctx: int, tail: bool) -> str:
    # ``tail``: nothing follows in the enclosing context, so a binder may run
    # to the end without parentheses.
    if isinstance(a, Var):
        return a.name
    if isinstance(a, NumberLit):
        return str(a.value)
    if isinstance(a, TermLit):
        return '"' + T.print_term(a.term) + '"'
    if isinstance(a, CommandLit):
        return a.command.value
    if isinstance(a, True_):
        return "True"
    if isinstance(a, False_):
        return "False"
    if isinstance(a, (Not, And, Or, Implies)):
        if isinstance(a, Not):
            mine, text = _PREC_NOT, "!" + _pr(a.arg, _PREC_NOT, tail or _PREC_NOT < ctx)
        else:
            mine, op, lp, rp = {
                And: (_PREC_AND, "&", _PREC_AND, _PREC_NOT),
                Or: (_PREC_OR, "|", _PREC_OR, _PREC_AND),
                Implies: (_PREC_IMP, "->", _PREC_OR, _PREC_IMP),
            }[type(a)]
            right_tail = tail or mine < ctx
            text = f"{_pr(a.left, lp, False)} {op} {_pr(a.right, rp, right_tail)}"
        return _paren(text, mine, ctx)
    if isinstance(a, QuantTyped):
        head = f"{_KIND_WORD[a.kind]} {a.var} : {a.type.value}"
    elif isinstance(a, QuantModifier):
        head = f"{_KIND_WORD[a.kind]} {a.var} : term in {a.modifier.value}"
    elif isinstance(a, QuantOccIn):
        head = f"{_KIND_WORD[a.kind]} {a.var} : term_occurrence : {a.term_var}"
    elif isinstance(a, Lambda):
        head = "\\ [" + ", ".join(a.params) + "]"
    elif isinstance(a, Let):
        head = f"let {a.name} := {_pr(a.bound, 0, False)} in"
    else:
        head = None
    if head is not None:
        sep = " " if isinstance(a, Let) else ". "
        text = f"{head}{sep}{_pr(a.body, 0, True)}"
        # only a binder at the very end of its context may go unparenthesized
        return text if tail and ctx <= _PREC_NOT else f"({text})"
    if isinstance(a, Apply):
        return f"{_pr(a.fun, _PREC_ATOM, False)} [{_args(a.args)}]"
    if isinstance(a, Atomic):
        return f"{a.name} ({_args(a.args)})"
    if isinstance(a, Semantic):
        name = "in_some_definition" if a.kind == SOME else "in_all_definition"
        return f"{name} ({_pr(a.target, 0, True)}, {_pr(a.heuristic, 0, True)}, [{_args(a.args)}])"
    raise TypeError(f"not an assertion: {a!r}")


def print_definitions(defs: dict[str, Assertion]) -> str:
    return "".join(f"{name} :=\n  {print_assertion(a)}\n\n" for name, a in defs.items())


# -- static lint -------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    definition: str
    message: str
    pos: Optional[tuple[int, int]] = None

    def __str__(self) -> str:
        where = f"{self.pos[0]}:{self.pos[1]}: " if self.pos else ""
        return f"{where}{self.severity}: {self.definition}: {self.message}"


def static_check(defs: dict[str, Assertion]) -> list[Diagnostic]:
    """Lint parsed definitions.

    Flags occurrence variables written into semantic-construct arguments
    (error), lambdas used where a boolean is expected (warning) and shadowed
    names (warning). Passing occurrences indirectly, e.g. through a lambda
    parameter, is only caught at evaluation time.
    """
    out: list[Diagnostic] = []
    globals_ = list(defs)

    def warn(name, msg, pos=None):
        out.append(Diagnostic("warning", name, msg, pos))

    def walk(def_name: str, a: Assertion, scope: dict[str, str], want_bool: bool):
        names_lambda = isinstance(a, Var) and a.name not in scope and isinstance(defs.get(a.name), Lambda)
        if want_bool and (isinstance(a, Lambda) or names_lambda):
            warn(def_name, "lambda used where a boolean is expected")

        def binder(var, sort, body, pos=None):
            if var in scope or var in globals_:
                warn(def_name, f"{var!r} shadows an outer binding", pos)
            walk(def_name, body, {**scope, var: sort}, True)

        if isinstance(a, QuantTyped):
            sort = "occ" if a.type is SelfieType.TERM_OCCURRENCE else a.type.value
            binder(a.var, sort, a.body, a.pos)
        elif isinstance(a, QuantModifier):
            binder(a.var, "term", a.body, a.pos)
        elif isinstance(a, QuantOccIn):
            binder(a.var, "occ", a.body, a.pos)
        elif isinstance(a, Lambda):
            inner = dict(scope)
            for p in a.params:
                if p in scope or p in globals_:
                    warn(def_name, f"{p!r} shadows an outer binding")
                inner[p] = "any"
            walk(def_name, a.body, inner, False)
        elif isinstance(a, Let):
            walk(def_name, a.bound, scope, False)
            binder(a.name, "any", a.body)
        elif isinstance(a, Semantic):
            walk(def_name, a.target, scope, False)
            walk(def_name, a.heuristic, scope, False)
            for arg in a.args:
                for name in sorted(free_names(arg)):
                    if scope.get(name) == "occ":
                        out.append(Diagnostic(
                            "error", def_name,
                            f"term occurrence {name!r} passed through a semantic construct",
                            a.pos,
                        ))
                walk(def_name, arg, scope, False)
        elif isinstance(a, (Not, And, Or, Implies)):
            for s in subexpressions(a):
                walk(def_name, s, scope, True)
        else:
            for s in subexpressions(a):
                walk(def_name, s, scope, False)

    for name, a in defs.items():
        walk(name, a, {}, False)
    return out


def close_over(defs: dict[str, Assertion], name: str) -> Assertion:
    """Wrap ``defs[name]`` in ``Let`` bindings for the definitions it uses.

    Only definitions reachable from ``name`` are bound, in file order, so the
    result is a closed assertion the interpreter can evaluate on its own.
    """
    if name not in defs:
        raise KeyError(name)
    order = list(defs)
    needed: set[str] = set()
    todo = [name]
    while todo:
        n = todo.pop()
        for ref in free_names(defs[n]):
            if ref in defs and ref not in needed and order.index(ref) < order.index(n):
                needed.add(ref)
                todo.append(ref)
    body = defs[name]
    for n in reversed([n for n in order if n in needed]):
        body = Let(n, defs[n], body)
    return body
