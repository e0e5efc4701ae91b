"""Theory files: constant definitions, one goal, and candidate induct arguments.

A minimal Isabelle-flavoured format::

    primrec append :: "'a list => 'a list => 'a list" (infixr "@" 65) where
      "[] @ ys = ys"
    | "(x # xs) @ ys = x # xs @ ys"

    lemma model_proof: "itrev xs ys = rev xs @ ys"

    try induct xs arbitrary: ys
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .terms import (
    BUILTINS,
    INFIX_OPERATORS,
    Constant,
    Term,
    TermSyntaxError,
    iter_paths,
    normalize_clause,
    parse_term,
    print_term,
)


class DefinitionCommand(enum.Enum):
    DEFINITION = "definition"
    PRIMREC = "primrec"
    FUN = "fun"
    FUNCTION = "function"
    INDUCTIVE = "inductive"
    INDUCTIVE_SET = "inductive_set"


RECURSIVE_COMMANDS = frozenset(
    {DefinitionCommand.FUN, DefinitionCommand.FUNCTION, DefinitionCommand.PRIMREC}
)


class TheoryError(Exception):
    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = ""
        if path and line:
            where = f"{path}:{line}: "
        elif line:
            where = f"line {line}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class Definition:
    name: str
    command: DefinitionCommand
    clauses: tuple[Term, ...]


@dataclass
class ProofContext:
    """Registry of defined constants in declaration order."""

    definitions: dict[str, Definition] = field(default_factory=dict)
    aliases: dict[str, str] = field(default_factory=dict)
    builtins: frozenset = BUILTINS

    @property
    def constant_names(self) -> set[str]:
        return set(self.definitions) | set(self.builtins)

    def lookup(self, name: str) -> Optional[Definition]:
        return self.definitions.get(name)

    def command_of(self, name: str) -> Optional[DefinitionCommand]:
        d = self.definitions.get(name)
        return d.command if d else None

    def define(self, name: str, command: DefinitionCommand, clauses: Iterable[Term]) -> Definition:
        if name in self.definitions:
            raise TheoryError(f"duplicate definition of {name!r}")
        clauses = tuple(normalize_clause(c) for c in clauses)
        if not clauses:
            raise TheoryError(f"definition of {name!r} has no clauses")
        for c in clauses:
            if not any(s == Constant(name) for _, s in iter_paths(c)):
                raise TheoryError(f"clause {print_term(c)!r} does not mention {name!r}")
        d = Definition(name, command, clauses)
        self.definitions[name] = d
        return d

    def parse(self, source: str) -> Term:
        return parse_term(source, self.constant_names, self.aliases)


@dataclass(frozen=True)
class InductArguments:
    induction_terms: tuple[Term, ...] = ()
    arbitrary_terms: tuple[Term, ...] = ()
    rules: tuple[str, ...] = ()

    def describe(self) -> str:
        parts = ["induct"] + [_arg_text(t) for t in self.induction_terms]
        if self.arbitrary_terms:
            parts += ["arbitrary:"] + [_arg_text(t) for t in self.arbitrary_terms]
        if self.rules:
            parts += ["rule:", *self.rules]
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "induct": [print_term(t) for t in self.induction_terms],
            "arbitrary": [print_term(t) for t in self.arbitrary_terms],
            "rule": list(self.rules),
        }


def _arg_text(t: Term) -> str:
    text = print_term(t)
    return text if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", text) else f'"{text}"'


@dataclass
class Theory:
    context: ProofContext
    goal_name: str
    goal: Term
    candidates: list[InductArguments]


_THY_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\(\*.*?\*\))
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<kw>arbitrary:|rule:)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'.]*)
  | (?P<num>\d+)
  | (?P<punct>::|[:|()])
    """,
    re.VERBOSE | re.DOTALL,
)

_COMMANDS = {c.value: c for c in DefinitionCommand}
_MIXFIX = {"infix", "infixl", "infixr"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    offset: int


def _lex_theory(source: str, path: Optional[str]) -> list[_Tok]:
    toks = []
    pos = 0
    line = 1
    while pos < len(source):
        m = _THY_TOKEN.match(source, pos)
        if not m:
            raise TheoryError(f"unexpected character {source[pos]!r}", line, path)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos))
        line += m.group().count("\n")
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos))
    return toks


class _TheoryParser:
    def __init__(self, source: str, path: Optional[str]):
        self.source = source
        self.path = path
        self.toks = _lex_theory(source, path)
        self.i = 0
        self.ctx = ProofContext()
        self.pending: set[str] = set()

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise TheoryError(message, tok.line, self.path)

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            self.fail(f"expected {want!r}, found {tok.text or 'end of file'!r}", tok)
        return tok

    def term(self, tok: _Tok) -> Term:
        body = tok.text[1:-1] if tok.kind == "string" else tok.text
        try:
            return parse_term(body, self.ctx.constant_names | self.pending, self.ctx.aliases)
        except TermSyntaxError as e:
            line = tok.line + body[: e.pos].count("\n")
            self.fail(str(e), _Tok(tok.kind, tok.text, line, tok.offset))

    def parse(self) -> Theory:
        while self.peek().kind == "ident" and self.peek().text in _COMMANDS:
            self.definition()
        goal_name, goal = self.goal()
        candidates = []
        while self.peek().kind != "eof":
            candidates.append(self.candidate(goal))
        return Theory(self.ctx, goal_name, goal, candidates)

    def definition(self):
        command = _COMMANDS[self.next().text]
        name_tok = self.expect("ident")
        name = name_tok.text
        if name in self.ctx.definitions or name in self.ctx.aliases:
            self.fail(f"duplicate definition of {name!r}", name_tok)
        if self.peek().text == "::":
            self.next()
            self.expect("string")
        symbol = name
        if self.peek().text == "(":
            self.next()
            mixfix = self.expect("ident")
            if mixfix.text not in _MIXFIX:
                self.fail(f"unsupported annotation {mixfix.text!r}", mixfix)
            sym_tok = self.expect("string")
            symbol = sym_tok.text[1:-1]
            if symbol not in INFIX_OPERATORS:
                self.fail(f"infix symbol {symbol!r} is not one of {sorted(INFIX_OPERATORS)}", sym_tok)
            if self.peek().kind == "num":
                self.next()
            self.expect("punct", ")")
        self.expect("ident", "where")
        if symbol in self.ctx.definitions:
            self.fail(f"duplicate definition of {symbol!r}", name_tok)
        # recursive clauses must already see the name as a constant
        self.pending = {symbol}
        if symbol != name:
            self.ctx.aliases[name] = symbol
        raw = [self.term(self.expect("string"))]
        while self.peek().text == "|":
            self.next()
            raw.append(self.term(self.expect("string")))
        self.pending = set()
        try:
            self.ctx.define(symbol, command, raw)
        except TheoryError as e:
            self.fail(str(e), name_tok)

    def goal(self) -> tuple[str, Term]:
        tok = self.peek()
        if tok.kind == "eof":
            self.fail("expected a lemma (the goal), found end of file")
        if tok.text != "lemma":
            self.fail(f"expected 'lemma', found {tok.text!r}")
        self.next()
        name = self.expect("ident").text
        self.expect("punct", ":")
        term_tok = self.expect("string")
        return name, self.term(term_tok)

    def candidate(self, goal: Term) -> InductArguments:
        start = self.expect("ident", "try")
        self.expect("ident", "induct")
        return self.candidate_body(goal, start)

    def candidate_body(self, goal: Term, start: _Tok) -> InductArguments:
        induct = self.terms()
        arbitrary: list[Term] = []
        rules: list[str] = []
        if self.peek().text == "arbitrary:":
            self.next()
            arbitrary = self.terms()
            if not arbitrary:
                self.fail("'arbitrary:' needs at least one term")
        if self.peek().text == "rule:":
            self.next()
            while self.peek().kind == "ident" and self.peek().text != "try":
                rules.append(self.next().text)
            if not rules:
                self.fail("'rule:' needs at least one rule name")
        if not induct and not rules:
            self.fail("'induct' needs an induction term or a rule", start)
        subterms = {s for _, s in iter_paths(goal)}
        for t in induct + arbitrary:
            if t not in subterms:
                self.fail(f"{print_term(t)!r} does not occur in the goal", start)
        return InductArguments(tuple(induct), tuple(arbitrary), tuple(rules))

    def terms(self) -> list[Term]:
        out = []
        while self.peek().kind == "string" or (
            self.peek().kind == "ident" and self.peek().text != "try"
        ):
            out.append(self.term(self.next()))
        return out


def parse_theory(source: str, path: Optional[str] = None) -> Theory:
    """Load a theory file into a proof context, a goal and its candidates."""
    return _TheoryParser(source, path).parse()


def parse_candidate(source: str, theory: Theory) -> InductArguments:
    """Parse a stand-alone ``induct ...`` line against an already loaded theory."""
    p = _TheoryParser(source, None)
    p.ctx = theory.context
    if p.peek().text == "try":
        p.next()
    start = p.expect("ident", "induct")
    args = p.candidate_body(theory.goal, start)
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r}")
    return args
