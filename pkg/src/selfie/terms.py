"""Untyped lambda terms, flattened-application paths, and the term surface syntax.

Terms use de Bruijn indices for bound variables. A lambda keeps the name it
was written with only as a printing hint; it takes no part in equality.

Paths address nodes in the *flattened* view of a term: an application spine
``f a1 ... ak`` is one node whose children are ``f`` (child 1) followed by the
arguments (children 2..k+1). A lambda has its body as child 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

Path = tuple[int, ...]

EQ = "="
CONS = "#"
APPEND = "@"
NIL = "nil"
META_ALL = "⋀"

#: constants every parse knows about without a theory declaring them
BUILTINS = frozenset({EQ, CONS, APPEND, NIL, META_ALL})


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class FreeVar:
    name: str


@dataclass(frozen=True)
class BoundVar:
    index: int


@dataclass(frozen=True)
class Lambda:
    body: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Constant, FreeVar, BoundVar, Lambda, App]


class TermError(Exception):
    """Raised for malformed terms and paths that do not resolve."""


class TermSyntaxError(TermError):
    def __init__(self, message: str, pos: int, source: str = ""):
        self.pos = pos
        self.source = source
        super().__init__(f"{message} at offset {pos}")


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def strip_comb(t: Term) -> tuple[Term, list[Term]]:
    """Split an application spine into its head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def kind_of(t: Term) -> str:
    if isinstance(t, Constant):
        return "constant"
    if isinstance(t, FreeVar):
        return "free"
    if isinstance(t, BoundVar):
        return "bound"
    if isinstance(t, Lambda):
        return "lambda"
    return "application"


def children(t: Term) -> list[Term]:
    """Children of ``t`` in the flattened view, head first."""
    if isinstance(t, App):
        head, args = strip_comb(t)
        return [head, *args]
    if isinstance(t, Lambda):
        return [t.body]
    return []


def subterm_at(root: Term, path: Path) -> Term:
    t = root
    for i, step in enumerate(path):
        kids = children(t)
        if not 1 <= step <= len(kids):
            raise TermError(f"path {list(path)} does not resolve (failed at step {i + 1})")
        t = kids[step - 1]
    return t


def flattened_children(root: Term, path: Path) -> list[Path]:
    node = subterm_at(root, path)
    return [path + (i,) for i in range(1, len(children(node)) + 1)]


def iter_paths(root: Term) -> Iterator[tuple[Path, Term]]:
    """Pre-order walk yielding every (path, subterm) pair of the flattened tree."""
    stack: list[tuple[Path, Term]] = [((), root)]
    while stack:
        path, t = stack.pop()
        yield path, t
        kids = children(t)
        for i in range(len(kids), 0, -1):
            stack.append((path + (i,), kids[i - 1]))


def equal_terms(a: Term, b: Term) -> bool:
    # de Bruijn indices make plain structural equality alpha-equivalence.
    return a == b


def free_vars(t: Term) -> list[str]:
    """Free variable names in order of first (pre-order) occurrence."""
    seen: dict[str, None] = {}
    for _, s in iter_paths(t):
        if isinstance(s, FreeVar):
            seen.setdefault(s.name)
    return list(seen)


def constants(t: Term) -> set[str]:
    return {s.name for _, s in iter_paths(t) if isinstance(s, Constant)}


def is_closed(t: Term, depth: int = 0) -> bool:
    if isinstance(t, BoundVar):
        return t.index < depth
    if isinstance(t, Lambda):
        return is_closed(t.body, depth + 1)
    if isinstance(t, App):
        return is_closed(t.fun, depth) and is_closed(t.arg, depth)
    return True


def _instantiate(t: Term, value: Term, depth: int = 0) -> Term:
    """Replace bound index ``depth`` by a closed ``value`` (one beta step)."""
    if isinstance(t, BoundVar):
        if t.index == depth:
            return value
        if t.index > depth:
            return BoundVar(t.index - 1)
        return t
    if isinstance(t, Lambda):
        return Lambda(_instantiate(t.body, value, depth + 1), t.name)
    if isinstance(t, App):
        return App(_instantiate(t.fun, value, depth), _instantiate(t.arg, value, depth))
    return t


def normalize_clause(raw: Term) -> Term:
    """Strip leading meta-universal binders, turning their variables into free ones."""
    t = raw
    while (
        isinstance(t, App)
        and t.fun == Constant(META_ALL)
        and isinstance(t.arg, Lambda)
    ):
        taken = set(free_vars(t)) | constants(t)
        name = t.arg.name
        while name in taken:
            name += "'"
        t = _instantiate(t.arg.body, FreeVar(name))
    return t


# -- surface syntax ---------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<lam>%|λ|\\<lambda>)
  | (?P<all>⋀|!!|\\<And>)
  | (?P<coloncolon>::)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<tvar>'[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>⇒|=>)
  | (?P<op>[=#@])
  | (?P<punct>[()\[\],.])
    """,
    re.VERBOSE,
)

# infix operator -> (precedence, right-assoc)
_INFIX = {EQ: (50, False), APPEND: (65, True), CONS: (65, True)}
INFIX_OPERATORS = frozenset(_INFIX)


class _TermParser:
    def __init__(self, source: str, constant_names, aliases=None):
        self.source = source
        self.constant_names = set(constant_names) | BUILTINS
        self.aliases = dict(aliases or {})
        self.tokens = self._lex(source)
        self.i = 0
        self.binders: list[str] = []

    def _lex(self, s: str) -> list[tuple[str, str, int]]:
        out = []
        pos = 0
        while pos < len(s):
            m = _TOKEN_RE.match(s, pos)
            if not m:
                raise TermSyntaxError(f"unexpected character {s[pos]!r}", pos, s)
            kind = m.lastgroup
            if kind != "ws":
                out.append((kind, m.group(), pos))
            pos = m.end()
        out.append(("eof", "", len(s)))
        return out

    def peek(self, k: int = 0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        tok = self.next()
        if tok[1] != text:
            raise TermSyntaxError(f"expected {text!r}, found {tok[1] or 'end of input'!r}", tok[2], self.source)
        return tok

    def error(self, message: str):
        raise TermSyntaxError(message, self.peek()[2], self.source)

    def parse(self) -> Term:
        t = self.expr(0)
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return t

    def expr(self, min_prec: int) -> Term:
        kind = self.peek()[0]
        if kind == "lam":
            return self.binder_expr(meta=False)
        if kind == "all":
            return self.binder_expr(meta=True)
        left = self.application()
        while True:
            kind, text, _ = self.peek()
            if kind != "op":
                return left
            prec, right_assoc = _INFIX[text]
            if prec < min_prec:
                return left
            self.next()
            right = self.expr(prec if right_assoc else prec + 1)
            left = apply(Constant(text), left, right)
            if text == EQ and self.peek()[1] == EQ:
                self.error("'=' is not associative")

    def binder_expr(self, meta: bool) -> Term:
        self.next()
        names = []
        while self.peek()[0] == "ident":
            names.append(self.next()[1])
        if not names:
            self.error("binder needs at least one variable")
        self.expect(".")
        for n in names:
            if n in self.constant_names or n in self.aliases:
                raise TermSyntaxError(f"{n!r} is a constant and cannot be bound", self.peek()[2], self.source)
        self.binders.extend(names)
        body = self.expr(0)
        del self.binders[len(self.binders) - len(names):]
        for n in reversed(names):
            body = Lambda(body, n)
            if meta:
                body = App(Constant(META_ALL), body)
        return body

    def starts_atom(self) -> bool:
        kind, text, _ = self.peek()
        return kind == "ident" or text in ("(", "[")

    def application(self) -> Term:
        if not self.starts_atom():
            self.error(f"expected a term, found {self.peek()[1] or 'end of input'!r}")
        t = self.atom()
        while self.starts_atom():
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        kind, text, pos = self.next()
        if kind == "ident":
            return self.name(text)
        if text == "[":
            return self.list_literal()
        # "("
        if self.peek()[0] == "op" and self.peek(1)[1] == ")":
            op = self.next()[1]
            self.next()
            return Constant(op)
        if self.peek()[0] == "all" and self.peek(1)[1] == ")":
            self.next()
            self.next()
            return Constant(META_ALL)
        t = self.expr(0)
        if self.peek()[0] == "coloncolon":
            self.skip_type()
        self.expect(")")
        return t

    def skip_type(self):
        self.next()
        depth = 0
        while True:
            kind, text, _ = self.peek()
            if kind == "eof":
                self.error("unterminated type annotation")
            if text == "(":
                depth += 1
            elif text == ")":
                if depth == 0:
                    return
                depth -= 1
            self.next()

    def name(self, text: str) -> Term:
        if text in self.binders:
            return BoundVar(len(self.binders) - 1 - _rindex(self.binders, text))
        if text in self.aliases:
            return Constant(self.aliases[text])
        if text in self.constant_names:
            return Constant(text)
        return FreeVar(text)

    def list_literal(self) -> Term:
        items = []
        if self.peek()[1] != "]":
            items.append(self.expr(0))
            while self.peek()[1] == ",":
                self.next()
                items.append(self.expr(0))
        self.expect("]")
        t: Term = Constant(NIL)
        for item in reversed(items):
            t = apply(Constant(CONS), item, t)
        return t


def _rindex(xs: list[str], x: str) -> int:
    return len(xs) - 1 - xs[::-1].index(x)


def parse_term(source: str, constant_names=frozenset(), aliases=None) -> Term:
    """Parse a term; names in ``constant_names`` (plus builtins) become constants.

    ``aliases`` maps alternative spellings onto a constant name, e.g.
    ``{"append": "@"}``.
    """
    return _TermParser(source, constant_names, aliases).parse()


def print_term(t: Term) -> str:
    """Render ``t`` in the surface syntax accepted by :func:`parse_term`."""
    return _print(t, [], 0)


def _fresh(hint: str, avoid: set[str]) -> str:
    name = hint if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", hint or "") else "x"
    while name in avoid:
        name += "'"
    return name


def _print(t: Term, names: list[str], prec: int) -> str:
    if isinstance(t, Constant):
        if t.name == NIL:
            return "[]"
        if t.name in _INFIX or t.name == META_ALL:
            return f"({t.name})"
        return t.name
    if isinstance(t, FreeVar):
        return t.name
    if isinstance(t, BoundVar):
        if t.index >= len(names):
            raise TermError(f"loose bound variable {t.index}")
        return names[len(names) - 1 - t.index]
    if isinstance(t, Lambda):
        avoid = set(names) | set(free_vars(t)) | constants(t) | BUILTINS
        name = _fresh(t.name, avoid)
        body = _print(t.body, names + [name], 0)
        text = f"%{name}. {body}"
        return f"({text})" if prec > 0 else text
    head, args = strip_comb(t)
    if head == Constant(META_ALL) and len(args) == 1 and isinstance(args[0], Lambda):
        lam = args[0]
        avoid = set(names) | set(free_vars(t)) | constants(t) | BUILTINS
        name = _fresh(lam.name, avoid)
        text = f"⋀{name}. {_print(lam.body, names + [name], 0)}"
        return f"({text})" if prec > 0 else text
    if isinstance(head, Constant) and head.name in _INFIX and len(args) == 2:
        op_prec, right_assoc = _INFIX[head.name]
        # the only operator that is not right-associative is '=', which does not chain
        lp = op_prec + 1
        rp = op_prec if right_assoc else op_prec + 1
        text = f"{_print(args[0], names, lp)} {head.name} {_print(args[1], names, rp)}"
        return f"({text})" if prec > op_prec else text
    parts = [_print(head, names, 1000)] + [_print(a, names, 1000) for a in args]
    text = " ".join(parts)
    return f"({text})" if prec >= 1000 else text
