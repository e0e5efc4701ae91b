"""Path-indexed lookup tables over a single root term."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .terms import (
    App,
    BoundVar,
    Constant,
    FreeVar,
    Lambda,
    Path,
    Term,
    children,
    iter_paths,
    kind_of,
    strip_comb,
)


@dataclass(frozen=True)
class NodeInfo:
    kind: str
    symbol: str
    child_count: int
    depth: int
    subterm_id: int


def _symbol(t: Term) -> str:
    if isinstance(t, (Constant, FreeVar)):
        return t.name
    if isinstance(t, BoundVar):
        return f"#{t.index}"
    if isinstance(t, Lambda):
        return "%"
    head, _ = strip_comb(t)
    return _symbol(head) if not isinstance(head, App) else ""


class LookupTable:
    """Pre-computed occurrence index of ``root``.

    Subterm ids are assigned in pre-order of first occurrence, so
    :meth:`all_subterms` lists terms in the order a walk of the tree meets them.
    """

    def __init__(self, root: Term):
        self.root = root
        self.by_path: dict[Path, NodeInfo] = {}
        self.by_subterm: dict[int, tuple[Path, ...]] = {}
        self.id_of: dict[Term, int] = {}
        self._terms: list[Term] = []
        grouped: dict[int, list[Path]] = {}
        for path, t in iter_paths(root):
            sid = self.id_of.get(t)
            if sid is None:
                sid = len(self._terms)
                self.id_of[t] = sid
                self._terms.append(t)
            grouped.setdefault(sid, []).append(path)
            self.by_path[path] = NodeInfo(
                kind=kind_of(t),
                symbol=_symbol(t),
                child_count=len(children(t)),
                depth=len(path),
                subterm_id=sid,
            )
        self.by_subterm = {sid: tuple(ps) for sid, ps in grouped.items()}
        self.max_depth = max(info.depth for info in self.by_path.values())
        self.max_children = max(info.child_count for info in self.by_path.values())
        self._paths = tuple(self.by_path)

    def __repr__(self) -> str:
        return f"LookupTable({len(self.by_path)} nodes, depth {self.max_depth})"

    def info(self, path: Path) -> Optional[NodeInfo]:
        return self.by_path.get(path)

    def contains(self, path: Path) -> bool:
        return path in self.by_path

    def term_at(self, path: Path) -> Term:
        return self._terms[self.by_path[path].subterm_id]

    def occurrences_of(self, t: Term) -> tuple[Path, ...]:
        sid = self.id_of.get(t)
        return () if sid is None else self.by_subterm[sid]

    def all_subterms(self) -> list[Term]:
        return list(self._terms)

    def all_paths(self) -> list[Path]:
        return list(self._paths)

    def number_domain(self) -> list[int]:
        return list(range(max(self.max_children, self.max_depth) + 1))

    def dump(self) -> list[str]:
        """One ``path<TAB>kind<TAB>symbol<TAB>child_count`` line per node."""
        return [
            f"{format_path(p)}\t{i.kind}\t{i.symbol}\t{i.child_count}"
            for p, i in self.by_path.items()
        ]


def format_path(path: Path) -> str:
    return "[" + ",".join(map(str, path)) + "]"


def build_table(root: Term) -> LookupTable:
    return LookupTable(root)


def occurrences_of(table: LookupTable, t: Term) -> set[Path]:
    return set(table.occurrences_of(t))
