import random

from hypothesis import given, settings
from hypothesis import strategies as st

from selfie.table import LookupTable, format_path, occurrences_of
from selfie.terms import Constant, FreeVar

from generators import random_term
from reference import enumerate_nodes, kids, kind


def test_itrev_goal_table(itrev):
    table = LookupTable(itrev.goal)
    # derived by hand: root, =, lhs spine (3 nodes + head), rhs spine with nested rev xs
    assert table.all_paths() == [
        (), (1,), (2,), (2, 1), (2, 2), (2, 3), (3,), (3, 1), (3, 2), (3, 2, 1), (3, 2, 2), (3, 3),
    ]
    assert occurrences_of(table, FreeVar("ys")) == {(2, 3), (3, 3)}
    assert occurrences_of(table, FreeVar("xs")) == {(2, 2), (3, 2, 2)}
    assert occurrences_of(table, Constant("itrev")) == {(2, 1)}
    assert occurrences_of(table, Constant("nope")) == set()
    assert table.max_depth == 3 and table.max_children == 3
    assert table.number_domain() == [0, 1, 2, 3]
    info = table.info((2,))
    assert (info.kind, info.symbol, info.child_count, info.depth) == ("application", "itrev", 3, 1)
    assert table.info((9,)) is None


def test_dump_format(itrev):
    lines = LookupTable(itrev.goal).dump()
    assert lines[0] == "[]\tapplication\t=\t3"
    assert "[2,1]\tconstant\titrev\t0" in lines
    assert format_path((3, 2, 1)) == "[3,2,1]"


def test_subterm_ids_follow_first_occurrence(itrev):
    table = LookupTable(itrev.goal)
    terms = table.all_subterms()
    assert terms[0] == itrev.goal
    assert terms.index(FreeVar("xs")) < terms.index(FreeVar("ys"))
    assert len(terms) == len(set(terms))


def _oracle(t):
    nodes = enumerate_nodes(t)
    return {
        path: (kind(s), len(kids(s)), len(path), s) for path, s in nodes
    }


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_table_matches_brute_force(seed):
    t = random_term(random.Random(seed), 6)
    table = LookupTable(t)
    oracle = _oracle(t)
    assert set(table.all_paths()) == set(oracle)
    for path, (k, n, d, s) in oracle.items():
        info = table.info(path)
        assert (info.kind, info.child_count, info.depth) == (k, n, d)
        assert table.term_at(path) == s
        assert path in table.occurrences_of(s)
    for s in set(o[3] for o in oracle.values()):
        assert set(table.occurrences_of(s)) == {p for p, o in oracle.items() if o[3] == s}
    bound = max(max(d for _, _, d, _ in oracle.values()), max(n for _, n, _, _ in oracle.values()))
    assert table.number_domain() == list(range(bound + 1))


def test_construction_is_deterministic():
    rng = random.Random(3)
    for _ in range(50):
        t = random_term(rng, 6)
        a, b = LookupTable(t), LookupTable(t)
        assert a.by_path == b.by_path and a.all_subterms() == b.all_subterms()
