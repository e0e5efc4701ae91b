import pytest

from selfie.terms import APPEND, Constant, FreeVar, parse_term
from selfie.theory import DefinitionCommand, InductArguments, ProofContext, TheoryError, parse_candidate, parse_theory


def test_itrev_corpus_loads(itrev):
    ctx = itrev.context
    assert list(ctx.definitions) == [APPEND, "rev", "itrev"]
    assert ctx.aliases == {"append": APPEND}
    assert ctx.command_of(APPEND) is DefinitionCommand.PRIMREC
    assert ctx.command_of("itrev") is DefinitionCommand.FUN
    assert ctx.command_of("nope") is None
    itrev_clauses = ctx.lookup("itrev").clauses
    assert itrev_clauses == (
        parse_term("itrev [] ys = ys", {"itrev"}),
        parse_term("itrev (x # xs) ys = itrev xs (x # ys)", {"itrev"}),
    )
    assert itrev.goal_name == "model_proof"
    assert itrev.goal == parse_term("itrev xs ys = rev xs @ ys", {"itrev", "rev"})
    assert itrev.candidates == [InductArguments((FreeVar("xs"),), (FreeVar("ys"),))]


def test_alias_resolves_in_terms(itrev):
    assert itrev.context.parse("append xs ys") == parse_term("xs @ ys")


def test_candidate_forms(itrev):
    c = parse_candidate('induct "rev xs" arbitrary: ys rule: itrev.induct', itrev)
    assert c.induction_terms == (parse_term("rev xs", {"rev"}),)
    assert c.arbitrary_terms == (FreeVar("ys"),)
    assert c.rules == ("itrev.induct",)
    assert c.describe() == 'induct "rev xs" arbitrary: ys rule: itrev.induct'
    assert c.to_json() == {"induct": ["rev xs"], "arbitrary": ["ys"], "rule": ["itrev.induct"]}
    assert parse_candidate("try induct xs", itrev) == InductArguments((FreeVar("xs"),))


def test_candidate_terms_must_occur_in_goal(itrev):
    with pytest.raises(TheoryError, match="does not occur"):
        parse_candidate("induct zs", itrev)


GOAL = 'lemma g: "f x = x"\n'
F = 'fun f where "f x = x"\n'


@pytest.mark.parametrize("source, message", [
    ("", "expected a lemma"),
    (F, "expected a lemma"),
    ('fun f where "g x = x"\n' + GOAL, "does not mention"),
    (F + F + GOAL, "duplicate"),
    ('fun f (infixr "++" 65) where "f x = x"\n' + GOAL, "infix symbol"),
    ('fun f where "f (x = x"\n' + GOAL, "expected"),
    (F + GOAL + "try induct", "needs an induction term"),
    (F + GOAL + "try cases x", "expected 'induct'"),
    (F + GOAL + "try induct x arbitrary:", "needs at least one"),
    (F + 'lemma g "f x"', "expected ':'"),
    (F + GOAL + "@", "unexpected character"),
])
def test_theory_errors(source, message):
    with pytest.raises(TheoryError, match=message):
        parse_theory(source)


def test_error_carries_path_and_line():
    with pytest.raises(TheoryError) as e:
        parse_theory(F + "\n\nlemma g: \"f (x\"", "t.thy")
    assert str(e.value).startswith("t.thy:4:")


def test_comments_and_meta_binders():
    thy = parse_theory('(* c *) primrec f where "⋀x. f x = x" | "f (g y) = y"\n' + GOAL)
    assert thy.context.lookup("f").clauses[0] == parse_term("f x = x", {"f"})


def test_define_directly():
    ctx = ProofContext()
    ctx.define("c", DefinitionCommand.DEFINITION, [parse_term("c = x", {"c"})])
    assert ctx.lookup("c").clauses == (parse_term("c = x", {"c"}),)
    assert "c" in ctx.constant_names
    with pytest.raises(TheoryError):
        ctx.define("d", DefinitionCommand.FUN, [])
    assert Constant("c") == ctx.parse("c")
