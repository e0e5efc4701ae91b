import pytest

from selfie import heuristics as H
from selfie import lang as L
from selfie.interp import ErrorKind, EvalError, Evaluator, Number, TermV, evaluate, judge
from selfie.terms import FreeVar
from selfie.theory import InductArguments

from generators import random_case

XS, YS = FreeVar("xs"), FreeVar("ys")
MODEL = InductArguments((XS,), (YS,))


def run(itrev, src, args=MODEL, **kw):
    a = L.parse_expression(src, itrev.context.constant_names | {"append"})
    return evaluate(a, itrev.goal, args, itrev.context, **kw)


def fails(itrev, src, kind, args=MODEL, **kw):
    with pytest.raises(EvalError) as e:
        run(itrev, src, args, **kw)
    assert e.value.kind is kind
    return e.value


@pytest.mark.parametrize("src, expected", [
    # occurrence atomics on "itrev xs ys = rev xs @ ys"
    ('EX o : term_occurrence. is_root_in_a_location (o) & is_application (o)', True),
    ('let t_o := "itrev" in EX o : term_occurrence : t_o. let t_a := "ys" in EX a : term_occurrence : t_a. is_nth_argument_of (a, 2, o)', True),
    ('let t_o := "itrev" in EX o : term_occurrence : t_o. let t_a := "ys" in EX a : term_occurrence : t_a. is_nth_argument_of (a, 1, o)', False),
    ('let t_o := "itrev" in EX o : term_occurrence : t_o. let t_a := "xs" in EX a : term_occurrence : t_a. is_an_argument_of (a, o)', True),
    ('let t_o := "rev" in EX o : term_occurrence : t_o. let t_a := "ys" in EX a : term_occurrence : t_a. is_an_argument_of (a, o)', False),
    ('let t_o := "(@)" in EX o : term_occurrence : t_o. let t_a := "xs" in EX a : term_occurrence : t_a. is_or_below_nth_argument_of (a, 1, o)', True),
    ('let t_o := "(@)" in EX o : term_occurrence : t_o. let t_a := "xs" in EX a : term_occurrence : t_a. is_nth_argument_of (a, 1, o)', False),
    ('EX r : term_occurrence. EX l : term_occurrence. is_lhs_of_root (l, r) & let t_f := "itrev" in EX f : term_occurrence : t_f. is_nplus1th_child_of (f, 0, l)', True),
    ('let t_o := "xs" in EX o : term_occurrence : t_o. is_at_deepest (o)', True),
    ('let t_o := "ys" in ALL o : term_occurrence : t_o. !is_at_deepest (o)', True),
    ('let t_a := "xs" in EX a : term_occurrence : t_a. let t_b := "xs" in EX b : term_occurrence : t_b. !is_in_term_occurrence (a, b)', True),
    ('ALL a : term_occurrence. is_in_term_occurrence (a, a)', True),
    ('let t_a := "xs" in EX a : term_occurrence : t_a. let t_b := "xs" in EX b : term_occurrence : t_b. are_same_term (a, b) & !is_in_term_occurrence (a, b)', True),
    ('EX o : term_occurrence. term_occurrence_is_of_term (o, "rev xs")', True),
    ('let t_o := "itrev" in ALL o : term_occurrence : t_o. is_constant (o) & is_atomic (o) & !is_free_variable (o) & !is_lambda (o)', True),
    # term atomics
    ('term_is_free ("xs") & !term_is_free ("rev xs")', True),
    ('is_defined_with_recursion_keyword ("itrev") & is_defined_with_recursion_keyword ("rev")', True),
    ('is_defined_with_command ("itrev", fun) & is_defined_with_command ("rev", primrec)', True),
    ('is_defined_with_command ("(@)", primrec)', True),
    ('is_defined_with_recursion_keyword ("xs")', False),
    ('is_nth_induction_term ("xs", 1) & is_nth_arbitrary_term ("ys", 1) & !is_nth_arbitrary_term ("ys", 2)', True),
    # domains
    ('ALL t : term in arbitrary_term. are_same_terms (t, "ys")', True),
    ('EX n : number. are_same_number (n, 3)', True),
    ('EX n : number. are_same_number (n, 4)', False),
    ('EX r : rule. True', False),
    ('ALL r : rule. False', True),
])
def test_atomics_on_itrev(itrev, src, expected):
    assert run(itrev, src) is expected


def test_rule_atomic(itrev):
    args = InductArguments((XS,), (), ("itrev.induct",))
    assert run(itrev, 'EX r : rule. let t_o := "itrev" in EX o : term_occurrence : t_o. is_rule_of (r, o)', args)
    assert not run(itrev, 'EX r : rule. let t_o := "rev" in EX o : term_occurrence : t_o. is_rule_of (r, o)', args)


def test_empty_modifier_domains(itrev):
    none = InductArguments((XS,))
    assert not run(itrev, "EX t : term in arbitrary_term. True", none)
    assert run(itrev, "ALL t : term in arbitrary_term. False", none)


def test_let_and_lambda(itrev):
    assert run(itrev, 'let f := \\ [t, n]. is_nth_induction_term (t, n) in f ["xs", 1] & !f ["ys", 1]')
    assert run(itrev, '(\\ []. True) []')


@pytest.mark.parametrize("src", [
    'term_is_free (3)',
    'EX o : term_occurrence. term_is_free (o)',
    'let f := \\ [x]. True in f [1, 2]',
    'let n := 1 in n [1]',
    'in_some_definition ("xs", \\ []. True, [])',
    'in_some_definition ("itrev", True, [])',
    'in_some_definition ("itrev", \\ [x]. True, [is_nth_induction_term ("xs", 1)])',
    'let f := \\ [x]. x in f [1] & True',
])
def test_type_mismatch(itrev, src):
    fails(itrev, src, ErrorKind.TYPE_MISMATCH)


def test_unbound_variable_from_hand_built_ast(itrev):
    a = L.Atomic("term_is_free", (L.Var("nowhere"),))
    with pytest.raises(EvalError) as e:
        evaluate(a, itrev.goal, MODEL, itrev.context)
    assert e.value.kind is ErrorKind.UNBOUND_VARIABLE


def test_not_a_boolean(itrev):
    fails(itrev, "\\ [x]. True", ErrorKind.NOT_A_BOOLEAN)


def test_occurrence_argument_to_semantic_construct(itrev):
    e = fails(itrev, 'EX o : term_occurrence. in_some_definition ("itrev", \\ [x]. True, [o])',
              ErrorKind.OCCURRENCE_CROSSED_BOUNDARY)
    assert e.construct == "in_some_definition"


def test_captured_occurrence_cannot_be_used_inside(itrev):
    # smuggled in through the closure's environment rather than the argument list
    fails(itrev, 'EX o : term_occurrence. in_all_definition ("itrev", \\ []. is_application (o), [])',
          ErrorKind.OCCURRENCE_CROSSED_BOUNDARY)


@pytest.mark.parametrize("inner", [
    "EX t : term in induction_term. True",
    "ALL r : rule. True",
    'is_nth_induction_term ("xs", 1)',
])
def test_induct_arguments_invisible_inside(itrev, inner):
    fails(itrev, f'in_some_definition ("itrev", \\ []. {inner}, [])', ErrorKind.MODIFIER_IN_INNER_CONTEXT)


def test_terms_and_numbers_cross(itrev):
    assert run(itrev, 'EX t : term in arbitrary_term. in_some_definition ("itrev", \\ [u, n]. EX o : term_occurrence : u. is_nth_argument_of (o, n, o) | are_same_terms (u, "ys"), [t, 2])')
    # captured terms are fine too
    assert run(itrev, 'EX t : term in arbitrary_term. in_all_definition ("itrev", \\ []. EX o : term_occurrence : t. True, [])')


def test_no_definition_warns(itrev):
    for kind, expected in [("in_some_definition", False), ("in_all_definition", True)]:
        a = L.parse_expression(f'{kind} ("c", \\ []. True, [])', {"c"})
        v = judge("h", a, itrev.goal, MODEL, itrev.context)
        assert v.verdict is expected
        assert v.warnings == ["NoDefinition: 'c' has no definition in the proof context"]


def test_depth_limit(itrev):
    nested = 'in_some_definition ("itrev", \\ []. in_some_definition ("rev", \\ []. True, []), [])'
    assert run(itrev, nested, max_depth=2)
    fails(itrev, nested, ErrorKind.DEPTH_LIMIT_EXCEEDED, max_depth=1)
    fails(itrev, 'in_some_definition ("itrev", \\ []. True, [])', ErrorKind.DEPTH_LIMIT_EXCEEDED, max_depth=0)


def test_inner_quantifiers_range_over_the_clause(itrev):
    # clause 1 "itrev [] ys = ys" has 7 nodes, clause 2 has more; the goal has 12
    count = '\\ []. EX o : term_occurrence. is_root_in_a_location (o) & EX d : term_occurrence. is_at_deepest (d) & EX n : number. are_same_number (n, 4)'
    assert not run(itrev, f'in_some_definition ("itrev", {count}, [])')
    assert run(itrev, f'in_some_definition ("rev", {count.replace("4", "3")}, [])')


def test_stats_and_short_circuit(itrev):
    a = L.parse_expression("EX o : term_occurrence. True", set())
    ev = Evaluator(itrev.context)
    assert ev.evaluate(a, itrev.goal, MODEL)
    assert ev.stats.quantifier_bindings_tried == 1
    ex = Evaluator(itrev.context, exhaustive=True)
    assert ex.evaluate(a, itrev.goal, MODEL)
    assert ex.stats.quantifier_bindings_tried == 12


def test_trace_records_satisfying_bindings(itrev):
    a = L.parse_expression('EX t : term in arbitrary_term. EX n : number. are_same_number (n, 2)', set())
    ev = Evaluator(itrev.context, trace=True, exhaustive=True)
    assert ev.evaluate(a, itrev.goal, MODEL)
    envs = [e for e in ev.trace if "n" in e]
    assert envs == [{"t": TermV(YS), "n": Number(2)}]


@pytest.mark.parametrize("seed", range(150))
def test_exhaustive_mode_does_not_change_verdicts(seed):
    a, goal, args, ctx = random_case(seed)

    def outcome(**kw):
        try:
            return Evaluator(ctx, **kw).evaluate(a, goal, args)
        except EvalError as e:
            return e.kind

    assert outcome(exhaustive=True) == outcome()


def test_shipped_inner_heuristic_on_each_clause(itrev):
    _, inner = H.semantic_generalization()
    for kind, expected in [(L.SOME, True), (L.ALL, False)]:
        a = L.Let("generalize_nth_argument_of", inner,
                  L.Semantic(kind, L.TermLit(itrev.context.parse("itrev")), L.Var("generalize_nth_argument_of"),
                             (L.NumberLit(2), L.TermLit(itrev.context.parse("itrev")))))
        assert evaluate(a, itrev.goal, MODEL, itrev.context) is expected


def test_errors_agree_with_reference_on_sloppy_assertions():
    from collections import Counter

    from reference import reference_verdict

    seen = Counter()
    for seed in range(600):
        a, goal, args, ctx = random_case(seed, sloppy=True)
        depth = 0 if seed % 3 == 0 else 3
        try:
            mine = Evaluator(ctx, max_depth=depth).evaluate(a, goal, args)
        except EvalError as e:
            mine = e.kind.value
        assert mine == reference_verdict(a, goal, args, ctx, depth), seed
        seen[mine] += 1
    # the sloppy generator must actually reach the error paths
    for kind in ("TypeMismatch", "ModifierInInnerContext", "DepthLimitExceeded", "OccurrenceCrossedBoundary"):
        assert seen[kind] > 0, seen
