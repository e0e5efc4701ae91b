"""Hand-built ASTs of the shipped heuristics, written independently of the parser."""

from selfie import lang as L

EX, ALL = L.EXISTS, L.FORALL
TERM, OCC, NUM = L.SelfieType.TERM, L.SelfieType.TERM_OCCURRENCE, L.SelfieType.NUMBER
IND, ARB = L.ModifierKind.INDUCTION_TERM, L.ModifierKind.ARBITRARY_TERM
V = L.Var


def at(name, *args):
    return L.Atomic(name, tuple(V(a) if isinstance(a, str) else a for a in args))


NAIVE = L.QuantTyped(
    ALL, "free_var_term", TERM,
    L.Implies(
        L.And(
            at("term_is_free", "free_var_term"),
            L.Not(L.QuantModifier(EX, "induction_term", IND, at("are_same_terms", "free_var_term", "induction_term"))),
        ),
        L.QuantModifier(EX, "generalized_term", ARB, at("are_same_terms", "free_var_term", "generalized_term")),
    ),
)

INNER = L.Lambda(("generalize_nth", "f_term"), L.QuantTyped(
    EX, "root_occ", OCC, L.And(
        at("is_root_in_a_location", "root_occ"),
        L.QuantTyped(EX, "lhs_occ", OCC, L.And(
            at("is_lhs_of_root", "lhs_occ", "root_occ"),
            L.QuantTyped(EX, "nth_param_on_lhs", OCC, L.And(
                at("is_nplus1th_child_of", "nth_param_on_lhs", "generalize_nth", "lhs_occ"),
                L.QuantTyped(EX, "nth_param_on_rhs", OCC, L.And(
                    L.Not(at("are_of_same_term", "nth_param_on_rhs", "nth_param_on_lhs")),
                    L.QuantOccIn(EX, "f_occ_on_rhs", "f_term",
                                 at("is_nth_argument_of", "nth_param_on_rhs", "generalize_nth", "f_occ_on_rhs")),
                )),
            )),
        )),
    ),
))

OUTER = L.QuantModifier(ALL, "arb_term", ARB, L.QuantModifier(
    EX, "ind_term", IND, L.QuantOccIn(
        EX, "ind_occ", "ind_term", L.QuantTyped(
            EX, "f_term", TERM, L.And(
                at("is_defined_with_recursion_keyword", "f_term"),
                L.QuantOccIn(EX, "f_occ", "f_term", L.QuantTyped(
                    EX, "recursion_on_nth", NUM, L.And(
                        at("is_or_below_nth_argument_of", "ind_occ", "recursion_on_nth", "f_occ"),
                        L.QuantOccIn(EX, "arb_occ", "arb_term", L.QuantTyped(
                            EX, "generalize_nth", NUM, L.And(
                                L.And(
                                    at("is_or_below_nth_argument_of", "arb_occ", "generalize_nth", "f_occ"),
                                    L.Not(at("are_same_number", "recursion_on_nth", "generalize_nth")),
                                ),
                                L.Semantic(L.SOME, V("f_term"), V("generalize_nth_argument_of"),
                                           (V("generalize_nth"), V("f_term"))),
                            ),
                        )),
                    ),
                )),
            ),
        ),
    ),
))
