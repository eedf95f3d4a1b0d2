import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_formula
from coreseq import (
    And,
    Atom,
    Imp,
    Neg,
    Or,
    ParseError,
    Sequent,
    formula_universe,
    parse_formula,
    parse_sequent,
    print_formula,
    print_sequent,
    sequent_family,
    sequent_weight,
    weight,
)
from coreseq.syntax import antecedent_key, formula_key, is_subformula_closed, subformulas

p, q, r = Atom("p"), Atom("q"), Atom("r")
A, B = Atom("A"), Atom("B")


# -- parsing ----------------------------------------------------------------


def test_parse_negated_conditional():
    assert parse_formula("~A -> (A -> B)") == Imp(Neg(A), Imp(A, B))


def test_parse_atom():
    assert parse_formula("p") == Atom("p")


def test_conditional_is_right_associative():
    assert parse_formula("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse_formula("(p -> q) -> r") == Imp(Imp(p, q), r)
    assert parse_formula("p -> q -> r") != parse_formula("(p -> q) -> r")


def test_precedence():
    assert parse_formula("~p & q | r -> p") == Imp(Or(And(Neg(p), q), r), p)
    assert parse_formula("p | q & r") == Or(p, And(q, r))


def test_unicode_aliases():
    assert parse_formula("¬p ∧ q → r ∨ p") == parse_formula("~p & q -> r | p")
    assert parse_sequent("¬A, A ⊢ B") == parse_sequent("~A, A |- B")


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_formula("p -> ->")
    assert exc.value.position == 5
    with pytest.raises(ParseError):
        parse_formula("")
    with pytest.raises(ParseError):
        parse_formula("p q")


def test_parse_sequent_lewis_paradox():
    s = parse_sequent("~A, A |- B")
    assert s.antecedent == (Neg(A), A)
    assert s.succedent == B


def test_parse_sequent_empty_succedent():
    s = parse_sequent("~A, A |-")
    assert s.succedent is None
    assert set(s.antecedent) == {Neg(A), A}


def test_parse_sequent_deduplicates():
    assert parse_sequent("A, A |- A") == Sequent((A,), A)


def test_parse_sequent_rejects_empty_judgment():
    with pytest.raises(ParseError):
        parse_sequent("|-")


def test_parse_sequent_rejects_trailing_garbage():
    with pytest.raises(ParseError):
        parse_sequent("p |- q r")


# -- printing ---------------------------------------------------------------


def test_print_minimal_parentheses():
    assert print_formula(Imp(Neg(p), q)) == "~p -> q"
    assert print_formula(And(p, Or(q, r))) == "p & (q | r)"
    assert print_formula(Neg(Imp(p, q))) == "~(p -> q)"
    assert print_formula(Or(And(p, q), r)) == "p & q | r"
    assert print_formula(Imp(p, Imp(q, r))) == "p -> q -> r"
    assert print_formula(Imp(Imp(p, q), r)) == "(p -> q) -> r"


def test_print_sequent_canonical_order():
    # heavier formulas first, ties by text
    assert print_sequent(Sequent((Neg(A), A), None)) == "~A, A |-"
    assert print_sequent(Sequent((A, Neg(A)), None)) == "~A, A |-"
    assert print_sequent(Sequent((), B)) == "|- B"
    assert print_sequent(parse_sequent("~p, p |- q")) == "~p, p |- q"


def test_print_reparse_examples():
    for f in (And(p, Or(q, r)), Or(p, Or(q, r)), Or(Or(p, q), r), Neg(Neg(p))):
        assert parse_formula(print_formula(f)) == f


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_roundtrip_random_formulas(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ["p", "q", "A", "B", "x1"], 9)
    assert weight(f) <= 9
    assert parse_formula(print_formula(f)) == f


def test_roundtrip_sequents():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(0, 3)
        ant = tuple(random_formula(rng, ["p", "q"], 5) for _ in range(n))
        succ = None if (ant and rng.random() < 0.3) else random_formula(rng, ["p", "q"], 5)
        s = Sequent(ant, succ)
        assert parse_sequent(print_sequent(s)) == s


# -- weights ----------------------------------------------------------------


def test_print_sequent_is_injective_on_a_family():
    family = sequent_family(formula_universe(["p", "q"], 2), 4)
    prints = [print_sequent(s) for s in family]
    assert len(set(prints)) == len(prints)


def test_weight_examples():
    assert weight(p) == 1
    assert weight(Imp(Neg(p), Imp(p, q))) == 6
    assert sequent_weight(Sequent((Neg(A), A), B)) == 4
    assert sequent_weight(Sequent((Neg(A), A), None)) == 3


def test_weight_monotone():
    rng = random.Random(11)
    for _ in range(200):
        f = random_formula(rng, ["p", "q"], 8)
        if isinstance(f, Neg):
            assert weight(f) > weight(f.sub)
        elif not isinstance(f, Atom):
            assert weight(f) > weight(f.left)
            assert weight(f) > weight(f.right)


def test_ordering_is_strict_total_order():
    pool = formula_universe(["p", "q"], 4)
    for f in pool:
        for g in pool:
            if f == g:
                assert formula_key(f) == formula_key(g)
                assert antecedent_key(f) == antecedent_key(g)
            else:
                assert (formula_key(f) < formula_key(g)) != (formula_key(g) < formula_key(f))
                assert (antecedent_key(f) < antecedent_key(g)) != (
                    antecedent_key(g) < antecedent_key(f)
                )


# -- enumerations -----------------------------------------------------------


def test_formula_universe_counts():
    assert len(formula_universe(["p", "q"], 1)) == 2
    assert len(formula_universe(["p", "q"], 2)) == 4
    assert len(formula_universe(["p", "q"], 3)) == 18
    assert len(formula_universe(["p", "q"], 5)) == 274


def test_formula_universe_subformula_closed():
    u = formula_universe(["p", "q"], 4)
    assert is_subformula_closed(u)
    assert subformulas(parse_formula("~A -> (A -> B)")) == {
        A,
        B,
        Neg(A),
        Imp(A, B),
        Imp(Neg(A), Imp(A, B)),
    }


def test_sequent_family_bounds_and_content():
    universe = formula_universe(["p", "q"], 2)
    family = sequent_family(universe, 4)
    assert all(sequent_weight(s) <= 4 for s in family)
    assert all(s.antecedent or s.succedent is not None for s in family)
    assert parse_sequent("~p, p |-") in family
    assert parse_sequent("p |- p") in family
    assert parse_sequent("|- ~q") in family
    assert len(set(family)) == len(family)
    weights = [sequent_weight(s) for s in family]
    assert weights == sorted(weights)
