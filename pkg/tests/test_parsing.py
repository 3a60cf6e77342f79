import pytest
from hypothesis import given, settings, strategies as st

from modedisc.alphabet import PropositionAlphabet
from modedisc.formulas import (
    And,
    Finally,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    TrueFormula,
    Until,
)
from modedisc.parsing import FormulaSyntaxError, parse_formula, print_formula

AL = PropositionAlphabet(2, 1)
P1, P2, S1 = AL.mode_atom(1), AL.mode_atom(2), AL.state_atom(1)


def test_parse_example():
    f = parse_formula("(m1 U m2) & G(m1 | m2)", AL)
    assert f == And((Until(P1, P2), Globally(Or((P1, P2)))))


def test_precedence_until_tighter_than_and():
    assert parse_formula("m1 U m2 & s1", AL) == And((Until(P1, P2), S1))


def test_precedence_not_tightest():
    assert parse_formula("!m1 U m2", AL) == Until(Not(P1), P2)


def test_prefix_tighter_than_until():
    assert parse_formula("G m1 U m2", AL) == Until(Globally(P1), P2)


def test_until_right_associative():
    assert parse_formula("m1 U m2 U s1", AL) == Until(P1, Until(P2, S1))


def test_implies_lowest():
    f = parse_formula("m1 & m2 -> s1 | m1", AL)
    assert f == Implies(And((P1, P2)), Or((S1, P1)))


def test_chains_flatten():
    assert parse_formula("m1 & m2 & s1", AL) == And((P1, P2, S1))
    assert parse_formula("(m1 & m2) & s1", AL) == And((And((P1, P2)), S1))


def test_true_reserved():
    assert parse_formula("true", AL) == TrueFormula()


def test_whitespace_and_parens():
    assert parse_formula("  X ( m1 )  ", AL) == Next(P1)
    assert parse_formula("((m1))", AL) == P1


def test_unknown_proposition_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("m1 & bogus", AL)
    assert exc.value.position == 5


def test_malformed_inputs():
    for text in ["", "m1 &", "(m1", "m1 )", "U m1", "m1 m2", "m1 -> ", "&"]:
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text, AL)


def test_lexical_error_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("m1 % m2", AL)
    assert exc.value.position == 3


def _formulas(depth):
    leaf = st.sampled_from([P1, P2, S1, TrueFormula()])
    if depth == 0:
        return leaf

    def extend(children):
        sub = _formulas(depth - 1)
        return st.one_of(
            st.builds(Not, sub),
            st.builds(Next, sub),
            st.builds(Finally, sub),
            st.builds(Globally, sub),
            st.builds(Until, sub, sub),
            st.builds(Implies, sub, sub),
            st.builds(lambda a, b: And((a, b)), sub, sub),
            st.builds(lambda a, b, c: Or((a, b, c)), sub, sub, sub),
        )

    return st.one_of(leaf, extend(depth))


@settings(max_examples=300, deadline=None)
@given(_formulas(4))
def test_roundtrip_is_identity(f):
    assert parse_formula(print_formula(f), AL) == f
