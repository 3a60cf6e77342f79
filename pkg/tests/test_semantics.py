import itertools

from hypothesis import given, settings, strategies as st

from modedisc.alphabet import ModeAssignment, PropositionAlphabet, Trace
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
from modedisc.semantics import (
    build_evaluation_table,
    evaluate,
    evaluate_recursive,
    is_consistent,
)

AL = PropositionAlphabet(2)
P1, P2 = AL.mode_atom(1), AL.mode_atom(2)
A1 = ModeAssignment.from_index(1, 2)
A2 = ModeAssignment.from_index(2, 2)


def tr(*modes, start=0):
    return Trace(tuple(A1 if m == 1 else A2 for m in modes), start_time=start)


def test_atom_and_boolean():
    t = tr(1, 2)
    assert evaluate(P1, t)
    assert not evaluate(P2, t)
    assert evaluate(P2, t, 1)
    assert evaluate(Or((P1, P2)), t)
    assert not evaluate(And((P1, P2)), t)
    assert evaluate(Implies(P2, P1), t)
    assert evaluate(TrueFormula(), t)


def test_next_false_at_last_step():
    t = tr(1, 1)
    assert evaluate(Next(P1), t, 0)
    assert not evaluate(Next(P1), t, 1)
    assert not evaluate(Next(TrueFormula()), tr(1), 0)


def test_until_needs_witness():
    assert evaluate(Until(P1, P2), tr(1, 1, 2))
    assert not evaluate(Until(P1, P2), tr(1, 1, 1))
    # an immediate witness needs no prefix
    assert evaluate(Until(P1, P2), tr(2))
    assert evaluate(Until(P2, P1), tr(2, 2, 1))


def test_until_interrupted():
    # the left side fails (mode 2 at step 1) before the witness would arrive
    assert not evaluate(Until(P1, P2), tr(1, 1, 1))
    assert evaluate(Until(P1, P2), tr(1, 2, 1))
    t = tr(1, 1, 2)
    assert evaluate(Until(P1, P2), t, 0) and evaluate(Until(P1, P2), t, 2)


def test_finally_globally():
    assert evaluate(Finally(P2), tr(1, 1, 2))
    assert not evaluate(Finally(P2), tr(1, 1))
    assert evaluate(Globally(P1), tr(1, 1, 1))
    assert not evaluate(Globally(P1), tr(1, 2, 1))
    # suffix semantics
    assert evaluate(Globally(P1), tr(2, 1, 1), 1)


def test_start_time_offset():
    t = tr(1, 2, start=5)
    assert evaluate(P1, t, 5)
    assert evaluate(Next(P2), t, 5)
    assert evaluate(P2, t, 6)


def test_is_consistent():
    traces = [tr(1, 2), tr(1, 1, 2)]
    assert is_consistent(Until(P1, P2), traces)
    assert not is_consistent(Globally(P1), traces)
    assert is_consistent(TrueFormula(), traces)


def test_table_matches_recursive_exhaustively():
    formulas = [
        Until(P1, P2),
        Until(Not(P1), Next(P1)),
        Globally(Or((P1, Next(P2)))),
        Finally(And((P1, Next(P1)))),
        Implies(P1, Until(P1, P2)),
        Next(Next(P1)),
        Not(Until(P1, Not(P2))),
    ]
    for n in range(1, 5):
        for word in itertools.product([1, 2], repeat=n):
            t = tr(*word)
            for f in formulas:
                table = build_evaluation_table(f, t)
                for s in range(n):
                    assert table.root_at(s) == evaluate_recursive(f, t, s), (f, word, s)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([1, 2]), min_size=1, max_size=6), st.integers(0, 5))
def test_until_expansion_property(word, t):
    trace = tr(*word)
    t = min(t, len(word) - 1)
    f = Until(P1, P2)
    expanded = Or((P2, And((P1, Next(f)))))
    assert evaluate(f, trace, t) == evaluate(expanded, trace, t)
