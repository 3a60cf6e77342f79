import pytest

from modedisc.alphabet import PropositionAlphabet
from modedisc.formulas import (
    And,
    Atom,
    Finally,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    TrueFormula,
    Until,
    binarized,
    decode_syntax_dag,
    formula_size,
    subformulas,
    to_syntax_dag,
)

AL = PropositionAlphabet(3)
P1, P2, P3 = AL.mode_atom(1), AL.mode_atom(2), AL.mode_atom(3)


def test_atom_identity():
    assert P1 == Atom("m1", "m", 1)
    assert P1 != P2
    assert hash(P1) == hash(Atom("m1", "m", 1))


def test_and_or_need_two_children():
    with pytest.raises(ValueError):
        And((P1,))
    with pytest.raises(ValueError):
        Or(())


def test_shared_atom_dag():
    # structurally identical subterms collapse to one node
    dag = to_syntax_dag(And((P1, P1)))
    assert len(dag) == 2
    assert formula_size(And((P1, P1))) == 2


def test_shared_subformula_dag():
    f = And((Until(P1, P2), Globally(Or((P1, P2)))))
    dag = to_syntax_dag(f)
    # p1, p2, U, |, G, & with both atoms shared
    assert len(dag) == 6
    labels = [n.label for n in dag.nodes]
    assert labels.count("m1") == 1 and labels.count("m2") == 1


def test_dag_child_ids_smaller():
    f = Implies(Not(P1), Until(Finally(P2), Next(P3)))
    dag = to_syntax_dag(f)
    for node in dag.nodes:
        for c in (node.left, node.right):
            assert c is None or c < node.ident
    assert dag.root == len(dag)


def test_decode_roundtrip_binary():
    fs = [
        P1,
        TrueFormula(),
        Not(Next(P1)),
        Until(P1, P2),
        And((Until(P1, P2), Globally(Or((P1, P2))))),
        Implies(P1, Implies(P2, P3)),
    ]
    for f in fs:
        assert decode_syntax_dag(to_syntax_dag(f)) == f


def test_decode_of_nary_is_binarized():
    f = And((P1, P2, P3))
    assert decode_syntax_dag(to_syntax_dag(f)) == And((And((P1, P2)), P3))
    assert binarized(f) == And((And((P1, P2)), P3))


def test_size_counts_binarized_nodes():
    assert formula_size(And((P1, P2, P3))) == 5
    assert formula_size(Globally(P1)) == 2
    assert formula_size(P2) == 1


def test_size_le_tree_count():
    f = And((Until(P1, P2), Globally(Or((P1, P2)))))
    # tree has 8 nodes, the shared DAG 6
    assert formula_size(f) == 6 < 8


def test_subformulas_children_first():
    f = Until(Not(P1), P2)
    subs = subformulas(f)
    assert subs.index(P1) < subs.index(Not(P1)) < subs.index(f)
    assert len(subs) == 4
