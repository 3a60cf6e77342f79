import pytest

from modedisc.alphabet import PropositionAlphabet
from modedisc.formulas import And, Finally, Globally, Or, Until, formula_size
from modedisc.grammar import (
    ContextFreeGrammar,
    GrammarError,
    PriorInfo,
    PriorNode,
    Production,
    cfg_from_prior,
    consistent_with_prior,
    enumerate_language,
    generates,
    read_prior,
    write_prior,
)
from modedisc.parsing import parse_formula

AL = PropositionAlphabet(3)
P1, P2, P3 = AL.mode_atom(1), AL.mode_atom(2), AL.mode_atom(3)


def fully_fixed_prior():
    # skeleton of (G m1) & m2
    return PriorInfo(
        nodes=(
            PriorNode(1, ("&",), (2, 4)),
            PriorNode(2, ("G",), (3,)),
            PriorNode(3, ("m1",)),
            PriorNode(4, ("m2",)),
        ),
        root=1,
    )


def partially_fixed_prior():
    # root & fixed; left subtree an unfixed G/F over any atom; right any atom
    return PriorInfo(
        nodes=(
            PriorNode(1, ("&",), (2, 4)),
            PriorNode(2, ("G", "F"), (3,)),
            PriorNode(3, ("m1", "m2", "m3")),
            PriorNode(4, ("m1", "m2", "m3")),
        ),
        root=1,
    )


def test_prior_size():
    assert fully_fixed_prior().size == 4


def test_prior_validation():
    with pytest.raises(GrammarError):
        PriorInfo((PriorNode(1, ("&",), (2,)), PriorNode(2, ("m1",))), root=1)
    with pytest.raises(GrammarError):
        PriorInfo((PriorNode(1, ()),), root=1)
    with pytest.raises(GrammarError):
        PriorInfo((PriorNode(1, ("m1",)),), root=9)


def test_cfg_from_fully_fixed():
    g = cfg_from_prior(fully_fixed_prior())
    assert g.start == "lam1"
    assert g.bodies("lam1") == [("lam2", "&", "lam2")]
    assert g.bodies("lam2") == [("G", "lam3"), ("m2",)]
    assert g.bodies("lam3") == [("m1",)]


def test_cfg_from_partially_fixed():
    g = cfg_from_prior(partially_fixed_prior())
    assert g.bodies("lam2") == [
        ("G", "lam3"),
        ("F", "lam3"),
        ("m1",),
        ("m2",),
        ("m3",),
    ]
    assert set(g.bodies("lam3")) == {("m1",), ("m2",), ("m3",)}


def test_generates_full_and_partial():
    g = cfg_from_prior(partially_fixed_prior())
    assert generates(g, And((Finally(P1), P2)))
    # derivable from lam2 alone (partial structure)
    assert generates(g, Globally(P1))
    assert generates(g, P1)
    # Until never appears in the grammar
    assert not generates(g, Until(P1, P2))
    # conjunction below the root layer is not derivable
    assert not generates(g, And((Globally(P1), And((P1, P2)))))


def test_generated_fixed_grammar():
    g = cfg_from_prior(fully_fixed_prior())
    assert generates(g, And((Globally(P1), P2)))
    # the grammar pools layer labels, so the cross combination also derives
    assert generates(g, And((P2, P2)))
    assert not generates(g, And((P1, P2)))  # m1 alone is not a lam2 body


def test_consistency_embedding():
    pi = partially_fixed_prior()
    assert consistent_with_prior(And((Finally(P1), P2)), pi)
    assert consistent_with_prior(Globally(P1), pi)  # partial structure
    assert consistent_with_prior(P2, pi)
    # neither child of & may be a bare atom pair: left subtree must be G/F
    assert not consistent_with_prior(And((P1, P2)), pi)
    assert not consistent_with_prior(Until(P1, P2), pi)


def test_consistency_respects_child_order_freedom():
    pi = partially_fixed_prior()
    # embedding may swap the two children of the root
    assert consistent_with_prior(And((P2, Finally(P1))), pi)


def test_consistent_implies_generated():
    pi = partially_fixed_prior()
    g = cfg_from_prior(pi)
    candidates = [
        And((Finally(P1), P2)),
        And((P2, Globally(P3))),
        Globally(P1),
        P3,
        And((P1, P2)),
        Until(P1, P2),
        Or((P1, P2)),
    ]
    for f in candidates:
        if consistent_with_prior(f, pi):
            assert generates(g, f), f


def test_enumerate_language_is_sound_and_complete():
    pi = partially_fixed_prior()
    g = cfg_from_prior(pi)
    lang = enumerate_language(g, AL, max_size=4)
    assert all(generates(g, f) for f in lang)
    assert all(formula_size(f) <= 4 for f in lang)
    assert And((Finally(P1), P2)) in lang
    assert Globally(P2) in lang
    # spot-check counts: root layer 2*(5*... ) stays modest
    assert len(set(lang)) == len(lang)


def test_unlayered_skeleton_rejected():
    pi = PriorInfo(
        nodes=(
            PriorNode(1, ("&",), (2, 3)),
            PriorNode(2, ("G",), (3,)),
            PriorNode(3, ("m1",)),
        ),
        root=1,
    )
    with pytest.raises(GrammarError):
        cfg_from_prior(pi)


def test_prior_file_roundtrip(tmp_path):
    pi = partially_fixed_prior()
    path = tmp_path / "prior.txt"
    write_prior(path, pi)
    back = read_prior(path, AL)
    assert back == pi


def test_prior_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1: fixed &\n2: oneof m1\nedges: 1->2, 1->2\n")
    # node 1 is binary with two child slots pointing at the same node
    pi = read_prior(path, AL)
    assert pi.node(1).children == (2, 2)
    path.write_text("1: fixed nosuch\nedges:\n")
    with pytest.raises(GrammarError):
        read_prior(path, AL)
    path.write_text("1: fixed &\n2: fixed m1\n3: fixed m2\nedges: 1->2\n")
    with pytest.raises(GrammarError):
        read_prior(path, AL)  # two roots


def test_shared_child_embedding():
    # U's right child shares the ->'s left child, like a shared-leaf skeleton
    pi = PriorInfo(
        nodes=(
            PriorNode(1, ("->",), (2, 3)),
            PriorNode(2, ("m1", "m2")),
            PriorNode(3, ("U",), (4, 2)),
            PriorNode(4, ("!", "m1", "m2"), (5,)),
            PriorNode(5, ("m1", "m2", "m3")),
        ),
        root=1,
    )
    f = parse_formula("m1 -> (!m2 U m1)", AL)
    assert consistent_with_prior(f, pi)
    f2 = parse_formula("m1 -> (m2 U m1)", AL)
    assert consistent_with_prior(f2, pi)
    f3 = parse_formula("m1 -> (m2 U m3)", AL)
    assert not consistent_with_prior(f3, pi)  # m3 not allowed at node 2
