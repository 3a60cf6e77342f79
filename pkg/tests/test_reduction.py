import random

import numpy as np
import pytest

from conftest import all_formulas_up_to, all_traces, mode_trace
from modedisc.alphabet import PropositionAlphabet
from modedisc.inference import infer_all
from modedisc.parsing import parse_formula, print_formula
from modedisc.reduction import (
    ImplicationBudgetError,
    bounded_equivalent,
    bounded_implies,
    encode_trace_existence,
    reduce_formulas,
    satisfaction_vector,
)
from modedisc.sat import SatResult, sat_solve
from modedisc.semantics import evaluate, is_consistent

A2 = PropositionAlphabet(2)
AS = PropositionAlphabet(1, 1)  # m1 constant, s1 free


def test_satisfaction_vector_matches_scalar_evaluation():
    horizon = 4
    traces = all_traces(A2, horizon)
    sample = all_formulas_up_to(A2, 2) + [
        parse_formula(s, A2)
        for s in ("m1 U m2", "G (m1 -> X m2)", "F (m1 & X m1)", "(m1 | X m2) U m2")
    ]
    for f in sample:
        vec = satisfaction_vector(f, A2, horizon)
        assert len(vec) == len(traces)
        for i, tr in enumerate(traces):
            assert vec[i] == evaluate(f, tr), (print_formula(f), i)


def test_implies_globally_to_finally():
    v = bounded_implies(parse_formula("G m1", A2), parse_formula("F m1", A2), A2, 5)
    assert v.holds
    assert v.bound == 5
    assert v.counterexample is None


def test_finally_does_not_imply_globally():
    a, b = parse_formula("F m1", A2), parse_formula("G m1", A2)
    v = bounded_implies(a, b, A2, 2)
    assert v.status == "refuted"
    w = v.counterexample
    assert w is not None and len(w.symbols) <= 2
    assert evaluate(a, w)
    assert not evaluate(b, w)


def test_identity_implication_holds_at_any_horizon():
    for s in ("m1", "X m2", "m1 U m2", "G (m1 | m2)"):
        f = parse_formula(s, A2)
        for h in (1, 3, 6):
            assert bounded_implies(f, f, A2, h).holds


def test_exhaustive_and_sat_paths_agree():
    pairs = [
        ("G m1", "F m1"),
        ("F m1", "G m1"),
        ("m1 & m2", "m1"),
        ("m1", "m1 | m2"),
        ("X m1", "F m1"),
        ("m1 U m2", "F m2"),
        ("F m2", "m1 U m2"),
        ("! m2", "m1"),
    ]
    for sa, sb in pairs:
        a, b = parse_formula(sa, A2), parse_formula(sb, A2)
        fast = bounded_implies(a, b, A2, 4)
        slow = bounded_implies(a, b, A2, 4, exhaustive_limit=0)
        assert fast.status == slow.status, (sa, sb)
        if slow.status == "refuted":
            w = slow.counterexample
            assert evaluate(a, w) and not evaluate(b, w)


def test_trace_existence_encoding_round_trip():
    f = parse_formula("F (m1 & X m2)", A2)
    problem, decode = encode_trace_existence(f, A2, 3)
    res = sat_solve(problem)
    assert res.is_sat
    witness = decode(res.model)
    assert len(witness.symbols) == 3
    assert evaluate(f, witness)


def test_trace_existence_with_state_bits():
    f = parse_formula("G s1", AS)
    problem, decode = encode_trace_existence(f, AS, 2)
    res = sat_solve(problem)
    assert res.is_sat
    witness = decode(res.model)
    assert all(sym.state_bits == (1,) for sym in witness.symbols)


def test_budget_exhaustion_is_its_own_failure(monkeypatch):
    import modedisc.reduction as mod

    monkeypatch.setattr(mod, "sat_solve", lambda p, budget=None: SatResult("unknown"))
    with pytest.raises(ImplicationBudgetError):
        bounded_implies(
            parse_formula("G m1", A2), parse_formula("F m1", A2), A2, 3,
            conflict_budget=1, exhaustive_limit=0,
        )


def test_reduce_drops_the_stronger_member():
    g1, f1 = parse_formula("G m1", A2), parse_formula("F m1", A2)
    kept, psi = reduce_formulas({g1, f1}, A2, 5)
    assert kept == (f1,)
    assert psi == f1


def test_reduce_singleton_unchanged():
    m1 = parse_formula("m1", A2)
    kept, psi = reduce_formulas({m1}, A2, 5)
    assert kept == (m1,)
    assert psi == m1


def test_reduce_collapses_equivalent_members():
    # on a two-mode alphabet exactly one of m1, m2 holds, so !m2 is m1
    m1, not_m2 = parse_formula("m1", A2), parse_formula("! m2", A2)
    assert bounded_equivalent(m1, not_m2, A2, 5)
    kept, psi = reduce_formulas({m1, not_m2}, A2, 5)
    assert kept == (m1,)  # the canonically first representative
    assert psi == m1


def test_reduce_empty_passes_phi_through():
    phi = parse_formula("G m1", A2)
    kept, psi = reduce_formulas([], A2, 5, phi_I=phi)
    assert kept == ()
    assert psi == phi
    assert reduce_formulas([], A2, 5) == ((), None)


def test_reduce_keeps_incomparable_members():
    g1 = parse_formula("G m1", A2)
    xm2 = parse_formula("X m2", A2)
    kept, psi = reduce_formulas({g1, xm2}, A2, 5)
    assert set(kept) == {g1, xm2}
    assert set(psi.parts) == {g1, xm2}


def test_reduce_preserves_bounded_disjunction():
    rng = random.Random(23)
    horizon = 6
    for _ in range(5):
        traces = [
            mode_trace(A2, *[rng.randint(1, 2) for _ in range(rng.randint(2, 5))])
            for _ in range(4)
        ]
        E = list(infer_all(traces, 3, A2))
        kept, psi = reduce_formulas(E, A2, horizon)
        assert len(kept) <= len(E)
        assert psi is not None
        before = np.zeros(len(satisfaction_vector(psi, A2, horizon)), dtype=bool)
        for f in E:
            before |= satisfaction_vector(f, A2, horizon)
        after = np.zeros_like(before)
        for f in kept:
            after |= satisfaction_vector(f, A2, horizon)
        assert np.array_equal(before, after)
        for tr in traces:
            assert is_consistent(psi, [tr])


def test_reduce_pairwise_path_matches_vector_path():
    formulas = {
        parse_formula(s, A2)
        for s in ("G m1", "F m1", "m1", "X m1", "m1 U m2", "F m2")
    }
    kept_fast, _ = reduce_formulas(formulas, A2, 4)
    kept_slow, _ = reduce_formulas(formulas, A2, 4, exhaustive_limit=0)
    assert kept_fast == kept_slow


def test_strict_reduction_when_strict_implication_exists():
    E = [parse_formula(s, A2) for s in ("G m1", "F m1", "m1")]
    kept, _ = reduce_formulas(E, A2, 6)
    assert len(kept) < len(E)
    assert parse_formula("G m1", A2) not in kept  # stronger than both others
