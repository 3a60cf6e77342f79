"""Bounded implication between formulas and pruning of inferred sets.

Implication here is decided over all traces up to a horizon H.  For
small alphabets every trace is enumerated at once: satisfaction of a
formula over all A^L traces of length L is computed as vectorized
boolean recurrences on (A^L, L) arrays, one array per distinct
subformula.  Above the exhaustive limit the question "does some trace
satisfy a but not b" becomes propositional satisfiability with the
trace's mode and state bits as free variables.

Pruning keeps the weak end of the implication preorder: when a -> b
strictly, a | b is just b, so dropping a preserves the disjunction of
the set.  Equivalent members collapse to their canonically first
representative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alphabet import ModeAssignment, PropositionAlphabet, Trace
from .formulas import (
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    TrueFormula,
    Until,
    binarized,
    formula_size,
    to_syntax_dag,
)
from .parsing import print_formula
from .sat import CnfProblem, sat_solve


class ImplicationBudgetError(Exception):
    """The SAT fallback ran out of its conflict budget; no verdict."""


@dataclass(frozen=True)
class ImplicationVerdict:
    status: str  # "holds_up_to_bound" | "refuted"
    bound: int
    counterexample: Trace | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds_up_to_bound"


def _assignment_truth(alphabet: PropositionAlphabet, atom: Atom) -> np.ndarray:
    return np.array([sym.satisfies(atom) for sym in alphabet.assignments()], dtype=bool)


def _symbol_ids(count: int, length: int) -> np.ndarray:
    """(count^length, length) matrix of assignment indices, first step most significant."""
    n = np.arange(count ** length)
    cols = [(n // count ** (length - 1 - t)) % count for t in range(length)]
    return np.stack(cols, axis=1)


def _tables(f: Formula, ids: np.ndarray, alphabet: PropositionAlphabet,
            cache: dict[Formula, np.ndarray]) -> np.ndarray:
    """(N, L) truth of `f` at every position of every length-L trace."""
    hit = cache.get(f)
    if hit is not None:
        return hit
    if isinstance(f, TrueFormula):
        out = np.ones(ids.shape, dtype=bool)
    elif isinstance(f, Atom):
        out = _assignment_truth(alphabet, f)[ids]
    elif isinstance(f, Not):
        out = ~_tables(f.child, ids, alphabet, cache)
    elif isinstance(f, Next):
        child = _tables(f.child, ids, alphabet, cache)
        out = np.zeros_like(child)
        out[:, :-1] = child[:, 1:]
    elif isinstance(f, Finally):
        child = _tables(f.child, ids, alphabet, cache)
        out = np.logical_or.accumulate(child[:, ::-1], axis=1)[:, ::-1]
    elif isinstance(f, Globally):
        child = _tables(f.child, ids, alphabet, cache)
        out = np.logical_and.accumulate(child[:, ::-1], axis=1)[:, ::-1]
    elif isinstance(f, Until):
        left = _tables(f.left, ids, alphabet, cache)
        right = _tables(f.right, ids, alphabet, cache)
        out = right.copy()
        for t in range(ids.shape[1] - 2, -1, -1):
            out[:, t] |= left[:, t] & out[:, t + 1]
    elif isinstance(f, And):
        out = _tables(f.parts[0], ids, alphabet, cache)
        for part in f.parts[1:]:
            out = out & _tables(part, ids, alphabet, cache)
    elif isinstance(f, Or):
        out = _tables(f.parts[0], ids, alphabet, cache)
        for part in f.parts[1:]:
            out = out | _tables(part, ids, alphabet, cache)
    elif isinstance(f, Implies):
        out = ~_tables(f.left, ids, alphabet, cache) | _tables(f.right, ids, alphabet, cache)
    else:
        raise TypeError(f"unknown formula node {type(f).__name__}")
    cache[f] = out
    return out


def satisfaction_vector(f: Formula, alphabet: PropositionAlphabet, horizon: int) -> np.ndarray:
    """Truth of `f` at position 0 of every trace of length 1..horizon.

    Traces are ordered by length, then lexicographically by assignment
    index; the vector's layout is shared by all formulas over the same
    alphabet and horizon, so subset tests on these vectors decide
    bounded implication.
    """
    count = len(alphabet.assignments())
    chunks = []
    for length in range(1, horizon + 1):
        ids = _symbol_ids(count, length)
        chunks.append(_tables(f, ids, alphabet, {})[:, 0])
    return np.concatenate(chunks)


def _trace_from_index(alphabet: PropositionAlphabet, length: int, index: int) -> Trace:
    symbols = list(alphabet.assignments())
    count = len(symbols)
    picked = []
    for t in range(length):
        picked.append(symbols[(index // count ** (length - 1 - t)) % count])
    return Trace(tuple(picked))


def bounded_implies(
    a: Formula,
    b: Formula,
    alphabet: PropositionAlphabet,
    horizon: int,
    conflict_budget: int | None = None,
    exhaustive_limit: int = 10 ** 6,
) -> ImplicationVerdict:
    """Does every trace of length <= horizon satisfying `a` also satisfy `b`?"""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    count = len(alphabet.assignments())
    if count ** horizon <= exhaustive_limit:
        for length in range(1, horizon + 1):
            ids = _symbol_ids(count, length)
            cache: dict[Formula, np.ndarray] = {}
            sat_a = _tables(a, ids, alphabet, cache)[:, 0]
            sat_b = _tables(b, ids, alphabet, cache)[:, 0]
            gap = sat_a & ~sat_b
            if gap.any():
                idx = int(np.argmax(gap))
                return ImplicationVerdict(
                    "refuted", horizon, _trace_from_index(alphabet, length, idx)
                )
        return ImplicationVerdict("holds_up_to_bound", horizon)
    witness = And((a, Not(b)))
    for length in range(1, horizon + 1):
        problem, decode = encode_trace_existence(witness, alphabet, length)
        res = sat_solve(problem, conflict_budget)
        if res.status == "unknown":
            raise ImplicationBudgetError(
                f"no verdict for length {length} within {conflict_budget} conflicts"
            )
        if res.is_sat:
            return ImplicationVerdict("refuted", horizon, decode(res.model))
    return ImplicationVerdict("holds_up_to_bound", horizon)


def encode_trace_existence(f: Formula, alphabet: PropositionAlphabet, length: int):
    """CNF satisfiable iff some length-`length` trace satisfies `f` at position 0.

    Returns the problem and a decoder turning any model back into the
    witnessing trace.  The trace's mode choice (one-hot) and
    state-constraint bits are the free variables; each DAG node of the
    formula gets one valuation variable per position, tied to its
    children by the usual biconditional recurrences.
    """
    dag = to_syntax_dag(binarized(f))
    p = CnfProblem()
    mode = {
        (t, i): p.new_var(f"mode{t}_{i}")
        for t in range(length)
        for i in range(1, alphabet.mode_count + 1)
    }
    state = {
        (t, j): p.new_var(f"state{t}_{j}")
        for t in range(length)
        for j in range(1, alphabet.state_constraint_count + 1)
    }
    y = {
        (node.ident, t): p.new_var(f"y{node.ident}_{t}")
        for node in dag.nodes
        for t in range(length)
    }
    add = p.add_clause
    for t in range(length):
        add([mode[t, i] for i in range(1, alphabet.mode_count + 1)])
        for i in range(1, alphabet.mode_count + 1):
            for i2 in range(i + 1, alphabet.mode_count + 1):
                add([-mode[t, i], -mode[t, i2]])
    for node in dag.nodes:
        for t in range(length):
            yt = y[node.ident, t]
            last = t == length - 1
            if node.label == "true":
                add([yt])
            elif node.atom is not None:
                bit = (
                    mode[t, node.atom.index]
                    if node.atom.kind == "m"
                    else state[t, node.atom.index]
                )
                add([-yt, bit])
                add([yt, -bit])
            elif node.label == "!":
                c = y[node.left, t]
                add([-yt, -c])
                add([yt, c])
            elif node.label == "X":
                if last:
                    add([-yt])
                else:
                    c = y[node.left, t + 1]
                    add([-yt, c])
                    add([yt, -c])
            elif node.label == "F":
                c = y[node.left, t]
                if last:
                    add([-yt, c])
                    add([yt, -c])
                else:
                    nxt = y[node.ident, t + 1]
                    add([-yt, c, nxt])
                    add([yt, -c])
                    add([yt, -nxt])
            elif node.label == "G":
                c = y[node.left, t]
                if last:
                    add([-yt, c])
                    add([yt, -c])
                else:
                    nxt = y[node.ident, t + 1]
                    add([-yt, c])
                    add([-yt, nxt])
                    add([yt, -c, -nxt])
            elif node.label == "U":
                lft, rgt = y[node.left, t], y[node.right, t]
                if last:
                    add([-yt, rgt])
                    add([yt, -rgt])
                else:
                    nxt = y[node.ident, t + 1]
                    add([yt, -rgt])
                    add([yt, -lft, -nxt])
                    add([-yt, rgt, lft])
                    add([-yt, rgt, nxt])
            elif node.label == "&":
                lft, rgt = y[node.left, t], y[node.right, t]
                add([-yt, lft])
                add([-yt, rgt])
                add([yt, -lft, -rgt])
            elif node.label == "|":
                lft, rgt = y[node.left, t], y[node.right, t]
                add([-yt, lft, rgt])
                add([yt, -lft])
                add([yt, -rgt])
            elif node.label == "->":
                lft, rgt = y[node.left, t], y[node.right, t]
                add([-yt, -lft, rgt])
                add([yt, lft])
                add([yt, -rgt])
            else:
                raise TypeError(f"unknown DAG label {node.label!r}")
    add([y[dag.root, 0]])

    def decode(model: dict[int, bool]) -> Trace:
        symbols = []
        for t in range(length):
            idx = next(
                i for i in range(1, alphabet.mode_count + 1) if model[mode[t, i]]
            )
            bits = tuple(
                1 if model[state[t, j]] else 0
                for j in range(1, alphabet.state_constraint_count + 1)
            )
            symbols.append(ModeAssignment.from_index(idx, alphabet.mode_count, bits))
        return Trace(tuple(symbols))

    return p, decode


def bounded_equivalent(a: Formula, b: Formula, alphabet: PropositionAlphabet,
                       horizon: int, **kwargs) -> bool:
    return (
        bounded_implies(a, b, alphabet, horizon, **kwargs).holds
        and bounded_implies(b, a, alphabet, horizon, **kwargs).holds
    )


def _canonical(formulas) -> list[Formula]:
    return sorted(formulas, key=lambda f: (formula_size(f), print_formula(f)))


def reduce_formulas(
    E,
    alphabet: PropositionAlphabet,
    horizon: int,
    phi_I: Formula | None = None,
    conflict_budget: int | None = None,
    exhaustive_limit: int = 10 ** 6,
):
    """Drop members that strictly imply another member; collapse equivalents.

    Returns (kept, psi) where psi is the disjunction of the kept
    members.  An empty input set passes `phi_I` through untouched, the
    "nothing to do" branch of the size-reduction procedure.
    """
    from .inference import build_phi_I

    members = _canonical(set(E))
    if not members:
        return (), phi_I
    count = len(alphabet.assignments())
    if count ** horizon <= exhaustive_limit:
        vectors = [satisfaction_vector(f, alphabet, horizon) for f in members]
        implies = [
            [bool(not np.any(va & ~vb)) for vb in vectors] for va in vectors
        ]
    else:
        implies = [
            [
                True
                if i == j
                else bounded_implies(
                    members[i], members[j], alphabet, horizon,
                    conflict_budget, exhaustive_limit,
                ).holds
                for j in range(len(members))
            ]
            for i in range(len(members))
        ]
    kept = []
    for i, f in enumerate(members):
        strictly_stronger = any(
            implies[i][j] and not implies[j][i] for j in range(len(members)) if j != i
        )
        if strictly_stronger:
            continue
        duplicate = any(
            implies[i][j] and implies[j][i] for j in range(i) if members[j] in kept
        )
        if duplicate:
            continue
        kept.append(f)
    return tuple(kept), build_phi_I(kept)
