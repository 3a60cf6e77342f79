"""Finite-trace evaluation of temporal formulas.

Satisfaction is decided over the whole remaining suffix of a finite
trace.  `X f` is false at the last step (there is no next step), `f U g`
requires g to hold at some remaining step with f holding strictly
before it, and `F`/`G` quantify over the remaining steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import Trace
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
    SyntaxDag,
    TrueFormula,
    Until,
    to_syntax_dag,
)


@dataclass(frozen=True)
class EvaluationTable:
    """Truth of every DAG node at every step of one trace.

    `values[(ident, t)]` holds for node ids of `dag` and absolute times
    `start_time .. start_time + length - 1`.
    """

    dag: SyntaxDag
    start_time: int
    length: int
    values: dict[tuple[int, int], bool]

    def root_at(self, t: int) -> bool:
        return self.values[(self.dag.root, t)]


def build_evaluation_table(f: Formula, tr: Trace) -> EvaluationTable:
    """Evaluate every shared subformula of `f` at every step of `tr`."""
    dag = to_syntax_dag(f)
    T = len(tr)
    t0 = tr.start_time
    values: dict[tuple[int, int], bool] = {}
    for node in dag.nodes:  # children precede parents by construction
        ident = node.ident
        if node.label == "true":
            for i in range(T):
                values[(ident, t0 + i)] = True
        elif node.atom is not None:
            for i in range(T):
                values[(ident, t0 + i)] = tr.symbols[i].satisfies(node.atom)
        elif node.label == "!":
            for i in range(T):
                values[(ident, t0 + i)] = not values[(node.left, t0 + i)]
        elif node.label == "X":
            for i in range(T):
                values[(ident, t0 + i)] = i + 1 < T and values[(node.left, t0 + i + 1)]
        elif node.label == "F":
            acc = False
            for i in reversed(range(T)):
                acc = values[(node.left, t0 + i)] or acc
                values[(ident, t0 + i)] = acc
        elif node.label == "G":
            acc = True
            for i in reversed(range(T)):
                acc = values[(node.left, t0 + i)] and acc
                values[(ident, t0 + i)] = acc
        elif node.label == "U":
            # backwards recurrence: g holds now, or f holds now and U holds next
            nxt = False
            for i in reversed(range(T)):
                here = values[(node.right, t0 + i)] or (
                    values[(node.left, t0 + i)] and nxt
                )
                values[(ident, t0 + i)] = here
                nxt = here
        elif node.label == "&":
            for i in range(T):
                values[(ident, t0 + i)] = (
                    values[(node.left, t0 + i)] and values[(node.right, t0 + i)]
                )
        elif node.label == "|":
            for i in range(T):
                values[(ident, t0 + i)] = (
                    values[(node.left, t0 + i)] or values[(node.right, t0 + i)]
                )
        elif node.label == "->":
            for i in range(T):
                values[(ident, t0 + i)] = (
                    not values[(node.left, t0 + i)] or values[(node.right, t0 + i)]
                )
        else:
            raise ValueError(f"unknown DAG label {node.label!r}")
    return EvaluationTable(dag, t0, T, values)


def evaluate(f: Formula, tr: Trace, t: int | None = None) -> bool:
    """Does `tr` satisfy `f` at absolute time `t` (default: trace start)?"""
    if t is None:
        t = tr.start_time
    if not tr.start_time <= t <= tr.end_time:
        raise IndexError(f"time {t} outside [{tr.start_time}, {tr.end_time}]")
    return build_evaluation_table(f, tr).root_at(t)


def is_consistent(f: Formula, traces) -> bool:
    """True iff every trace satisfies `f` at its own start time."""
    return all(evaluate(f, tr) for tr in traces)


# Direct recursive evaluation, kept as an independent cross-check of the
# table-based evaluator (used by tests).
def evaluate_recursive(f: Formula, tr: Trace, t: int | None = None) -> bool:
    if t is None:
        t = tr.start_time
    end = tr.end_time
    if isinstance(f, TrueFormula):
        return True
    if isinstance(f, Atom):
        return tr.at(t).satisfies(f)
    if isinstance(f, Not):
        return not evaluate_recursive(f.child, tr, t)
    if isinstance(f, Next):
        return t + 1 <= end and evaluate_recursive(f.child, tr, t + 1)
    if isinstance(f, Finally):
        return any(evaluate_recursive(f.child, tr, s) for s in range(t, end + 1))
    if isinstance(f, Globally):
        return all(evaluate_recursive(f.child, tr, s) for s in range(t, end + 1))
    if isinstance(f, Until):
        for s in range(t, end + 1):
            if evaluate_recursive(f.right, tr, s):
                if all(evaluate_recursive(f.left, tr, r) for r in range(t, s)):
                    return True
        return False
    if isinstance(f, And):
        return all(evaluate_recursive(c, tr, t) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate_recursive(c, tr, t) for c in f.children)
    if isinstance(f, Implies):
        return (not evaluate_recursive(f.left, tr, t)) or evaluate_recursive(f.right, tr, t)
    raise TypeError(f"not a formula: {f!r}")
