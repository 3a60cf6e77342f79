"""Shared brute-force oracles for the test suite.

These deliberately avoid the library's encoders: formula universes are
built by structural recursion and trace universes by cartesian
product, so enumeration-based modules are checked against something
independent of their own machinery.
"""

import itertools

from modedisc.alphabet import ModeAssignment, PropositionAlphabet, Trace
from modedisc.formulas import (
    BINARY_OPS,
    UNARY_OPS,
    formula_size,
    make_binary,
    make_unary,
)


def all_traces(alphabet: PropositionAlphabet, max_len: int, min_len: int = 1):
    """Every trace over the alphabet with length in [min_len, max_len]."""
    symbols = list(alphabet.assignments())
    out = []
    for n in range(min_len, max_len + 1):
        for combo in itertools.product(symbols, repeat=n):
            out.append(Trace(tuple(combo)))
    return out


def all_formulas_up_to(alphabet, max_size, atom_names=None, unary=UNARY_OPS, binary=BINARY_OPS):
    """Every distinct formula whose shared-DAG size is <= max_size.

    Built by size induction: a unary operator over a size k-1 formula
    always has size k, while binary candidates are filtered by the real
    size function (sharing between the two children shrinks the DAG).
    """
    if atom_names is None:
        atoms = list(alphabet.atoms())
    else:
        atoms = [alphabet.atom(n) for n in atom_names]
    by_size = {1: set(atoms)}
    for k in range(2, max_size + 1):
        grown = set()
        for f in by_size[k - 1]:
            for op in unary:
                grown.add(make_unary(op, f))
        pool = [f for j in range(1, k) for f in by_size[j]]
        for a in pool:
            for b in pool:
                for op in binary:
                    g = make_binary(op, a, b)
                    if formula_size(g) == k:
                        grown.add(g)
        by_size[k] = grown
    result = []
    for k in range(1, max_size + 1):
        result.extend(by_size[k])
    return result


def mode_trace(alphabet: PropositionAlphabet, *modes: int, start_time: int = 0) -> Trace:
    """Trace from 1-based mode indices, no state-constraint bits set."""
    bits = (0,) * alphabet.state_constraint_count
    return Trace(
        tuple(ModeAssignment.from_index(m, alphabet.mode_count, bits) for m in modes),
        start_time=start_time,
    )
