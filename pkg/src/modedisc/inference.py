"""Enumerating every small LTL formula consistent with a set of traces.

A formula of size exactly k is encoded as k DAG slots.  Each slot
carries exactly one label (an operator, an atomic proposition, or
"true"), child selectors pointing at strictly smaller slots, and one
valuation variable per trace position.  A propositional model of the
encoding therefore IS a formula together with the proof that every
trace satisfies it at its first position, and enumeration is SAT
solving plus model blocking over the structural variables.

Structural-distinctness constraints between slot pairs, together with
"every non-root slot has a parent", pin the size to exactly k in the
shared-DAG sense: the slots of any model decode to k pairwise distinct
subformulas, all reachable from the root.  The union over k = 1..max
then yields every consistent formula up to the requested size, which
is the completeness direction callers rely on.

A layered grammar (from `cfg_from_prior`) can be injected as extra
clauses; an optional fast path enumerates the grammar's language
directly and keeps the consistent members, which is equivalent and far
cheaper whenever the language is small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import PropositionAlphabet, Trace
from .formulas import (
    BINARY_OPS,
    UNARY_OPS,
    Formula,
    formula_size,
    make_binary,
    make_unary,
    Atom,
    Or,
    TrueFormula,
    to_syntax_dag,
)
from .grammar import (
    ContextFreeGrammar,
    GrammarError,
    PriorInfo,
    cfg_from_prior,
    consistent_with_prior,
    enumerate_language,
)
from .parsing import print_formula
from .sat import CdclSolver, CnfProblem, sat_solve  # noqa: F401  (sat_solve re-exported)
from .semantics import is_consistent


class EncodingError(Exception):
    pass


def default_labels(alphabet: PropositionAlphabet, allow_true: bool = False) -> tuple[str, ...]:
    """All operators plus the alphabet's propositions.

    "true" is left out unless asked for: it is consistent with any
    trace set and would only pad the result with tautological noise.
    """
    labels = list(UNARY_OPS) + list(BINARY_OPS) + [a.name for a in alphabet.atoms()]
    if allow_true:
        labels.append("true")
    return tuple(labels)


@dataclass
class NodeEncoding:
    """Variable layout of one size-k consistency encoding."""

    size: int
    alphabet: PropositionAlphabet
    labels: tuple[str, ...]
    traces: tuple[Trace, ...]
    label_var: dict[tuple[int, str], int] = field(default_factory=dict)
    left_var: dict[tuple[int, int], int] = field(default_factory=dict)
    right_var: dict[tuple[int, int], int] = field(default_factory=dict)
    val_var: dict[tuple[int, int, int], int] = field(default_factory=dict)
    layer_var: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def structural_vars(self) -> list[int]:
        ordered = [self.label_var[i, lab] for i in range(1, self.size + 1) for lab in self.labels]
        for i in range(2, self.size + 1):
            for j in range(1, i):
                ordered.append(self.left_var[i, j])
                ordered.append(self.right_var[i, j])
        return ordered


def _split_labels(labels, alphabet):
    leaf, unary, binary = [], [], []
    for lab in labels:
        if lab in UNARY_OPS:
            unary.append(lab)
        elif lab in BINARY_OPS:
            binary.append(lab)
        elif lab == "true" or alphabet.try_atom(lab) is not None:
            leaf.append(lab)
        else:
            raise EncodingError(f"label {lab!r} is neither an operator nor a proposition")
    if not leaf:
        raise EncodingError("label set has no leaf labels; no formula can be built")
    return leaf, unary, binary


def _grammar_layers(grammar: ContextFreeGrammar) -> list[set[str]]:
    """Per-layer head labels of a layered grammar.

    Layer l's bodies may only reference the next non-terminal in the
    grammar's ordering; cfg_from_prior produces exactly that shape.
    """
    order = list(grammar.nonterminals)
    index = {nt: i for i, nt in enumerate(order)}
    heads: list[set[str]] = [set() for _ in order]
    for p in grammar.productions:
        li = index[p.head]
        nts = [s for s in p.body if s in index]
        labs = [s for s in p.body if s not in index]
        if len(labs) != 1:
            raise GrammarError(f"production {p.head} -> {' '.join(p.body)} is not prior-shaped")
        if any(index[nt] != li + 1 for nt in nts):
            raise GrammarError("grammar is not layered; cannot inject it into the encoding")
        heads[li].add(labs[0])
    return heads


def encode_consistency(
    size: int,
    traces,
    alphabet: PropositionAlphabet,
    labels: tuple[str, ...] | None = None,
    grammar: ContextFreeGrammar | None = None,
) -> tuple[CnfProblem, NodeEncoding]:
    """CNF satisfiable iff a size-`size` formula satisfies every trace at its start."""
    if size < 1:
        raise EncodingError("size must be at least 1")
    trace_list = _dedupe_traces(traces)
    if not trace_list:
        raise EncodingError("at least one trace is required")
    labels = tuple(labels) if labels is not None else default_labels(alphabet)
    leaf, unary, binary = _split_labels(labels, alphabet)
    k = size
    p = CnfProblem()
    enc = NodeEncoding(size=k, alphabet=alphabet, labels=labels, traces=tuple(trace_list))

    for i in range(1, k + 1):
        for lab in labels:
            enc.label_var[i, lab] = p.new_var(f"x{i}_{lab}")
        for j in range(1, i):
            enc.left_var[i, j] = p.new_var(f"l{i}_{j}")
            enc.right_var[i, j] = p.new_var(f"r{i}_{j}")
    for i in range(1, k + 1):
        for ti, tr in enumerate(trace_list):
            for t in range(len(tr.symbols)):
                enc.val_var[i, ti, t] = p.new_var(f"y{i}_{ti}_{t}")
    # child-value aliases: one pair per slot and trace position
    lval: dict[tuple[int, int, int], int] = {}
    rval: dict[tuple[int, int, int], int] = {}
    for i in range(2, k + 1):
        for ti, tr in enumerate(trace_list):
            for t in range(len(tr.symbols)):
                lval[i, ti, t] = p.new_var()
                if binary:
                    rval[i, ti, t] = p.new_var()

    x, lv, rv, y = enc.label_var, enc.left_var, enc.right_var, enc.val_var
    add = p.add_clause

    for i in range(1, k + 1):
        # exactly one label
        add([x[i, lab] for lab in labels])
        for a in range(len(labels)):
            for b in range(a + 1, len(labels)):
                add([-x[i, labels[a]], -x[i, labels[b]]])
        child_lits = [lv[i, j] for j in range(1, i)]
        rchild_lits = [rv[i, j] for j in range(1, i)]
        # at most one child selector per side
        for lits in (child_lits, rchild_lits):
            for a in range(len(lits)):
                for b in range(a + 1, len(lits)):
                    add([-lits[a], -lits[b]])
        for lab in leaf:
            for lit in child_lits + rchild_lits:
                add([-x[i, lab], -lit])
        for lab in unary:
            if child_lits:
                add([-x[i, lab]] + child_lits)
            else:
                add([-x[i, lab]])  # slot 1 cannot be unary
            for lit in rchild_lits:
                add([-x[i, lab], -lit])
        for lab in binary:
            if child_lits:
                add([-x[i, lab]] + child_lits)
                add([-x[i, lab]] + rchild_lits)
            else:
                add([-x[i, lab]])

    # every non-root slot is someone's child (hence reachable from the root)
    for j in range(1, k):
        add(
            [lv[i, j] for i in range(j + 1, k + 1)]
            + [rv[i, j] for i in range(j + 1, k + 1)]
        )

    # no two slots may encode the same subformula
    for i in range(1, k + 1):
        for i2 in range(i + 1, k + 1):
            for lab in leaf:
                add([-x[i, lab], -x[i2, lab]])
            for lab in unary:
                for j in range(1, i):
                    add([-x[i, lab], -x[i2, lab], -lv[i, j], -lv[i2, j]])
            for lab in binary:
                for j in range(1, i):
                    for j2 in range(1, i):
                        add([
                            -x[i, lab], -x[i2, lab],
                            -lv[i, j], -lv[i2, j],
                            -rv[i, j2], -rv[i2, j2],
                        ])

    # tie child-value aliases to the selected child's valuation
    for i in range(2, k + 1):
        for j in range(1, i):
            for ti, tr in enumerate(trace_list):
                for t in range(len(tr.symbols)):
                    add([-lv[i, j], -lval[i, ti, t], y[j, ti, t]])
                    add([-lv[i, j], lval[i, ti, t], -y[j, ti, t]])
                    if binary:
                        add([-rv[i, j], -rval[i, ti, t], y[j, ti, t]])
                        add([-rv[i, j], rval[i, ti, t], -y[j, ti, t]])

    # semantics of each label, guarded by the slot's label selector
    for i in range(1, k + 1):
        for ti, tr in enumerate(trace_list):
            T = len(tr.symbols)
            for t in range(T):
                yt = y[i, ti, t]
                for lab in leaf:
                    g = -x[i, lab]
                    if lab == "true":
                        add([g, yt])
                    else:
                        atom = alphabet.atom(lab)
                        if tr.symbols[t].satisfies(atom):
                            add([g, yt])
                        else:
                            add([g, -yt])
                if i == 1:
                    continue
                a = lval[i, ti, t]
                last = t == T - 1
                nxt = y[i, ti, t + 1] if not last else None
                for lab in unary:
                    g = -x[i, lab]
                    if lab == "!":
                        add([g, -yt, -a])
                        add([g, yt, a])
                    elif lab == "X":
                        if last:
                            add([g, -yt])
                        else:
                            anext = lval[i, ti, t + 1]
                            add([g, -yt, anext])
                            add([g, yt, -anext])
                    elif lab == "F":
                        if last:
                            add([g, -yt, a])
                            add([g, yt, -a])
                        else:
                            add([g, -yt, a, nxt])
                            add([g, yt, -a])
                            add([g, yt, -nxt])
                    elif lab == "G":
                        if last:
                            add([g, -yt, a])
                            add([g, yt, -a])
                        else:
                            add([g, -yt, a])
                            add([g, -yt, nxt])
                            add([g, yt, -a, -nxt])
                for lab in binary:
                    g = -x[i, lab]
                    b = rval[i, ti, t]
                    if lab == "&":
                        add([g, -yt, a])
                        add([g, -yt, b])
                        add([g, yt, -a, -b])
                    elif lab == "|":
                        add([g, -yt, a, b])
                        add([g, yt, -a])
                        add([g, yt, -b])
                    elif lab == "->":
                        add([g, -yt, -a, b])
                        add([g, yt, a])
                        add([g, yt, -b])
                    elif lab == "U":
                        if last:
                            add([g, -yt, b])
                            add([g, yt, -b])
                        else:
                            add([g, yt, -b])
                            add([g, yt, -a, -nxt])
                            add([g, -yt, b, a])
                            add([g, -yt, b, nxt])

    # the root must hold at the start of every trace
    for ti in range(len(trace_list)):
        add([y[k, ti, 0]])

    if grammar is not None:
        heads = _grammar_layers(grammar)
        for i in range(1, k + 1):
            for li in range(len(heads)):
                enc.layer_var[i, li] = p.new_var(f"g{i}_{li}")
        for i in range(1, k + 1):
            for li, head_set in enumerate(heads):
                gv = enc.layer_var[i, li]
                allowed = [x[i, lab] for lab in head_set if lab in labels]
                add([-gv] + allowed)
                if li + 1 < len(heads):
                    for j in range(1, i):
                        add([-gv, -lv[i, j], enc.layer_var[j, li + 1]])
                        add([-gv, -rv[i, j], enc.layer_var[j, li + 1]])
                else:
                    # deepest layer: no children may be selected
                    for j in range(1, i):
                        add([-gv, -lv[i, j]])
                        add([-gv, -rv[i, j]])
        add([enc.layer_var[k, li] for li in range(len(heads))])

    return p, enc


def _dedupe_traces(traces) -> list[Trace]:
    seen = set()
    out = []
    for tr in traces:
        key = tr.symbols
        if key not in seen:
            seen.add(key)
            out.append(tr)
    return out


def decode_model(model: dict[int, bool], enc: NodeEncoding) -> Formula:
    """Read the formula out of a satisfying assignment's structural variables."""
    built: dict[int, Formula] = {}
    for i in range(1, enc.size + 1):
        chosen = [lab for lab in enc.labels if model[enc.label_var[i, lab]]]
        if len(chosen) != 1:
            raise EncodingError(f"slot {i} selects {len(chosen)} labels; encoder bug")
        lab = chosen[0]
        lefts = [j for j in range(1, i) if model[enc.left_var[i, j]]]
        rights = [j for j in range(1, i) if model[enc.right_var[i, j]]]
        if lab in UNARY_OPS:
            if len(lefts) != 1:
                raise EncodingError(f"unary slot {i} has {len(lefts)} children; encoder bug")
            built[i] = make_unary(lab, built[lefts[0]])
        elif lab in BINARY_OPS:
            if len(lefts) != 1 or len(rights) != 1:
                raise EncodingError(f"binary slot {i} is missing a child; encoder bug")
            built[i] = make_binary(lab, built[lefts[0]], built[rights[0]])
        elif lab == "true":
            built[i] = TrueFormula()
        else:
            built[i] = enc.alphabet.atom(lab)
    return built[enc.size]


def blocking_clause(enc: NodeEncoding, target) -> list[int]:
    """Clause falsified exactly by assignments sharing the target's structure.

    `target` is either a model (mapping of variable to Boolean) or a
    Formula whose canonical DAG has exactly `enc.size` nodes; the
    clause ranges over every structural variable, so two models that
    differ only in valuation bookkeeping are blocked together.
    """
    if isinstance(target, dict):
        return [-v if target[v] else v for v in enc.structural_vars]
    dag = to_syntax_dag(target)
    if len(dag.nodes) != enc.size:
        raise EncodingError(
            f"formula has size {len(dag.nodes)}, encoding expects {enc.size}"
        )
    assigned: dict[int, bool] = {v: False for v in enc.structural_vars}
    for node in dag.nodes:
        if (node.ident, node.label) not in enc.label_var:
            raise EncodingError(f"label {node.label!r} is not in the encoding's label set")
        assigned[enc.label_var[node.ident, node.label]] = True
        if node.left is not None:
            assigned[enc.left_var[node.ident, node.left]] = True
        if node.right is not None:
            assigned[enc.right_var[node.ident, node.right]] = True
    return [-v if val else v for v, val in assigned.items()]


def block(problem: CnfProblem, enc: NodeEncoding, target) -> CnfProblem:
    """Add a clause to `problem` ruling out `target`; returns the problem."""
    problem.add_clause(blocking_clause(enc, target))
    return problem


@dataclass
class InferenceResult:
    """Outcome of infer_all: the formula set plus a truncation marker."""

    formulas: tuple[Formula, ...]
    truncated: bool = False

    def __iter__(self):
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: Formula) -> bool:
        return f in self.formulas


def _canonical_order(formulas) -> tuple[Formula, ...]:
    return tuple(sorted(formulas, key=lambda f: (formula_size(f), print_formula(f))))


def infer_all(
    traces,
    max_size: int,
    alphabet: PropositionAlphabet,
    labels: tuple[str, ...] | None = None,
    prior: PriorInfo | None = None,
    allow_true: bool = False,
    conflict_budget: int | None = None,
    language_limit: int = 20000,
) -> InferenceResult:
    """Every formula of size <= max_size consistent with all the traces.

    With a prior, only formulas its grammar generates are produced.
    When the grammar's language up to max_size is small it is
    enumerated directly and filtered; otherwise (or without a prior)
    each size runs SAT enumeration with structural blocking.
    `conflict_budget` caps the per-call solver effort; exceeding it
    returns the formulas found so far with `truncated` set.
    """
    if max_size < 1:
        raise EncodingError("max_size must be at least 1")
    trace_list = _dedupe_traces(traces)
    if not trace_list:
        raise EncodingError("at least one trace is required")
    if labels is None:
        labels = default_labels(alphabet, allow_true=allow_true)
    grammar = cfg_from_prior(prior) if prior is not None else None

    if grammar is not None:
        try:
            language = enumerate_language(grammar, alphabet, max_size, limit=language_limit)
        except GrammarError:
            language = None
        if language is not None:
            allowed = set(labels)
            found = [
                f
                for f in language
                if _labels_of(f) <= allowed and is_consistent(f, trace_list)
            ]
            return InferenceResult(_canonical_order(found))

    found_set: list[Formula] = []
    seen: set[Formula] = set()
    truncated = False
    for k in range(1, max_size + 1):
        problem, enc = encode_consistency(k, trace_list, alphabet, labels, grammar)
        solver = CdclSolver(problem)
        while True:
            res = solver.solve(conflict_budget)
            if res.status == "unknown":
                truncated = True
                break
            if res.status == "unsat":
                break
            f = decode_model(res.model, enc)
            if f not in seen:
                seen.add(f)
                found_set.append(f)
            cl = blocking_clause(enc, res.model)
            solver.add_clause(cl)
            problem.add_clause(cl)
        if truncated:
            break
    return InferenceResult(_canonical_order(found_set), truncated)


def _labels_of(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, TrueFormula):
            out.add("true")
        elif isinstance(g, Atom):
            out.add(g.name)
        else:
            out.add(g.op)
            stack.extend(g.children)
    return out


def filter_by_prior(formulas, prior: PriorInfo):
    """Keep only the formulas whose DAG embeds into the prior's skeleton."""
    return tuple(f for f in formulas if consistent_with_prior(f, prior))


def build_phi_I(formulas) -> Formula:
    """Disjunction of the inferred set in canonical order; singleton unwrapped."""
    ordered = _canonical_order(formulas)
    if not ordered:
        raise ValueError("cannot build a disjunction over an empty formula set")
    if len(ordered) == 1:
        return ordered[0]
    return Or(ordered)
