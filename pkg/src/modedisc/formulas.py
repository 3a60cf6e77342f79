"""Temporal formula syntax trees and their shared-node DAG form.

Formulas are immutable trees built from a true constant, atomic
propositions, boolean connectives and the finite-horizon temporal
operators next/until/finally/globally.  Conjunction and disjunction are
n-ary (at least two children); everything else has fixed arity.

The canonical DAG form merges structurally identical subformulas into a
single node, and the size of a formula is the node count of that DAG.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class Formula:
    """Base class for formula nodes.  Instances are immutable and hashable."""

    __slots__ = ()

    op: str = "?"

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()


@dataclass(frozen=True)
class TrueFormula(Formula):
    """The constant true, written `true` in concrete syntax."""

    op = "true"


@dataclass(frozen=True)
class Atom(Formula):
    """An atomic proposition.

    `kind` is "m" for mode propositions and "s" for state-constraint
    propositions; `index` is 1-based within its kind.  `name` is the
    identifier used in concrete syntax.
    """

    name: str
    kind: str
    index: int

    op = "atom"

    def __post_init__(self) -> None:
        if self.kind not in ("m", "s"):
            raise ValueError(f"atom kind must be 'm' or 's', got {self.kind!r}")
        if self.index < 1:
            raise ValueError(f"atom index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    op = "!"

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class Next(Formula):
    child: Formula

    op = "X"

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class Finally(Formula):
    child: Formula

    op = "F"

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class Globally(Formula):
    child: Formula

    op = "G"

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


def _at_least_two(children: tuple[Formula, ...], what: str) -> None:
    if len(children) < 2:
        raise ValueError(f"{what} needs at least two children, got {len(children)}")
    for c in children:
        if not isinstance(c, Formula):
            raise TypeError(f"{what} child is not a Formula: {c!r}")


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]

    op = "&"

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        _at_least_two(self.parts, "And")

    @property
    def children(self) -> tuple[Formula, ...]:
        return self.parts


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    op = "|"

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        _at_least_two(self.parts, "Or")

    @property
    def children(self) -> tuple[Formula, ...]:
        return self.parts


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    op = "->"

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula

    op = "U"

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


UNARY_OPS = ("!", "X", "F", "G")
BINARY_OPS = ("&", "|", "->", "U")

_UNARY_CLASS = {"!": Not, "X": Next, "F": Finally, "G": Globally}
_BINARY_CLASS = {"&": And, "|": Or, "->": Implies, "U": Until}


def make_unary(op: str, child: Formula) -> Formula:
    return _UNARY_CLASS[op](child)


def make_binary(op: str, left: Formula, right: Formula) -> Formula:
    if op in ("&", "|"):
        return _BINARY_CLASS[op]((left, right))
    return _BINARY_CLASS[op](left, right)


def binarized(f: Formula) -> Formula:
    """Rewrite n-ary conjunctions/disjunctions as left-nested binary nodes."""
    if isinstance(f, (TrueFormula, Atom)):
        return f
    if isinstance(f, (Not, Next, Finally, Globally)):
        return type(f)(binarized(f.child))
    if isinstance(f, (Implies, Until)):
        return type(f)(binarized(f.left), binarized(f.right))
    if isinstance(f, (And, Or)):
        parts = [binarized(c) for c in f.children]
        acc = parts[0]
        for nxt in parts[1:]:
            acc = type(f)((acc, nxt))
        return acc
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class DagNode:
    """One node of a syntax DAG.

    `label` is the operator symbol, the atom's name, or "true".  Child
    identifiers are always strictly smaller than `ident`; unary nodes use
    only `left`.  For atom nodes the original Atom is kept so the DAG can
    be decoded without an alphabet.
    """

    ident: int
    label: str
    left: int | None = None
    right: int | None = None
    atom: Atom | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SyntaxDag:
    """A syntax DAG with maximal structural sharing, rooted at the last node."""

    nodes: tuple[DagNode, ...]
    root: int

    def __post_init__(self) -> None:
        for pos, node in enumerate(self.nodes, start=1):
            if node.ident != pos:
                raise ValueError("DAG node identifiers must be 1..n in order")
            for c in (node.left, node.right):
                if c is not None and not (1 <= c < node.ident):
                    raise ValueError(
                        f"child id {c} of node {node.ident} must be smaller"
                    )
        if self.root != len(self.nodes):
            raise ValueError("root must be the last node")

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, ident: int) -> DagNode:
        return self.nodes[ident - 1]


def to_syntax_dag(f: Formula) -> SyntaxDag:
    """Build the canonical shared-node DAG of `f`.

    Structurally identical subformulas map to one node.  N-ary And/Or are
    binarized first, so their size counts the equivalent binary nesting.
    """
    g = binarized(f)
    memo: dict[tuple, int] = {}
    nodes: list[DagNode] = []

    def visit(sub: Formula) -> int:
        if isinstance(sub, TrueFormula):
            key: tuple = ("true",)
            if key in memo:
                return memo[key]
            nodes.append(DagNode(len(nodes) + 1, "true"))
        elif isinstance(sub, Atom):
            key = ("atom", sub.kind, sub.index, sub.name)
            if key in memo:
                return memo[key]
            nodes.append(DagNode(len(nodes) + 1, sub.name, atom=sub))
        elif isinstance(sub, (Not, Next, Finally, Globally)):
            cid = visit(sub.child)
            key = (sub.op, cid)
            if key in memo:
                return memo[key]
            nodes.append(DagNode(len(nodes) + 1, sub.op, left=cid))
        else:
            lid = visit(sub.children[0])
            rid = visit(sub.children[1])
            key = (sub.op, lid, rid)
            if key in memo:
                return memo[key]
            nodes.append(DagNode(len(nodes) + 1, sub.op, left=lid, right=rid))
        memo[key] = len(nodes)
        return len(nodes)

    root = visit(g)
    return SyntaxDag(tuple(nodes), root)


def decode_syntax_dag(dag: SyntaxDag) -> Formula:
    """Rebuild the formula encoded by `dag` (binary And/Or form)."""
    built: dict[int, Formula] = {}

    def build(ident: int) -> Formula:
        if ident in built:
            return built[ident]
        node = dag.node(ident)
        if node.label == "true":
            out: Formula = TrueFormula()
        elif node.atom is not None:
            out = node.atom
        elif node.label in UNARY_OPS:
            out = make_unary(node.label, build(node.left))
        elif node.label in BINARY_OPS:
            out = make_binary(node.label, build(node.left), build(node.right))
        else:
            raise ValueError(f"node {ident} has no atom and unknown label {node.label!r}")
        built[ident] = out
        return out

    return build(dag.root)


def formula_size(f: Formula) -> int:
    """Number of nodes in the canonical shared-node DAG of `f`."""
    return len(to_syntax_dag(f))


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subformulas of `f`, children before parents."""
    seen: dict[Formula, None] = {}

    def visit(sub: Formula) -> None:
        if sub in seen:
            return
        for c in sub.children:
            visit(c)
        seen[sub] = None

    visit(f)
    return list(seen)


def atoms_of(f: Formula) -> list[Atom]:
    """Distinct atoms of `f` in first-occurrence order."""
    return [sub for sub in subformulas(f) if isinstance(sub, Atom)]
