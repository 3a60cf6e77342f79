"""Structural prior information and the context-free grammars it induces.

A prior is a small DAG skeleton whose nodes carry either a fixed label or
a set of allowed labels.  A formula is consistent with the prior when its
syntax DAG embeds into the skeleton, rooted at the skeleton root or at
any inner node (a partial structure).

Grouping skeleton nodes by depth gives a layered context-free grammar
with one non-terminal per layer.  The grammar's language contains every
prior-consistent formula, and typically more, because the grammar forgets
which node of a layer contributed each production.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import PropositionAlphabet
from .formulas import (
    Atom,
    Formula,
    TrueFormula,
    BINARY_OPS,
    UNARY_OPS,
    binarized,
    make_binary,
    make_unary,
)

_OPERATORS = set(UNARY_OPS) | set(BINARY_OPS)


class GrammarError(ValueError):
    pass


def _label_arity(label: str) -> int:
    if label in UNARY_OPS:
        return 1
    if label in BINARY_OPS:
        return 2
    return 0


@dataclass(frozen=True)
class PriorNode:
    """One skeleton node: allowed labels plus ordered child references."""

    ident: int
    allowed: tuple[str, ...]
    children: tuple[int, ...] = ()

    @property
    def fixed(self) -> bool:
        return len(self.allowed) == 1


@dataclass(frozen=True)
class PriorInfo:
    """A labeled DAG skeleton over formula labels.

    Node identifiers are arbitrary positive integers; `root` must reach
    every node.  A node may allow labels of mixed arity as long as it has
    enough children for each of them.
    """

    nodes: tuple[PriorNode, ...]
    root: int

    def __post_init__(self) -> None:
        by_id = {n.ident: n for n in self.nodes}
        if len(by_id) != len(self.nodes):
            raise GrammarError("duplicate skeleton node identifiers")
        if self.root not in by_id:
            raise GrammarError(f"root {self.root} is not a skeleton node")
        for n in self.nodes:
            if not n.allowed:
                raise GrammarError(f"node {n.ident} has an empty allowed set")
            if len(n.children) > 2:
                raise GrammarError(f"node {n.ident} has more than two children")
            for c in n.children:
                if c not in by_id:
                    raise GrammarError(f"node {n.ident} references unknown child {c}")
            for lab in n.allowed:
                if _label_arity(lab) > len(n.children):
                    raise GrammarError(
                        f"label {lab!r} of node {n.ident} needs more children"
                    )
        # reachability and acyclicity from the root
        seen: set[int] = set()
        stack: list[int] = []

        def visit(i: int) -> None:
            if i in stack:
                raise GrammarError("skeleton has a cycle")
            if i in seen:
                return
            stack.append(i)
            for c in by_id[i].children:
                visit(c)
            stack.pop()
            seen.add(i)

        visit(self.root)
        if seen != set(by_id):
            raise GrammarError("skeleton nodes unreachable from the root")

    @property
    def size(self) -> int:
        return len(self.nodes)

    def node(self, ident: int) -> PriorNode:
        for n in self.nodes:
            if n.ident == ident:
                return n
        raise KeyError(ident)


def _formula_label(f: Formula) -> str:
    if isinstance(f, TrueFormula):
        return "true"
    if isinstance(f, Atom):
        return f.name
    return f.op


def consistent_with_prior(f: Formula, pi: PriorInfo) -> bool:
    """Does `f` embed into the skeleton at its root or at any inner node?"""
    g = binarized(f)
    by_id = {n.ident: n for n in pi.nodes}
    memo: dict[tuple[Formula, int], bool] = {}

    def embed(sub: Formula, ident: int) -> bool:
        key = (sub, ident)
        if key in memo:
            return memo[key]
        node = by_id[ident]
        ok = False
        if _formula_label(sub) in node.allowed:
            kids = sub.children
            if len(kids) == 0:
                ok = True
            elif len(kids) == 1:
                ok = any(embed(kids[0], c) for c in node.children)
            else:
                ch = node.children
                ok = any(
                    embed(kids[0], ch[i]) and embed(kids[1], ch[j])
                    for i in range(len(ch))
                    for j in range(len(ch))
                    if i != j
                )
        memo[key] = ok
        return ok

    return any(embed(g, n.ident) for n in pi.nodes)


@dataclass(frozen=True)
class Production:
    """head -> body, where body is one of [terminal], [op, nt], [nt, op, nt]."""

    head: str
    body: tuple[str, ...]


@dataclass(frozen=True)
class ContextFreeGrammar:
    nonterminals: tuple[str, ...]
    terminals: tuple[str, ...]
    productions: tuple[Production, ...]
    start: str

    def __post_init__(self) -> None:
        if self.start not in self.nonterminals:
            raise GrammarError("start symbol is not a non-terminal")
        for p in self.productions:
            if p.head not in self.nonterminals:
                raise GrammarError(f"production head {p.head!r} is not a non-terminal")
            for s in p.body:
                if s not in self.nonterminals and s not in self.terminals:
                    raise GrammarError(f"unknown symbol {s!r} in production body")

    def bodies(self, nt: str) -> list[tuple[str, ...]]:
        return [p.body for p in self.productions if p.head == nt]

    def __str__(self) -> str:
        lines = []
        for nt in self.nonterminals:
            bodies = self.bodies(nt)
            if bodies:
                lines.append(f"{nt} -> " + " | ".join(" ".join(b) for b in bodies))
        return "\n".join(lines)


def cfg_from_prior(pi: PriorInfo) -> ContextFreeGrammar:
    """One non-terminal per skeleton layer; bodies pooled over the layer.

    The skeleton must be layered: every path from the root reaches a node
    at one single depth.  The first group of productions expands the root
    layer, the last the deepest (outermost child) layer.
    """
    by_id = {n.ident: n for n in pi.nodes}
    depth: dict[int, int] = {pi.root: 0}
    order = [pi.root]
    for ident in order:
        for c in by_id[ident].children:
            d = depth[ident] + 1
            if c in depth:
                if depth[c] != d:
                    raise GrammarError(
                        f"skeleton is not layered: node {c} at depths {depth[c]} and {d}"
                    )
            else:
                depth[c] = d
                order.append(c)
    n_layers = 1 + max(depth.values())
    nts = tuple(f"lam{i}" for i in range(1, n_layers + 1))
    productions: list[Production] = []
    terminals: list[str] = []
    for layer in range(n_layers):
        head = nts[layer]
        seen_bodies: set[tuple[str, ...]] = set()
        for n in pi.nodes:
            if depth[n.ident] != layer:
                continue
            for lab in n.allowed:
                arity = _label_arity(lab)
                if arity == 0:
                    body: tuple[str, ...] = (lab,)
                elif arity == 1:
                    body = (lab, nts[layer + 1])
                else:
                    body = (nts[layer + 1], lab, nts[layer + 1])
                if body not in seen_bodies:
                    seen_bodies.add(body)
                    productions.append(Production(head, body))
                if lab not in terminals:
                    terminals.append(lab)
    return ContextFreeGrammar(nts, tuple(terminals), tuple(productions), nts[0])


def generates(g: ContextFreeGrammar, f: Formula) -> bool:
    """Is `f` derivable from the start symbol or any other non-terminal?

    Decided structurally layer by layer; only layered formula grammars of
    the shape produced by cfg_from_prior are supported.
    """
    target = binarized(f)
    memo: dict[tuple[str, Formula], bool] = {}
    on_stack: set[tuple[str, Formula]] = set()

    def derive(nt: str, sub: Formula) -> bool:
        key = (nt, sub)
        if key in memo:
            return memo[key]
        if key in on_stack:
            raise GrammarError("grammar is not layered; membership undecidable here")
        on_stack.add(key)
        ok = False
        lab = _formula_label(sub)
        for body in g.bodies(nt):
            if len(body) == 1:
                if body[0] == lab and not sub.children:
                    ok = True
            elif len(body) == 2:
                op, child_nt = body
                if op == lab and len(sub.children) == 1 and derive(child_nt, sub.children[0]):
                    ok = True
            else:
                left_nt, op, right_nt = body
                if (
                    op == lab
                    and len(sub.children) == 2
                    and derive(left_nt, sub.children[0])
                    and derive(right_nt, sub.children[1])
                ):
                    ok = True
            if ok:
                break
        on_stack.discard(key)
        memo[key] = ok
        return ok

    return any(derive(nt, target) for nt in g.nonterminals)


def enumerate_language(g: ContextFreeGrammar, alphabet: PropositionAlphabet,
                       max_size: int, limit: int = 200000) -> list[Formula]:
    """All distinct formulas derivable from any non-terminal, size-capped.

    Layered grammars have a finite language, enumerated here bottom-up
    (deepest layer first).  `limit` guards against degenerate blowups.
    """
    from .formulas import formula_size

    def terminal_formula(lab: str) -> Formula:
        if lab == "true":
            return TrueFormula()
        a = alphabet.try_atom(lab)
        if a is None:
            raise GrammarError(f"terminal {lab!r} is not a proposition of the alphabet")
        return a

    lang: dict[str, list[Formula]] = {}
    for nt in reversed(g.nonterminals):
        out: dict[Formula, None] = {}
        for body in g.bodies(nt):
            if len(body) == 1:
                out.setdefault(terminal_formula(body[0]))
            elif len(body) == 2:
                op, child_nt = body
                for c in lang.get(child_nt, []):
                    out.setdefault(make_unary(op, c))
            else:
                left_nt, op, right_nt = body
                for a in lang.get(left_nt, []):
                    for b in lang.get(right_nt, []):
                        out.setdefault(make_binary(op, a, b))
            if len(out) > limit:
                raise GrammarError(f"grammar language exceeds {limit} formulas")
        lang[nt] = list(out)
    merged: dict[Formula, None] = {}
    for nt in g.nonterminals:
        for f in lang[nt]:
            merged.setdefault(f)
    return [f for f in merged if formula_size(f) <= max_size]


def read_prior(path, alphabet: PropositionAlphabet) -> PriorInfo:
    """Parse a prior-info file.

    Node lines are `id: fixed <label>` or `id: oneof <label,...>`, followed
    by one `edges:` line of comma-separated `parent->child` pairs (listing
    order fixes child order).  `#` starts a comment.  The root is the node
    no edge points to.
    """
    with open(path) as fh:
        raw_lines = fh.read().splitlines()
    allowed_by_id: dict[int, tuple[str, ...]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("edges:"):
            body = line.split(":", 1)[1].strip()
            if body:
                for part in body.split(","):
                    part = part.strip()
                    if "->" not in part:
                        raise GrammarError(f"line {lineno}: bad edge {part!r}")
                    a, b = part.split("->", 1)
                    try:
                        edges.append((int(a), int(b)))
                    except ValueError:
                        raise GrammarError(f"line {lineno}: bad edge {part!r}") from None
            continue
        if ":" not in line:
            raise GrammarError(f"line {lineno}: expected 'id: fixed/oneof ...'")
        id_part, rest = line.split(":", 1)
        try:
            ident = int(id_part)
        except ValueError:
            raise GrammarError(f"line {lineno}: bad node id {id_part!r}") from None
        rest = rest.strip()
        if rest.startswith("fixed"):
            labels = [rest[len("fixed"):].strip()]
        elif rest.startswith("oneof"):
            labels = [s.strip() for s in rest[len("oneof"):].split(",")]
        else:
            raise GrammarError(f"line {lineno}: expected fixed/oneof, got {rest!r}")
        if ident in allowed_by_id:
            raise GrammarError(f"line {lineno}: duplicate node {ident}")
        for lab in labels:
            if not lab:
                raise GrammarError(f"line {lineno}: empty label")
            if lab not in _OPERATORS and lab != "true" and alphabet.try_atom(lab) is None:
                raise GrammarError(f"line {lineno}: unknown label {lab!r}")
        allowed_by_id[ident] = tuple(labels)
    children: dict[int, list[int]] = {i: [] for i in allowed_by_id}
    has_parent: set[int] = set()
    for a, b in edges:
        if a not in allowed_by_id or b not in allowed_by_id:
            raise GrammarError(f"edge {a}->{b} references an undeclared node")
        children[a].append(b)
        has_parent.add(b)
    roots = [i for i in allowed_by_id if i not in has_parent]
    if len(roots) != 1:
        raise GrammarError(f"expected exactly one root node, found {sorted(roots)}")
    nodes = tuple(
        PriorNode(i, allowed_by_id[i], tuple(children[i]))
        for i in sorted(allowed_by_id)
    )
    return PriorInfo(nodes, roots[0])


def write_prior(path, pi: PriorInfo) -> None:
    lines = []
    for n in sorted(pi.nodes, key=lambda n: n.ident):
        if n.fixed:
            lines.append(f"{n.ident}: fixed {n.allowed[0]}")
        else:
            lines.append(f"{n.ident}: oneof {','.join(n.allowed)}")
    edge_parts = [
        f"{n.ident}->{c}" for n in sorted(pi.nodes, key=lambda n: n.ident) for c in n.children
    ]
    lines.append("edges: " + ", ".join(edge_parts))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
