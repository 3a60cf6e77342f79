"""Concrete formula syntax: parser and printer.

Grammar (lowest precedence first):

    implies := or ('->' implies)?
    or      := and ('|' and)*
    and     := until ('&' until)*
    until   := unary ('U' until)?
    unary   := ('!' | 'X' | 'G' | 'F') unary | primary
    primary := 'true' | IDENT | '(' implies ')'

Atoms are identifiers [A-Za-z_][A-Za-z0-9_]*; the words X, G, F, U and
true are reserved.  `U` is right-associative; unparenthesized `&`/`|`
chains parse to one n-ary node.  parse/print round-trip exactly.
"""

from __future__ import annotations

import re

from .alphabet import PropositionAlphabet
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
    make_unary,
)


class FormulaSyntaxError(ValueError):
    """Raised for malformed formula text; carries a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<sym>[!&|()]))"
)

_RESERVED = {"X", "G", "F", "U", "true"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", at)
        if m.group("ident"):
            word = m.group("ident")
            kind = word if word in _RESERVED else "IDENT"
            tokens.append((kind, word, m.start("ident")))
        elif m.group("arrow"):
            tokens.append(("->", "->", m.start("arrow")))
        else:
            sym = m.group("sym")
            tokens.append((sym, sym, m.start("sym")))
        pos = m.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], alphabet: PropositionAlphabet):
        self.tokens = tokens
        self.alphabet = alphabet
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.take()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek()[0] == "->":
            self.take()
            right = self.parse_implies()
            return Implies(left, right)
        return left

    def parse_or(self) -> Formula:
        parts = [self.parse_and()]
        while self.peek()[0] == "|":
            self.take()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Formula:
        parts = [self.parse_until()]
        while self.peek()[0] == "&":
            self.take()
            parts.append(self.parse_until())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek()[0] == "U":
            self.take()
            right = self.parse_until()
            return Until(left, right)
        return left

    def parse_unary(self) -> Formula:
        kind, _, _ = self.peek()
        if kind in ("!", "X", "G", "F"):
            self.take()
            return make_unary(kind, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        kind, word, pos = self.take()
        if kind == "true":
            return TrueFormula()
        if kind == "IDENT":
            atom = self.alphabet.try_atom(word)
            if atom is None:
                raise FormulaSyntaxError(f"unknown proposition {word!r}", pos)
            return atom
        if kind == "(":
            inner = self.parse_implies()
            self.expect(")")
            return inner
        raise FormulaSyntaxError(f"expected a formula, found {word or 'end of input'!r}", pos)


def parse_formula(text: str, alphabet: PropositionAlphabet) -> Formula:
    """Parse concrete syntax against an alphabet's proposition names."""
    parser = _Parser(_tokenize(text), alphabet)
    f = parser.parse_implies()
    kind, word, pos = parser.peek()
    if kind != "EOF":
        raise FormulaSyntaxError(f"trailing input {word!r}", pos)
    return f


# Precedence levels used by the printer; parenthesize a child whose level
# is below what its context requires.
_LEVEL = {"->": 1, "|": 2, "&": 3, "U": 4, "X": 5, "G": 5, "F": 5, "!": 6}
_ATOM_LEVEL = 7


def _level(f: Formula) -> int:
    if isinstance(f, (Atom, TrueFormula)):
        return _ATOM_LEVEL
    return _LEVEL[f.op]


def _fmt(f: Formula, need: int) -> str:
    lvl = _level(f)
    if isinstance(f, TrueFormula):
        s = "true"
    elif isinstance(f, Atom):
        s = f.name
    elif isinstance(f, Not):
        s = "!" + _fmt(f.child, _LEVEL["!"] - 1)
    elif isinstance(f, (Next, Globally, Finally)):
        s = f.op + " " + _fmt(f.child, _LEVEL["X"])
    elif isinstance(f, Until):
        # right-associative: the left side must bind strictly tighter
        s = _fmt(f.left, _LEVEL["U"] + 1) + " U " + _fmt(f.right, _LEVEL["U"])
    elif isinstance(f, Implies):
        s = _fmt(f.left, _LEVEL["->"] + 1) + " -> " + _fmt(f.right, _LEVEL["->"])
    elif isinstance(f, (And, Or)):
        sep = f" {f.op} "
        s = sep.join(_fmt(c, _LEVEL[f.op] + 1) for c in f.children)
    else:
        raise TypeError(f"not a formula: {f!r}")
    if lvl < need:
        return "(" + s + ")"
    return s


def print_formula(f: Formula) -> str:
    """Render `f` so that parse_formula(print_formula(f)) == f."""
    return _fmt(f, 0)
