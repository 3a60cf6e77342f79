"""Model discrimination for switched systems with temporal logic tasks.

The package learns interval over-approximations of unknown mode dynamics
from data, infers finite-trace temporal formulas consistent with observed
mode traces, and decides which candidate (model, task) pairs can be told
apart, or ruled out, from a measured input/output window.
"""

from .alphabet import (
    AlphabetError,
    ModeAssignment,
    PropositionAlphabet,
    Trace,
    Trajectory,
)
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
    formula_size,
    to_syntax_dag,
)
from .parsing import FormulaSyntaxError, parse_formula, print_formula
from .semantics import evaluate, is_consistent

__version__ = "0.1.0"

__all__ = [
    "AlphabetError",
    "And",
    "Atom",
    "Finally",
    "Formula",
    "FormulaSyntaxError",
    "Globally",
    "Implies",
    "ModeAssignment",
    "Next",
    "Not",
    "Or",
    "PropositionAlphabet",
    "SyntaxDag",
    "Trace",
    "Trajectory",
    "TrueFormula",
    "Until",
    "evaluate",
    "formula_size",
    "is_consistent",
    "parse_formula",
    "print_formula",
    "to_syntax_dag",
]
