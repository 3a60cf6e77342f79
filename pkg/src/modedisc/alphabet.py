"""Proposition alphabets, per-step assignments, traces and trajectories.

A system with M operating modes and J state-constraint indicators induces
M mode propositions (exactly one true per step) and J free indicator
propositions.  A Trace is the purely symbolic part of an execution; a
Trajectory additionally carries the numeric inputs and outputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .formulas import Atom

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class PropositionAlphabet:
    """The proposition set of one switched system.

    Mode propositions are named "m1".."mM" by default and state-constraint
    propositions "s1".."sJ"; `names` may override the visible identifier of
    any proposition (keys are the default ids).  Identifiers must be valid
    formula atoms and unique; "true" is reserved for the constant.
    """

    mode_count: int
    state_constraint_count: int = 0
    names: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode_count < 1:
            raise AlphabetError("mode_count must be >= 1")
        if self.state_constraint_count < 0:
            raise AlphabetError("state_constraint_count must be >= 0")
        defaults = [f"m{i}" for i in range(1, self.mode_count + 1)] + [
            f"s{j}" for j in range(1, self.state_constraint_count + 1)
        ]
        for key in self.names:
            if key not in defaults:
                raise AlphabetError(f"names key {key!r} is not a proposition id")
        visible = [self.names.get(d, d) for d in defaults]
        for name in visible:
            if not _IDENT_RE.match(name) or name == "true":
                raise AlphabetError(f"bad proposition name {name!r}")
        if len(set(visible)) != len(visible):
            raise AlphabetError("proposition names must be unique")
        object.__setattr__(self, "names", dict(self.names))

    def __hash__(self) -> int:
        return hash((self.mode_count, self.state_constraint_count,
                     tuple(sorted(self.names.items()))))

    def mode_atom(self, index: int) -> Atom:
        if not 1 <= index <= self.mode_count:
            raise AlphabetError(f"mode index {index} out of range")
        default = f"m{index}"
        return Atom(self.names.get(default, default), "m", index)

    def state_atom(self, index: int) -> Atom:
        if not 1 <= index <= self.state_constraint_count:
            raise AlphabetError(f"state-constraint index {index} out of range")
        default = f"s{index}"
        return Atom(self.names.get(default, default), "s", index)

    def atoms(self) -> list[Atom]:
        return [self.mode_atom(i) for i in range(1, self.mode_count + 1)] + [
            self.state_atom(j) for j in range(1, self.state_constraint_count + 1)
        ]

    def atom(self, name: str) -> Atom:
        """Resolve a visible identifier to its Atom."""
        for a in self.atoms():
            if a.name == name:
                return a
        raise AlphabetError(f"unknown proposition {name!r}")

    def try_atom(self, name: str) -> Atom | None:
        try:
            return self.atom(name)
        except AlphabetError:
            return None

    def assignments(self) -> list["ModeAssignment"]:
        """Every possible per-step assignment, mode-major order."""
        out = []
        for m in range(1, self.mode_count + 1):
            for bits in range(1 << self.state_constraint_count):
                sbits = tuple(
                    (bits >> j) & 1 for j in range(self.state_constraint_count)
                )
                out.append(ModeAssignment.from_index(m, self.mode_count, sbits))
        return out


@dataclass(frozen=True)
class ModeAssignment:
    """One step's proposition values: a one-hot mode vector plus free bits."""

    mode: tuple[int, ...]
    state_bits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", tuple(int(v) for v in self.mode))
        object.__setattr__(self, "state_bits", tuple(int(v) for v in self.state_bits))
        if any(v not in (0, 1) for v in self.mode + self.state_bits):
            raise AlphabetError("assignment entries must be 0/1")
        if sum(self.mode) != 1:
            raise AlphabetError(f"mode vector must be one-hot, got {self.mode}")

    @classmethod
    def from_index(cls, mode_index: int, mode_count: int,
                   state_bits: tuple[int, ...] = ()) -> "ModeAssignment":
        if not 1 <= mode_index <= mode_count:
            raise AlphabetError(f"mode index {mode_index} out of range")
        onehot = tuple(1 if i == mode_index else 0 for i in range(1, mode_count + 1))
        return cls(onehot, tuple(state_bits))

    @property
    def mode_index(self) -> int:
        """1-based index of the active mode."""
        return self.mode.index(1) + 1

    def satisfies(self, atom: Atom) -> bool:
        if atom.kind == "m":
            return self.mode[atom.index - 1] == 1
        return self.state_bits[atom.index - 1] == 1


@dataclass(frozen=True)
class Trace:
    """A finite mode/indicator word with an absolute start time."""

    symbols: tuple[ModeAssignment, ...]
    start_time: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise AlphabetError("a trace needs at least one symbol")
        first = self.symbols[0]
        for s in self.symbols:
            if len(s.mode) != len(first.mode) or len(s.state_bits) != len(first.state_bits):
                raise AlphabetError("trace symbols must share one alphabet shape")

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def end_time(self) -> int:
        """Absolute time of the last symbol."""
        return self.start_time + len(self.symbols) - 1

    def at(self, t: int) -> ModeAssignment:
        """Symbol at absolute time t."""
        if not self.start_time <= t <= self.end_time:
            raise IndexError(f"time {t} outside [{self.start_time}, {self.end_time}]")
        return self.symbols[t - self.start_time]


class Trajectory:
    """A finite run (u_t, sigma_t, y_t), t = start_time .. start_time+T-1.

    `inputs` has shape (T, n_u) and `outputs` shape (T, n_y); n_u may be 0
    for autonomous systems.
    """

    def __init__(self, inputs: np.ndarray, trace: Trace, outputs: np.ndarray):
        inputs = np.asarray(inputs, dtype=float)
        outputs = np.asarray(outputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs.reshape(len(inputs), -1) if inputs.size else inputs.reshape(0, 0)
        if outputs.ndim == 1:
            outputs = outputs.reshape(len(outputs), -1)
        T = len(trace)
        if inputs.shape[0] not in (T,):
            raise AlphabetError(f"inputs have {inputs.shape[0]} steps, trace has {T}")
        if outputs.shape[0] != T:
            raise AlphabetError(f"outputs have {outputs.shape[0]} steps, trace has {T}")
        self.inputs = inputs
        self.trace = trace
        self.outputs = outputs

    def __len__(self) -> int:
        return len(self.trace)

    @property
    def start_time(self) -> int:
        return self.trace.start_time

    @property
    def n_u(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_y(self) -> int:
        return self.outputs.shape[1]

    def window(self, t0: int, length: int) -> "Trajectory":
        """The length-`length` sub-run starting at absolute time t0."""
        i = t0 - self.start_time
        if i < 0 or i + length > len(self):
            raise IndexError("window outside trajectory")
        sub = Trace(self.trace.symbols[i:i + length], start_time=t0)
        return Trajectory(self.inputs[i:i + length], sub, self.outputs[i:i + length])
