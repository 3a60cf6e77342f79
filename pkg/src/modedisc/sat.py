"""A conflict-driven clause-learning SAT solver with DIMACS interchange.

The solver is self-contained: two-literal watches, 1-UIP conflict
analysis, VSIDS-style activities with phase saving, Luby restarts and
periodic deletion of unhelpful learned clauses.  Clauses may be added
between solve() calls (incremental in the clause-adding direction
only), which is what candidate enumeration by model blocking needs.

Literals use DIMACS conventions at the API boundary: variables are
positive integers, a negative integer is a negated variable.
Internally literal 2*v encodes variable v+1 positive and 2*v+1 its
negation.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

_UNASSIGNED, _TRUE, _FALSE = 0, 1, 2


class SatError(Exception):
    pass


@dataclass
class SatResult:
    status: str  # "sat" | "unsat" | "unknown"
    model: dict[int, bool] | None = None
    conflicts: int = 0
    decisions: int = 0

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"


@dataclass
class CnfProblem:
    """A CNF formula under construction; variables are created on demand."""

    num_vars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    names: dict[int, str] = field(default_factory=dict)

    def new_var(self, name: str | None = None) -> int:
        self.num_vars += 1
        if name is not None:
            self.names[self.num_vars] = name
        return self.num_vars

    def add_clause(self, lits) -> None:
        lits = tuple(int(l) for l in lits)
        if not lits:
            raise SatError("refusing an empty clause; the formula would be trivially unsat")
        for l in lits:
            if l == 0 or abs(l) > self.num_vars:
                raise SatError(f"literal {l} out of range (have {self.num_vars} vars)")
        self.clauses.append(lits)

    def var_named(self, name: str) -> int:
        for v, n in self.names.items():
            if n == name:
                return v
        raise KeyError(name)


class CdclSolver:
    """Incremental CDCL search over a growing permanent clause set."""

    def __init__(self, problem: CnfProblem | None = None):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.keep: list[bool] = []  # permanent flag per clause
        self.n_permanent = 0
        self.watches: list[list[int]] = []
        self.values = bytearray()
        self.levels: list[int] = []
        self.reasons: list[int] = []
        self.trail: list[int] = []
        self.level_starts: list[int] = []
        self.qhead = 0
        self.activity: list[float] = []
        self.var_inc = 1.0
        self.phase: list[bool] = []
        self.heap: list[tuple[float, int]] = []
        self.unsat = False
        self.conflicts_total = 0
        self.decisions_total = 0
        if problem is not None:
            self._ensure_vars(problem.num_vars)
            for cl in problem.clauses:
                self.add_clause(cl)

    # -- construction ---------------------------------------------------

    def _ensure_vars(self, n: int) -> None:
        while self.nvars < n:
            self.nvars += 1
            self.values.extend(b"\x00\x00")
            self.levels.append(-1)
            self.reasons.append(-1)
            self.activity.append(0.0)
            self.phase.append(False)
            self.watches.append([])
            self.watches.append([])

    def new_var(self) -> int:
        self._ensure_vars(self.nvars + 1)
        return self.nvars

    def add_clause(self, ext_lits) -> None:
        """Add a permanent clause of DIMACS literals; callable between solves."""
        self._backtrack(0)
        lits = []
        seen = set()
        for l in ext_lits:
            l = int(l)
            if l == 0:
                raise SatError("literal 0 is not allowed")
            self._ensure_vars(abs(l))
            il = (abs(l) - 1) * 2 + (1 if l < 0 else 0)
            if il ^ 1 in seen:
                return  # tautology, always satisfied
            if il in seen:
                continue
            seen.add(il)
            lits.append(il)
        values = self.values
        if any(values[l] == _TRUE for l in lits):
            return  # satisfied at the root level, for good
        live = [l for l in lits if values[l] != _FALSE]
        if not live:
            self.unsat = True
            return
        if len(live) == 1:
            self._assign(live[0], -1)
            if self._propagate() != -1:
                self.unsat = True
            return
        ci = len(self.clauses)
        self.clauses.append(live)
        self.keep.append(True)
        self.n_permanent += 1
        self.watches[live[0]].append(ci)
        self.watches[live[1]].append(ci)

    # -- assignment and propagation ------------------------------------

    def _assign(self, lit: int, reason: int) -> None:
        self.values[lit] = _TRUE
        self.values[lit ^ 1] = _FALSE
        v = lit >> 1
        self.levels[v] = len(self.level_starts)
        self.reasons[v] = reason
        self.phase[v] = not (lit & 1)
        self.trail.append(lit)

    def _propagate(self) -> int:
        """Run unit propagation; returns a conflicting clause index or -1."""
        values = self.values
        watches = self.watches
        clauses = self.clauses
        while self.qhead < len(self.trail):
            flit = self.trail[self.qhead] ^ 1
            self.qhead += 1
            ws = watches[flit]
            i = j = 0
            n_ws = len(ws)
            while i < n_ws:
                ci = ws[i]
                clause = clauses[ci]
                if clause[0] == flit:
                    clause[0] = clause[1]
                    clause[1] = flit
                first = clause[0]
                if values[first] == _TRUE:
                    ws[j] = ci
                    j += 1
                    i += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lk = clause[k]
                    if values[lk] != _FALSE:
                        clause[1] = lk
                        clause[k] = flit
                        watches[lk].append(ci)
                        moved = True
                        break
                if moved:
                    i += 1
                    continue
                ws[j] = ci
                j += 1
                i += 1
                if values[first] == _FALSE:
                    while i < n_ws:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return ci
                self._assign(first, ci)
            del ws[j:]
        return -1

    # -- conflict analysis ----------------------------------------------

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            inv = 1e-100
            for i in range(self.nvars):
                self.activity[i] *= inv
            self.var_inc *= inv
            # uniform scaling preserves the heap order
            self.heap = [(a * inv, v2) for a, v2 in self.heap]

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        current = len(self.level_starts)
        seen = bytearray(self.nvars)
        learnt: list[int] = [0]
        counter = 0
        idx = len(self.trail) - 1
        lit = -1
        while True:
            clause = self.clauses[confl]
            for k in range(1 if lit != -1 else 0, len(clause)):
                q = clause[k]
                v = q >> 1
                if not seen[v] and self.levels[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.levels[v] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] >> 1]:
                idx -= 1
            lit = self.trail[idx]
            idx -= 1
            seen[lit >> 1] = 0
            counter -= 1
            if counter == 0:
                break
            confl = self.reasons[lit >> 1]
            assert confl != -1, "conflict analysis walked past a decision"
        learnt[0] = lit ^ 1
        if len(learnt) == 1:
            return learnt, 0
        back = max(self.levels[q >> 1] for q in learnt[1:])
        for k in range(2, len(learnt)):
            if self.levels[learnt[k] >> 1] == back:
                learnt[1], learnt[k] = learnt[k], learnt[1]
                break
        return learnt, back

    def _backtrack(self, level: int) -> None:
        if len(self.level_starts) <= level:
            return
        mark = self.level_starts[level]
        for lit in self.trail[mark:]:
            self.values[lit] = _UNASSIGNED
            self.values[lit ^ 1] = _UNASSIGNED
            v = lit >> 1
            self.reasons[v] = -1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[mark:]
        del self.level_starts[level:]
        self.qhead = len(self.trail)

    # -- learned clause housekeeping ------------------------------------

    def _reduce_learned(self) -> None:
        in_use = {self.reasons[l >> 1] for l in self.trail if self.reasons[l >> 1] >= 0}
        disposable = sorted(
            (
                ci
                for ci in range(len(self.clauses))
                if not self.keep[ci] and ci not in in_use and len(self.clauses[ci]) > 2
            ),
            key=lambda ci: len(self.clauses[ci]),
        )
        drop = set(disposable[len(disposable) // 2:])
        if not drop:
            return
        remap: dict[int, int] = {}
        new_clauses: list[list[int]] = []
        new_keep: list[bool] = []
        for ci, cl in enumerate(self.clauses):
            if ci in drop:
                continue
            remap[ci] = len(new_clauses)
            new_clauses.append(cl)
            new_keep.append(self.keep[ci])
        self.clauses = new_clauses
        self.keep = new_keep
        for v in range(self.nvars):
            if self.reasons[v] >= 0:
                self.reasons[v] = remap[self.reasons[v]]
        for wlist in self.watches:
            wlist[:] = [remap[ci] for ci in wlist if ci in remap]

    # -- search ----------------------------------------------------------

    def _decide(self) -> int:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.values[2 * v] == _UNASSIGNED:
                return v
        for v in range(self.nvars):
            if self.values[2 * v] == _UNASSIGNED:
                return v
        return -1

    def solve(self, conflict_budget: int | None = None) -> SatResult:
        """Search for a model; `conflict_budget` bounds conflicts before "unknown"."""
        if self.unsat:
            return SatResult("unsat", conflicts=self.conflicts_total)
        self._backtrack(0)
        if self._propagate() != -1:
            self.unsat = True
            return SatResult("unsat", conflicts=self.conflicts_total)
        self.heap = [(-self.activity[v], v) for v in range(self.nvars)]
        heapq.heapify(self.heap)
        conflicts_here = 0
        restart_unit = 128
        restart_count = 0
        next_restart = restart_unit * _luby(restart_count)
        learned_cap = max(4000, 2 * self.n_permanent)
        while True:
            confl = self._propagate()
            if confl != -1:
                conflicts_here += 1
                self.conflicts_total += 1
                if not self.level_starts:
                    self.unsat = True
                    return SatResult("unsat", conflicts=self.conflicts_total)
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    if self.values[learnt[0]] == _FALSE:
                        self.unsat = True
                        return SatResult("unsat", conflicts=self.conflicts_total)
                    if self.values[learnt[0]] == _UNASSIGNED:
                        self._assign(learnt[0], -1)
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.keep.append(False)
                    self.watches[learnt[0]].append(ci)
                    self.watches[learnt[1]].append(ci)
                    self._assign(learnt[0], ci)
                self.var_inc /= 0.95
                if conflict_budget is not None and conflicts_here >= conflict_budget:
                    self._backtrack(0)
                    return SatResult("unknown", conflicts=self.conflicts_total)
                if conflicts_here >= next_restart:
                    restart_count += 1
                    next_restart = conflicts_here + restart_unit * _luby(restart_count)
                    self._backtrack(0)
                    if len(self.clauses) - self.n_permanent > learned_cap:
                        self._reduce_learned()
                        learned_cap = int(learned_cap * 1.3)
                continue
            v = self._decide()
            if v == -1:
                model = {w + 1: self.values[2 * w] == _TRUE for w in range(self.nvars)}
                self._backtrack(0)
                return SatResult(
                    "sat", model, self.conflicts_total, self.decisions_total
                )
            self.decisions_total += 1
            self.level_starts.append(len(self.trail))
            self._assign(2 * v + (0 if self.phase[v] else 1), -1)


def _luby(x: int) -> int:
    """The restart-interval sequence 1,1,2,1,1,2,4,... at 0-based index x."""
    size, exponent = 1, 0
    while size < x + 1:
        exponent += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        exponent -= 1
        x %= size
    return 1 << exponent


def sat_solve(problem: CnfProblem, conflict_budget: int | None = None) -> SatResult:
    """One-shot satisfiability check of a CnfProblem."""
    return CdclSolver(problem).solve(conflict_budget)


# -- DIMACS interchange ------------------------------------------------


def write_dimacs(problem: CnfProblem, path, comments: list[str] | None = None) -> None:
    with open(path, "w") as fh:
        for c in comments or []:
            fh.write(f"c {c}\n")
        fh.write(f"p cnf {problem.num_vars} {len(problem.clauses)}\n")
        for cl in problem.clauses:
            fh.write(" ".join(str(l) for l in cl) + " 0\n")


def read_dimacs(path) -> CnfProblem:
    problem = CnfProblem()
    declared: tuple[int, int] | None = None
    pending: list[int] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise SatError(f"bad problem line {line!r}")
                declared = (int(parts[2]), int(parts[3]))
                problem.num_vars = max(problem.num_vars, declared[0])
                continue
            for tok in line.split():
                l = int(tok)
                if l == 0:
                    if pending:
                        top = max(abs(x) for x in pending)
                        problem.num_vars = max(problem.num_vars, top)
                        problem.add_clause(pending)
                        pending = []
                else:
                    pending.append(l)
    if pending:
        raise SatError("final clause not terminated by 0")
    if declared is not None and declared[1] != len(problem.clauses):
        raise SatError(
            f"header promises {declared[1]} clauses, file has {len(problem.clauses)}"
        )
    return problem


def write_model(path, result: SatResult) -> None:
    with open(path, "w") as fh:
        if result.status == "sat":
            fh.write("s SATISFIABLE\n")
            lits = [v if val else -v for v, val in sorted(result.model.items())]
            line = "v"
            for l in lits:
                if len(line) + len(str(l)) + 1 > 76:
                    fh.write(line + "\n")
                    line = "v"
                line += f" {l}"
            fh.write(line + " 0\n")
        elif result.status == "unsat":
            fh.write("s UNSATISFIABLE\n")
        else:
            fh.write("s UNKNOWN\n")


def read_model(path) -> dict[int, bool] | None:
    """Parse a SAT-competition style model file; None when unsatisfiable."""
    status = None
    model: dict[int, bool] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("s "):
                status = line[2:].strip()
            elif line.startswith("v"):
                for tok in line[1:].split():
                    l = int(tok)
                    if l != 0:
                        model[abs(l)] = l > 0
    if status == "UNSATISFIABLE":
        return None
    if status == "SATISFIABLE" or model:
        return model
    raise SatError("model file contains no verdict")
