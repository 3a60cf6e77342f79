"""CSV serialization of traces and trajectories.

One record is a CSV block with header

    t, u_1..u_nu, mode, s_1..s_ns, y_1..y_ny

where `mode` is the 1-based active-mode index.  The u_* and y_* columns
are absent for purely symbolic traces.  Multi-record files separate
records with a blank line.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from .alphabet import ModeAssignment, PropositionAlphabet, Trace, Trajectory


class TraceFormatError(ValueError):
    pass


def _header(n_u: int, n_s: int, n_y: int) -> list[str]:
    return (
        ["t"]
        + [f"u_{i}" for i in range(1, n_u + 1)]
        + ["mode"]
        + [f"s_{j}" for j in range(1, n_s + 1)]
        + [f"y_{k}" for k in range(1, n_y + 1)]
    )


def _record_rows(trace: Trace, inputs=None, outputs=None) -> list[list[str]]:
    n_u = 0 if inputs is None else inputs.shape[1]
    n_s = len(trace.symbols[0].state_bits)
    n_y = 0 if outputs is None else outputs.shape[1]
    rows = [_header(n_u, n_s, n_y)]
    for i, sym in enumerate(trace.symbols):
        row = [str(trace.start_time + i)]
        if inputs is not None:
            row += [repr(float(v)) for v in inputs[i]]
        row.append(str(sym.mode_index))
        row += [str(b) for b in sym.state_bits]
        if outputs is not None:
            row += [repr(float(v)) for v in outputs[i]]
        rows.append(row)
    return rows


def write_traces(path, traces: list[Trace]) -> None:
    _write_blocks(path, [_record_rows(tr) for tr in traces])


def write_trajectories(path, trajectories: list[Trajectory]) -> None:
    _write_blocks(
        path,
        [_record_rows(tj.trace, tj.inputs, tj.outputs) for tj in trajectories],
    )


def _write_blocks(path, blocks: list[list[list[str]]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for i, rows in enumerate(blocks):
            if i:
                fh.write("\n")
            w.writerows(rows)


def _split_blocks(text: str) -> list[list[str]]:
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        if line.strip() == "":
            if blocks[-1]:
                blocks.append([])
        else:
            blocks[-1].append(line)
    if blocks and not blocks[-1]:
        blocks.pop()
    return blocks


def _parse_header(cells: list[str]) -> tuple[int, int, int]:
    cells = [c.strip() for c in cells]
    if not cells or cells[0] != "t":
        raise TraceFormatError(f"record header must start with 't', got {cells[:1]}")
    n_u = 0
    i = 1
    while i < len(cells) and cells[i] == f"u_{n_u + 1}":
        n_u += 1
        i += 1
    if i >= len(cells) or cells[i] != "mode":
        raise TraceFormatError("record header must contain 'mode' after input columns")
    i += 1
    n_s = 0
    while i < len(cells) and cells[i] == f"s_{n_s + 1}":
        n_s += 1
        i += 1
    n_y = 0
    while i < len(cells) and cells[i] == f"y_{n_y + 1}":
        n_y += 1
        i += 1
    if i != len(cells):
        raise TraceFormatError(f"unexpected header column {cells[i]!r}")
    return n_u, n_s, n_y


def _parse_block(lines: list[str], alphabet: PropositionAlphabet):
    reader = list(csv.reader(io.StringIO("\n".join(lines))))
    n_u, n_s, n_y = _parse_header(reader[0])
    if n_s != alphabet.state_constraint_count:
        raise TraceFormatError(
            f"record has {n_s} s-columns, alphabet expects {alphabet.state_constraint_count}"
        )
    if len(reader) < 2:
        raise TraceFormatError("record has a header but no steps")
    times: list[int] = []
    symbols: list[ModeAssignment] = []
    u_rows: list[list[float]] = []
    y_rows: list[list[float]] = []
    for cells in reader[1:]:
        cells = [c.strip() for c in cells]
        if len(cells) != 1 + n_u + 1 + n_s + n_y:
            raise TraceFormatError(f"row has {len(cells)} cells, header promises more/less")
        try:
            times.append(int(cells[0]))
            u_rows.append([float(v) for v in cells[1:1 + n_u]])
            mode = int(cells[1 + n_u])
            bits = tuple(int(v) for v in cells[2 + n_u:2 + n_u + n_s])
            y_rows.append([float(v) for v in cells[2 + n_u + n_s:]])
        except ValueError as e:
            raise TraceFormatError(f"bad cell in row {cells}: {e}") from None
        if not 1 <= mode <= alphabet.mode_count:
            raise TraceFormatError(f"mode index {mode} outside 1..{alphabet.mode_count}")
        if any(b not in (0, 1) for b in bits):
            raise TraceFormatError(f"state bits must be 0/1, got {bits}")
        symbols.append(ModeAssignment.from_index(mode, alphabet.mode_count, bits))
    for a, b in zip(times, times[1:]):
        if b != a + 1:
            raise TraceFormatError(f"time column must be consecutive, got {a} then {b}")
    trace = Trace(tuple(symbols), start_time=times[0])
    return trace, np.array(u_rows, dtype=float), np.array(y_rows, dtype=float), n_u, n_y


def read_traces(path, alphabet: PropositionAlphabet) -> list[Trace]:
    with open(path) as fh:
        text = fh.read()
    out = []
    for lines in _split_blocks(text):
        trace, _, _, n_u, n_y = _parse_block(lines, alphabet)
        if n_u or n_y:
            raise TraceFormatError("expected symbolic traces, file has u/y columns")
        out.append(trace)
    return out


def read_trajectories(path, alphabet: PropositionAlphabet) -> list[Trajectory]:
    with open(path) as fh:
        text = fh.read()
    out = []
    for lines in _split_blocks(text):
        trace, u, y, n_u, n_y = _parse_block(lines, alphabet)
        if n_y == 0:
            raise TraceFormatError("expected trajectories, record has no y columns")
        out.append(Trajectory(u.reshape(len(trace), n_u), trace, y))
    return out
