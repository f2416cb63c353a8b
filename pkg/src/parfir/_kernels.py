"""Bounded int64 execution backends for the fast simulation mode.

The graph is compiled to a flat instruction tape; the numba kernel clocks
it one block per cycle (delays read old state, then write).  A pure-numpy
implementation of the same tape is kept as the fallback path and for
cross-checking the kernel; selection is via the FFA_JIT env flag
("0"/"off" forces numpy even when numba imports).

This mode can overflow on wide structures with large samples; exact mode
in `simulate` is the verification domain.
"""

from __future__ import annotations

import operator
import os
from dataclasses import dataclass

import numpy as np

OP_INPUT, OP_ADD, OP_DELAY, OP_SUBFILTER, OP_OUTPUT = 0, 1, 2, 3, 4

_jit_tape = None  # compiled lazily; importing numba is too slow for CLI startup


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return False
    return True


def jit_enabled() -> bool:
    return os.environ.get("FFA_JIT", "1").lower() not in ("0", "false", "off", "no")


@dataclass
class Program:
    kind: np.ndarray  # opcode per instruction, topological order
    src_a: np.ndarray  # first operand (instruction index)
    sign_a: np.ndarray
    src_b: np.ndarray  # second operand for adds
    sign_b: np.ndarray
    aux: np.ndarray  # port / delay blocks / tap offset
    aux2: np.ndarray  # tap count for subfilters
    state_off: np.ndarray  # ring-buffer offset for delays and FIR histories
    taps: np.ndarray
    state_size: int
    L: int


def compile_program(g, h: list[int]) -> Program:
    from .graph import KIND_ADD, KIND_DELAY, KIND_INPUT, KIND_SUBFILTER
    from .synthesis import _combo_taps

    order = g.topological_order()
    idx = {nid: i for i, nid in enumerate(order)}
    n = len(order)
    kind = np.zeros(n, dtype=np.int64)
    src_a = np.zeros(n, dtype=np.int64)
    sign_a = np.ones(n, dtype=np.int64)
    src_b = np.zeros(n, dtype=np.int64)
    sign_b = np.ones(n, dtype=np.int64)
    aux = np.zeros(n, dtype=np.int64)
    aux2 = np.zeros(n, dtype=np.int64)
    state_off = np.zeros(n, dtype=np.int64)
    taps: list[int] = []
    state = 0
    for i, nid in enumerate(order):
        nd = g.node(nid)
        ins = g.in_edges(nid)
        if nd.kind == KIND_INPUT:
            kind[i] = OP_INPUT
            aux[i] = nd.param
            continue
        src_a[i], sign_a[i] = idx[ins[0][0]], ins[0][1]
        if nd.kind == KIND_ADD:
            kind[i] = OP_ADD
            src_b[i], sign_b[i] = idx[ins[1][0]], ins[1][1]
        elif nd.kind == KIND_DELAY:
            kind[i] = OP_DELAY
            aux[i] = nd.param
            state_off[i] = state
            state += nd.param
        elif nd.kind == KIND_SUBFILTER:
            kind[i] = OP_SUBFILTER
            t = [operator.index(c) for c in _combo_taps(nd.param, h, g.L)]
            aux[i] = len(taps)
            aux2[i] = len(t)
            state_off[i] = state
            state += len(t)
            taps.extend(t)
        else:  # output
            kind[i] = OP_OUTPUT
            aux[i] = nd.param
    return Program(
        kind,
        src_a,
        sign_a,
        src_b,
        sign_b,
        aux,
        aux2,
        state_off,
        np.asarray(taps, dtype=np.int64),
        state,
        g.L,
    )


def _run_tape(kind, src_a, sign_a, src_b, sign_b, aux, aux2, soff, taps, state, x, y, L):
    blocks = x.shape[0] // L
    n = kind.shape[0]
    vals = np.zeros(n, dtype=np.int64)
    for t in range(blocks):
        for i in range(n):
            k = kind[i]
            if k == OP_INPUT:
                vals[i] = x[t * L + aux[i]]
            elif k == OP_ADD:
                vals[i] = sign_a[i] * vals[src_a[i]] + sign_b[i] * vals[src_b[i]]
            elif k == OP_DELAY:
                pos = soff[i] + t % aux[i]
                prev = state[pos]
                state[pos] = sign_a[i] * vals[src_a[i]]
                vals[i] = prev
            elif k == OP_SUBFILTER:
                tl = aux2[i]
                hoff = soff[i]
                head = t % tl
                state[hoff + head] = sign_a[i] * vals[src_a[i]]
                acc = np.int64(0)
                reach = tl if t + 1 >= tl else t + 1
                for tt in range(reach):
                    acc += taps[aux[i] + tt] * state[hoff + (head - tt) % tl]
                vals[i] = acc
            else:
                y[t * L + aux[i]] = sign_a[i] * vals[src_a[i]]
    return y


def _get_jit_tape():
    global _jit_tape
    if _jit_tape is None:
        from numba import njit

        _jit_tape = njit(cache=True)(_run_tape)
    return _jit_tape


def _run(prog: Program, x: np.ndarray, tape) -> np.ndarray:
    if x.shape[0] % prog.L != 0:
        raise ValueError("sample count not a multiple of L")
    y = np.zeros_like(x)
    state = np.zeros(max(prog.state_size, 1), dtype=np.int64)
    tape(
        prog.kind,
        prog.src_a,
        prog.sign_a,
        prog.src_b,
        prog.sign_b,
        prog.aux,
        prog.aux2,
        prog.state_off,
        prog.taps,
        state,
        x.astype(np.int64, copy=False),
        y,
        prog.L,
    )
    return y


def run_numpy(prog: Program, x: np.ndarray) -> np.ndarray:
    """Vectorized numpy path: one strided array op per instruction.

    Equivalent to the block machine because the tape is feed-forward and
    all state starts at zero.
    """
    L = prog.L
    if x.shape[0] % L != 0:
        raise ValueError("sample count not a multiple of L")
    blocks = x.shape[0] // L
    xb = x.astype(np.int64, copy=False).reshape(blocks, L)
    n = prog.kind.shape[0]
    vals = np.zeros((n, blocks), dtype=np.int64)
    y = np.zeros_like(xb)
    for i in range(n):
        k = prog.kind[i]
        if k == OP_INPUT:
            vals[i] = xb[:, prog.aux[i]]
        elif k == OP_ADD:
            vals[i] = prog.sign_a[i] * vals[prog.src_a[i]] + prog.sign_b[i] * vals[prog.src_b[i]]
        elif k == OP_DELAY:
            d = prog.aux[i]
            if d < blocks:
                vals[i, d:] = prog.sign_a[i] * vals[prog.src_a[i], : blocks - d]
        elif k == OP_SUBFILTER:
            src = prog.sign_a[i] * vals[prog.src_a[i]]
            out = vals[i]
            for tt in range(prog.aux2[i]):
                c = prog.taps[prog.aux[i] + tt]
                if c != 0 and tt < blocks:
                    out[tt:] += c * src[: blocks - tt]
        else:
            y[:, prog.aux[i]] = prog.sign_a[i] * vals[prog.src_a[i]]
    return y.reshape(-1)


def run_numba(prog: Program, x: np.ndarray) -> np.ndarray:
    """JIT-compiled block machine; numpy path when disabled or unavailable."""
    if not jit_enabled() or not numba_available():
        return run_numpy(prog, x)
    return _run(prog, x, _get_jit_tape())
