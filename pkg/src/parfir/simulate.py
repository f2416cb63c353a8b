"""Block-rate execution of structure graphs and oracle equivalence checks.

Semantics are block-synchronous with zero initial state: per block cycle
each node takes the sign-weighted sum of its inputs, delays read before
they write, subfilters run their FIR over their phase stream.  Since the
graphs are feed-forward the whole run evaluates stream-wise per node.

Modes:
  exact   object arrays holding Python ints/Fractions (arbitrary precision);
          the verification domain, used by every equivalence check.
  float   float64, compared at 1e-9 relative tolerance.
  int64   bounded fast mode on the kernel backend (numba when enabled,
          pure numpy otherwise); excluded from acceptance checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import (
    KIND_DELAY,
    KIND_INPUT,
    KIND_SUBFILTER,
    InvalidGraphError,
    StructureGraph,
)
from .polyphase import convolve_serial
from .synthesis import DivisibilityError, _combo_taps

Scalar = int | Fraction

FLOAT_RTOL = 1e-9

_DTYPES = {"exact": object, "float": np.float64, "int64": np.int64}


def _eval_streams(g: StructureGraph, h: Sequence[Scalar], phases: np.ndarray) -> np.ndarray:
    """Evaluate all node streams; phases has shape (L, B) or (L, B, T)."""
    blocks = phases.shape[1]
    vals: dict[int, np.ndarray] = {}
    for nid in g.topological_order():
        nd = g.node(nid)
        if nd.kind == KIND_INPUT:
            vals[nid] = phases[nd.param]
            continue
        acc = None
        for src, sign in g.in_edges(nid):
            term = vals[src] if sign > 0 else -vals[src]
            acc = term if acc is None else acc + term
        if nd.kind == KIND_DELAY:
            out = np.zeros_like(acc)
            if nd.param < blocks:
                out[nd.param :] = acc[: blocks - nd.param]
            vals[nid] = out
        elif nd.kind == KIND_SUBFILTER:
            taps = _combo_taps(nd.param, h, g.L)
            if phases.dtype == np.float64:
                taps = tuple(float(c) for c in taps)
            out = np.zeros_like(acc)
            for t, c in enumerate(taps):
                if c == 0 or t >= blocks:
                    continue
                out[t:] += c * acc[: blocks - t]
            vals[nid] = out
        else:  # add, output
            vals[nid] = acc
    return np.stack([vals[nid] for nid in g.output_ids_by_port()])


def _check_args(g: StructureGraph, h: Sequence[Scalar]) -> None:
    bad = g.validate()
    if bad:
        raise InvalidGraphError("; ".join(bad))
    if not h or len(h) % g.L != 0:
        raise DivisibilityError(f"tap count {len(h)} not divisible by L={g.L}")


def _simulate_batch(g: StructureGraph, h, x: np.ndarray, dtype) -> np.ndarray:
    """x has shape (S, T) with S a multiple of L; returns the same shape."""
    L = g.L
    blocks = x.shape[0] // L
    phases = x.reshape(blocks, L, -1).transpose(1, 0, 2).astype(dtype, copy=False)
    ys = _eval_streams(g, h, phases)
    return ys.transpose(1, 0, 2).reshape(x.shape)


def simulate(g: StructureGraph, h: Sequence[Scalar], x: Sequence[Scalar], mode: str = "exact"):
    """Run x through the structure; equals convolve_serial(h, x)[:len(x)].

    x is zero padded to a whole number of blocks internally; the returned
    tuple is truncated back to len(x).
    """
    if mode not in _DTYPES:
        raise ValueError(f"unknown mode {mode!r}")
    _check_args(g, h)
    L = g.L
    n_orig = len(x)
    if n_orig == 0:
        return ()
    pad = (-n_orig) % L
    xs = list(x) + [0] * pad
    if mode == "int64" and _kernels.jit_enabled():
        prog = _kernels.compile_program(g, list(h))
        y = _kernels.run_numba(prog, np.asarray(xs, dtype=np.int64))
        return tuple(int(v) for v in y[:n_orig])
    dtype = _DTYPES[mode]
    col = np.asarray(xs, dtype=dtype).reshape(-1, 1)
    y = _simulate_batch(g, h, col, dtype)[:, 0]
    return tuple(y[:n_orig])


def total_delay_blocks(g: StructureGraph) -> int:
    return sum(nd.param for nd in g.nodes if nd.kind == KIND_DELAY)


def impulse_responses(g: StructureGraph, h: Sequence[Scalar]) -> list[list[tuple]]:
    """Block-domain impulse responses: [input port][output port] -> coeffs.

    Runs one unit impulse per input phase for enough blocks to flush every
    delay and the longest subfilter.
    """
    _check_args(g, h)
    L = g.L
    blocks = len(h) // L + total_delay_blocks(g) + 1
    phases = np.zeros((L, blocks, L), dtype=object)
    for j in range(L):
        phases[j, 0, j] = 1
    ys = _eval_streams(g, h, phases)
    return [[tuple(ys[i, :, j]) for i in range(L)] for j in range(L)]


def _convolve_batch(h, x: np.ndarray) -> np.ndarray:
    """Columns of x convolved with h; shape (S + len(h) - 1, T)."""
    n = x.shape[0]
    y = np.zeros((n + len(h) - 1, x.shape[1]), dtype=x.dtype)
    for i, c in enumerate(h):
        if c == 0:
            continue
        y[i : i + n] += c * x
    return y


def verify_equivalence(
    g: StructureGraph,
    h: Sequence[Scalar],
    trials: int = 100,
    x_len: int | None = None,
    seed: int = 0,
    mode: str = "exact",
) -> dict:
    """Random-input equivalence against the serial convolution oracle.

    Inputs are integers uniform on [-8, 8]; identical seeds give identical
    reports.  Pass means exact equality in exact/int64 mode and 1e-9
    relative agreement in float mode.
    """
    _check_args(g, h)
    if x_len is None:
        x_len = 16 * g.L
    if x_len % g.L != 0:
        raise DivisibilityError(f"x_len {x_len} not divisible by L={g.L}")
    rng = np.random.default_rng(seed)
    x = rng.integers(-8, 9, size=(x_len, trials))
    if mode == "exact":
        x = x.astype(object)
    elif mode == "float":
        x = x.astype(np.float64)
    else:
        x = x.astype(np.int64)
    got = _simulate_batch(g, h, x, _DTYPES[mode])
    want = _convolve_batch(np.asarray(list(h), dtype=x.dtype if mode != "exact" else object), x)[
        :x_len
    ]
    diff = got - want
    if mode == "float":
        scale = np.maximum(1.0, np.abs(want))
        max_rel = float(np.max(np.abs(diff) / scale)) if diff.size else 0.0
        ok = max_rel <= FLOAT_RTOL
        max_abs = float(np.max(np.abs(diff))) if diff.size else 0.0
    else:
        max_abs = max((abs(v) for v in diff.flat), default=0)
        ok = max_abs == 0
    return {
        "pass": bool(ok),
        "max_abs_diff": max_abs,
        "trials": trials,
        "x_len": x_len,
        "seed": seed,
        "mode": mode,
    }


def oracle(h: Sequence[Scalar], x: Sequence[Scalar]) -> tuple:
    """Serial convolution truncated to len(x): what simulate must produce."""
    return tuple(convolve_serial(h, x)[: len(x)])
