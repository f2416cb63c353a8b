"""Polyphase decomposition and the serial-convolution reference model.

Everything here is an oracle: plain definitions computed in exact integer
(or Fraction) arithmetic, against which the synthesized structures are
checked sample for sample.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .polymatrix import Poly, PolyMatrix

Scalar = int | Fraction


def polyphase_decompose(h: Sequence[Scalar], L: int) -> tuple[tuple[Scalar, ...], ...]:
    """Split taps into L phases, phase j = (h[j], h[j+L], ...), zero padded.

    All phases come back with the same length ceil(len(h)/L).
    """
    if L < 1:
        raise ValueError("L must be positive")
    per = -(-len(h) // L) if h else 0
    phases = []
    for j in range(L):
        p = list(h[j::L])
        p.extend([0] * (per - len(p)))
        phases.append(tuple(p))
    return tuple(phases)


def interleave_phases(phases: Sequence[Sequence[Scalar]]) -> tuple[Scalar, ...]:
    """Inverse of polyphase_decompose (up to zero extension)."""
    out = []
    for k in range(max((len(p) for p in phases), default=0)):
        for p in phases:
            out.append(p[k] if k < len(p) else 0)
    return tuple(out)


def convolve_serial(h: Sequence[Scalar], x: Sequence[Scalar]) -> tuple[Scalar, ...]:
    """y(n) = sum_i h(i) x(n-i), zero initial state; length len(x)+len(h)-1."""
    if not h or not x:
        return ()
    y: list[Scalar] = [0] * (len(x) + len(h) - 1)
    for i, c in enumerate(h):
        if c == 0:
            continue
        for n, v in enumerate(x):
            y[i + n] += c * v
    return tuple(y)


def blocks_to_samples(blocks: Sequence[Sequence[Scalar]]) -> tuple[Scalar, ...]:
    return tuple(s for b in blocks for s in b)


def samples_to_blocks(x: Sequence[Scalar], L: int) -> tuple[tuple[Scalar, ...], ...]:
    if len(x) % L != 0:
        raise ValueError("sample count not a multiple of L")
    return tuple(tuple(x[k : k + L]) for k in range(0, len(x), L))


def naive_parallel_reference(
    h: Sequence[Scalar], L: int, x_blocks: Sequence[Sequence[Scalar]]
) -> tuple[tuple[Scalar, ...], ...]:
    """Blocked serial convolution: the pseudo-circulant map, by definition."""
    x = blocks_to_samples(x_blocks)
    y = convolve_serial(h, x)
    n_keep = len(x_blocks) * L
    y = tuple(y[:n_keep]) + (0,) * (n_keep - len(y))
    return samples_to_blocks(y, L)


def pseudocirculant(h: Sequence[Scalar], L: int) -> PolyMatrix:
    """LxL blocked transfer matrix of the serial filter h.

    Entry (i, j) is phase H_{i-j} for i >= j and z^-L * H_{L+i-j} below the
    diagonal, phases written in powers of z^-L.
    """
    phases = polyphase_decompose(h, L)
    hp = [Poly.from_strided(p, L) for p in phases]
    entries = []
    for i in range(L):
        row = []
        for j in range(L):
            if i >= j:
                row.append(hp[i - j])
            else:
                row.append(hp[L + i - j].shifted(L))
        entries.append(row)
    return PolyMatrix(entries)
