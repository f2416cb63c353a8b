"""Recursive synthesis of 2^n-parallel filter structures.

Three schemes are built on a common bus vocabulary (a bus is a list of
wires carrying the polyphase components of one intermediate signal):

* iterated  -- the same 2-parallel block substituted into each of the three
  filtering slots, level after level.
* hybrid    -- a direct-form outermost level over transposed-form inner
  levels, with the inner input networks computed once per physical half
  and the middle slot's feeds formed as wire sums (input-side sharing).
* naive     -- the L^2-subfilter blocked realization, used as a baseline.

Delaying a width-w bus by one bus sample costs a single storage element:
the wires rotate and only the wrapped wire passes through a Delay node.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import GraphBuilder, StructureGraph, SubfilterSpec
from .polyphase import polyphase_decompose
from .primitives import Ffa2Form

Scalar = int | Fraction

SCHEME_ITERATED = "iterated"
SCHEME_HYBRID = "hybrid"
SCHEME_NAIVE = "naive"


class DivisibilityError(ValueError):
    """Tap or sample count incompatible with the requested parallelism."""


@dataclass(frozen=True)
class Scheme:
    kind: str
    n: int
    form: Ffa2Form | None = None


def nesting_order(n: int) -> tuple[int, ...]:
    """Bit-reversal permutation: nested position j holds natural phase rev(j).

    This is the permutation induced by recursive even/odd splitting; at n=2
    it is (0, 2, 1, 3).
    """
    out = []
    for j in range(1 << n):
        r = 0
        v = j
        for _ in range(n):
            r = (r << 1) | (v & 1)
            v >>= 1
        out.append(r)
    return tuple(out)


_P2_ROWS = {"plus": ((1, 0), (1, 1), (0, 1)), "minus": ((1, 0), (1, -1), (0, 1))}


def _leaf_combo(digits: Sequence[int], n: int, sign_form: str) -> tuple[int, ...]:
    """Natural-order phase combination for one leaf subfilter.

    digits[k] is the slot taken at level k+1 (outermost first); slot d at
    level k scales the phases whose k-th bit is 0/1 by row d of the
    2-parallel pre-matrix.
    """
    rows = _P2_ROWS[sign_form]
    combo = []
    for p in range(1 << n):
        c = 1
        for k, d in enumerate(digits):
            c *= rows[d][(p >> k) & 1]
            if c == 0:
                break
        combo.append(c)
    return tuple(combo)


def _combo_taps(spec: SubfilterSpec, h: Sequence[Scalar], L: int) -> tuple[Scalar, ...]:
    phases = polyphase_decompose(h, L)
    per = len(h) // L
    return tuple(
        sum(c * phases[j][t] for j, c in enumerate(spec.combo) if c) for t in range(per)
    )


def subfilter_taps(spec: SubfilterSpec, h: Sequence[Scalar], n: int) -> tuple[Scalar, ...]:
    """Instantiated taps of a subfilter: the combo applied to the phases of h."""
    L = 1 << n
    if len(h) % L != 0:
        raise DivisibilityError(f"tap count {len(h)} not divisible by {L}")
    return _combo_taps(spec, h, L)


def _interleave(even: list[int], odd: list[int]) -> list[int]:
    out = []
    for e, o in zip(even, odd):
        out.extend((e, o))
    return out


def _bus_delay(b: GraphBuilder, bus: list[int]) -> list[int]:
    """One bus-sample delay: rotate wires, one Delay on the wrapped wire."""
    return [b.delay(bus[-1], 1)] + list(bus[:-1])


# -- iterated scheme ---------------------------------------------------------

def _iter_rec(
    b: GraphBuilder,
    bus: list[int],
    digits: list[int],
    n: int,
    sign_form: str,
    tap_len: int,
) -> list[int]:
    if len(bus) == 1:
        spec = SubfilterSpec(_leaf_combo(digits, n, sign_form), tap_len)
        return [b.subfilter(bus[0], spec)]
    even, odd = bus[0::2], bus[1::2]
    s_mid = 1 if sign_form == "plus" else -1
    mid = [b.add(e, 1, o, s_mid) for e, o in zip(even, odd)]
    s0 = _iter_rec(b, even, digits + [0], n, sign_form, tap_len)
    s1 = _iter_rec(b, mid, digits + [1], n, sign_form, tap_len)
    s2 = _iter_rec(b, odd, digits + [2], n, sign_form, tap_len)
    y_even = [b.add(u, 1, v, 1) for u, v in zip(s0, _bus_delay(b, s2))]
    if sign_form == "plus":
        y_odd = [b.add(b.add(x1, 1, x0, -1), 1, x2, -1) for x0, x1, x2 in zip(s0, s1, s2)]
    else:
        y_odd = [b.add(b.add(x0, 1, x1, -1), 1, x2, 1) for x0, x1, x2 in zip(s0, s1, s2)]
    return _interleave(y_even, y_odd)


def synthesize_iterated(n: int, form: Ffa2Form, tap_len: int = 1) -> StructureGraph:
    """2^n-parallel structure from n nested 2-parallel blocks of one form.

    Costs: 4(3^n - 2^n) adders, (3^n - 1)/2 delay elements, 3^n subfilters.
    Transposed forms are the graph transposes of the direct ones.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    L = 1 << n
    b = GraphBuilder()
    bus = [b.input(p) for p in range(L)]
    out = _iter_rec(b, bus, [], n, form.sign_form, tap_len)
    for p, w in enumerate(out):
        b.output(p, w)
    g = b.build(L, scheme=f"{SCHEME_ITERATED}/direct-{form.sign_form}", n=n)
    if form.orientation == "transposed":
        from .graph import transpose_graph

        g = transpose_graph(g, scheme=f"{SCHEME_ITERATED}/transposed-{form.sign_form}")
    return g


# -- hybrid scheme -----------------------------------------------------------
#
# Input-side delay placement is budgeted: the two inner input networks can
# trade one storage element against nothing at the pair-of-pairs level
# (shared variant below), and the per-half budgets are chosen so the total
# delay count lands on the closed form (2^n + 3^(n-1) - 1)/2 wherever that
# is reachable (n <= 4; larger n keeps the closed-form adder count and the
# minimum reachable delay count).

def _tin_bounds(m: int) -> tuple[int, int]:
    if m == 1:
        return 1, 1
    if m == 2:
        return 3, 4
    lo, hi = _tin_bounds(m - 1)
    return 1 + 3 * lo, 1 + 3 * hi


def _child_budgets(m: int, budget: int) -> tuple[int, int, int]:
    lo, hi = _tin_bounds(m - 1)
    rem = budget - 1
    out = []
    for left in (2, 1, 0):
        c = min(hi, max(lo, rem - left * lo))
        out.append(c)
        rem -= c
    if rem != 0:
        raise ValueError(f"unreachable delay budget {budget} at level {m}")
    return tuple(out)


def _hybrid_budgets(n: int) -> tuple[int, int]:
    m = n - 1
    lo, hi = _tin_bounds(m)
    target = (2**n + 3**m - 1) // 2 - 1
    b_odd = min(hi, max(lo, -(-target // 2)))
    b_even = min(hi, max(lo, target - b_odd))
    return b_even, b_odd


def _tin(b: GraphBuilder, bus: list[int], budget: int) -> list[int]:
    """Transposed-form input network: bus of width 2^m -> 3^m subfilter feeds.

    The feeds of the three slots of one level are, for even/odd sub-buses
    (E, O) of the bus signal: T(O - E), T(E), T(bd(O) - E) where bd is the
    one-sample bus delay.  The width-4 shared variant derives the third
    slot's feeds from T(O) and T(E) directly, which costs the same adders
    and one less storage element.
    """
    w = len(bus)
    if w == 2:
        if budget != 1:
            raise ValueError("pair network always holds exactly one delay")
        e, o = bus
        f0 = b.add(o, 1, e, -1)
        f2 = b.add(b.delay(o, 1), 1, e, -1)
        return [f0, e, f2]
    m = w.bit_length() - 1
    even, odd = bus[0::2], bus[1::2]
    if w == 4 and budget == 3:
        u = _tin(b, odd, 1)
        v = _tin(b, even, 1)
        g0 = [b.add(x, 1, y, -1) for x, y in zip(u, v)]
        g2 = [
            b.add(u[2], -1, v[0], -1),
            b.add(u[2], 1, g0[1], 1),
            b.add(b.delay(u[0], 1), -1, v[2], -1),
        ]
        return g0 + v + g2
    c0, c1, c2 = _child_budgets(m, budget)
    r0 = [b.add(o, 1, e, -1) for e, o in zip(even, odd)]
    g0 = _tin(b, r0, c0)
    g1 = _tin(b, even, c1)
    bd_odd = _bus_delay(b, odd)
    r2 = [b.add(d, 1, e, -1) for e, d in zip(even, bd_odd)]
    g2 = _tin(b, r2, c2)
    return g0 + g1 + g2


def _tout(b: GraphBuilder, group: list[int]) -> list[int]:
    """Transposed-form output network: 3^m filtered wires -> width-2^m bus."""
    if len(group) == 1:
        return [group[0]]
    s = len(group) // 3
    b0 = _tout(b, group[:s])
    b1 = _tout(b, group[s : 2 * s])
    b2 = _tout(b, group[2 * s :])
    y_odd = [b.add(x, 1, y, 1) for x, y in zip(b0, b1)]
    y_even = [b.add(x, 1, y, 1) for x, y in zip(b1, b2)]
    return _interleave(y_even, y_odd)


def _ternary_digits(j: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(j % 3)
        j //= 3
    return out[::-1]


def synthesize_hybrid(n: int, tap_len: int = 1, input_sharing: bool = True) -> StructureGraph:
    """Direct-form outer level over transposed-form inner levels.

    With input sharing (the default) the inner input networks are built
    once per physical half and the middle slot's feeds are wire sums of
    the two; costs land on (11/3)3^n - (7/2)2^n adders and, for n <= 4,
    (2^n + 3^(n-1) - 1)/2 delay elements.  ``input_sharing=False`` builds
    the literal three-copy composition (iterated-equal cost) for use as
    the sharing pass's starting point.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        g = synthesize_iterated(1, Ffa2Form.DIRECT_PLUS, tap_len)
        return StructureGraph(g.L, g.nodes, g.edges, scheme=SCHEME_HYBRID, n=1)
    L = 1 << n
    m = n - 1
    b = GraphBuilder()
    x = [b.input(p) for p in range(L)]
    half_even, half_odd = x[0::2], x[1::2]
    if input_sharing:
        b_even, b_odd = _hybrid_budgets(n)
        feeds_even = _tin(b, half_even, b_even)
        feeds_odd = _tin(b, half_odd, b_odd)
        feeds_mid = [b.add(p, 1, q, 1) for p, q in zip(feeds_even, feeds_odd)]
    else:
        _, hi = _tin_bounds(m)
        mid_bus = [b.add(p, 1, q, 1) for p, q in zip(half_even, half_odd)]
        feeds_even = _tin(b, half_even, hi)
        feeds_mid = _tin(b, mid_bus, hi)
        feeds_odd = _tin(b, half_odd, hi)
    buses = []
    for slot, feeds in ((0, feeds_even), (1, feeds_mid), (2, feeds_odd)):
        filtered = []
        for j, wire in enumerate(feeds):
            digits = [slot] + _ternary_digits(j, m)
            spec = SubfilterSpec(_leaf_combo(digits, n, "plus"), tap_len)
            filtered.append(b.subfilter(wire, spec))
        buses.append(_tout(b, filtered))
    s0, s1, s2 = buses
    y_even = [b.add(u, 1, v, 1) for u, v in zip(s0, _bus_delay(b, s2))]
    y_odd = [b.add(b.add(x1, 1, x0, -1), 1, x2, -1) for x0, x1, x2 in zip(s0, s1, s2)]
    for p, w in enumerate(_interleave(y_even, y_odd)):
        b.output(p, w)
    tag = SCHEME_HYBRID if input_sharing else SCHEME_HYBRID + "-unshared"
    return b.build(L, scheme=tag, n=n)


# -- naive blocked scheme ----------------------------------------------------

def synthesize_naive(n: int, tap_len: int = 1) -> StructureGraph:
    """Direct pseudo-circulant realization: L^2 subfilters, L(L-1) adders,
    L-1 single-block delays (one delayed copy of each input phase j >= 1).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    L = 1 << n
    b = GraphBuilder()
    x = [b.input(p) for p in range(L)]
    delayed = {j: b.delay(x[j], 1) for j in range(1, L)}
    for i in range(L):
        acc = None
        for j in range(L):
            k = (i - j) % L
            src = x[j] if i >= j else delayed[j]
            combo = tuple(1 if t == k else 0 for t in range(L))
            sf = b.subfilter(src, SubfilterSpec(combo, tap_len))
            acc = sf if acc is None else b.add(acc, 1, sf, 1)
        b.output(i, acc)
    return b.build(L, scheme=SCHEME_NAIVE, n=n)


def synthesize(scheme: Scheme, tap_len: int = 1) -> StructureGraph:
    """Dispatch on a scheme description."""
    if scheme.kind == SCHEME_ITERATED:
        return synthesize_iterated(scheme.n, scheme.form or Ffa2Form.DIRECT_PLUS, tap_len)
    if scheme.kind == SCHEME_HYBRID:
        return synthesize_hybrid(scheme.n, tap_len)
    if scheme.kind == SCHEME_NAIVE:
        return synthesize_naive(scheme.n, tap_len)
    raise ValueError(f"unknown scheme kind {scheme.kind!r}")
