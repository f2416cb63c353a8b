"""Substructure sharing over the linear pre/post networks of a structure.

The pass works on the adder/delay cloud between the inputs and the
subfilters (region "input"), between the subfilters and the outputs
(region "output"), or both.  Every node in a region computes a signed
linear combination of the region's sources with block-delay polynomial
coefficients; the pass

  * merges nodes computing identical combinations,
  * rewires a node onto an existing pair u +/- v whose combinations sum
    to the node's (this covers the delayed-difference identity
    z(a+c) - (b+d) = (za - b) + (zc - d) read right to left),
  * hoists one delay out of an adder fed by two single-use delays
    (the same identity read left to right),

accepting a rewrite only when it strictly lowers the region's objective:
(additions, delays) lexicographically for the input side, (delays,
additions) for the output side.  Behavior is preserved exactly; the pass
re-derives every subfilter feed / output combination afterwards and
refuses to return a graph that changed any of them.
"""

from __future__ import annotations

import itertools

from .graph import (
    KIND_ADD,
    KIND_DELAY,
    KIND_INPUT,
    KIND_OUTPUT,
    KIND_SUBFILTER,
    Edge,
    InvalidGraphError,
    Node,
    StructureGraph,
)
from .polymatrix import Poly

REGION_INPUT = "input"
REGION_OUTPUT = "output"
REGION_BOTH = "both"


class _Work:
    """Mutable edge-list view of a graph during rewriting."""

    def __init__(self, g: StructureGraph):
        self.L = g.L
        self.n = g.n
        self.scheme = g.scheme
        self.nodes: dict[int, Node] = {nd.id: nd for nd in g.nodes}
        self.edges: list[Edge] = list(g.edges)
        self.next_id = max(self.nodes) + 1

    def in_edges(self, nid: int) -> list[Edge]:
        return [e for e in self.edges if e.dst == nid]

    def out_edges(self, nid: int) -> list[Edge]:
        return [e for e in self.edges if e.src == nid]

    def topo(self) -> list[int]:
        indeg = {nid: 0 for nid in self.nodes}
        for e in self.edges:
            indeg[e.dst] += 1
        import heapq

        ready = [nid for nid, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        out_by_src: dict[int, list[Edge]] = {nid: [] for nid in self.nodes}
        for e in self.edges:
            out_by_src[e.src].append(e)
        while ready:
            nid = heapq.heappop(ready)
            order.append(nid)
            for e in out_by_src[nid]:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    heapq.heappush(ready, e.dst)
        if len(order) != len(self.nodes):
            raise InvalidGraphError("cycle during sharing pass")
        return order

    def rewire_consumers(self, old: int, new_src: int, sign: int = 1) -> None:
        self.edges = [
            e if e.src != old else Edge(new_src, e.dst, e.sign * sign) for e in self.edges
        ]

    def drop_dead(self) -> None:
        """Remove adds/delays with no remaining consumers, repeatedly."""
        while True:
            used = {e.src for e in self.edges}
            dead = [
                nid
                for nid, nd in self.nodes.items()
                if nd.kind in (KIND_ADD, KIND_DELAY) and nid not in used
            ]
            if not dead:
                return
            for nid in dead:
                del self.nodes[nid]
            dead_set = set(dead)
            self.edges = [e for e in self.edges if e.dst not in dead_set]

    def counts(self) -> tuple[int, int]:
        adds = sum(1 for nd in self.nodes.values() if nd.kind == KIND_ADD)
        delays = sum(nd.param for nd in self.nodes.values() if nd.kind == KIND_DELAY)
        return adds, delays

    def build(self) -> StructureGraph:
        nodes = [self.nodes[nid] for nid in sorted(self.nodes)]
        return StructureGraph(self.L, nodes, self.edges, scheme=self.scheme, n=self.n)


def _region_sources(w: _Work, region: str) -> set[int]:
    if region == REGION_INPUT:
        return {nid for nid, nd in w.nodes.items() if nd.kind == KIND_INPUT}
    return {nid for nid, nd in w.nodes.items() if nd.kind == KIND_SUBFILTER}


def _combos(w: _Work, region: str) -> dict[int, tuple]:
    """Linear combination of every region value, as a canonical tuple
    of (source id, delay-polynomial coeffs) pairs."""
    sources = _region_sources(w, region)
    combos: dict[int, dict[int, Poly]] = {}
    in_by_dst: dict[int, list[Edge]] = {nid: [] for nid in w.nodes}
    for e in w.edges:
        in_by_dst[e.dst].append(e)
    for nid in w.topo():
        nd = w.nodes[nid]
        if nid in sources:
            combos[nid] = {nid: Poly.const(1)}
            continue
        if nd.kind not in (KIND_ADD, KIND_DELAY):
            continue
        parts = [(e.src, e.sign) for e in in_by_dst[nid]]
        if any(src not in combos for src, _ in parts):
            continue  # outside the region
        acc: dict[int, Poly] = {}
        for src, sign in parts:
            for sym, poly in combos[src].items():
                term = poly if sign > 0 else -poly
                acc[sym] = acc.get(sym, Poly()) + term
        if nd.kind == KIND_DELAY:
            acc = {sym: poly.shifted(nd.param) for sym, poly in acc.items()}
        combos[nid] = {sym: poly for sym, poly in acc.items() if poly}
    out = {}
    for nid, acc in combos.items():
        out[nid] = tuple(sorted((sym, poly.coeffs) for sym, poly in acc.items()))
    return out


def _objective(w: _Work, region: str) -> tuple[int, int]:
    adds, delays = w.counts()
    return (delays, adds) if region == REGION_OUTPUT else (adds, delays)


def _cse(w: _Work, region: str) -> bool:
    combos = _combos(w, region)
    by_combo: dict[tuple, list[int]] = {}
    for nid in sorted(combos):
        if w.nodes[nid].kind in (KIND_ADD, KIND_DELAY):
            by_combo.setdefault(combos[nid], []).append(nid)
    changed = False
    for _, group in sorted(by_combo.items()):
        keep, rest = group[0], group[1:]
        for nid in rest:
            w.rewire_consumers(nid, keep)
            changed = True
    if changed:
        w.drop_dead()
    return changed


def _descendants(w: _Work, nid: int) -> set[int]:
    out_by_src: dict[int, list[Edge]] = {}
    for e in w.edges:
        out_by_src.setdefault(e.src, []).append(e)
    seen = {nid}
    stack = [nid]
    while stack:
        cur = stack.pop()
        for e in out_by_src.get(cur, ()):
            if e.dst not in seen:
                seen.add(e.dst)
                stack.append(e.dst)
    return seen


def _try_pair_rewrites(w: _Work, region: str) -> bool:
    """Replace one region node by an adder over two existing simpler values.

    Only decompositions into parts whose source supports are subsets of the
    target's count as sharing; rebuilding a small value as the difference
    of larger composites would trade real structure for accounting noise
    and breaks idempotence.
    """
    combos = _combos(w, region)
    supports = {nid: frozenset(sym for sym, _ in combos[nid]) for nid in combos}

    def combo_add(a: tuple, b: tuple, sa: int, sb: int) -> tuple:
        acc: dict[int, Poly] = {}
        for sym, c in a:
            acc[sym] = Poly(c) if sa > 0 else -Poly(c)
        for sym, c in b:
            term = Poly(c) if sb > 0 else -Poly(c)
            acc[sym] = acc.get(sym, Poly()) + term
        return tuple(sorted((sym, p.coeffs) for sym, p in acc.items() if p))

    base = _objective(w, region)
    candidates = [
        nid
        for nid in sorted(combos)
        if w.nodes[nid].kind in (KIND_ADD, KIND_DELAY) and len(supports[nid]) >= 2
    ]
    for m in candidates:
        target = combos[m]
        t_support = supports[m]
        below = _descendants(w, m)
        pool = [
            v
            for v in sorted(combos)
            if v != m
            and v not in below
            and supports[v] < t_support
        ]
        for u, v in itertools.combinations(pool, 2):
            if supports[u] | supports[v] != t_support:
                continue
            for su, sv in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                if combo_add(combos[u], combos[v], su, sv) != target:
                    continue
                snap_nodes = dict(w.nodes)
                snap_edges = list(w.edges)
                snap_next = w.next_id
                new = w.next_id
                w.next_id += 1
                w.nodes[new] = Node(new, KIND_ADD)
                w.edges.append(Edge(u, new, su))
                w.edges.append(Edge(v, new, sv))
                w.rewire_consumers(m, new)
                w.drop_dead()
                if new in w.nodes and _objective(w, region) < base:
                    return True
                w.nodes = snap_nodes
                w.edges = snap_edges
                w.next_id = snap_next
    return False


def _try_delay_hoist(w: _Work, region: str) -> bool:
    """Add(D(u), D(v)) -> D(Add(u, v)) when both delays are single use."""
    combos = _combos(w, region)
    base = _objective(w, region)
    out_count: dict[int, int] = {}
    for e in w.edges:
        out_count[e.src] = out_count.get(e.src, 0) + 1
    for nid in sorted(combos):
        nd = w.nodes[nid]
        if nd.kind != KIND_ADD:
            continue
        ins = w.in_edges(nid)
        srcs = [w.nodes[e.src] for e in ins]
        if not all(s.kind == KIND_DELAY and s.param == srcs[0].param for s in srcs):
            continue
        if any(out_count.get(s.id, 0) != 1 for s in srcs):
            continue
        d0, d1 = srcs
        u = w.in_edges(d0.id)[0]
        v = w.in_edges(d1.id)[0]
        snap_nodes = dict(w.nodes)
        snap_edges = list(w.edges)
        snap_next = w.next_id
        new_add = w.next_id
        new_delay = w.next_id + 1
        w.next_id += 2
        w.nodes[new_add] = Node(new_add, KIND_ADD)
        w.nodes[new_delay] = Node(new_delay, KIND_DELAY, d0.param)
        w.edges.append(Edge(u.src, new_add, u.sign * ins[0].sign))
        w.edges.append(Edge(v.src, new_add, v.sign * ins[1].sign))
        w.edges.append(Edge(new_add, new_delay, 1))
        w.rewire_consumers(nid, new_delay)
        w.edges = [e for e in w.edges if e.dst != nid]
        del w.nodes[nid]
        w.drop_dead()
        if _objective(w, region) < base:
            return True
        w.nodes = snap_nodes
        w.edges = snap_edges
        w.next_id = snap_next
    return False


def share_substructures(g: StructureGraph, region: str = REGION_INPUT) -> StructureGraph:
    """Behavior-preserving common-subexpression/delay sharing pass."""
    if region not in (REGION_INPUT, REGION_OUTPUT, REGION_BOTH):
        raise ValueError(f"unknown region {region!r}")
    bad = g.validate()
    if bad:
        raise InvalidGraphError("; ".join(bad))
    regions = [REGION_INPUT, REGION_OUTPUT] if region == REGION_BOTH else [region]
    w = _Work(g)
    boundary_before = {r: _boundary_combos(w, r) for r in regions}
    for r in regions:
        for _ in range(200):
            if _cse(w, r):
                continue
            if _try_pair_rewrites(w, r):
                continue
            if _try_delay_hoist(w, r):
                continue
            break
    for r in regions:
        if _boundary_combos(w, r) != boundary_before[r]:
            raise AssertionError("sharing pass altered a boundary combination")
    return w.build()


def _boundary_combos(w: _Work, region: str) -> dict:
    """Combinations seen by the region's consumers (subfilter feeds for the
    input side, output ports for the output side); rewrites must keep these
    fixed."""
    combos = _combos(w, region)
    sinks: dict = {}
    for e in w.edges:
        nd = w.nodes[e.dst]
        if region == REGION_INPUT and nd.kind == KIND_SUBFILTER:
            pass
        elif region == REGION_OUTPUT and nd.kind == KIND_OUTPUT:
            pass
        else:
            continue
        if e.src in combos:
            key = (nd.kind, nd.param if nd.kind == KIND_OUTPUT else e.dst)
            sinks[key] = (combos[e.src], e.sign)
    return sinks
