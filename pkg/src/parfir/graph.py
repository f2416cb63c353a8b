"""Dataflow-graph IR for parallel filter structures.

A graph is a feed-forward network of five node kinds:

  input(port)       one of the L input phases
  output(port)      one of the L output phases, exactly one inbound edge
  add               signed two-input adder (subtraction = a -1 edge)
  delay(blocks)     storage of `blocks` block cycles (z^-(blocks*L) serial)
  subfilter(spec)   length-tap_len FIR whose taps are a signed combination
                    of polyphase phases of the tap vector

Node semantics are uniform: a node's value is the sign-weighted sum of its
inbound edges, passed through its own operation.  Graphs are immutable
after construction; all transforms return new graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

NETLIST_SCHEMA = "ffa-netlist/1"

KIND_INPUT = "input"
KIND_OUTPUT = "output"
KIND_ADD = "add"
KIND_DELAY = "delay"
KIND_SUBFILTER = "subfilter"

_KINDS = (KIND_INPUT, KIND_OUTPUT, KIND_ADD, KIND_DELAY, KIND_SUBFILTER)


class InvalidGraphError(ValueError):
    """Raised when an operation requires a structurally valid graph."""


class NetlistFormatError(ValueError):
    """Raised on malformed or wrong-schema netlist files."""


@dataclass(frozen=True)
class SubfilterSpec:
    """Signed combination over polyphase phase indices 0..L-1.

    The instantiated taps are sum_j combo[j] * phase_j(h), elementwise over
    tap positions; tap_len is the per-subfilter tap count N/L.
    """

    combo: tuple[int, ...]
    tap_len: int = 1

    def __post_init__(self):
        if not any(self.combo):
            raise ValueError("subfilter combo must have a nonzero entry")
        if self.tap_len < 1:
            raise ValueError("tap_len must be positive")


@dataclass(frozen=True)
class Node:
    id: int
    kind: str
    param: object = None  # port | blocks | SubfilterSpec


class Edge(NamedTuple):
    src: int
    dst: int
    sign: int


@dataclass(frozen=True)
class CostReport:
    additions: int
    delay_elements: int
    subfilters: int
    multiplications: int

    def as_dict(self) -> dict:
        return {
            "additions": self.additions,
            "delay_elements": self.delay_elements,
            "subfilters": self.subfilters,
            "multiplications": self.multiplications,
        }


class StructureGraph:
    """Immutable parallel-filter dataflow graph."""

    def __init__(
        self,
        L: int,
        nodes: Iterable[Node],
        edges: Iterable[Edge],
        scheme: str = "",
        n: int = 0,
        check: bool = True,
    ):
        self.L = L
        self.nodes = tuple(nodes)
        self.edges = tuple(Edge(*e) for e in edges)
        self.scheme = scheme
        self.n = n
        self._by_id = {nd.id: nd for nd in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise InvalidGraphError("duplicate node ids")
        self._in: dict[int, list[tuple[int, int]]] = {nd.id: [] for nd in self.nodes}
        self._out: dict[int, list[tuple[int, int]]] = {nd.id: [] for nd in self.nodes}
        for e in self.edges:
            if e.src not in self._by_id or e.dst not in self._by_id:
                raise InvalidGraphError(f"edge {e} references unknown node")
            self._in[e.dst].append((e.src, e.sign))
            self._out[e.src].append((e.dst, e.sign))
        self._topo: tuple[int, ...] | None = None
        if check:
            bad = self.validate()
            if bad:
                raise InvalidGraphError("; ".join(bad))

    def node(self, nid: int) -> Node:
        return self._by_id[nid]

    def in_edges(self, nid: int) -> list[tuple[int, int]]:
        return self._in[nid]

    def out_edges(self, nid: int) -> list[tuple[int, int]]:
        return self._out[nid]

    def nodes_of_kind(self, kind: str) -> list[Node]:
        return [nd for nd in self.nodes if nd.kind == kind]

    def input_ids_by_port(self) -> list[int]:
        ins = {nd.param: nd.id for nd in self.nodes if nd.kind == KIND_INPUT}
        return [ins[p] for p in range(self.L)]

    def output_ids_by_port(self) -> list[int]:
        outs = {nd.param: nd.id for nd in self.nodes if nd.kind == KIND_OUTPUT}
        return [outs[p] for p in range(self.L)]

    def topological_order(self) -> tuple[int, ...]:
        """Kahn order with ascending-id tie break; raises on cycles."""
        if self._topo is not None:
            return self._topo
        indeg = {nd.id: len(self._in[nd.id]) for nd in self.nodes}
        ready = sorted(nid for nid, d in indeg.items() if d == 0)
        order: list[int] = []
        import heapq

        heapq.heapify(ready)
        while ready:
            nid = heapq.heappop(ready)
            order.append(nid)
            for dst, _ in self._out[nid]:
                indeg[dst] -= 1
                if indeg[dst] == 0:
                    heapq.heappush(ready, dst)
        if len(order) != len(self.nodes):
            raise InvalidGraphError("graph has a cycle")
        self._topo = tuple(order)
        return self._topo

    def validate(self) -> list[str]:
        """Every violated structural invariant, with node ids; [] when valid."""
        bad: list[str] = []
        in_ports, out_ports = [], []
        for nd in self.nodes:
            k = len(self._in[nd.id])
            if nd.kind == KIND_INPUT:
                in_ports.append(nd.param)
                if k != 0:
                    bad.append(f"input arity: node {nd.id} has {k} inbound edges")
            elif nd.kind == KIND_OUTPUT:
                out_ports.append(nd.param)
                if k != 1:
                    bad.append(f"output arity: node {nd.id} has {k} inbound edges")
                if self._out[nd.id]:
                    bad.append(f"output fanout: node {nd.id} has outbound edges")
            elif nd.kind == KIND_ADD:
                if k != 2:
                    bad.append(f"add arity: node {nd.id} has {k} inbound edges")
            elif nd.kind == KIND_DELAY:
                if k != 1:
                    bad.append(f"delay arity: node {nd.id} has {k} inbound edges")
                if not isinstance(nd.param, int) or nd.param < 1:
                    bad.append(f"delay blocks: node {nd.id} has count {nd.param!r}")
            elif nd.kind == KIND_SUBFILTER:
                if k != 1:
                    bad.append(f"subfilter arity: node {nd.id} has {k} inbound edges")
                if not isinstance(nd.param, SubfilterSpec):
                    bad.append(f"subfilter spec: node {nd.id} has {nd.param!r}")
                elif len(nd.param.combo) != self.L:
                    bad.append(
                        f"subfilter combo length: node {nd.id} has "
                        f"{len(nd.param.combo)} entries for L={self.L}"
                    )
            else:
                bad.append(f"unknown kind: node {nd.id} is {nd.kind!r}")
        for e in self.edges:
            if e.sign not in (1, -1):
                bad.append(f"edge sign: {e}")
            elif e.sign == -1 and self._by_id[e.dst].kind in (KIND_DELAY, KIND_SUBFILTER):
                bad.append(f"signed edge into {self._by_id[e.dst].kind}: {e}")
        if sorted(in_ports) != list(range(self.L)):
            bad.append(f"input coverage: ports {sorted(in_ports)} for L={self.L}")
        if sorted(out_ports) != list(range(self.L)):
            bad.append(f"output coverage: ports {sorted(out_ports)} for L={self.L}")
        try:
            self.topological_order()
        except InvalidGraphError as exc:
            bad.append(str(exc))
            return bad
        # every node must lie on some input-to-output path
        fwd = {nd.id for nd in self.nodes if nd.kind == KIND_INPUT}
        for nid in self.topological_order():
            if nid in fwd:
                for dst, _ in self._out[nid]:
                    fwd.add(dst)
            elif any(src in fwd for src, _ in self._in[nid]):
                fwd.add(nid)
        bwd = {nd.id for nd in self.nodes if nd.kind == KIND_OUTPUT}
        for nid in reversed(self.topological_order()):
            if nid not in bwd and any(dst in bwd for dst, _ in self._out[nid]):
                bwd.add(nid)
        for nd in self.nodes:
            if nd.id not in fwd or nd.id not in bwd:
                bad.append(f"dangling: node {nd.id} not on an input-output path")
        return bad


class GraphBuilder:
    """Mutable constructor; node ids are assigned in creation order."""

    def __init__(self):
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []

    def _new(self, kind: str, param=None) -> int:
        nid = len(self.nodes)
        self.nodes.append(Node(nid, kind, param))
        return nid

    def input(self, port: int) -> int:
        return self._new(KIND_INPUT, port)

    def output(self, port: int, src: int, sign: int = 1) -> int:
        nid = self._new(KIND_OUTPUT, port)
        self.edges.append(Edge(src, nid, sign))
        return nid

    def add(self, a: int, sa: int, b: int, sb: int) -> int:
        nid = self._new(KIND_ADD)
        self.edges.append(Edge(a, nid, sa))
        self.edges.append(Edge(b, nid, sb))
        return nid

    def delay(self, src: int, blocks: int = 1) -> int:
        nid = self._new(KIND_DELAY, blocks)
        self.edges.append(Edge(src, nid, 1))
        return nid

    def subfilter(self, src: int, spec: SubfilterSpec) -> int:
        nid = self._new(KIND_SUBFILTER, spec)
        self.edges.append(Edge(src, nid, 1))
        return nid

    def build(self, L: int, scheme: str = "", n: int = 0, check: bool = True) -> StructureGraph:
        return StructureGraph(L, self.nodes, self.edges, scheme=scheme, n=n, check=check)


def count_costs(g: StructureGraph) -> CostReport:
    """Adder/delay/subfilter/multiplication totals of a valid graph."""
    bad = g.validate()
    if bad:
        raise InvalidGraphError("; ".join(bad))
    additions = sum(1 for nd in g.nodes if nd.kind == KIND_ADD)
    delay_elements = sum(nd.param for nd in g.nodes if nd.kind == KIND_DELAY)
    subs = [nd for nd in g.nodes if nd.kind == KIND_SUBFILTER]
    return CostReport(
        additions=additions,
        delay_elements=delay_elements,
        subfilters=len(subs),
        multiplications=sum(nd.param.tap_len for nd in subs),
    )


def transpose_graph(g: StructureGraph, scheme: str | None = None) -> StructureGraph:
    """Edge-reversed dual graph with flipped input/output port order.

    Adders become fan-out points and fan-out points become adders; a fan-in
    of k materializes as a chain of k-1 adders, built over the reversed
    edges in ascending original-destination order.  Signs ride along the
    reversed edges; a lone sign landing on a delay or subfilter is pushed
    through (both are linear) onto its outbound side.
    """
    bad = g.validate()
    if bad:
        raise InvalidGraphError("; ".join(bad))
    b = GraphBuilder()
    # handle per old node: (new node id, sign factor to apply at uses)
    handle: dict[int, tuple[int, int]] = {}

    def collect(contribs: list[tuple[int, int]]) -> tuple[int, int]:
        if len(contribs) == 1:
            return contribs[0]
        acc, sa = contribs[0]
        nxt, sb = contribs[1]
        acc = b.add(acc, sa, nxt, sb)
        for nid, s in contribs[2:]:
            acc = b.add(acc, 1, nid, s)
        return acc, 1

    order = list(reversed(g.topological_order()))
    for nid in order:
        nd = g.node(nid)
        # reversed inbound contributions, ordered by original destination id
        contribs = []
        for dst, sign in sorted(g.out_edges(nid)):
            src_new, factor = handle[dst]
            contribs.append((src_new, sign * factor))
        if nd.kind == KIND_OUTPUT:
            handle[nid] = (b.input(g.L - 1 - nd.param), 1)
        elif nd.kind == KIND_ADD:
            handle[nid] = collect(contribs)
        elif nd.kind == KIND_DELAY:
            wire, s = collect(contribs)
            handle[nid] = (b.delay(wire, nd.param), s)
        elif nd.kind == KIND_SUBFILTER:
            wire, s = collect(contribs)
            handle[nid] = (b.subfilter(wire, nd.param), s)
        elif nd.kind == KIND_INPUT:
            wire, s = collect(contribs)
            b.output(g.L - 1 - nd.param, wire, s)
    return b.build(g.L, scheme=scheme if scheme is not None else g.scheme, n=g.n)


def canonical_signature(g: StructureGraph):
    """Content signature, stable under node renumbering.

    Two graphs compare equal when they coincide up to (a) re-association
    of single-consumer adder chains, which transposition necessarily
    re-associates, and (b) propagation of a -1 through linear elements
    (an adder tree feeding a negated subfilter equals the negated tree
    feeding the plain subfilter).  Node kind counts are part of the
    signature, so all cost totals must still agree exactly.
    """
    import hashlib

    def intern(key: tuple) -> str:
        return hashlib.sha256(repr(key).encode()).hexdigest()

    node_sig: dict[int, str] = {}
    orient: dict[int, int] = {}

    def flat_terms(nid: int, sign: int) -> list[tuple[str, int]]:
        nd = g.node(nid)
        if nd.kind == KIND_ADD and len(g.out_edges(nid)) == 1:
            items: list[tuple[str, int]] = []
            for src, s in g.in_edges(nid):
                items.extend(flat_terms(src, sign * s))
            return items
        return [(node_sig[nid], sign * orient[nid])]

    for nid in g.topological_order():
        nd = g.node(nid)
        ins: list[tuple[str, int]] = []
        for src, s in g.in_edges(nid):
            ins.extend(flat_terms(src, s))
        ins.sort()
        flip = 1
        if nd.kind != KIND_OUTPUT and ins and ins[0][1] < 0:
            flip = -1
            ins = sorted((sig, -s) for sig, s in ins)
        ins_key = tuple(ins)
        if nd.kind == KIND_INPUT:
            key = (KIND_INPUT, nd.param)
        elif nd.kind == KIND_ADD:
            key = (KIND_ADD, ins_key)
        elif nd.kind == KIND_DELAY:
            key = (KIND_DELAY, nd.param, ins_key)
        elif nd.kind == KIND_SUBFILTER:
            combo = nd.param.combo
            lead = next(c for c in combo if c)
            if lead < 0:
                combo = tuple(-c for c in combo)
                flip = -flip
            key = (KIND_SUBFILTER, combo, nd.param.tap_len, ins_key)
        else:
            key = (KIND_OUTPUT, nd.param, ins_key)
        node_sig[nid] = intern(key)
        orient[nid] = flip
    kinds = tuple(sorted((nd.kind for nd in g.nodes)))
    outs = tuple(node_sig[nid] for nid in g.output_ids_by_port())
    return (g.L, kinds, outs)


def graphs_isomorphic(a: StructureGraph, b: StructureGraph) -> bool:
    return canonical_signature(a) == canonical_signature(b)


def _param_to_json(nd: Node):
    if nd.kind == KIND_SUBFILTER:
        return {"combo": list(nd.param.combo), "tap_len": nd.param.tap_len}
    return nd.param


def export_json(g: StructureGraph) -> str:
    doc = {
        "schema": NETLIST_SCHEMA,
        "L": g.L,
        "n": g.n,
        "scheme": g.scheme,
        "nodes": [{"id": nd.id, "kind": nd.kind, "param": _param_to_json(nd)} for nd in g.nodes],
        "edges": [{"from": e.src, "to": e.dst, "sign": e.sign} for e in g.edges],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def import_json(text: str) -> StructureGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetlistFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != NETLIST_SCHEMA:
        raise NetlistFormatError(f"expected schema {NETLIST_SCHEMA!r}, got {doc.get('schema')!r}")
    nodes = []
    for item in doc["nodes"]:
        kind, param = item["kind"], item["param"]
        if kind not in _KINDS:
            raise NetlistFormatError(f"unknown node kind {kind!r}")
        if kind == KIND_SUBFILTER:
            param = SubfilterSpec(tuple(param["combo"]), param["tap_len"])
        elif kind == KIND_DELAY:
            if not isinstance(param, int) or param < 1:
                raise NetlistFormatError(f"delay count must be a positive int, got {param!r}")
        nodes.append(Node(item["id"], kind, param))
    edges = [Edge(e["from"], e["to"], e["sign"]) for e in doc["edges"]]
    try:
        return StructureGraph(
            doc["L"], nodes, edges, scheme=doc.get("scheme", ""), n=doc.get("n", 0)
        )
    except InvalidGraphError as exc:
        raise NetlistFormatError(str(exc)) from exc


_DOT_SHAPE = {
    KIND_INPUT: "invhouse",
    KIND_OUTPUT: "house",
    KIND_ADD: "circle",
    KIND_DELAY: "box",
    KIND_SUBFILTER: "component",
}


def export_dot(g: StructureGraph) -> str:
    lines = ["digraph structure {", "  rankdir=LR;"]
    for nd in g.nodes:
        if nd.kind == KIND_INPUT:
            label = f"x{nd.param}"
        elif nd.kind == KIND_OUTPUT:
            label = f"y{nd.param}"
        elif nd.kind == KIND_ADD:
            label = "+"
        elif nd.kind == KIND_DELAY:
            label = f"D{nd.param}"
        else:
            label = "H[" + ",".join(map(str, nd.param.combo)) + "]"
        lines.append(f'  n{nd.id} [shape={_DOT_SHAPE[nd.kind]} label="{label}"];')
    for e in g.edges:
        attr = ' [label="-"]' if e.sign < 0 else ""
        lines.append(f"  n{e.src} -> n{e.dst}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
