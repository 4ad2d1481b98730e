"""Constraint-logic instance files: parse, validate, emit.

Line-oriented, diff-friendly text:

    # comment
    node x1 variable
    node g1 or
    node win victory defender
    edge x1.out -> g1.in1
    edge g1.out -> win.in

Arities are fixed per kind; the graph must be acyclic with exactly one
victory node carrying the winning side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple


class CircuitError(ValueError):
    pass


class ArityError(CircuitError):
    pass


class CycleError(CircuitError):
    pass


class MultipleVictoryError(CircuitError):
    pass


# kind -> (input ports, output ports)
PORT_ARITIES: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "variable": ((), ("out",)),
    "fanout": (("in",), ("out1", "out2")),
    "choice": (("in",), ("out1", "out2")),
    "and": (("in1", "in2"), ("out",)),
    "or": (("in1", "in2"), ("out",)),
    "victory": (("in",), ()),
}


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    side: Optional[str] = None  # victory nodes only: defender | attacker


@dataclass(frozen=True)
class Edge:
    src: str
    src_port: str
    dst: str
    dst_port: str

    @property
    def id(self) -> str:
        return f"{self.src}.{self.src_port}->{self.dst}.{self.dst_port}"


@dataclass
class CircuitGraph:
    nodes: Dict[str, Node] = field(default_factory=dict)
    edges: List[Edge] = field(default_factory=list)

    def victory(self) -> Optional[Node]:
        for node in self.nodes.values():
            if node.kind == "victory":
                return node
        return None

    def inputs_of(self, node_id: str) -> List[Edge]:
        return [e for e in self.edges if e.dst == node_id]

    def outputs_of(self, node_id: str) -> List[Edge]:
        return [e for e in self.edges if e.src == node_id]

    def variables(self) -> List[Node]:
        return sorted(
            (n for n in self.nodes.values() if n.kind == "variable"),
            key=lambda n: n.id,
        )

    def toposort(self) -> List[Node]:
        indeg = {nid: 0 for nid in self.nodes}
        for e in self.edges:
            indeg[e.dst] += 1
        ready = sorted(nid for nid, d in indeg.items() if d == 0)
        order: List[Node] = []
        while ready:
            nid = ready.pop(0)
            order.append(self.nodes[nid])
            for e in sorted(self.outputs_of(nid), key=lambda e: e.id):
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    ready.append(e.dst)
            ready.sort()
        if len(order) != len(self.nodes):
            raise CycleError("circuit graph contains a cycle")
        return order

    def validate(self) -> None:
        victories = [n for n in self.nodes.values() if n.kind == "victory"]
        if len(victories) > 1:
            raise MultipleVictoryError(f"{len(victories)} victory nodes")
        for v in victories:
            if v.side not in ("defender", "attacker"):
                raise CircuitError(f"victory node {v.id} needs a side")
        seen_in: Dict[Tuple[str, str], int] = {}
        seen_out: Dict[Tuple[str, str], int] = {}
        for e in self.edges:
            for nid, port, table, io in (
                (e.src, e.src_port, seen_out, 1),
                (e.dst, e.dst_port, seen_in, 0),
            ):
                if nid not in self.nodes:
                    raise CircuitError(f"edge references unknown node {nid!r}")
                kind = self.nodes[nid].kind
                ins, outs = PORT_ARITIES[kind]
                valid = outs if io else ins
                if port not in valid:
                    raise ArityError(f"{kind} node {nid} has no port {port!r}")
                key = (nid, port)
                table[key] = table.get(key, 0) + 1
                if table[key] > 1:
                    raise ArityError(f"port {nid}.{port} wired twice")
        for node in self.nodes.values():
            ins, outs = PORT_ARITIES[node.kind]
            for port in ins:
                if (node.id, port) not in seen_in:
                    raise ArityError(f"port {node.id}.{port} left unconnected")
            for port in outs:
                if (node.id, port) not in seen_out:
                    raise ArityError(f"port {node.id}.{port} left unconnected")
        self.toposort()


def parse_circuit(text: str) -> CircuitGraph:
    graph = CircuitGraph()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) < 3:
                raise CircuitError(f"line {lineno}: node needs an id and kind")
            _, nid, kind = parts[:3]
            side = parts[3] if len(parts) > 3 else None
            if kind not in PORT_ARITIES:
                raise CircuitError(f"line {lineno}: unknown node kind {kind!r}")
            if nid in graph.nodes:
                raise CircuitError(f"line {lineno}: duplicate node id {nid!r}")
            if kind != "victory" and side is not None:
                raise CircuitError(f"line {lineno}: only victory nodes take a side")
            graph.nodes[nid] = Node(nid, kind, side)
        elif parts[0] == "edge":
            rest = " ".join(parts[1:])
            if "->" not in rest:
                raise CircuitError(f"line {lineno}: edge needs 'src.port -> dst.port'")
            src_text, dst_text = (s.strip() for s in rest.split("->", 1))
            try:
                src, src_port = src_text.split(".")
                dst, dst_port = dst_text.split(".")
            except ValueError:
                raise CircuitError(
                    f"line {lineno}: edge endpoints must be node.port"
                ) from None
            graph.edges.append(Edge(src, src_port, dst, dst_port))
        else:
            raise CircuitError(f"line {lineno}: unknown directive {parts[0]!r}")
    graph.validate()
    return graph


def emit_circuit(graph: CircuitGraph) -> str:
    lines = []
    for node in sorted(graph.nodes.values(), key=lambda n: n.id):
        if node.kind == "victory":
            lines.append(f"node {node.id} victory {node.side}")
        else:
            lines.append(f"node {node.id} {node.kind}")
    for e in graph.edges:
        lines.append(f"edge {e.src}.{e.src_port} -> {e.dst}.{e.dst_port}")
    return "\n".join(lines) + "\n"
