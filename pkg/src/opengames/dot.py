"""String diagrams as Graphviz DOT text.

Time runs left to right.  Atoms become nodes shaped by kind; forward wires
are solid edges labelled with their type; every Payoff gets a dashed edge
back to each Decision of its beneficiary.  Boundary ports are point nodes
named ``in:<i>`` / ``out:<i>``; a branch's shared outputs leave through a
point node ``<branch id>:out``.  Branch arms are drawn as clusters.
Node ids with a ``:`` are ports, all others are atoms.
"""

from __future__ import annotations

from .graph import BOUNDARY, Branch, Decision, Function, GameGraph, Hole, Nature, Payoff
from .types import format_type

SHAPES = {
    "function": "box",
    "decision": "diamond",
    "nature": "ellipse",
    "payoff": "note",
    "hole": "box3d",
    "branch": "trapezium",
}


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _label(a) -> str:
    if isinstance(a, Decision):
        return f"{a.id}\n{a.owner}: {format_type(a.action_type)}"
    if isinstance(a, Payoff):
        return f"{a.id}\nU[{a.beneficiary}]"
    if isinstance(a, Nature):
        return f"{a.id}\n~ {format_type(a.out_type)}"
    if isinstance(a, (Function, Hole, Branch)):
        return a.id
    raise TypeError(f"unknown atom {a!r}")


class _Emitter:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def emit(self, text: str, depth: int) -> None:
        self.lines.append("  " * depth + text)

    def graph(self, g: GameGraph, depth: int, src_boundary, dst_boundary) -> None:
        """Nodes then edges of ``g``; boundary endpoints map through the callbacks."""
        for a in sorted(g.atoms, key=lambda a: a.id):
            self.emit(f"{_q(a.id)} [shape={SHAPES[a.kind]}, label={_q(_label(a))}];", depth)
            if isinstance(a, Branch):
                self.branch(a, depth)

        def src_of(port):
            if port.node == BOUNDARY:
                return src_boundary(port.index)
            if isinstance(g.by_id[port.node], Branch):
                return f"{port.node}:out", ""
            return port.node, ""

        def dst_of(port):
            return dst_boundary(port.index)[0] if port.node == BOUNDARY else port.node

        for w in sorted(g.wires, key=lambda w: (w.src.node, w.src.index, w.dst.node, w.dst.index)):
            src, prefix = src_of(w.src)
            self.emit(f"{_q(src)} -> {_q(dst_of(w.dst))} [label={_q(prefix + format_type(w.type))}];", depth)

    def branch(self, b: Branch, depth: int) -> None:
        merge = f"{b.id}:out"
        self.emit(f"{_q(merge)} [shape=point];", depth)
        for tag, arm in b.arms:
            self.emit(f"subgraph {_q('cluster_' + b.id + '/' + tag)} {{", depth)
            self.emit(f"label={_q(tag)};", depth + 1)
            self.emit("style=dashed;", depth + 1)
            self.graph(
                arm,
                depth + 1,
                src_boundary=lambda i, tag=tag: (b.id, f"{tag}: "),
                dst_boundary=lambda i: (merge, ""),
            )
            self.emit("}", depth)


def to_dot(g: GameGraph, name: str = "game") -> str:
    out = _Emitter()
    out.emit(f"digraph {_q(name)} {{", 0)
    out.emit("rankdir=LR;", 1)
    out.emit('node [fontname="Helvetica"];', 1)
    out.emit('edge [fontname="Helvetica", fontsize=10];', 1)
    for i, t in enumerate(g.inputs):
        out.emit(f'"in:{i}" [shape=point, xlabel={_q(format_type(t))}];', 1)
    for i, t in enumerate(g.outputs):
        out.emit(f'"out:{i}" [shape=point, xlabel={_q(format_type(t))}];', 1)
    out.graph(g, 1, src_boundary=lambda i: (f"in:{i}", ""), dst_boundary=lambda i: (f"out:{i}", ""))
    owned: dict[str, list[str]] = {}
    for d in g.decisions:
        owned.setdefault(d.owner, []).append(d.id)
    payoffs = sorted((a for a in g.walk() if isinstance(a, Payoff)), key=lambda a: a.id)
    for p in payoffs:
        for did in owned.get(p.beneficiary, []):
            out.emit(f"{_q(p.id)} -> {_q(did)} [style=dashed, constraint=false];", 1)
    out.emit("}", 0)
    return "\n".join(out.lines) + "\n"
