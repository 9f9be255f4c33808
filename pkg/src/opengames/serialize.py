"""Canonical JSON form of graphs and an id-independent structural hash."""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict

from .graph import BOUNDARY, Branch, Decision, Function, GameGraph, Hole, Nature, Payoff, rename_graph
from .types import format_value, type_to_json


def _types(ts) -> list:
    return [type_to_json(t) for t in ts]


def _num(x: float) -> float | int:
    return int(x) if float(x).is_integer() and abs(x) < 2**53 else float(x)


def atom_to_json(a, with_id: bool = True) -> dict:
    out: dict = {"id": a.id} if with_id else {}
    out["kind"] = a.kind
    if isinstance(a, Branch):
        out["arms"] = [[tag, graph_to_json(g, with_id)] for tag, g in a.arms]
        out["outputs"] = _types(a.outputs)
        return out
    out["inputs"] = _types(a.inputs)
    if isinstance(a, Decision):
        out["owner"] = a.owner
        out["action"] = type_to_json(a.action_type)
    elif isinstance(a, Nature):
        out["output"] = type_to_json(a.out_type)
        out["table"] = [
            [format_value(k), [[format_value(v), _num(p)] for v, p in d.support]] for k, d in sorted(a.table.items())
        ]
    elif isinstance(a, Function):
        out["outputs"] = _types(a.outputs)
        out["table"] = [[format_value(k), [format_value(v) for v in row]] for k, row in sorted(a.table.items())]
    elif isinstance(a, Payoff):
        out["beneficiary"] = a.beneficiary
        out["table"] = [[format_value(k), _num(u)] for k, u in sorted(a.table.items())]
    elif isinstance(a, Hole):
        out["outputs"] = _types(a.outputs)
    return out


def graph_to_json(g: GameGraph, with_id: bool = True) -> dict:
    """Stable JSON structure: atoms sorted by id, wires sorted by endpoints."""
    wires = sorted(g.wires, key=lambda w: (w.dst.node, w.dst.index, w.src.node, w.src.index))
    return {
        "inputs": _types(g.inputs),
        "outputs": _types(g.outputs),
        "players": sorted(g.players),
        "atoms": [atom_to_json(a, with_id) for a in sorted(g.atoms, key=lambda a: a.id)],
        "wires": [
            [[w.src.node, w.src.index], [w.dst.node, w.dst.index], type_to_json(w.type)] for w in wires
        ],
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def graph_json_text(g: GameGraph) -> str:
    return json.dumps(graph_to_json(g), sort_keys=True, indent=2) + "\n"


def _digest(obj) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


def canonical_hash(g: GameGraph, rounds: int | None = None) -> str:
    """Hash of the wiring structure that ignores atom ids.

    Colour refinement over the atom graph: each atom starts from its id-free
    description (branch arms hashed recursively) and is refined by the
    colours of its neighbours along typed, port-indexed wires.
    """
    color: dict[str, str] = {}
    for a in g.atoms:
        if isinstance(a, Branch):
            desc = {"kind": "branch", "arms": [[t, canonical_hash(x)] for t, x in a.arms], "outputs": _types(a.outputs)}
        else:
            desc = atom_to_json(a, with_id=False)
        color[a.id] = _digest(desc)
    color[BOUNDARY] = "boundary"
    ins = defaultdict(list)
    outs = defaultdict(list)
    for w in g.wires:
        ins[w.dst.node].append((w.dst.index, w.src.node, w.src.index))
        outs[w.src.node].append((w.src.index, w.dst.node, w.dst.index))
    n = len(g.atoms) + 1 if rounds is None else rounds
    for _ in range(n):
        new = {}
        for node in color:
            if node == BOUNDARY:
                new[node] = "boundary"
                continue
            sig = [
                color[node],
                sorted((i, color[s], j) for i, s, j in ins[node]),
                sorted((i, color[d], j) for i, d, j in outs[node]),
            ]
            new[node] = _digest(sig)
        if len(set(new.values())) == len(set(color.values())):
            color = new
            break
        color = new
    boundary_wires = sorted(
        (color[w.src.node], w.src.index, color[w.dst.node], w.dst.index)
        for w in g.wires
        if BOUNDARY in (w.src.node, w.dst.node)
    )
    summary = {
        "inputs": _types(g.inputs),
        "outputs": _types(g.outputs),
        "players": sorted(g.players),
        "atoms": sorted(color[a.id] for a in g.atoms),
        "boundary": boundary_wires,
    }
    return _digest(summary)


def subgraph(g: GameGraph, prefix: str) -> GameGraph:
    """Atoms whose id starts with ``prefix/`` and the wires among them,
    with the prefix stripped; cut wires are dropped."""
    p = prefix + "/"
    atoms = tuple(a for a in g.atoms if a.id.startswith(p))
    keep = {a.id for a in atoms}
    inner = GameGraph(
        atoms,
        tuple(w for w in g.wires if w.src.node in keep and w.dst.node in keep),
        (),
        (),
        frozenset(),
    )
    return rename_graph(inner, lambda i: i[len(p):] if i.startswith(p) else i)
