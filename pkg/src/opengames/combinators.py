"""The four game transforms: sequential, parallel, branching, substitution.

Each operator type-checks its operands, freshens atom ids with a
deterministic path prefix and returns a new :class:`GameGraph`.  Whenever
the preconditions hold the result passes :func:`validate_graph`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import BOUNDARY, EMPTY, Branch, GameGraph, Hole, Port, Wire, join_id, validate_graph
from .types import WireType


class CombinatorError(ValueError):
    pass


class InterfaceMismatch(CombinatorError):
    def __init__(self, message: str, *, position: int, expected=None, found=None, hole: str | None = None):
        super().__init__(message)
        self.position = position
        self.expected = expected
        self.found = found
        self.hole = hole


class ArmOutputMismatch(CombinatorError):
    pass


class DuplicateTag(CombinatorError):
    pass


class MissingBinding(CombinatorError):
    pass


class IdCollision(CombinatorError):
    pass


@dataclass(frozen=True)
class Interface:
    inputs: tuple[WireType, ...]
    outputs: tuple[WireType, ...]

    @classmethod
    def of(cls, g: GameGraph) -> Interface:
        return cls(g.inputs, g.outputs)

    def __str__(self) -> str:
        ins = ", ".join(map(str, self.inputs))
        outs = ", ".join(map(str, self.outputs))
        return f"({ins}) -> ({outs})"


@dataclass(frozen=True)
class GameTemplate:
    """A game body containing :class:`Hole` atoms, one per named hole."""

    body: GameGraph
    holes: tuple[tuple[str, Interface], ...]

    def __post_init__(self) -> None:
        holes = {a.id: a for a in self.body.atoms if isinstance(a, Hole)}
        names = [name for name, _ in self.holes]
        if sorted(names) != sorted(holes) or len(set(names)) != len(names):
            raise CombinatorError(f"template holes {names} do not match hole atoms {sorted(holes)}")
        for name, iface in self.holes:
            h = holes[name]
            if (h.inputs, h.outputs) != (iface.inputs, iface.outputs):
                raise CombinatorError(f"hole {name!r} ports do not match its interface {iface}")


def first_mismatch(expected: Sequence[WireType], found: Sequence[WireType]) -> int | None:
    for i, (e, f) in enumerate(zip(expected, found)):
        if e != f:
            return i
    if len(expected) != len(found):
        return min(len(expected), len(found))
    return None


def _merge(g1: GameGraph, g2: GameGraph) -> None:
    clash = sorted({a.id for a in g1.walk()} & {a.id for a in g2.walk()})
    if clash:
        raise IdCollision(f"atom ids collide after prefixing: {clash[:5]}")


def seq_compose(g1: GameGraph, g2: GameGraph, labels: tuple[str, str] = ("s1", "s2")) -> GameGraph:
    """Append ``g2`` after ``g1``: outputs of ``g1`` feed inputs of ``g2``."""
    pos = first_mismatch(g1.outputs, g2.inputs)
    if pos is not None:
        exp = g1.outputs[pos] if pos < len(g1.outputs) else None
        got = g2.inputs[pos] if pos < len(g2.inputs) else None
        raise InterfaceMismatch(
            f"sequential composition: output {pos} of the first game ({exp}) "
            f"does not match input {pos} of the second ({got})",
            position=pos,
            expected=exp,
            found=got,
        )
    a, b = g1.renamed(labels[0]), g2.renamed(labels[1])
    _merge(a, b)

    feed = {w.dst.index: w.src for w in a.wires if w.dst.node == BOUNDARY}
    wires = [w for w in a.wires if w.dst.node != BOUNDARY]
    for w in b.wires:
        if w.src.node == BOUNDARY:
            wires.append(Wire(feed[w.src.index], w.dst, w.type))
        else:
            wires.append(w)
    return GameGraph(a.atoms + b.atoms, tuple(wires), a.inputs, b.outputs, a.players | b.players)


def seq_all(games: Sequence[GameGraph], labels: Sequence[str]) -> GameGraph:
    """Left-to-right chain of several games, each prefixed by its label."""
    if len(games) != len(labels):
        raise ValueError("one label per game")
    if not games:
        raise ValueError("nothing to compose")
    acc = games[0].renamed(labels[0])
    for g, label in zip(games[1:], labels[1:]):
        acc = seq_compose(acc, g, ("", label))
    return acc


def par_compose(g1: GameGraph, g2: GameGraph, labels: tuple[str, str] = ("p1", "p2")) -> GameGraph:
    """Place two games side by side; boundary ports are concatenated."""
    a, b = g1.renamed(labels[0]), g2.renamed(labels[1])
    _merge(a, b)
    n_in, n_out = len(a.inputs), len(a.outputs)

    def shift(p: Port, as_source: bool) -> Port:
        if p.node != BOUNDARY:
            return p
        return Port(BOUNDARY, p.index + (n_in if as_source else n_out))

    wires = a.wires + tuple(Wire(shift(w.src, True), shift(w.dst, False), w.type) for w in b.wires)
    return GameGraph(a.atoms + b.atoms, wires, a.inputs + b.inputs, a.outputs + b.outputs, a.players | b.players)


def par_all(games: Sequence[GameGraph], labels: Sequence[str]) -> GameGraph:
    if len(games) != len(labels):
        raise ValueError("one label per game")
    acc = EMPTY
    for g, label in zip(games, labels):
        acc = par_compose(acc, g, ("", label))
    return acc


def branch(arms: Sequence[tuple[str, GameGraph]], name: str = "branch") -> GameGraph:
    """XOR choice between games selected by a Sum-typed input.

    The result has a single input whose type is the Sum over
    ``(tag, packed inputs of that arm)`` and the arms' shared outputs.
    """
    arms = list(arms)
    if len(arms) < 2:
        raise CombinatorError("branch needs at least two arms")
    tags = [t for t, _ in arms]
    dup = sorted({t for t in tags if tags.count(t) > 1})
    if dup:
        raise DuplicateTag(f"duplicate branch tags: {dup}")
    outputs = arms[0][1].outputs
    for tag, g in arms[1:]:
        if g.outputs != outputs:
            pos = first_mismatch(outputs, g.outputs)
            raise ArmOutputMismatch(
                f"arm {tag!r} outputs ({', '.join(map(str, g.outputs))}) differ from arm "
                f"{arms[0][0]!r} outputs ({', '.join(map(str, outputs))}) at position {pos}"
            )
    renamed = tuple((tag, g.renamed(join_id(name, tag))) for tag, g in arms)
    node = Branch(name, renamed, outputs)
    players = frozenset().union(*(g.players for _, g in arms))
    wires = [Wire(Port(BOUNDARY, 0), Port(name, 0), node.in_type)]
    wires += [Wire(Port(name, j), Port(BOUNDARY, j), t) for j, t in enumerate(outputs)]
    return GameGraph((node,), tuple(wires), (node.in_type,), outputs, players)


def inline(host: GameGraph, node_id: str, sub: GameGraph) -> GameGraph:
    """Replace atom ``node_id`` of ``host`` by ``sub`` (already renamed).

    ``sub`` must have the same port types as the replaced atom.
    """
    node = host.by_id[node_id]
    _merge(GameGraph(tuple(a for a in host.atoms if a.id != node_id)), sub)
    into = {w.dst.index: w.src for w in host.wires if w.dst.node == node_id}

    def resolve(src: Port) -> Port:
        # a source inside sub; boundary inputs of sub map to the host's feeds
        return into[src.index] if src.node == BOUNDARY else src

    out_src = {w.dst.index: resolve(w.src) for w in sub.wires if w.dst.node == BOUNDARY}
    wires = []
    for w in host.wires:
        if w.dst.node == node_id:
            continue
        if w.src.node == node_id:
            wires.append(Wire(out_src[w.src.index], w.dst, w.type))
        else:
            wires.append(w)
    for w in sub.wires:
        if w.dst.node == BOUNDARY:
            continue
        wires.append(Wire(resolve(w.src), w.dst, w.type))
    atoms = []
    for a in host.atoms:
        if a.id == node_id:
            atoms.extend(sub.atoms)
        else:
            atoms.append(a)
    assert len(node.inputs) == len(sub.inputs)
    return GameGraph(tuple(atoms), tuple(wires), host.inputs, host.outputs, host.players | sub.players)


def substitute(tpl: GameTemplate, bindings: Mapping[str, GameGraph]) -> GameGraph:
    """Fill every hole of ``tpl``; bound atoms are prefixed with the hole name."""
    g = tpl.body
    for name, iface in tpl.holes:
        if name not in bindings:
            raise MissingBinding(f"no binding for hole {name!r}")
        bound = bindings[name]
        for side, exp, got in (("input", iface.inputs, bound.inputs), ("output", iface.outputs, bound.outputs)):
            pos = first_mismatch(exp, got)
            if pos is not None:
                raise InterfaceMismatch(
                    f"hole {name!r}: {side} {pos} expects "
                    f"{exp[pos] if pos < len(exp) else 'nothing'}, bound game has "
                    f"{got[pos] if pos < len(got) else 'nothing'} "
                    f"(hole interface {iface}, bound {Interface.of(bound)})",
                    position=pos,
                    expected=exp[pos] if pos < len(exp) else None,
                    found=got[pos] if pos < len(got) else None,
                    hole=name,
                )
        g = inline(g, name, bound.renamed(name))
    extra = sorted(set(bindings) - {n for n, _ in tpl.holes})
    if extra:
        raise CombinatorError(f"bindings for unknown holes: {extra}")
    return g


def identity(types: Sequence[WireType]) -> GameGraph:
    """Wires straight through; no atoms."""
    types = tuple(types)
    wires = tuple(Wire(Port(BOUNDARY, i), Port(BOUNDARY, i), t) for i, t in enumerate(types))
    return GameGraph((), wires, types, types, frozenset())


def with_players(g: GameGraph, players) -> GameGraph:
    return GameGraph(g.atoms, g.wires, g.inputs, g.outputs, g.players | frozenset(players))


def check_closed(g: GameGraph) -> GameGraph:
    diags = validate_graph(g)
    if diags:
        raise CombinatorError("; ".join(str(d) for d in diags))
    return g
