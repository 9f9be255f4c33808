"""Typed game-graph intermediate representation.

A :class:`GameGraph` is an open game: a DAG of atoms joined by typed forward
wires, with an ordered list of boundary input ports (the ``X`` side) and
boundary output ports (the ``Y`` side).  Utilities never travel on wires; they
are emitted by :class:`Payoff` atoms and summed per player during analysis.

Port addressing: ``Port(node, index)``.  ``node == BOUNDARY`` denotes the
graph's own boundary: as a wire *source* it is boundary input ``index``, as a
wire *destination* it is boundary output ``index``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, NamedTuple, Union

from .diagnostics import Diagnostic
from .dist import TOLERANCE, Dist
from .types import WireType, WireValue, pack_type, typecheck

BOUNDARY = ""


class Port(NamedTuple):
    node: str
    index: int


class Wire(NamedTuple):
    src: Port
    dst: Port
    type: WireType


def join_id(prefix: str, local: str) -> str:
    return f"{prefix}/{local}" if prefix else local


@dataclass(frozen=True)
class Decision:
    id: str
    owner: str
    inputs: tuple[WireType, ...]
    action_type: WireType
    kind = "decision"

    @property
    def outputs(self) -> tuple[WireType, ...]:
        return (self.action_type,)

    @property
    def obs_type(self) -> WireType:
        return pack_type(self.inputs)


@dataclass(frozen=True)
class Nature:
    id: str
    inputs: tuple[WireType, ...]
    out_type: WireType
    table: Mapping[WireValue, Dist]
    kind = "nature"

    @property
    def outputs(self) -> tuple[WireType, ...]:
        return (self.out_type,)

    @property
    def obs_type(self) -> WireType:
        return pack_type(self.inputs)


@dataclass(frozen=True)
class Function:
    """Deterministic computation; ``table`` maps the packed input to a tuple
    holding one value per output port."""

    id: str
    inputs: tuple[WireType, ...]
    outputs: tuple[WireType, ...]
    table: Mapping[WireValue, tuple]
    kind = "function"

    @property
    def in_type(self) -> WireType:
        return pack_type(self.inputs)


@dataclass(frozen=True)
class Payoff:
    id: str
    inputs: tuple[WireType, ...]
    beneficiary: str
    table: Mapping[WireValue, float]
    kind = "payoff"

    @property
    def outputs(self) -> tuple[WireType, ...]:
        return ()

    @property
    def in_type(self) -> WireType:
        return pack_type(self.inputs)


@dataclass(frozen=True)
class Hole:
    """Placeholder for a game; only legal inside a template body."""

    id: str
    inputs: tuple[WireType, ...]
    outputs: tuple[WireType, ...]
    kind = "hole"


@dataclass(frozen=True)
class Branch:
    """XOR dispatch: the single Sum-typed input selects which arm runs.

    Arm ``i`` receives the unpacked payload of alternative ``i``; every arm
    produces the shared output ports.  Arm atom ids are global (already
    prefixed with ``<branch id>/<tag>/``).
    """

    id: str
    arms: tuple[tuple[str, "GameGraph"], ...]
    outputs: tuple[WireType, ...]
    kind = "branch"

    @property
    def in_type(self):
        from .types import Sum

        return Sum(tuple((tag, pack_type(g.inputs)) for tag, g in self.arms))

    @property
    def inputs(self) -> tuple[WireType, ...]:
        return (self.in_type,)


Atom = Union[Decision, Nature, Function, Payoff, Hole, Branch]


class Step(NamedTuple):
    atom: Atom
    in_slots: tuple[int, ...]
    out_slots: tuple[int, ...]
    arm_plans: tuple


class Plan(NamedTuple):
    steps: tuple[Step, ...]
    n_slots: int
    out_slots: tuple[int, ...]


@dataclass(frozen=True)
class GameGraph:
    atoms: tuple[Atom, ...] = ()
    wires: tuple[Wire, ...] = ()
    inputs: tuple[WireType, ...] = ()
    outputs: tuple[WireType, ...] = ()
    players: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "wires", tuple(self.wires))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "players", frozenset(self.players))

    def __getstate__(self):
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    @cached_property
    def by_id(self) -> dict[str, Atom]:
        return {a.id: a for a in self.atoms}

    def atom(self, atom_id: str) -> Atom:
        return self.by_id[atom_id]

    def walk(self) -> Iterator[Atom]:
        """All atoms, descending into branch arms."""
        for a in self.atoms:
            yield a
            if isinstance(a, Branch):
                for _, arm in a.arms:
                    yield from arm.walk()

    @cached_property
    def decisions(self) -> tuple[Decision, ...]:
        return tuple(sorted((a for a in self.walk() if isinstance(a, Decision)), key=lambda d: d.id))

    @cached_property
    def decision_index(self) -> dict[str, Decision]:
        return {d.id: d for d in self.decisions}

    def atom_count(self) -> int:
        return sum(1 for _ in self.walk())

    def renamed(self, prefix: str) -> GameGraph:
        if not prefix:
            return self
        return rename_graph(self, lambda i: join_id(prefix, i))

    @cached_property
    def plan(self) -> Plan:
        return _compile(self)


EMPTY = GameGraph()


def rename_atom(atom: Atom, fn) -> Atom:
    if isinstance(atom, Branch):
        arms = tuple((tag, rename_graph(g, fn)) for tag, g in atom.arms)
        return dataclasses.replace(atom, id=fn(atom.id), arms=arms)
    return dataclasses.replace(atom, id=fn(atom.id))


def rename_graph(g: GameGraph, fn) -> GameGraph:
    def port(p: Port) -> Port:
        return p if p.node == BOUNDARY else Port(fn(p.node), p.index)

    return GameGraph(
        atoms=tuple(rename_atom(a, fn) for a in g.atoms),
        wires=tuple(Wire(port(w.src), port(w.dst), w.type) for w in g.wires),
        inputs=g.inputs,
        outputs=g.outputs,
        players=g.players,
    )


def sources_of(g: GameGraph) -> dict[Port, Port]:
    """Destination port -> its (unique, in a valid graph) source port."""
    return {w.dst: w.src for w in g.wires}


def topological_order(g: GameGraph) -> tuple[list[Atom], list[Atom]]:
    """Kahn's algorithm, ties broken by atom id.  Returns (ordered, cyclic)."""
    import heapq

    ids = g.by_id
    indeg = {a.id: 0 for a in g.atoms}
    succ: dict[str, set[str]] = {a.id: set() for a in g.atoms}
    for w in g.wires:
        s, d = w.src.node, w.dst.node
        if s == BOUNDARY or d == BOUNDARY or s not in ids or d not in ids:
            continue
        if d not in succ[s]:
            succ[s].add(d)
            indeg[d] += 1
    heap = [i for i, n in indeg.items() if n == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(ids[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    done = {a.id for a in order}
    cyclic = sorted((a for a in g.atoms if a.id not in done), key=lambda a: a.id)
    return order, cyclic


def _compile(g: GameGraph) -> Plan:
    order, cyclic = topological_order(g)
    if cyclic:
        raise ValueError(f"graph has a cycle through {[a.id for a in cyclic]}")
    slot: dict[Port, int] = {Port(BOUNDARY, i): i for i in range(len(g.inputs))}
    n = len(g.inputs)
    for a in order:
        for j in range(len(a.outputs)):
            slot[Port(a.id, j)] = n
            n += 1
    src = sources_of(g)
    steps = []
    for a in order:
        ins = tuple(slot[src[Port(a.id, k)]] for k in range(len(a.inputs)))
        outs = tuple(slot[Port(a.id, j)] for j in range(len(a.outputs)))
        arm_plans = tuple(arm.plan for _, arm in a.arms) if isinstance(a, Branch) else ()
        steps.append(Step(a, ins, outs, arm_plans))
    out_slots = tuple(slot[src[Port(BOUNDARY, i)]] for i in range(len(g.outputs)))
    return Plan(tuple(steps), n, out_slots)


# -- validation -------------------------------------------------------------


def validate_graph(g: GameGraph, *, allow_holes: bool = False) -> list[Diagnostic]:
    """Check every GameGraph invariant; an empty list means well-typed."""
    diags: list[Diagnostic] = []
    seen: dict[str, int] = {}
    for a in g.walk():
        seen[a.id] = seen.get(a.id, 0) + 1
    for atom_id, count in sorted(seen.items()):
        if count > 1:
            diags.append(Diagnostic("graph.duplicate-id", f"atom id {atom_id!r} used {count} times", atom_id))
    _validate_level(g, diags, allow_holes)
    return diags


def _port_type(g: GameGraph, p: Port, as_source: bool) -> WireType | None:
    if p.node == BOUNDARY:
        ports = g.inputs if as_source else g.outputs
    else:
        a = g.by_id.get(p.node)
        if a is None:
            return None
        ports = a.outputs if as_source else a.inputs
    return ports[p.index] if 0 <= p.index < len(ports) else None


def _fmt(p: Port, as_source: bool) -> str:
    if p.node == BOUNDARY:
        return f"<{'in' if as_source else 'out'}{p.index}>"
    return f"{p.node}.{p.index}"


def _validate_level(g: GameGraph, diags: list[Diagnostic], allow_holes: bool) -> None:
    feeds: dict[Port, int] = {}
    for w in g.wires:
        name = f"{_fmt(w.src, True)} -> {_fmt(w.dst, False)}"
        st = _port_type(g, w.src, True)
        dt = _port_type(g, w.dst, False)
        if st is None:
            diags.append(Diagnostic("graph.bad-port", f"wire {name}: no such source port", name))
        if dt is None:
            diags.append(Diagnostic("graph.bad-port", f"wire {name}: no such destination port", name))
        if st is not None and dt is not None and not (st == w.type == dt):
            diags.append(
                Diagnostic(
                    "graph.type-mismatch",
                    f"wire {name}: source {st}, wire {w.type}, destination {dt}",
                    name,
                )
            )
        feeds[w.dst] = feeds.get(w.dst, 0) + 1

    for a in g.atoms:
        for k in range(len(a.inputs)):
            n = feeds.get(Port(a.id, k), 0)
            if n == 0:
                diags.append(Diagnostic("graph.unconnected-input", f"input {k} of {a.id!r} has no source", a.id))
            elif n > 1:
                diags.append(Diagnostic("graph.duplicate-feed", f"input {k} of {a.id!r} has {n} sources", a.id))
    for i in range(len(g.outputs)):
        n = feeds.get(Port(BOUNDARY, i), 0)
        if n == 0:
            diags.append(Diagnostic("graph.unfed-output", f"boundary output {i} has no source", f"<out{i}>"))
        elif n > 1:
            diags.append(Diagnostic("graph.duplicate-feed", f"boundary output {i} has {n} sources", f"<out{i}>"))

    _, cyclic = topological_order(g)
    if cyclic:
        ids = ", ".join(a.id for a in cyclic)
        diags.append(Diagnostic("graph.cycle", f"forward wiring has a cycle among: {ids}", cyclic[0].id))

    for a in g.atoms:
        for player in _players_of(a):
            if player not in g.players:
                diags.append(Diagnostic("graph.unknown-player", f"{a.id!r} refers to undeclared player {player!r}", a.id))
        if isinstance(a, Hole) and not allow_holes:
            diags.append(Diagnostic("graph.unbound-hole", f"hole {a.id!r} is not bound", a.id))
        if isinstance(a, Branch):
            _validate_branch(g, a, diags, allow_holes)
        else:
            _validate_table(a, diags)


def _players_of(a: Atom) -> list[str]:
    if isinstance(a, Decision):
        return [a.owner]
    if isinstance(a, Payoff):
        return [a.beneficiary]
    return []


def _validate_table(a: Atom, diags: list[Diagnostic]) -> None:
    if isinstance(a, (Decision, Hole)):
        return
    in_type = pack_type(a.inputs)
    for v in in_type.values:
        if v not in a.table:
            diags.append(Diagnostic("graph.table", f"table of {a.id!r} is not total (missing {v!r})", a.id))
            return
        row = a.table[v]
        if isinstance(a, Nature):
            if not isinstance(row, Dist) or abs(row.total() - 1.0) > TOLERANCE:
                diags.append(Diagnostic("graph.table", f"{a.id!r}: invalid distribution at {v!r}", a.id))
                return
            if any(not typecheck(u, a.out_type) for u in row.values()):
                diags.append(Diagnostic("graph.table", f"{a.id!r}: ill-typed outcome at {v!r}", a.id))
                return
        elif isinstance(a, Function):
            if len(row) != len(a.outputs) or not all(typecheck(u, t) for u, t in zip(row, a.outputs)):
                diags.append(Diagnostic("graph.table", f"{a.id!r}: ill-typed result at {v!r}", a.id))
                return
        elif isinstance(a, Payoff):
            if not isinstance(row, (int, float)) or not math.isfinite(row):
                diags.append(Diagnostic("graph.table", f"{a.id!r}: non-finite utility at {v!r}", a.id))
                return
    if len(a.table) != in_type.cardinality:
        diags.append(Diagnostic("graph.table", f"table of {a.id!r} has entries outside its input type", a.id))


def _validate_branch(g: GameGraph, b: Branch, diags: list[Diagnostic], allow_holes: bool) -> None:
    if len(b.arms) < 2:
        diags.append(Diagnostic("graph.branch", f"branch {b.id!r} needs at least two arms", b.id))
    tags = [t for t, _ in b.arms]
    if len(set(tags)) != len(tags):
        diags.append(Diagnostic("graph.branch", f"branch {b.id!r} has duplicate tags", b.id))
        return
    for tag, arm in b.arms:
        if arm.outputs != b.outputs:
            diags.append(Diagnostic("graph.branch", f"arm {tag!r} of {b.id!r} has outputs {arm.outputs}", b.id))
        missing = arm.players - g.players
        if missing:
            diags.append(
                Diagnostic("graph.unknown-player", f"arm {tag!r} of {b.id!r} uses undeclared players {sorted(missing)}", b.id)
            )
        _validate_level(arm, diags, allow_holes)
