"""Single-atom games built from Python callables.

Each helper returns a :class:`GameGraph` whose boundary inputs feed the atom
and whose boundary outputs are the atom's outputs.  Compose them with the
combinators to build larger games.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .dist import Dist
from .graph import BOUNDARY, Decision, Function, GameGraph, Hole, Nature, Payoff, Port, Wire
from .types import WireType, pack_type, unpack


def _single(atom, inputs: Sequence[WireType], outputs: Sequence[WireType], players=()) -> GameGraph:
    wires = [Wire(Port(BOUNDARY, i), Port(atom.id, i), t) for i, t in enumerate(inputs)]
    wires += [Wire(Port(atom.id, j), Port(BOUNDARY, j), t) for j, t in enumerate(outputs)]
    return GameGraph((atom,), tuple(wires), tuple(inputs), tuple(outputs), frozenset(players))


def decision(atom_id: str, owner: str, obs: Sequence[WireType], action: WireType) -> GameGraph:
    return _single(Decision(atom_id, owner, tuple(obs), action), obs, (action,), (owner,))


def nature(
    atom_id: str,
    inputs: Sequence[WireType],
    out: WireType,
    table: Callable[..., Dist | Mapping] | Dist,
) -> GameGraph:
    """``table`` is a Dist (no inputs) or a callable of the unpacked inputs."""
    inputs = tuple(inputs)
    rows = {}
    for v in pack_type(inputs).values:
        d = table if isinstance(table, Dist) else table(*unpack(v, len(inputs)))
        rows[v] = d if isinstance(d, Dist) else Dist(d)
    return _single(Nature(atom_id, inputs, out, rows), inputs, (out,))


def function(atom_id: str, inputs: Sequence[WireType], outputs: Sequence[WireType], fn: Callable) -> GameGraph:
    """``fn`` takes the unpacked inputs; with one output it returns the value,
    otherwise a tuple of values."""
    inputs, outputs = tuple(inputs), tuple(outputs)
    rows = {}
    for v in pack_type(inputs).values:
        r = fn(*unpack(v, len(inputs)))
        rows[v] = (r,) if len(outputs) == 1 else tuple(r)
    return _single(Function(atom_id, inputs, outputs, rows), inputs, outputs)


def payoff(atom_id: str, beneficiary: str, inputs: Sequence[WireType], fn: Callable[..., float]) -> GameGraph:
    inputs = tuple(inputs)
    rows = {v: float(fn(*unpack(v, len(inputs)))) for v in pack_type(inputs).values}
    return _single(Payoff(atom_id, inputs, beneficiary, rows), inputs, (), (beneficiary,))


def hole(name: str, inputs: Sequence[WireType], outputs: Sequence[WireType]) -> GameGraph:
    return _single(Hole(name, tuple(inputs), tuple(outputs)), inputs, outputs)


def copy(t: WireType, n: int = 2, atom_id: str = "copy") -> GameGraph:
    """Duplicate one wire into ``n`` outputs (fan-out as a Function atom)."""
    return function(atom_id, (t,), (t,) * n, lambda v: (v,) * n if n != 1 else v)


def payoffs(
    prefix: str,
    inputs: Sequence[WireType],
    fns: Mapping[str, Callable[..., float]],
    passthrough: bool = True,
) -> GameGraph:
    """One Payoff atom per player, all reading every input (implicit fan-out).

    With ``passthrough`` the inputs are also the game's outputs.
    """
    inputs = tuple(inputs)
    atoms, wires = [], []
    for player in sorted(fns):
        fn = fns[player]
        atom_id = f"{prefix}{player}"
        rows = {v: float(fn(*unpack(v, len(inputs)))) for v in pack_type(inputs).values}
        atoms.append(Payoff(atom_id, inputs, player, rows))
        wires += [Wire(Port(BOUNDARY, i), Port(atom_id, i), t) for i, t in enumerate(inputs)]
    outputs = inputs if passthrough else ()
    if passthrough:
        wires += [Wire(Port(BOUNDARY, i), Port(BOUNDARY, i), t) for i, t in enumerate(inputs)]
    return GameGraph(tuple(atoms), tuple(wires), inputs, outputs, frozenset(fns))
