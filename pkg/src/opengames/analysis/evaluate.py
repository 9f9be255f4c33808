"""Forward and backward semantics of game graphs.

Evaluation expands *worlds*: joint assignments of every wire value together
with their probability and the utilities emitted so far.  Atoms run in
topological order; Nature atoms split worlds, branch atoms run only the arm
selected in each world.  Working with joint worlds rather than per-wire
marginals keeps fanned-out values correlated, which the expected-utility
computation needs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from ..dist import Dist
from ..graph import Branch, Decision, Function, GameGraph, Nature, Payoff, Plan
from ..types import WireValue, format_value, pack, pack_type, parse_value, unpack

Cell = tuple  # (decision id, observation value)


class Undetermined(Exception):
    """Evaluation reached a decision cell the (partial) profile leaves open."""

    def __init__(self, cell: Cell):
        super().__init__(cell)
        self.cell = cell


class StrategyProfile:
    """Pure behavioural strategies: decision id -> {observation -> action}."""

    __slots__ = ("_cells",)

    def __init__(self, choices: Mapping[str, Mapping[WireValue, WireValue]] | None = None, *, cells=None):
        if cells is not None:
            self._cells = dict(cells)
        else:
            self._cells = {(d, o): a for d, row in (choices or {}).items() for o, a in row.items()}

    @classmethod
    def from_cells(cls, cells: Mapping[Cell, WireValue]) -> StrategyProfile:
        return cls(cells=cells)

    @classmethod
    def uniform_choice(cls, g: GameGraph, pick: Callable[[list], WireValue] = lambda xs: xs[0]) -> StrategyProfile:
        return cls.from_cells(
            {(d.id, o): pick(list(d.action_type.values)) for d in g.decisions for o in d.obs_type.values}
        )

    def action(self, decision_id: str, obs: WireValue) -> WireValue:
        return self._cells[(decision_id, obs)]

    @property
    def cells(self) -> dict[Cell, WireValue]:
        return self._cells

    def replace(self, decision_id: str, obs: WireValue, action: WireValue) -> StrategyProfile:
        cells = dict(self._cells)
        cells[(decision_id, obs)] = action
        return StrategyProfile(cells=cells)

    def missing(self, g: GameGraph) -> list[str]:
        """Decision ids whose observation table is incomplete."""
        out = []
        for d in g.decisions:
            if any((d.id, o) not in self._cells for o in d.obs_type.values):
                out.append(d.id)
        return out

    def completed(self, g: GameGraph) -> StrategyProfile:
        """Fill unspecified cells with the first action (canonical order)."""
        cells = {}
        for d in g.decisions:
            first = d.action_type.values[0]
            for o in d.obs_type.values:
                cells[(d.id, o)] = self._cells.get((d.id, o), first)
        return StrategyProfile(cells=cells)

    def key(self, g: GameGraph) -> tuple:
        """Canonical sort key: action indices over all cells in canonical order."""
        out = []
        for d in g.decisions:
            acts = d.action_type.values
            index = {a: i for i, a in enumerate(acts)}
            for o in d.obs_type.values:
                a = self._cells.get((d.id, o))
                out.append(index[a] if a is not None else -1)
        return tuple(out)

    def as_dict(self) -> dict[str, dict]:
        out: dict[str, dict] = defaultdict(dict)
        for (d, o), a in self._cells.items():
            out[d][o] = a
        return dict(out)

    def to_json(self, g: GameGraph) -> dict:
        out = {}
        for d in g.decisions:
            row = {}
            for o in d.obs_type.values:
                if (d.id, o) in self._cells:
                    row[format_value(o)] = format_value(self._cells[(d.id, o)])
            out[d.id] = row
        return out

    @classmethod
    def from_json(cls, g: GameGraph, data: Mapping[str, Mapping[str, str]]) -> StrategyProfile:
        cells = {}
        decisions = g.decision_index
        for did, row in data.items():
            if did not in decisions:
                raise KeyError(f"unknown decision id {did!r}")
            d = decisions[did]
            for obs_text, act_text in row.items():
                cells[(did, parse_value(obs_text, d.obs_type))] = parse_value(act_text, d.action_type)
        return cls(cells=cells)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StrategyProfile) and self._cells == other._cells

    def __hash__(self) -> int:
        return hash(frozenset(self._cells.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{d}[{format_value(o)}]={format_value(a)}" for (d, o), a in sorted(self._cells.items()))
        return f"StrategyProfile({body})"


Continuation = Callable[[WireValue], Mapping[str, float]] | Mapping[WireValue, Mapping[str, float]] | None


@dataclass(frozen=True)
class Context:
    """Environment of an open game: input distribution plus continuation."""

    input_dist: Dist
    continuation: Continuation = None

    def payoff(self, out: WireValue) -> Mapping[str, float]:
        c = self.continuation
        if c is None:
            return {}
        if callable(c):
            return c(out)
        return c[out]


def closed_context(g: GameGraph) -> Context:
    """Uniform inputs (a point mass for input-free games), zero continuation."""
    return Context(Dist.uniform(pack_type(g.inputs).values))


# -- the world engine -------------------------------------------------------

World = tuple  # (values list, weight, utilities dict)


def _run(plan: Plan, inputs: tuple, weight: float, lookup, reach, utils=None) -> list:
    worlds = [([*inputs, *([None] * (plan.n_slots - len(inputs)))], weight, utils or {})]
    for step in plan.steps:
        a = step.atom
        ins = step.in_slots
        nxt = []
        if isinstance(a, Function):
            table, outs = a.table, step.out_slots
            for vals, w, u in worlds:
                arg = vals[ins[0]] if len(ins) == 1 else tuple(vals[s] for s in ins)
                if reach is not None:
                    reach[a.id][arg] += w
                for s, v in zip(outs, table[arg]):
                    vals[s] = v
            continue
        if isinstance(a, Decision):
            out = step.out_slots[0]
            for vals, w, u in worlds:
                arg = vals[ins[0]] if len(ins) == 1 else tuple(vals[s] for s in ins)
                if reach is not None:
                    reach[a.id][arg] += w
                vals[out] = lookup(a.id, arg)
            continue
        if isinstance(a, Payoff):
            table, who = a.table, a.beneficiary
            for vals, w, u in worlds:
                arg = vals[ins[0]] if len(ins) == 1 else tuple(vals[s] for s in ins)
                if reach is not None:
                    reach[a.id][arg] += w
                u = dict(u)
                u[who] = u.get(who, 0.0) + table[arg]
                nxt.append((vals, w, u))
            worlds = nxt
            continue
        if isinstance(a, Nature):
            out = step.out_slots[0]
            for vals, w, u in worlds:
                arg = vals[ins[0]] if len(ins) == 1 else tuple(vals[s] for s in ins)
                if reach is not None:
                    reach[a.id][arg] += w
                support = a.table[arg].support
                if len(support) == 1:
                    vals[out] = support[0][0]
                    nxt.append((vals, w, u))
                    continue
                for v, p in support:
                    copy = list(vals)
                    copy[out] = v
                    nxt.append((copy, w * p, u))
            worlds = nxt
            continue
        if isinstance(a, Branch):
            outs = step.out_slots
            for vals, w, u in worlds:
                tagged = vals[ins[0]]
                if reach is not None:
                    reach[a.id][tagged] += w
                tag, arm = a.arms[tagged.index]
                arm_plan = step.arm_plans[tagged.index]
                arm_inputs = unpack(tagged.value, len(arm.inputs))
                for arm_outs, w2, u2 in _run(arm_plan, arm_inputs, w, lookup, reach, u):
                    copy = list(vals)
                    for s, v in zip(outs, arm_outs):
                        copy[s] = v
                    nxt.append((copy, w2, u2))
            worlds = nxt
            continue
        raise TypeError(f"cannot evaluate atom {a!r}")
    outs = plan.out_slots
    return [(tuple(vals[s] for s in outs), w, u) for vals, w, u in worlds]


def run_worlds(g: GameGraph, lookup, ctx: Context, reach=None) -> list:
    """All terminal worlds ``(output tuple, probability, utilities)``."""
    plan = g.plan
    arity = len(g.inputs)
    result = []
    for value, p in ctx.input_dist:
        result.extend(_run(plan, unpack(value, arity), p, lookup, reach))
    return result


def cell_lookup(cells: Mapping[Cell, WireValue]):
    def lookup(did, obs):
        try:
            return cells[(did, obs)]
        except KeyError:
            raise Undetermined((did, obs)) from None

    return lookup


@dataclass
class ForwardResult:
    output_dist: Dist
    reach: dict[str, dict[WireValue, float]] = field(default_factory=dict)

    def decision_reach(self, g: GameGraph) -> dict[Cell, float]:
        out = {}
        for d in g.decisions:
            for obs, p in sorted(self.reach.get(d.id, {}).items()):
                if p > 0:
                    out[(d.id, obs)] = p
        return out


def forward_eval(g: GameGraph, sigma: StrategyProfile, input_dist: Dist) -> ForwardResult:
    reach: dict = defaultdict(lambda: defaultdict(float))
    worlds = run_worlds(g, cell_lookup(sigma.cells), Context(input_dist), reach)
    out: dict = defaultdict(float)
    for outs, w, _ in worlds:
        out[pack(outs)] += w
    reach_plain = {k: dict(v) for k, v in reach.items()}
    return ForwardResult(Dist(out.items()), reach_plain)


def expected_utilities(g: GameGraph, worlds: Iterable, ctx: Context) -> dict[str, float]:
    totals = {p: 0.0 for p in sorted(g.players)}
    for outs, w, u in worlds:
        for p, x in u.items():
            totals[p] = totals.get(p, 0.0) + w * x
        if ctx.continuation is not None:
            for p, x in ctx.payoff(pack(outs)).items():
                totals[p] = totals.get(p, 0.0) + w * x
    return totals


def backward_eval(g: GameGraph, sigma: StrategyProfile, ctx: Context) -> dict[str, float]:
    """Expected utility per player: emitted payoffs plus continuation."""
    worlds = run_worlds(g, cell_lookup(sigma.cells), ctx)
    return expected_utilities(g, worlds, ctx)
