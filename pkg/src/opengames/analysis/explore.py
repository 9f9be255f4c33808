"""Nondeterministic exploration: every world reachable under *some* profile.

Decisions branch over all their actions and Nature over its support.  Worlds
are deduplicated by their value assignment, so the cost is bounded by the
number of distinct joint assignments rather than the number of profiles.
"""

from __future__ import annotations

from ..graph import Branch, Decision, Function, GameGraph, Nature, Payoff, Plan
from ..types import unpack
from .evaluate import Context


def _explore(plan: Plan, starts: set, cells: set, visit=None) -> set:
    worlds = {s + (None,) * (plan.n_slots - len(s)) for s in starts}
    for step in plan.steps:
        a = step.atom
        ins = step.in_slots
        nxt = set()
        for vals in worlds:
            arg = vals[ins[0]] if len(ins) == 1 else tuple(vals[s] for s in ins)
            if visit is not None:
                visit(a, arg)
            if isinstance(a, Payoff):
                nxt.add(vals)
                continue
            if isinstance(a, Function):
                outs = [a.table[arg]]
            elif isinstance(a, Decision):
                cells.add((a.id, arg))
                outs = [(v,) for v in a.action_type.values]
            elif isinstance(a, Nature):
                outs = [(v,) for v in a.table[arg].values()]
            elif isinstance(a, Branch):
                arm = a.arms[arg.index][1]
                start = unpack(arg.value, len(arm.inputs))
                arm_plan = step.arm_plans[arg.index]
                finals = _explore(arm_plan, {start}, cells, visit)
                outs = {tuple(f[s] for s in arm_plan.out_slots) for f in finals}
            else:
                raise TypeError(f"cannot explore atom {a!r}")
            for out in outs:
                lst = list(vals)
                for s, v in zip(step.out_slots, out):
                    lst[s] = v
                nxt.add(tuple(lst))
        worlds = nxt
    return worlds


def explore(g: GameGraph, ctx: Context, visit=None):
    """Return ``(cells, worlds)``: reachable decision cells and final worlds.

    ``visit(atom, input_value)`` is called for every atom input seen in any
    reachable world, including atoms inside branch arms.
    """
    cells: set = set()
    starts = {unpack(v, len(g.inputs)) for v in ctx.input_dist.values()}
    worlds = _explore(g.plan, starts, cells, visit)
    return cells, worlds


def reachable_cells(g: GameGraph, ctx: Context) -> set:
    return explore(g, ctx)[0]
