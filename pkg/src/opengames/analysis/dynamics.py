from __future__ import annotations

import random
from dataclasses import dataclass

from ..graph import GameGraph
from .equilibrium import DEFAULT_EPSILON, _Evaluator
from .evaluate import Context, StrategyProfile

CONVERGED = "converged"
CYCLE_DETECTED = "cycle_detected"
MAX_ITERS = "max_iters"


@dataclass
class Trajectory:
    profiles: list[StrategyProfile]
    terminated_reason: str

    @property
    def final(self) -> StrategyProfile:
        return self.profiles[-1]


def random_profile(g: GameGraph, seed: int) -> StrategyProfile:
    rng = random.Random(seed)
    cells = {}
    for d in g.decisions:
        acts = d.action_type.values
        for o in d.obs_type.values:
            cells[(d.id, o)] = acts[rng.randrange(len(acts))]
    return StrategyProfile.from_cells(cells)


def _first_improvement(ev: _Evaluator, cells, epsilon: float):
    base, onpath = ev.baseline(cells)
    for cell in onpath:
        did = cell[0]
        owner = ev.owner[did]
        played = cells[cell]
        best, best_u = played, base.get(owner, 0.0)
        for a in ev.actions[did]:
            if a == played:
                continue
            u = ev.deviate(cells, cell, a).get(owner, 0.0)
            if u > best_u:
                best, best_u = a, u
        if best_u - base.get(owner, 0.0) > epsilon:
            return cell, best
    return None


def best_response_dynamics(
    g: GameGraph,
    ctx: Context,
    init: StrategyProfile | None = None,
    max_iters: int = 1000,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
) -> Trajectory:
    """Cell-wise best-response dynamics.

    Each iteration scans on-path cells in canonical order and switches the
    first improvable cell to its best response (ties go to the earlier
    action).  ``seed`` only matters when ``init`` is None.
    """
    profile = (init if init is not None else random_profile(g, seed)).completed(g)
    ev = _Evaluator(g, ctx)
    profiles = [profile]
    seen = {profile.key(g)}
    for _ in range(max_iters):
        move = _first_improvement(ev, profile.cells, epsilon)
        if move is None:
            return Trajectory(profiles, CONVERGED)
        (did, obs), action = move
        profile = profile.replace(did, obs, action)
        profiles.append(profile)
        key = profile.key(g)
        if key in seen:
            return Trajectory(profiles, CYCLE_DETECTED)
        seen.add(key)
    if _first_improvement(ev, profile.cells, epsilon) is None:
        return Trajectory(profiles, CONVERGED)
    return Trajectory(profiles, MAX_ITERS)
