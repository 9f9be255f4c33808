"""Pure behavioural epsilon-Nash equilibria of composed games.

Only observations reached with positive probability are constrained.  Two
deviation modes exist:

``cell``
    unilateral change of one action at one (decision, observation) cell;
``full``
    cell checks, then for every player without a cell violation a search over
    whole-strategy deviations (all of that player's cells at once).  This is
    exact when one player moves several times along a path.

Enumeration never walks the raw profile space.  It first enumerates on-path
classes by lazily branching on the cells the forward pass actually reaches,
then, per class, searches for the canonically smallest completion of the
off-path cells that supports an equilibrium.  The result is identical to
scanning every profile in canonical order and keeping the first equilibrium
of each on-path class.
"""

from __future__ import annotations

import logging
import math
import os
import pickle
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from ..graph import GameGraph
from ..types import WireValue
from .evaluate import (
    Cell,
    Context,
    StrategyProfile,
    Undetermined,
    cell_lookup,
    expected_utilities,
    run_worlds,
)
from .explore import reachable_cells

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-9
DEFAULT_BUDGET = 10**7
DEVIATION_MODES = ("cell", "full")


class BudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"profile space has {size} profiles, budget is {budget}")
        self.size = size
        self.budget = budget


@dataclass(frozen=True)
class Violation:
    decision: str
    observation: WireValue
    reach_prob: float
    played: WireValue
    best: WireValue
    gain: float


@dataclass
class EquilibriumReport:
    is_equilibrium: bool
    epsilon: float
    violations: list[Violation] = field(default_factory=list)
    utilities: dict[str, float] = field(default_factory=dict)


class _Evaluator:
    def __init__(self, g: GameGraph, ctx: Context):
        self.g = g
        self.ctx = ctx
        self.owner = {d.id: d.owner for d in g.decisions}
        self.actions = {d.id: d.action_type.values for d in g.decisions}
        self.order = {d.id: i for i, d in enumerate(g.decisions)}
        self.evaluations = 0

    def cell_key(self, cell: Cell):
        return (self.order[cell[0]], cell[1])

    def utilities(self, lookup) -> dict[str, float]:
        self.evaluations += 1
        return expected_utilities(self.g, run_worlds(self.g, lookup, self.ctx), self.ctx)

    def baseline(self, cells: Mapping[Cell, WireValue]) -> tuple[dict[str, float], dict[Cell, float]]:
        """Utilities and on-path decision cells; raises Undetermined."""
        from collections import defaultdict

        reach: dict = defaultdict(lambda: defaultdict(float))
        self.evaluations += 1
        worlds = run_worlds(self.g, cell_lookup(cells), self.ctx, reach)
        utils = expected_utilities(self.g, worlds, self.ctx)
        onpath = {}
        for d in self.g.decisions:
            for obs, p in reach.get(d.id, {}).items():
                if p > 0:
                    onpath[(d.id, obs)] = p
        return utils, dict(sorted(onpath.items(), key=lambda kv: self.cell_key(kv[0])))

    def deviate(self, cells, cell: Cell, action) -> dict[str, float]:
        dev = dict(cells)
        dev[cell] = action
        return self.utilities(cell_lookup(dev))

    def best_response(self, cells, player: str, stop_above: float = math.inf):
        """Best whole-strategy value for ``player`` against ``cells``.

        Returns ``(value, assignment, undetermined)``.  The player's own cells
        are searched lazily (only cells the evaluation reaches).  Other
        players' missing cells make a leaf undetermined; the first such cell
        is reported.  Search stops early once a value exceeds ``stop_above``.
        """
        owner = self.owner
        best_value = -math.inf
        best_assign: dict = {}
        undetermined = None
        stack = [{}]
        while stack:
            assign = stack.pop()

            def lookup(did, obs, assign=assign):
                src = assign if owner[did] == player else cells
                try:
                    return src[(did, obs)]
                except KeyError:
                    raise Undetermined((did, obs)) from None

            try:
                value = self.utilities(lookup).get(player, 0.0)
            except Undetermined as e:
                if owner[e.cell[0]] == player:
                    # reversed so that the canonical first action is explored first
                    for a in reversed(self.actions[e.cell[0]]):
                        stack.append({**assign, e.cell: a})
                elif undetermined is None:
                    undetermined = e.cell
                continue
            if value > best_value:
                best_value, best_assign = value, assign
                if value > stop_above:
                    break
        return best_value, best_assign, undetermined


def _check_mode(mode: str) -> None:
    if mode not in DEVIATION_MODES:
        raise ValueError(f"deviation mode must be one of {DEVIATION_MODES}, got {mode!r}")


def check_equilibrium(
    g: GameGraph,
    sigma: StrategyProfile,
    ctx: Context,
    epsilon: float = DEFAULT_EPSILON,
    deviations: str = "full",
) -> EquilibriumReport:
    _check_mode(deviations)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    ev = _Evaluator(g, ctx)
    cells = sigma.cells
    base, onpath = ev.baseline(cells)
    violations: list[Violation] = []
    flagged = set()
    for cell, p in onpath.items():
        did, obs = cell
        owner = ev.owner[did]
        played = cells[cell]
        best, best_gain = played, 0.0
        for a in ev.actions[did]:
            if a == played:
                continue
            gain = ev.deviate(cells, cell, a).get(owner, 0.0) - base.get(owner, 0.0)
            if gain > best_gain:
                best, best_gain = a, gain
        if best_gain > epsilon:
            violations.append(Violation(did, obs, p, played, best, best_gain))
            flagged.add(owner)

    if deviations == "full":
        movers = sorted({d.owner for d in g.decisions} - flagged)
        for player in movers:
            value, assign, _ = ev.best_response(cells, player)
            gain = value - base.get(player, 0.0)
            if gain <= epsilon:
                continue
            for cell, p in onpath.items():
                if ev.owner[cell[0]] == player and assign.get(cell, cells[cell]) != cells[cell]:
                    violations.append(Violation(cell[0], cell[1], p, cells[cell], assign[cell], gain))
                    break
        violations.sort(key=lambda v: ev.cell_key((v.decision, v.observation)))
    return EquilibriumReport(not violations, epsilon, violations, base)


# -- enumeration --------------------------------------------------------------

_PASS = "pass"
_FAIL = "fail"


def _verdict(ev: _Evaluator, cells, base, onpath, epsilon: float, mode: str):
    """PASS / FAIL / an undetermined cell, for a possibly partial profile
    whose on-path cells are all assigned."""
    undetermined = None
    for cell in onpath:
        did = cell[0]
        owner = ev.owner[did]
        played = cells[cell]
        for a in ev.actions[did]:
            if a == played:
                continue
            try:
                u = ev.deviate(cells, cell, a)
            except Undetermined as e:
                if undetermined is None:
                    undetermined = e.cell
                continue
            if u.get(owner, 0.0) - base.get(owner, 0.0) > epsilon:
                return _FAIL
    if mode == "cell":
        return undetermined if undetermined is not None else _PASS
    undetermined = None
    for player in sorted({ev.owner[c[0]] for c in onpath}):
        threshold = base.get(player, 0.0) + epsilon
        value, _, undet = ev.best_response(cells, player, stop_above=threshold)
        if value > threshold:
            return _FAIL
        if undet is not None and undetermined is None:
            undetermined = undet
    return undetermined if undetermined is not None else _PASS


def _onpath_classes(ev: _Evaluator) -> list[dict]:
    classes = []
    stack = [{}]
    while stack:
        cells = stack.pop()
        try:
            ev.baseline(cells)
        except Undetermined as e:
            for a in reversed(ev.actions[e.cell[0]]):
                stack.append({**cells, e.cell: a})
            continue
        classes.append(cells)
    return classes


def _solve_class(ev: _Evaluator, onpath_cells: dict, universe: list, epsilon: float, mode: str):
    """Canonically smallest equilibrium completing ``onpath_cells``, or None."""
    base, onpath = ev.baseline(onpath_cells)

    def exists(fixed: dict):
        stack = [fixed]
        while stack:
            assign = stack.pop()
            cells = {**onpath_cells, **assign}
            v = _verdict(ev, cells, base, onpath, epsilon, mode)
            if v is _PASS:
                return assign
            if v is _FAIL:
                continue
            for a in reversed(ev.actions[v[0]]):
                stack.append({**assign, v: a})
        return None

    witness = exists({})
    if witness is None:
        return None
    fixed: dict = {}
    for cell in universe:
        if cell in onpath_cells:
            continue
        acts = ev.actions[cell[0]]
        if cell not in witness or witness[cell] == acts[0]:
            fixed[cell] = acts[0]
            witness = {**witness, cell: acts[0]}
            continue
        current = witness[cell]
        for a in acts[: acts.index(current)]:
            found = exists({**fixed, cell: a})
            if found is not None:
                witness = found
                fixed[cell] = a
                break
        else:
            fixed[cell] = current
    return {**onpath_cells, **fixed}


def _solve_chunk(payload: bytes) -> list:
    g, ctx, classes, universe, epsilon, mode = pickle.loads(payload)
    ev = _Evaluator(g, ctx)
    return [_solve_class(ev, c, universe, epsilon, mode) for c in classes]


def profile_space_size(g: GameGraph, ctx: Context) -> int:
    """Number of pure profiles over reachable observation cells."""
    cells = reachable_cells(g, ctx)
    size = 1
    for d in g.decisions:
        n = sum(1 for c in cells if c[0] == d.id)
        size *= d.action_type.cardinality**n
    return size


def default_jobs() -> int:
    env = os.environ.get("OGC_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def enumerate_pure_equilibria(
    g: GameGraph,
    ctx: Context,
    epsilon: float = DEFAULT_EPSILON,
    deviations: str = "full",
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> list[tuple[StrategyProfile, EquilibriumReport]]:
    """All pure equilibria, one canonical representative per on-path class,
    in canonical profile order."""
    _check_mode(deviations)
    reachable = reachable_cells(g, ctx)
    size = 1
    for d in g.decisions:
        size *= d.action_type.cardinality ** sum(1 for c in reachable if c[0] == d.id)
    if size > budget:
        raise BudgetExceeded(size, budget)

    ev = _Evaluator(g, ctx)
    universe = sorted(reachable, key=ev.cell_key)
    classes = _onpath_classes(ev)
    log.debug("%d on-path classes, %d reachable cells", len(classes), len(universe))

    solved: list = []
    if jobs > 1 and len(classes) > 1:
        try:
            chunks = [classes[i::jobs] for i in range(jobs)]
            payloads = [pickle.dumps((g, ctx, c, universe, epsilon, deviations)) for c in chunks if c]
        except (pickle.PicklingError, AttributeError, TypeError):
            payloads = None
        if payloads:
            with ProcessPoolExecutor(max_workers=len(payloads)) as pool:
                for part in pool.map(_solve_chunk, payloads):
                    solved.extend(part)
        else:
            solved = [_solve_class(ev, c, universe, epsilon, deviations) for c in classes]
    else:
        solved = [_solve_class(ev, c, universe, epsilon, deviations) for c in classes]

    results = []
    for cells in solved:
        if cells is None:
            continue
        profile = StrategyProfile.from_cells(cells).completed(g)
        report = check_equilibrium(g, profile, ctx, epsilon, deviations)
        if not report.is_equilibrium:
            raise AssertionError(f"enumeration produced a non-equilibrium: {report.violations}")
        results.append((profile, report))
    results.sort(key=lambda pr: pr[0].key(g))
    return results


def onpath_projection(g: GameGraph, profile: StrategyProfile, ctx: Context) -> dict[Cell, WireValue]:
    """The profile restricted to the cells it reaches with positive probability."""
    _, onpath = _Evaluator(g, ctx).baseline(profile.cells)
    return {c: profile.cells[c] for c in onpath}
