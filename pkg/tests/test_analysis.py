import itertools
import math
import random

import pytest

from gamekit import (
    BASE_TYPES,
    CD,
    Composer,
    matching_pennies,
    prisoners_dilemma,
    random_simultaneous,
    random_two_stage,
    simultaneous,
)
from opengames import BOUNDARY, Dist, Enum, GameGraph, Payoff, par_compose, seq_compose, validate_graph
from opengames.analysis import (
    CONVERGED,
    CYCLE_DETECTED,
    BudgetExceeded,
    Context,
    StrategyProfile,
    backward_eval,
    best_response_dynamics,
    check_equilibrium,
    closed_context,
    enumerate_pure_equilibria,
    forward_eval,
    onpath_projection,
    profile_space_size,
)
from opengames.build import decision, function, nature, payoff
from opengames.graph import Branch, Decision, Function, Nature, topological_order
from opengames.types import pack, unpack
from oracles.normal_form import pure_nash
from oracles.sequential import Node, backward_induction

COIN = Enum("Coin", ("H", "T"))
XY = Enum("XY", ("x", "y"))
BIT = Enum("Bit", ("0", "1"))
BITS_AND_TRIS = [BASE_TYPES[0], BASE_TYPES[1]]


def prof(g, names):
    """Profile for a game whose decisions have no observations, in decision order."""
    return StrategyProfile.from_cells(
        {(d.id, ()): d.action_type.variant(n) for d, n in zip(g.decisions, names)}
    )


# -- forward / backward --------------------------------------------------------


def test_forward_coin():
    g = nature("c", (), COIN, Dist.uniform(COIN.values))
    assert forward_eval(g, StrategyProfile(), Dist.dirac(())).output_dist.isclose(Dist.uniform(COIN.values))


def test_forward_decision_is_deterministic():
    g = decision("d", "p", (COIN,), XY)
    sigma = StrategyProfile({"d": {v: XY.values[1] for v in COIN.values}})
    for v in COIN.values:
        assert forward_eval(g, sigma, Dist.dirac(v)).output_dist == Dist.dirac(XY.values[1])


def test_forward_reach_through_swap():
    g = seq_compose(nature("n", (), XY, Dist.uniform(XY.values)), function("swap", (XY,), (XY,), lambda v: XY.values[1 - v.index]))
    res = forward_eval(g, StrategyProfile(), Dist.dirac(()))
    assert res.output_dist.isclose(Dist.uniform(XY.values))
    assert res.reach["s2/swap"] == pytest.approx({XY.values[0]: 0.5, XY.values[1]: 0.5})


def test_backward_examples():
    coin = nature("c", (), COIN, Dist.uniform(COIN.values))
    g = seq_compose(coin, payoff("u", "p", (COIN,), lambda v: 1 if v.name == "H" else 0))
    assert backward_eval(g, StrategyProfile(), closed_context(g)) == pytest.approx({"p": 0.5})
    fixed = seq_compose(nature("c", (), COIN, Dist.dirac(COIN.values[0])), payoff("u", "p", (COIN,), lambda v: 3))
    assert backward_eval(fixed, StrategyProfile(), closed_context(fixed)) == {"p": 3.0}
    silent = nature("c", (), COIN, Dist.uniform(COIN.values))
    assert backward_eval(silent, StrategyProfile(), closed_context(silent)) == {}


def test_continuation_is_added():
    g = nature("c", (), COIN, Dist.uniform(COIN.values))
    ctx = Context(Dist.dirac(()), lambda out: {"q": 2.0 if out.name == "T" else 0.0})
    assert backward_eval(g, StrategyProfile(), ctx) == pytest.approx({"q": 1.0})


# -- equilibrium checks --------------------------------------------------------


def test_pd_checks():
    g = prisoners_dilemma()
    ctx = closed_context(g)
    assert check_equilibrium(g, prof(g, "DD"), ctx).is_equilibrium
    rep = check_equilibrium(g, prof(g, "CC"), ctx)
    assert not rep.is_equilibrium
    assert sorted((v.decision, v.gain) for v in rep.violations) == [("move/m1/a", 2.0), ("move/m2/a", 2.0)]
    for v in rep.violations:
        assert v.reach_prob > 0 and v.gain > rep.epsilon and v.best.name == "D"


def test_matching_pennies_has_no_pure_equilibrium():
    g = matching_pennies()
    for names in itertools.product("HT", repeat=2):
        assert not check_equilibrium(g, prof(g, names), closed_context(g)).is_equilibrium


def test_singleton_actions_are_always_equilibria():
    one = Enum("One", ("only",))
    g = simultaneous([one, one], lambda names: (1, 2))
    assert check_equilibrium(g, prof(g, ["only", "only"]), closed_context(g)).is_equilibrium


def test_enumerate_regressions():
    pd = prisoners_dilemma()
    found = enumerate_pure_equilibria(pd, closed_context(pd))
    assert [[a.name for a in p.cells.values()] for p, _ in found] == [["D", "D"]]
    mp = matching_pennies()
    assert enumerate_pure_equilibria(mp, closed_context(mp)) == []


def ultimatum():
    offer = Enum("Offer", ("fair", "unfair"))
    reply = Enum("Reply", ("accept", "reject"))
    split = {"fair": (5, 5), "unfair": (8, 2)}
    lead = seq_compose(decision("o", "proposer", (), offer), function("fan", (offer,), (offer, offer), lambda v: (v, v)))
    follow = par_compose(function("id", (offer,), (offer,), lambda v: v), decision("r", "responder", (offer,), reply))
    pays = seq_compose(
        function("fan2", (offer, reply), (offer, reply, offer, reply), lambda o, r: (o, r, o, r)),
        par_compose(
            payoff("up", "proposer", (offer, reply), lambda o, r: split[o.name][0] if r.name == "accept" else 0),
            payoff("ur", "responder", (offer, reply), lambda o, r: split[o.name][1] if r.name == "accept" else 0),
        ),
    )
    return seq_compose(seq_compose(lead, follow), pays), offer, reply


def test_ultimatum_contains_backward_induction():
    g, offer, reply = ultimatum()
    assert validate_graph(g) == []
    ctx = closed_context(g)
    found = enumerate_pure_equilibria(g, ctx)
    o, r = (d.id for d in g.decisions)
    bi = {(o, ()): offer.variant("unfair"), (r, offer.variant("unfair")): reply.variant("accept")}
    assert bi in [onpath_projection(g, p, ctx) for p, _ in found]


def two_moves():
    """One player moves twice: a, then b having seen a.  Only (1, 1) pays best."""
    lead = seq_compose(decision("a", "p", (), BIT), function("fan", (BIT,), (BIT, BIT), lambda v: (v, v)))
    follow = par_compose(function("id", (BIT,), (BIT,), lambda v: v), decision("b", "p", (BIT,), BIT))
    table = {("0", "0"): 0.5, ("1", "1"): 1.0}
    return seq_compose(seq_compose(lead, follow), payoff("u", "p", (BIT, BIT), lambda a, b: table.get((a.name, b.name), 0.0)))


def test_full_deviations_catch_joint_moves():
    g = two_moves()
    ctx = closed_context(g)
    zero = BIT.values[0]
    sigma = StrategyProfile.from_cells({(d.id, o): zero for d in g.decisions for o in d.obs_type.values})
    assert check_equilibrium(g, sigma, ctx, deviations="cell").is_equilibrium
    rep = check_equilibrium(g, sigma, ctx, deviations="full")
    assert not rep.is_equilibrium and rep.violations[0].gain == pytest.approx(0.5)
    cell = enumerate_pure_equilibria(g, ctx, deviations="cell")
    full = enumerate_pure_equilibria(g, ctx, deviations="full")
    assert len(cell) == 2 and len(full) == 1
    assert backward_eval(g, full[0][0], ctx) == {"p": 1.0}


def test_budget_is_enforced():
    g = prisoners_dilemma()
    assert profile_space_size(g, closed_context(g)) == 4
    with pytest.raises(BudgetExceeded) as err:
        enumerate_pure_equilibria(g, closed_context(g), budget=3)
    assert err.value.size == 4


def test_invalid_arguments():
    g = prisoners_dilemma()
    with pytest.raises(ValueError):
        check_equilibrium(g, prof(g, "DD"), closed_context(g), epsilon=-1)
    with pytest.raises(ValueError):
        enumerate_pure_equilibria(g, closed_context(g), deviations="some")


def test_parallel_enumeration_matches_serial():
    rng = random.Random(7)
    for _ in range(5):
        g, _, _ = random_simultaneous(rng)
        ctx = closed_context(g)
        serial = enumerate_pure_equilibria(g, ctx)
        par = enumerate_pure_equilibria(g, ctx, jobs=3)
        assert [p for p, _ in serial] == [p for p, _ in par]


# -- dynamics ---------------------------------------------------------------


def test_pd_dynamics():
    g = prisoners_dilemma()
    ctx = closed_context(g)
    t = best_response_dynamics(g, ctx, prof(g, "CC"))
    assert t.terminated_reason == CONVERGED and len(t.profiles) - 1 <= 2
    assert [a.name for a in t.final.cells.values()] == ["D", "D"]
    for names in itertools.product("CD", repeat=2):
        assert best_response_dynamics(g, ctx, prof(g, names)).terminated_reason == CONVERGED


def test_matching_pennies_cycles():
    g = matching_pennies()
    for names in itertools.product("HT", repeat=2):
        t = best_response_dynamics(g, closed_context(g), prof(g, names))
        assert t.terminated_reason == CYCLE_DETECTED
        for a, b in zip(t.profiles, t.profiles[1:]):
            assert a != b


def test_seeded_dynamics_are_reproducible():
    g, _, _ = random_simultaneous(random.Random(3))
    ctx = closed_context(g)
    a = best_response_dynamics(g, ctx, None, seed=11)
    b = best_response_dynamics(g, ctx, None, seed=11)
    assert a.profiles == b.profiles and a.terminated_reason == b.terminated_reason


@pytest.mark.parametrize("seed", range(25))
def test_dynamics_fixpoints_are_equilibria(seed):
    g, _, _ = random_simultaneous(random.Random(seed))
    ctx = closed_context(g)
    t = best_response_dynamics(g, ctx, None, seed=seed, max_iters=200)
    if t.terminated_reason == CONVERGED:
        assert check_equilibrium(g, t.final, ctx, deviations="cell").is_equilibrium


# -- properties -------------------------------------------------------------


@pytest.mark.parametrize("seed", range(25))
def test_epsilon_monotone_and_affine_invariant(seed):
    rng = random.Random(seed)
    g, actions, table = random_simultaneous(rng)
    ctx = closed_context(g)
    shift = rng.randint(-10, 10)
    shifted = simultaneous(actions, lambda names: (table[names][0] + shift,) + table[names][1:])
    for names in itertools.product(*(t.variants for t in actions)):
        sigma = prof(g, names)
        reports = [check_equilibrium(g, sigma, ctx, eps) for eps in (0, 0.5, 1.5, 3)]
        for lo, hi in zip(reports, reports[1:]):
            assert not lo.is_equilibrium or hi.is_equilibrium
        a = check_equilibrium(g, sigma, ctx)
        b = check_equilibrium(shifted, prof(shifted, names), closed_context(shifted))
        assert a.is_equilibrium == b.is_equilibrium
        assert [(v.decision, v.best, round(v.gain, 9)) for v in a.violations] == [
            (v.decision, v.best, round(v.gain, 9)) for v in b.violations
        ]


def sample_run(g: GameGraph, sigma: StrategyProfile, inputs: tuple, rng: random.Random) -> tuple[tuple, dict]:
    """Draw one trajectory by walking the graph directly."""
    order, _ = topological_order(g)
    val = {(BOUNDARY, i): v for i, v in enumerate(inputs)}
    src = {(w.dst.node, w.dst.index): (w.src.node, w.src.index) for w in g.wires}
    utils: dict = {}
    for a in order:
        args = tuple(val[src[(a.id, k)]] for k in range(len(a.inputs)))
        arg = pack(args)
        if isinstance(a, Payoff):
            utils[a.beneficiary] = utils.get(a.beneficiary, 0.0) + a.table[arg]
            continue
        if isinstance(a, Function):
            outs = a.table[arg]
        elif isinstance(a, Decision):
            outs = (sigma.action(a.id, arg),)
        elif isinstance(a, Nature):
            items = a.table[arg].support
            r, acc = rng.random(), 0.0
            pick = items[-1][0]
            for v, p in items:
                acc += p
                if r < acc:
                    pick = v
                    break
            outs = (pick,)
        elif isinstance(a, Branch):
            tag = arg
            arm = a.arms[tag.index][1]
            outs, sub = sample_run(arm, sigma, unpack(tag.value, len(arm.inputs)), rng)
            for p, x in sub.items():
                utils[p] = utils.get(p, 0.0) + x
        for j, v in enumerate(outs):
            val[(a.id, j)] = v
    return tuple(val[src[(BOUNDARY, i)]] for i in range(len(g.outputs))), utils


def random_stochastic_game(rng: random.Random):
    """A random closed game that contains both chance and payoffs."""
    while True:
        mid = (rng.choice(BITS_AND_TRIS),)
        g = seq_compose(Composer(rng).game((), mid, 3), Composer(rng).game(mid, (), 3))
        kinds = {type(a) for a in g.walk()}
        if Nature in kinds and Payoff in kinds:
            return g


@pytest.mark.parametrize("seed", range(6))
def test_backward_eval_matches_monte_carlo(seed):
    rng = random.Random(seed)
    g = random_stochastic_game(rng)
    sigma = StrategyProfile.uniform_choice(g, lambda xs: xs[-1])
    exact = backward_eval(g, sigma, closed_context(g))
    n = 100_000 if seed == 0 else 20_000
    totals = {p: [0.0, 0.0] for p in exact}
    for _ in range(n):
        _, u = sample_run(g, sigma, (), rng)
        for p in exact:
            x = u.get(p, 0.0)
            totals[p][0] += x
            totals[p][1] += x * x
    for p, (s, ss) in totals.items():
        mean = s / n
        sd = math.sqrt(max(ss / n - mean * mean, 0.0))
        assert abs(mean - exact[p]) <= 3 * sd / math.sqrt(n) + 1e-9


def test_forward_output_always_normalised():
    rng = random.Random(5)
    for _ in range(30):
        g = random_stochastic_game(rng)
        sigma = StrategyProfile.uniform_choice(g)
        res = forward_eval(g, sigma, Dist.dirac(()))
        assert abs(res.output_dist.total() - 1) < 1e-9


def test_onpath_projection_drops_unreached_cells():
    g = seq_compose(nature("c", (), COIN, Dist.dirac(COIN.values[0])), decision("d", "p", (COIN,), CD))
    sigma = StrategyProfile({"s2/d": {COIN.values[0]: CD.values[0], COIN.values[1]: CD.values[1]}})
    assert onpath_projection(g, sigma, closed_context(g)) == {("s2/d", COIN.values[0]): CD.values[0]}


# -- independent oracles -----------------------------------------------------


@pytest.mark.parametrize("seed", range(40))
def test_simultaneous_equilibria_match_normal_form_oracle(seed):
    g, actions, table = random_simultaneous(random.Random(seed))
    expected = sorted(pure_nash([t.variants for t in actions], lambda names: table[names]))
    found = enumerate_pure_equilibria(g, closed_context(g))
    got = sorted(tuple(a.name for a in p.cells.values()) for p, _ in found)
    assert got == expected
    for p, rep in found:
        names = tuple(a.name for a in p.cells.values())
        assert [rep.utilities[f"p{i + 1}"] for i in range(len(actions))] == list(table[names])


@pytest.mark.parametrize("seed", range(40))
def test_two_stage_contains_backward_induction(seed):
    g, a1, a2, table = random_two_stage(random.Random(seed))
    tree = Node(0, {x: Node(1, {y: Node(payoff=table[(x, y)]) for y in a2.variants}) for x in a1.variants})
    value, plan = backward_induction(tree)
    lead, follow = (d.id for d in g.decisions)
    sigma = StrategyProfile.from_cells(
        {(lead, ()): a1.variant(plan[()])} | {(follow, a1.variant(x)): a2.variant(plan[(x,)]) for x in a1.variants}
    )
    ctx = closed_context(g)
    rep = check_equilibrium(g, sigma, ctx)
    assert rep.is_equilibrium
    assert (rep.utilities["p1"], rep.utilities["p2"]) == value
    classes = [onpath_projection(g, p, ctx) for p, _ in enumerate_pure_equilibria(g, ctx)]
    assert onpath_projection(g, sigma, ctx) in classes
