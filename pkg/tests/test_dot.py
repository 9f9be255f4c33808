import random

import pydot
import pytest

from gamekit import CD, Composer, prisoners_dilemma
from opengames.build import function
from opengames.cases import Co2Params, HurwiczParams, build_co2_market, build_hurwicz
from opengames.dot import to_dot


def parsed(text: str) -> pydot.Dot:
    (graph,) = pydot.graph_from_dot_data(text)
    return graph


def nodes(graph) -> dict[str, dict]:
    out = {}
    stack = [graph]
    while stack:
        g = stack.pop()
        for n in g.get_nodes():
            name = n.get_name().strip('"')
            if name not in ("node", "edge", "graph"):
                out[name] = n.get_attributes()
        stack.extend(g.get_subgraphs())
    return out


def edges(graph) -> list:
    out, stack = [], [graph]
    while stack:
        g = stack.pop()
        out.extend(g.get_edges())
        stack.extend(g.get_subgraphs())
    return out


def test_single_function():
    g = function("f", [CD], [CD], lambda x: x)
    graph = parsed(to_dot(g))
    ns = nodes(graph)
    assert {k: v["shape"] for k, v in ns.items()} == {"f": "box", "in:0": "point", "out:0": "point"}
    assert len(edges(graph)) == 2


def test_prisoners_dilemma_shapes_and_payoff_edges():
    graph = parsed(to_dot(prisoners_dilemma(), "pd"))
    shapes = [v["shape"] for v in nodes(graph).values()]
    assert shapes.count("diamond") == 2 and shapes.count("note") == 2
    dashed = [e for e in edges(graph) if e.get_attributes().get("style") == "dashed"]
    assert len(dashed) == 2


def test_every_atom_is_drawn():
    for g in (build_co2_market(Co2Params()), build_hurwicz(HurwiczParams())):
        ns = nodes(parsed(to_dot(g)))
        atoms = {a.id for a in g.walk()}
        assert atoms == {n for n in ns if ":" not in n}


@pytest.mark.parametrize("seed", range(30))
def test_random_games_render_deterministically(seed):
    g = Composer(random.Random(seed)).game((), (), depth=4)
    text = to_dot(g)
    assert text == to_dot(g)
    parsed(text)
