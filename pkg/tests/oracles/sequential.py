"""Backward induction on explicit finite perfect-information trees."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Node:
    player: int | None = None  # None at leaves
    children: dict = field(default_factory=dict)  # action -> Node
    payoff: tuple = ()


def backward_induction(node: Node, path: tuple = ()) -> tuple[tuple, dict]:
    """Return (payoff vector, plan) where plan maps history -> chosen action.

    Ties go to the first action in insertion order.
    """
    if node.player is None:
        return node.payoff, {}
    plan: dict = {}
    best_action, best_value = None, None
    for action, child in node.children.items():
        value, sub = backward_induction(child, path + (action,))
        plan.update(sub)
        if best_value is None or value[node.player] > best_value[node.player]:
            best_action, best_value = action, value
    plan[path] = best_action
    return best_value, plan
