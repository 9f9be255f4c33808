"""Brute-force pure Nash equilibria of explicit normal-form games.

Deliberately independent of the engine: strategies are plain Python values
and utilities come from a callable.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence


def pure_nash(
    strategies: Sequence[Sequence],
    utility: Callable[[tuple], Sequence[float]],
    eps: float = 1e-9,
) -> list[tuple]:
    """Profiles where no player gains more than ``eps`` by switching strategy."""
    table = {prof: tuple(utility(prof)) for prof in itertools.product(*strategies)}
    out = []
    for prof, u in table.items():
        stable = True
        for i, options in enumerate(strategies):
            for alt in options:
                dev = prof[:i] + (alt,) + prof[i + 1 :]
                if table[dev][i] > u[i] + eps:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            out.append(prof)
    return out


def two_player_nash(s1: Sequence, s2: Sequence, utility: Callable, eps: float = 1e-9) -> list[tuple]:
    """Same concept for large two-player games: row/column maxima instead of a deviation scan."""
    u1 = [[0.0] * len(s2) for _ in s1]
    u2 = [[0.0] * len(s2) for _ in s1]
    for i, a in enumerate(s1):
        for j, b in enumerate(s2):
            u1[i][j], u2[i][j] = utility(a, b)
    best1 = [max(u1[i][j] for i in range(len(s1))) for j in range(len(s2))]
    best2 = [max(row) for row in u2]
    return [
        (s1[i], s2[j])
        for i in range(len(s1))
        for j in range(len(s2))
        if u1[i][j] >= best1[j] - eps and u2[i][j] >= best2[i] - eps
    ]
