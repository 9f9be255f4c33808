"""JSON reports emitted by the command line tool.

Field order is fixed by construction and numbers are rounded to 12 decimal
places, so identical inputs always serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

from .analysis import EquilibriumReport, Trajectory
from .diagnostics import Diagnostic
from .graph import GameGraph
from .serialize import canonical_hash
from .types import format_value

SCHEMA_VERSION = "1.0"
DIGITS = 12


def num(x: float) -> float | int:
    r = round(float(x), DIGITS)
    if r == 0:
        return 0
    return int(r) if r.is_integer() and abs(r) < 2**53 else r


def utilities_json(u: dict[str, float]) -> dict[str, float | int]:
    return {p: num(u[p]) for p in sorted(u)}


def model_identity(path: str) -> dict:
    try:
        digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError:
        digest = None
    return {"path": path, "sha256": digest}


def graph_summary(g: GameGraph) -> dict:
    return {
        "atoms": g.atom_count(),
        "players": sorted(g.players),
        "decisions": [d.id for d in g.decisions],
        "canonical_hash": canonical_hash(g),
    }


def equilibrium_json(g: GameGraph, r: EquilibriumReport) -> dict:
    decisions = g.decision_index
    return {
        "is_equilibrium": r.is_equilibrium,
        "epsilon": r.epsilon,
        "utilities": utilities_json(r.utilities),
        "violations": [
            {
                "decision": v.decision,
                "owner": decisions[v.decision].owner,
                "observation": format_value(v.observation),
                "reach_prob": num(v.reach_prob),
                "played": format_value(v.played),
                "best": format_value(v.best),
                "gain": num(v.gain),
            }
            for v in r.violations
        ],
    }


def cells_json(g: GameGraph, cells: dict) -> dict:
    """Decision id -> {observation -> action} in canonical order, only listed cells."""
    out: dict = {}
    for d in g.decisions:
        row = {format_value(o): format_value(cells[(d.id, o)]) for o in d.obs_type.values if (d.id, o) in cells}
        if row:
            out[d.id] = row
    return out


def enumeration_json(g: GameGraph, found: list, onpath: list[dict], space: int) -> dict:
    return {
        "profile_space": space,
        "count": len(found),
        "equilibria": [
            {
                "onpath": cells_json(g, cells),
                "profile": profile.to_json(g),
                "utilities": utilities_json(r.utilities),
            }
            for (profile, r), cells in zip(found, onpath)
        ],
    }


def trajectory_json(g: GameGraph, t: Trajectory, final_utilities: dict[str, float]) -> dict:
    switches = []
    for before, after in zip(t.profiles, t.profiles[1:]):
        for cell, action in after.cells.items():
            if before.cells.get(cell) != action:
                switches.append(
                    {
                        "decision": cell[0],
                        "observation": format_value(cell[1]),
                        "from": format_value(before.cells[cell]),
                        "to": format_value(action),
                    }
                )
    return {
        "terminated_reason": t.terminated_reason,
        "steps": len(t.profiles) - 1,
        "switches": switches,
        "initial": t.profiles[0].to_json(g),
        "final": t.final.to_json(g),
        "final_utilities": utilities_json(final_utilities),
    }


def make_report(model: str, config: dict, diagnostics: list[Diagnostic], results: dict | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": model_identity(model),
        "config": config,
        "diagnostics": [d.to_json() for d in diagnostics],
        "results": results,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("opengames").joinpath("report.schema.json").read_text())


__all__ = [
    "SCHEMA_VERSION",
    "cells_json",
    "dumps_report",
    "enumeration_json",
    "equilibrium_json",
    "graph_summary",
    "load_schema",
    "make_report",
    "model_identity",
    "trajectory_json",
]
