"""Irrigation canal: farmers draw water in canal order from a finite reservoir.

Variant B has nothing but the canal.  Variant C adds an external monitor
whose visible choice to work exposes over-extraction to a penalty.  Variant D
makes one farmer the monitor: they keep the penalties they collect and also
farm a fourth field that only yields when every farmer stayed within quota.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..analysis import StrategyProfile
from ..graph import GameGraph
from .common import build_source, fmt_num

VARIANTS = ("B", "C", "D")


@dataclass(frozen=True)
class IrrigationParams:
    variant: str = "B"
    n_farmers: int = 3
    reservoir: int = 4
    max_extract: int = 2
    crop_value: float = 1
    monitor_wage: float | None = None
    penalty: float | None = None
    effort_cost: float | None = None
    fourth_field: float | None = None
    monitor_index: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.n_farmers < 1 or self.reservoir < 0 or self.max_extract < 0:
            raise ValueError("n_farmers >= 1, reservoir >= 0 and max_extract >= 0 required")
        defaults = {
            "monitor_wage": 1 if self.variant == "C" else None,
            "penalty": 2 if self.variant in "CD" else None,
            "effort_cost": 0.5 if self.variant in "CD" else None,
            "fourth_field": 2 if self.variant == "D" else None,
            "monitor_index": 0 if self.variant == "D" else None,
        }
        for name, default in defaults.items():
            value = getattr(self, name)
            if default is None and value is not None:
                raise ValueError(f"{name} does not apply to variant {self.variant}")
            if default is not None and value is None:
                object.__setattr__(self, name, default)
        if self.variant == "D" and not 0 <= self.monitor_index < self.n_farmers:
            raise ValueError("monitor_index out of range")

    @property
    def quota(self) -> int:
        """Equitable (compliant) extraction per farmer."""
        return self.reservoir // self.n_farmers


def _farmer(i: int, p: IrrigationParams) -> str:
    me = f"farmer{i}"
    if p.variant == "B":
        return (
            f"game Farmer{i}(w: Water) -> Take where\n"
            f"  e = decision {me} () : Take\n"
            f"  payoff {me} {{ crop * min(e, w) }}\n"
            f"  ret e\n"
            f"end\n"
        )
    lines = [
        f"game Farmer{i}(w: Water, m: Watch) -> Take where",
        f"  e = decision {me} (m) : Take",
    ]
    monitor = f"farmer{p.monitor_index + 1}" if p.variant == "D" else None
    if me == monitor:
        lines.append(f"  payoff {me} {{ crop * min(e, w) }}")
    else:
        lines.append(
            f"  payoff {me} {{ crop * min(e, w) - (if m == work and min(e, w) > quota then penalty else 0) }}"
        )
        if monitor is not None:
            lines.append(f"  payoff {monitor} {{ if m == work and min(e, w) > quota then penalty else 0 }}")
    lines += ["  ret e", "end", ""]
    return "\n".join(lines)


def render_irrigation(p: IrrigationParams) -> str:
    n = p.n_farmers
    farmers = [f"farmer{i}" for i in range(1, n + 1)]
    out = [f"-- Irrigation canal, variant {p.variant}: {n} farmers in canal order share a reservoir of {p.reservoir}."]
    out.append(f"type Water = 0..{p.reservoir}")
    out.append(f"type Take = 0..{p.max_extract}")
    players = list(farmers)
    if p.variant in "CD":
        out.append("type Watch = { work, shirk }")
    if p.variant == "D":
        out.append("type Flag = { no, yes }")
    if p.variant == "C":
        players.append("monitor")
    out.append("")
    out.append("player " + ", ".join(players))
    out.append("")
    out.append(f"param crop = {fmt_num(p.crop_value)}")
    if p.variant in "CD":
        out.append(f"param quota = {p.quota}")
        out.append(f"param penalty = {fmt_num(p.penalty)}")
        out.append(f"param effort = {fmt_num(p.effort_cost)}")
    if p.variant == "C":
        out.append(f"param wage = {fmt_num(p.monitor_wage)}")
    if p.variant == "D":
        out.append(f"param field = {fmt_num(p.fourth_field)}")
    out.append("")

    if p.variant == "B":
        out.append(f"game Head() -> Water where\n  ret {p.reservoir}\nend\n")
        out.append(
            "-- one plot: the farmer's draw is capped by the water that reaches it\n"
            "template Plot(w: Water) -> Water\n"
            "  hole farmer : Water -> Take\n"
            "where\n"
            "  e = farmer(w)\n"
            "  ret w - e\n"
            "end\n"
        )
    elif p.variant == "C":
        out.append(
            "-- the external monitor's effort is visible to every farmer\n"
            "game Head() -> [Water, Watch] where\n"
            "  m = decision monitor () : Watch\n"
            "  payoff monitor { if m == work then wage - effort else 0 }\n"
            f"  ret {p.reservoir}, m\n"
            "end\n"
        )
        out.append(
            "template Plot(w: Water, m: Watch) -> [Water, Watch]\n"
            "  hole farmer : [Water, Watch] -> Take\n"
            "where\n"
            "  e = farmer(w, m)\n"
            "  ret w - e, m\n"
            "end\n"
        )
    else:
        monitor = f"farmer{p.monitor_index + 1}"
        out.append(
            f"-- {monitor} holds the monitor role this season\n"
            "game Head() -> [Water, Watch, Flag] where\n"
            f"  m = decision {monitor} () : Watch\n"
            f"  payoff {monitor} {{ if m == work then 0 - effort else 0 }}\n"
            f"  ret {p.reservoir}, m, yes\n"
            "end\n"
        )
        out.append(
            "-- the flag records whether every farmer so far stayed within quota\n"
            "template Plot(w: Water, m: Watch, ok: Flag) -> [Water, Watch, Flag]\n"
            "  hole farmer : [Water, Watch] -> Take\n"
            "where\n"
            "  e = farmer(w, m)\n"
            "  ret w - e, m, if ok == yes and min(e, w) <= quota then yes else no\n"
            "end\n"
        )
        out.append(
            "game Field(w: Water, m: Watch, ok: Flag) -> Water where\n"
            f"  payoff {monitor} {{ if ok == yes then field else 0 }}\n"
            "  ret w\n"
            "end\n"
        )
    for i in range(1, n + 1):
        out.append(_farmer(i, p))
    for i in range(1, n + 1):
        out.append(f"game Plot{i} = use Plot with farmer = Farmer{i} end")
    out.append("")
    parts = ["head: Head"] + [f"plot{i}: Plot{i}" for i in range(1, n + 1)]
    if p.variant == "D":
        parts.append("field: Field")
    out.append("game Canal = seq " + ", ".join(parts) + " end")
    out.append("")
    out.append("entry Canal")
    return "\n".join(out) + "\n"


def build_irrigation(p: IrrigationParams = IrrigationParams()) -> GameGraph:
    return build_source(render_irrigation(p))


def farmer_decision(i: int) -> str:
    """Decision id of farmer ``i`` (1-based) in a built canal."""
    return f"plot{i}/farmer/e"


def equitable_profile(g: GameGraph, p: IrrigationParams) -> StrategyProfile:
    """Every farmer draws the quota at every observation; the monitor works."""
    cells = {}
    for d in g.decisions:
        for o in d.obs_type.values:
            if d.id == "head/m":
                cells[(d.id, o)] = d.action_type.variant("work")
            else:
                cells[(d.id, o)] = d.action_type.variant(str(min(p.quota, p.max_extract)))
    return StrategyProfile.from_cells(cells)
