"""Wage versus piece rate: a decision maker picks the contract regime.

A technology signal says whether worker effort is observable.  The decision
maker sees it and selects a regime; the selected branch runs a
landlord-worker interaction in which the worker chooses effort and output
is drawn given effort.  The decision maker's objective is pluggable.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import GameGraph
from .common import build_source, fmt_num

OBJECTIVES = ("landlord", "welfare")


@dataclass(frozen=True)
class HurwiczParams:
    effort_cost: float = 1
    output_low: int = 0
    output_high: int = 3
    p_high_effort: float = 0.8
    p_high_shirk: float = 0.2
    fixed_wage: float = 1.5
    piece_share: float = 0.5
    p_high_obs: float = 0.5
    objective: str = "landlord"

    def __post_init__(self) -> None:
        for name in ("p_high_effort", "p_high_shirk", "piece_share", "p_high_obs"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not self.output_low < self.output_high:
            raise ValueError("output_low < output_high required")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")


def render_hurwicz(p: HurwiczParams = HurwiczParams()) -> str:
    lo, hi = p.output_low, p.output_high
    surplus = {
        "landlord": ("y - pay", "(1 - share) * y"),
        "welfare": ("y - cost * e", "y - cost * e"),
    }[p.objective]
    return f"""\
-- Contract choice under a technology signal about effort observability.
type Theta = {{ low_obs, high_obs }}
type Policy = {{ wage, piece }}
type Regime = < wage: Theta | piece: Unit >
type Effort = 0..1
type Output = {{ {lo}, {hi} }}

player dm, landlord, worker

param cost = {fmt_num(p.effort_cost)}
param fixed_wage = {fmt_num(p.fixed_wage)}
param share = {fmt_num(p.piece_share)}
param p_hi = {fmt_num(p.p_high_effort)}
param p_lo = {fmt_num(p.p_high_shirk)}
param p_obs = {fmt_num(p.p_high_obs)}

game Technology() -> Theta where
  th = nature : Theta {{ low_obs: 1 - p_obs, high_obs: p_obs }}
  ret th
end

-- the decision maker's preference over regimes ({p.objective} objective)
game Choose(th: Theta) -> Regime where
  pol = decision dm (th) : Policy
  ret if pol == wage then wage.th else piece.unit
end

-- fixed wage; when effort is observable it is paid only for effort
game WageContract(th: Theta) -> Effort where
  e = decision worker (th) : Effort
  y = nature : Output {{ {hi}: if e == 1 then p_hi else p_lo, {lo}: if e == 1 then 1 - p_hi else 1 - p_lo }}
  payoff worker {{ (if th == low_obs or e == 1 then fixed_wage else 0) - cost * e }}
  payoff landlord {{ y - (if th == low_obs or e == 1 then fixed_wage else 0) }}
  payoff dm {{ let pay = (if th == low_obs or e == 1 then fixed_wage else 0) in {surplus[0]} }}
  ret e
end

-- output is shared; the worker bears the effort cost
game PieceRate() -> Effort where
  e = decision worker () : Effort
  y = nature : Output {{ {hi}: if e == 1 then p_hi else p_lo, {lo}: if e == 1 then 1 - p_hi else 1 - p_lo }}
  payoff worker {{ share * y - cost * e }}
  payoff landlord {{ (1 - share) * y }}
  payoff dm {{ {surplus[1]} }}
  ret e
end

game Regimes = branch wage: WageContract | piece: PieceRate end

-- the decision maker is a hole so other choice rules can be plugged in
template Institution
  hole decide : Theta -> Regime
  = seq technology: Technology, decide, regime: Regimes end

game Hurwicz = use Institution with decide = Choose end

entry Hurwicz
"""


def build_hurwicz(p: HurwiczParams = HurwiczParams()) -> GameGraph:
    return build_source(render_hurwicz(p))


DM_DECISION = "decide/pol"
