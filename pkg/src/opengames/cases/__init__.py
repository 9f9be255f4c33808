"""Parameterized builders for the three case-study institutions."""

from .co2 import Co2Params, build_co2_market, render_co2
from .hurwicz import DM_DECISION, HurwiczParams, build_hurwicz, render_hurwicz
from .irrigation import IrrigationParams, build_irrigation, equitable_profile, farmer_decision, render_irrigation


def shipped_models() -> dict[str, str]:
    """File name to DSL source for every model shipped under ``models/``."""
    return {
        "co2_market.og": render_co2(Co2Params()),
        "irrigation_b.og": render_irrigation(IrrigationParams(variant="B")),
        "irrigation_c.og": render_irrigation(IrrigationParams(variant="C")),
        "irrigation_d.og": render_irrigation(IrrigationParams(variant="D")),
        "hurwicz.og": render_hurwicz(HurwiczParams()),
    }


__all__ = [
    "Co2Params",
    "DM_DECISION",
    "HurwiczParams",
    "IrrigationParams",
    "build_co2_market",
    "build_hurwicz",
    "build_irrigation",
    "equitable_profile",
    "farmer_decision",
    "render_co2",
    "render_hurwicz",
    "render_irrigation",
    "shipped_models",
]
