"""Permit market: allocation, production, resale, production again.

State threaded through the stages is ``(v1, v2, h1, h2, r)``: private
per-unit values, permits held, and permits retired by production.  Values
are drawn by Nature and observed only by their owner.  Both production
stages are the same game bound into the two holes of the market template.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dist import Dist
from ..graph import GameGraph
from .common import build_source, fmt_num

MODES = ("grandfather", "auction")
STAGES = ("allocate", "produce1", "resale", "produce2")


@dataclass(frozen=True)
class Co2Params:
    n_producers: int = 2
    permit_total: int = 2
    allocation_mode: str = "grandfather"
    # one distribution shared by every producer, or one per producer
    value_dist: Dist | tuple[Dist, ...] = field(default_factory=lambda: Dist({1: 0.5, 3: 0.5}))
    resale_prices: tuple[int, ...] = (1, 2, 3)
    max_bid: int = 2

    def __post_init__(self) -> None:
        if self.n_producers != 2:
            raise ValueError("the permit market is built for exactly 2 producers")
        if self.permit_total < 0:
            raise ValueError("permit_total must be non-negative")
        if self.allocation_mode not in MODES:
            raise ValueError(f"allocation_mode must be one of {MODES}")
        prices = tuple(self.resale_prices)
        if not prices or len(set(prices)) != len(prices) or any(p < 0 for p in prices):
            raise ValueError("resale_prices must be distinct non-negative integers")
        object.__setattr__(self, "resale_prices", tuple(sorted(prices)))
        for d in self.dists:
            if not all(isinstance(v, int) and v >= 0 for v in d.values()):
                raise ValueError("values must be non-negative integers")

    @property
    def dists(self) -> tuple[Dist, ...]:
        if isinstance(self.value_dist, Dist):
            return (self.value_dist,) * self.n_producers
        if len(self.value_dist) != self.n_producers:
            raise ValueError("one value distribution per producer")
        return tuple(self.value_dist)

    @property
    def grandfather_split(self) -> tuple[int, int]:
        base, extra = divmod(self.permit_total, self.n_producers)
        return tuple(base + (1 if i < extra else 0) for i in range(self.n_producers))


def _value_support(p: Co2Params) -> list[int]:
    return sorted({v for d in p.dists for v in d.values()})


STATE = "v1: Value, v2: Value, h1: Permits, h2: Permits, r: Permits"
STATE_TYPES = "[Value, Value, Permits, Permits, Permits]"


def render_co2(p: Co2Params = Co2Params()) -> str:
    T = p.permit_total
    values = _value_support(p)
    out = [
        "-- Permit market in four stages: allocation, production, resale, production.",
        "type Value = { " + ", ".join(map(str, values)) + " }",
        f"type Permits = 0..{T}",
        f"type Qty = 0..{T}",
        "type Price = { " + ", ".join(map(str, p.resale_prices)) + " }",
        "type Reply = { accept, reject }",
        "type Trade = (Value, Value, Permits, Permits, Permits)",
        "type Sale = < first: Trade | second: Trade | none: Trade >",
    ]
    if p.allocation_mode == "auction":
        out.append(f"type Bid = 0..{p.max_bid}")
    out += ["", "player producer1, producer2", ""]
    for i, d in enumerate(p.dists, start=1):
        for v in values:
            out.append(f"param value{i}_{v} = {fmt_num(d[v])}")
    out.append("")

    def nature(i: int) -> str:
        body = ", ".join(f"{v}: value{i}_{v}" for v in values)
        return f"  v{i} = nature : Value {{ {body} }}"

    if p.allocation_mode == "grandfather":
        a, b = p.grandfather_split
        out += [
            "-- private values, then a fixed split of the permits",
            "game Allocate() -> " + STATE_TYPES + " where",
            nature(1),
            nature(2),
            f"  ret v1, v2, {a}, {b}, 0",
            "end",
            "",
        ]
    else:
        out += [
            "-- sealed single bid per permit; the highest bid takes every permit, ties to producer1",
            "game Allocate() -> " + STATE_TYPES + " where",
            nature(1),
            nature(2),
            "  b1 = decision producer1 (v1) : Bid",
            "  b2 = decision producer2 (v2) : Bid",
            f"  payoff producer1 {{ if b1 >= b2 then 0 - b1 * {T} else 0 }}",
            f"  payoff producer2 {{ if b2 > b1 then 0 - b2 * {T} else 0 }}",
            f"  ret v1, v2, if b1 >= b2 then {T} else 0, if b1 >= b2 then 0 else {T}, 0",
            "end",
            "",
        ]
    out += [
        "-- each producer turns held permits into output at their private value",
        f"game Production({STATE}) -> {STATE_TYPES} where",
        "  q1 = decision producer1 (v1, h1) : Qty",
        "  q2 = decision producer2 (v2, h2) : Qty",
        "  payoff producer1 { v1 * min(q1, h1) }",
        "  payoff producer2 { v2 * min(q2, h2) }",
        "  ret v1, v2, h1 - q1, h2 - q2, r + min(q1, h1) + min(q2, h2)",
        "end",
        "",
        "-- the lowest-index producer holding a permit may offer one for sale",
        f"game Route({STATE}) -> Sale where",
        "  s = fun : Sale { if h1 > 0 then first.(v1, v2, h1, h2, r) else if h2 > 0 then second.(v1, v2, h1, h2, r) else none.(v1, v2, h1, h2, r) }",
        "  ret s",
        "end",
        "",
    ]
    for name, seller, buyer, s, b in (("SellFirst", 1, 2, "h1", "h2"), ("SellSecond", 2, 1, "h2", "h1")):
        sold = {s: f"if ok == accept then {s} - 1 else {s}", b: f"if ok == accept then {b} + 1 else {b}"}
        out += [
            f"game {name}({STATE}) -> {STATE_TYPES} where",
            f"  ask = decision producer{seller} (v{seller}, {s}) : Price",
            f"  ok = decision producer{buyer} (v{buyer}, ask) : Reply",
            f"  payoff producer{seller} {{ if ok == accept then ask else 0 }}",
            f"  payoff producer{buyer} {{ if ok == accept then 0 - ask else 0 }}",
            f"  ret v1, v2, {sold['h1']}, {sold['h2']}, r",
            "end",
            "",
        ]
    out += [
        f"game NoSale({STATE}) -> {STATE_TYPES} where",
        "  ret v1, v2, h1, h2, r",
        "end",
        "",
        "game Resale = seq route: Route, trade: Market end",
        "",
        "game Market = branch first: SellFirst | second: SellSecond | none: NoSale end",
        "",
        "template Stages",
        f"  hole produce1 : {STATE_TYPES} -> {STATE_TYPES}",
        f"  hole produce2 : {STATE_TYPES} -> {STATE_TYPES}",
        "  = seq allocate: Allocate, produce1, resale: Resale, produce2 end",
        "",
        "game Co2Market = use Stages with produce1 = Production, produce2 = Production end",
        "",
        "entry Co2Market",
    ]
    return "\n".join(out) + "\n"


def build_co2_market(p: Co2Params = Co2Params()) -> GameGraph:
    return build_source(render_co2(p))
