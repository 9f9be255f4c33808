from __future__ import annotations

from ..dsl import compile_source
from ..graph import GameGraph


def fmt_num(x: float) -> str:
    if isinstance(x, bool):
        raise TypeError("expected a number")
    if isinstance(x, int) or float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def build_source(source: str) -> GameGraph:
    g, diags = compile_source(source)
    if g is None:
        raise ValueError("case model does not compile: " + "; ".join(map(str, diags)))
    return g
