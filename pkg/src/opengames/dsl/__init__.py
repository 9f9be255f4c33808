"""Textual model language: parse, check and elaborate ``.og`` sources."""

from __future__ import annotations

from pathlib import Path

from ..diagnostics import Diagnostic
from ..graph import GameGraph, validate_graph
from . import ast
from .check import TypedProgram, typecheck
from .elaborate import DEFAULT_TABLE_BUDGET, ElaborationError, elaborate, elaborate_game
from .parser import parse
from .pretty import pretty


def compile_source(
    source: str,
    entry: str | None = None,
    params: dict | None = None,
    budget: int = DEFAULT_TABLE_BUDGET,
) -> tuple[GameGraph | None, list[Diagnostic]]:
    """Parse, check and elaborate; returns ``(graph, [])`` or ``(None, diagnostics)``."""
    program = parse(source)
    if isinstance(program, list):
        return None, program
    tp = typecheck(program, entry, params)
    if isinstance(tp, list):
        return None, tp
    try:
        g = elaborate(tp, budget)
    except ElaborationError as exc:
        return None, exc.diagnostics
    diags = validate_graph(g)
    return (None, diags) if diags else (g, [])


def load_model(path: str | Path, entry: str | None = None, params: dict | None = None) -> GameGraph:
    """Compile a model file, raising ``ValueError`` listing diagnostics."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValueError(f"{path}: not valid UTF-8 ({exc})") from None
    g, diags = compile_source(text, entry, params)
    if g is None:
        raise ValueError(f"{path}: " + "; ".join(str(d) for d in diags))
    return g


__all__ = [
    "DEFAULT_TABLE_BUDGET",
    "ElaborationError",
    "TypedProgram",
    "ast",
    "compile_source",
    "elaborate",
    "elaborate_game",
    "load_model",
    "parse",
    "pretty",
    "typecheck",
]
