"""Syntax tree of model sources.

Every node carries a ``span`` that is excluded from equality, so two trees
compare equal exactly when they have the same shape and names, whatever
their layout in the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..diagnostics import Span


def _span():
    return field(default=None, compare=False, repr=False)


# -- type expressions ---------------------------------------------------------


@dataclass(frozen=True)
class TUnit:
    span: Span | None = _span()


@dataclass(frozen=True)
class TName:
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class TEnum:
    variants: tuple[str, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class TRange:
    lo: int
    hi: int
    span: Span | None = _span()


@dataclass(frozen=True)
class TProduct:
    items: tuple[TypeExpr, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class TSum:
    alts: tuple[tuple[str, TypeExpr], ...]
    span: Span | None = _span()


TypeExpr = Union[TUnit, TName, TEnum, TRange, TProduct, TSum]


# -- value expressions --------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int | float
    span: Span | None = _span()


@dataclass(frozen=True)
class Var:
    """A variable, parameter or variant literal; resolved by the checker."""

    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class UnitLit:
    span: Span | None = _span()


@dataclass(frozen=True)
class TupleE:
    items: tuple[Expr, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class TagE:
    tag: str
    value: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class UnOp:
    op: str  # "-" or "not"
    operand: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Expr
    other: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Let:
    name: str
    value: Expr
    body: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class Call:
    fn: str  # min, max, abs
    args: tuple[Expr, ...]
    span: Span | None = _span()


Expr = Union[Num, Var, UnitLit, TupleE, TagE, BinOp, UnOp, If, Let, Call]


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class DecisionRhs:
    owner: str
    obs: tuple[str, ...]
    action: TypeExpr
    span: Span | None = _span()


@dataclass(frozen=True)
class NatureRhs:
    out: TypeExpr
    outcomes: tuple[tuple[Expr, Expr], ...]  # (value, weight)
    span: Span | None = _span()


@dataclass(frozen=True)
class FunRhs:
    outs: tuple[TypeExpr, ...]
    body: Expr
    span: Span | None = _span()


@dataclass(frozen=True)
class CallRhs:
    label: str | None
    callee: str
    args: tuple[str, ...]
    span: Span | None = _span()


Rhs = Union[DecisionRhs, NatureRhs, FunRhs, CallRhs]


@dataclass(frozen=True)
class Bind:
    names: tuple[str, ...]
    rhs: Rhs
    span: Span | None = _span()


@dataclass(frozen=True)
class PayoffStmt:
    player: str
    body: Expr
    span: Span | None = _span()


Stmt = Union[Bind, PayoffStmt]


@dataclass(frozen=True)
class Body:
    stmts: tuple[Stmt, ...]
    rets: tuple[Expr, ...]
    span: Span | None = _span()


# -- game expressions ---------------------------------------------------------


@dataclass(frozen=True)
class GRef:
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class GSeq:
    items: tuple[tuple[str | None, GameExpr], ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class GPar:
    items: tuple[tuple[str | None, GameExpr], ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class GBranch:
    arms: tuple[tuple[str, GameExpr], ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class GUse:
    template: str
    bindings: tuple[tuple[str, GameExpr], ...]
    span: Span | None = _span()


GameExpr = Union[GRef, GSeq, GPar, GBranch, GUse]


# -- declarations -------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    name: str
    type: TypeExpr
    span: Span | None = _span()


@dataclass(frozen=True)
class HoleDecl:
    name: str
    inputs: tuple[TypeExpr, ...]
    outputs: tuple[TypeExpr, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class TypeDecl:
    name: str
    type: TypeExpr
    span: Span | None = _span()


@dataclass(frozen=True)
class PlayerDecl:
    names: tuple[str, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class ParamDecl:
    name: str
    value: int | float
    span: Span | None = _span()


@dataclass(frozen=True)
class EntryDecl:
    name: str
    span: Span | None = _span()


@dataclass(frozen=True)
class GameDecl:
    """A game or template.

    Exactly one of ``body`` (statement form, with ``params``/``outs``) and
    ``expr`` (combinator form) is set.
    """

    name: str
    template: bool
    holes: tuple[HoleDecl, ...]
    params: tuple[Param, ...] | None = None
    outs: tuple[TypeExpr, ...] | None = None
    body: Body | None = None
    expr: GameExpr | None = None
    span: Span | None = _span()


Decl = Union[TypeDecl, PlayerDecl, ParamDecl, EntryDecl, GameDecl]


@dataclass(frozen=True)
class Program:
    decls: tuple[Decl, ...]
    span: Span | None = _span()

    def games(self) -> list[GameDecl]:
        return [d for d in self.decls if isinstance(d, GameDecl)]
