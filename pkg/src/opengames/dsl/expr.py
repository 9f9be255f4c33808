"""Static types and evaluation of the small expression language.

Expressions see wire values through a numeric lens: variables of integer
enums (``0..3``, ``{1, 3}``) are plain ints, other enum variants are their
names, products are tuples and sums are :class:`TagV` pairs.  Converting a
result back onto a wire saturates at the bounds of range types.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, NamedTuple

from ..types import Enum, Product, Sum, Tagged, UnitType, WireType
from . import ast as A


class TagV(NamedTuple):
    tag: str
    value: Any


class ExprError(Exception):
    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.span = span


# -- static types -------------------------------------------------------------


@dataclass(frozen=True)
class NumT:
    integral: bool

    def __str__(self) -> str:
        return "int" if self.integral else "real"


@dataclass(frozen=True)
class BoolT:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class SymT:
    """Enum variant; ``enum`` is None for a bare literal of unknown enum."""

    names: frozenset
    enum: Enum | None = None

    def __str__(self) -> str:
        return self.enum.name if self.enum else "{" + ", ".join(sorted(self.names)) + "}"


@dataclass(frozen=True)
class TupT:
    items: tuple

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class TagsT:
    alts: tuple  # sorted (tag, ExprType) pairs

    def get(self) -> dict:
        return dict(self.alts)

    def __str__(self) -> str:
        return "<" + " | ".join(f"{t}: {x}" for t, x in self.alts) + ">"


@dataclass(frozen=True)
class UnitT:
    def __str__(self) -> str:
        return "Unit"


ExprType = NumT | BoolT | SymT | TupT | TagsT | UnitT


def of_wire(t: WireType) -> ExprType:
    if isinstance(t, UnitType):
        return UnitT()
    if isinstance(t, Enum):
        if t.numeric:
            return NumT(True)
        return SymT(frozenset(t.variants), t)
    if isinstance(t, Product):
        return TupT(tuple(of_wire(c) for c in t.components))
    return TagsT(tuple(sorted((tag, of_wire(x)) for tag, x in t.alternatives)))


def unify(a: ExprType, b: ExprType) -> ExprType | None:
    if isinstance(a, NumT) and isinstance(b, NumT):
        return NumT(a.integral and b.integral)
    if isinstance(a, BoolT) and isinstance(b, BoolT):
        return a
    if isinstance(a, UnitT) and isinstance(b, UnitT):
        return a
    if isinstance(a, SymT) and isinstance(b, SymT):
        if a.enum is not None and b.enum is not None and a.enum != b.enum:
            return None
        enum = a.enum or b.enum
        names = a.names | b.names
        if enum is not None and not names <= set(enum.variants):
            return None
        return SymT(names, enum)
    if isinstance(a, TupT) and isinstance(b, TupT) and len(a.items) == len(b.items):
        items = tuple(unify(x, y) for x, y in zip(a.items, b.items))
        return None if None in items else TupT(items)
    if isinstance(a, TagsT) and isinstance(b, TagsT):
        merged = a.get()
        for tag, x in b.alts:
            if tag in merged:
                u = unify(merged[tag], x)
                if u is None:
                    return None
                merged[tag] = u
            else:
                merged[tag] = x
        return TagsT(tuple(sorted(merged.items())))
    return None


def convert_error(et: ExprType, t: WireType) -> str | None:
    """Why a value of static type ``et`` cannot be stored in a ``t`` wire."""
    bad = f"expression of type {et} does not fit wire type {t}"
    if isinstance(t, UnitType):
        return None if isinstance(et, UnitT) else bad
    if isinstance(t, Enum):
        if t.numeric and isinstance(et, NumT):
            return None if et.integral else f"real-valued expression does not fit integer type {t}"
        if isinstance(et, SymT) and (et.enum is None or et.enum == t) and et.names <= set(t.variants):
            return None
        return bad
    if isinstance(t, Product):
        if not isinstance(et, TupT) or len(et.items) != len(t.components):
            return bad
        for x, c in zip(et.items, t.components):
            err = convert_error(x, c)
            if err:
                return err
        return None
    if isinstance(t, Sum):
        if not isinstance(et, TagsT):
            return bad
        for tag, x in et.alts:
            if tag not in t.tags:
                return f"tag {tag!r} is not an alternative of {t}"
            err = convert_error(x, t.alternative(tag)[1])
            if err:
                return err
        return None
    return bad


# -- static checking ------------------------------------------------------------

BUILTINS = {"min", "max", "abs"}


class Scope:
    """Name resolution for expressions.

    ``wires`` maps statement variables to wire types, ``params`` holds
    numeric constants, ``variants`` every enum variant name in the program.
    """

    def __init__(self, wires: Mapping[str, WireType], params: Mapping[str, float], variants: frozenset):
        self.wires = wires
        self.params = params
        self.variants = variants


def infer(e: A.Expr, scope: Scope, local: Mapping[str, ExprType] | None = None) -> ExprType:
    local = local or {}
    if isinstance(e, A.Num):
        return NumT(isinstance(e.value, int))
    if isinstance(e, A.Var):
        if e.name in local:
            return local[e.name]
        if e.name in scope.wires:
            return of_wire(scope.wires[e.name])
        if e.name in scope.params:
            return NumT(isinstance(scope.params[e.name], int))
        if e.name in scope.variants:
            return SymT(frozenset({e.name}))
        raise ExprError(f"unknown name {e.name!r}", e.span)
    if isinstance(e, A.UnitLit):
        return UnitT()
    if isinstance(e, A.TupleE):
        return TupT(tuple(infer(x, scope, local) for x in e.items))
    if isinstance(e, A.TagE):
        return TagsT(((e.tag, infer(e.value, scope, local)),))
    if isinstance(e, A.BinOp):
        lt, rt = infer(e.left, scope, local), infer(e.right, scope, local)
        if e.op in ("and", "or"):
            if isinstance(lt, BoolT) and isinstance(rt, BoolT):
                return BoolT()
            raise ExprError(f"'{e.op}' needs booleans, got {lt} and {rt}", e.span)
        if e.op in ("==", "!="):
            if unify(lt, rt) is None:
                raise ExprError(f"cannot compare {lt} with {rt}", e.span)
            return BoolT()
        if not (isinstance(lt, NumT) and isinstance(rt, NumT)):
            raise ExprError(f"'{e.op}' needs numbers, got {lt} and {rt}", e.span)
        if e.op in ("<", "<=", ">", ">="):
            return BoolT()
        return NumT(lt.integral and rt.integral and e.op != "/")
    if isinstance(e, A.UnOp):
        t = infer(e.operand, scope, local)
        if e.op == "not":
            if isinstance(t, BoolT):
                return t
            raise ExprError(f"'not' needs a boolean, got {t}", e.span)
        if isinstance(t, NumT):
            return t
        raise ExprError(f"unary '-' needs a number, got {t}", e.span)
    if isinstance(e, A.If):
        c = infer(e.cond, scope, local)
        if not isinstance(c, BoolT):
            raise ExprError(f"condition must be boolean, got {c}", e.cond.span)
        a, b = infer(e.then, scope, local), infer(e.other, scope, local)
        u = unify(a, b)
        if u is None:
            raise ExprError(f"if-branches have incompatible types {a} and {b}", e.span)
        return u
    if isinstance(e, A.Let):
        v = infer(e.value, scope, local)
        return infer(e.body, scope, {**local, e.name: v})
    if isinstance(e, A.Call):
        if e.fn not in BUILTINS:
            raise ExprError(f"unknown function {e.fn!r}", e.span)
        want = 1 if e.fn == "abs" else None
        if (want is not None and len(e.args) != want) or (want is None and len(e.args) < 2):
            raise ExprError(f"{e.fn} takes {'1 argument' if want else 'at least 2 arguments'}", e.span)
        ts = [infer(x, scope, local) for x in e.args]
        if not all(isinstance(t, NumT) for t in ts):
            raise ExprError(f"{e.fn} needs numbers", e.span)
        return NumT(all(t.integral for t in ts))
    raise ExprError(f"unsupported expression {e!r}")


def free_vars(e: A.Expr, wires: Mapping[str, Any], bound: frozenset = frozenset(), out: list | None = None) -> list:
    """Statement variables read by ``e`` in order of first occurrence."""
    if out is None:
        out = []
    if isinstance(e, A.Var):
        if e.name not in bound and e.name in wires and e.name not in out:
            out.append(e.name)
    elif isinstance(e, A.TupleE):
        for x in e.items:
            free_vars(x, wires, bound, out)
    elif isinstance(e, A.TagE):
        free_vars(e.value, wires, bound, out)
    elif isinstance(e, A.BinOp):
        free_vars(e.left, wires, bound, out)
        free_vars(e.right, wires, bound, out)
    elif isinstance(e, A.UnOp):
        free_vars(e.operand, wires, bound, out)
    elif isinstance(e, A.If):
        for x in (e.cond, e.then, e.other):
            free_vars(x, wires, bound, out)
    elif isinstance(e, A.Let):
        free_vars(e.value, wires, bound, out)
        free_vars(e.body, wires, bound | {e.name}, out)
    elif isinstance(e, A.Call):
        for x in e.args:
            free_vars(x, wires, bound, out)
    return out


# -- evaluation -----------------------------------------------------------------


def to_expr(value, t: WireType):
    if isinstance(t, UnitType):
        return ()
    if isinstance(t, Enum):
        return int(value.name) if t.numeric else value.name
    if isinstance(t, Product):
        return tuple(to_expr(v, c) for v, c in zip(value, t.components))
    return TagV(value.tag, to_expr(value.value, t.alternative(value.tag)[1]))


def from_expr(x, t: WireType):
    if isinstance(t, UnitType):
        return ()
    if isinstance(t, Enum):
        if t.numeric:
            n = int(x)
            if t.is_range:
                lo = int(t.variants[0])
                n = min(max(n, lo), lo + len(t.variants) - 1)
            name = str(n)
            if name not in t.variants:
                raise ExprError(f"value {n} is not in {t}")
            return t.variant(name)
        return t.variant(x)
    if isinstance(t, Product):
        return tuple(from_expr(v, c) for v, c in zip(x, t.components))
    index, inner = t.alternative(x.tag)
    return Tagged(index, x.tag, from_expr(x.value, inner))


def evaluate(e: A.Expr, env: Mapping[str, Any], params: Mapping[str, float]):
    if isinstance(e, A.Num):
        return e.value
    if isinstance(e, A.Var):
        if e.name in env:
            return env[e.name]
        if e.name in params:
            return params[e.name]
        return e.name  # variant literal
    if isinstance(e, A.UnitLit):
        return ()
    if isinstance(e, A.TupleE):
        return tuple(evaluate(x, env, params) for x in e.items)
    if isinstance(e, A.TagE):
        return TagV(e.tag, evaluate(e.value, env, params))
    if isinstance(e, A.BinOp):
        op = e.op
        if op == "and":
            return evaluate(e.left, env, params) and evaluate(e.right, env, params)
        if op == "or":
            return evaluate(e.left, env, params) or evaluate(e.right, env, params)
        a, b = evaluate(e.left, env, params), evaluate(e.right, env, params)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0:
                raise ExprError("division by zero", e.span)
            return a / b
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise ExprError(f"unknown operator {op}", e.span)
    if isinstance(e, A.UnOp):
        v = evaluate(e.operand, env, params)
        return (not v) if e.op == "not" else -v
    if isinstance(e, A.If):
        branch = e.then if evaluate(e.cond, env, params) else e.other
        return evaluate(branch, env, params)
    if isinstance(e, A.Let):
        return evaluate(e.body, {**env, e.name: evaluate(e.value, env, params)}, params)
    if isinstance(e, A.Call):
        args = [evaluate(x, env, params) for x in e.args]
        if e.fn == "abs":
            return abs(args[0])
        return min(args) if e.fn == "min" else max(args)
    raise ExprError(f"unsupported expression {e!r}")
