"""Finite wire types and their values.

Every forward wire carries a value drawn from a finite set described by a
:class:`WireType`.  Values are plain hashable Python objects whose natural
ordering coincides with the canonical order of their type:

* ``Unit``      -> ``()``
* ``Enum``      -> :class:`Variant` ``(index, name)``
* ``Product``   -> ``tuple`` of component values
* ``Sum``       -> :class:`Tagged` ``(index, tag, value)``

Comparison only ever happens between values of the same type, so the tuple
based encoding gives the lexicographic order directly.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, NamedTuple, Sequence, Union

UNIT: tuple = ()


class Variant(NamedTuple):
    index: int
    name: str


class Tagged(NamedTuple):
    index: int
    tag: str
    value: Any


WireValue = Any

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VARIANT = re.compile(r"([A-Za-z_][A-Za-z0-9_]*|-?[0-9]+)\Z")


class WireTypeError(ValueError):
    """Raised for malformed wire types (empty enums, duplicate tags, ...)."""


@dataclass(frozen=True)
class UnitType:
    @property
    def cardinality(self) -> int:
        return 1

    @cached_property
    def values(self) -> tuple:
        return (UNIT,)

    def __str__(self) -> str:
        return "Unit"


@dataclass(frozen=True)
class Enum:
    name: str
    variants: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variants", tuple(self.variants))
        if not self.variants:
            raise WireTypeError(f"enum {self.name!r} has no variants")
        if len(set(self.variants)) != len(self.variants):
            raise WireTypeError(f"enum {self.name!r} has duplicate variants")
        for v in self.variants:
            if not _VARIANT.match(v):
                raise WireTypeError(f"bad variant name {v!r} in enum {self.name!r}")

    @property
    def cardinality(self) -> int:
        return len(self.variants)

    @cached_property
    def values(self) -> tuple:
        return tuple(Variant(i, v) for i, v in enumerate(self.variants))

    def variant(self, name: str) -> Variant:
        try:
            return Variant(self.variants.index(name), name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variant of {self.name}") from None

    @cached_property
    def numeric(self) -> bool:
        """True when every variant name is an integer literal."""
        return all(re.fullmatch(r"-?[0-9]+", v) for v in self.variants)

    @cached_property
    def is_range(self) -> bool:
        """True for ``lo..hi`` style enums: consecutive ascending integers."""
        if not self.numeric:
            return False
        ints = [int(v) for v in self.variants]
        return ints == list(range(ints[0], ints[0] + len(ints)))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Product:
    components: tuple[WireType, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))

    @cached_property
    def cardinality(self) -> int:
        n = 1
        for c in self.components:
            n *= c.cardinality
        return n

    @cached_property
    def values(self) -> tuple:
        return tuple(itertools.product(*(c.values for c in self.components)))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class Sum:
    alternatives: tuple[tuple[str, WireType], ...]

    def __post_init__(self) -> None:
        alts = tuple((str(tag), t) for tag, t in self.alternatives)
        object.__setattr__(self, "alternatives", alts)
        tags = [tag for tag, _ in alts]
        if not tags:
            raise WireTypeError("sum type has no alternatives")
        if len(set(tags)) != len(tags):
            raise WireTypeError(f"sum type has duplicate tags: {tags}")
        for tag in tags:
            if not _IDENT.match(tag):
                raise WireTypeError(f"bad tag {tag!r}")

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(tag for tag, _ in self.alternatives)

    def alternative(self, tag: str) -> tuple[int, WireType]:
        for i, (t, inner) in enumerate(self.alternatives):
            if t == tag:
                return i, inner
        raise KeyError(f"{tag!r} is not a tag of {self}")

    @cached_property
    def cardinality(self) -> int:
        return sum(t.cardinality for _, t in self.alternatives)

    @cached_property
    def values(self) -> tuple:
        return tuple(
            Tagged(i, tag, v)
            for i, (tag, t) in enumerate(self.alternatives)
            for v in t.values
        )

    def __str__(self) -> str:
        return "<" + " | ".join(f"{tag}: {t}" for tag, t in self.alternatives) + ">"


WireType = Union[UnitType, Enum, Product, Sum]
Unit = UnitType()


def enum_range(lo: int, hi: int, name: str | None = None) -> Enum:
    if hi < lo:
        raise WireTypeError(f"empty range {lo}..{hi}")
    return Enum(name or f"{lo}..{hi}", tuple(str(i) for i in range(lo, hi + 1)))


def enumerate_values(t: WireType) -> list:
    """All values of ``t`` in canonical order."""
    return list(t.values)


def cardinality(t: WireType) -> int:
    return t.cardinality


def typecheck(value: WireValue, t: WireType) -> bool:
    if isinstance(t, UnitType):
        return value == UNIT and not isinstance(value, (Variant, Tagged))
    if isinstance(t, Enum):
        return (
            isinstance(value, Variant)
            and 0 <= value.index < len(t.variants)
            and t.variants[value.index] == value.name
        )
    if isinstance(t, Product):
        return (
            type(value) is tuple
            and len(value) == len(t.components)
            and all(typecheck(v, c) for v, c in zip(value, t.components))
        )
    if isinstance(t, Sum):
        if not isinstance(value, Tagged) or not 0 <= value.index < len(t.alternatives):
            return False
        tag, inner = t.alternatives[value.index]
        return tag == value.tag and typecheck(value.value, inner)
    return False


# Ports of an atom are bundled into a single value when an atom (or a game
# boundary) is viewed as one typed object: no ports -> Unit, one port -> that
# port's type, several -> the product.


def pack_type(types: Sequence[WireType]) -> WireType:
    if len(types) == 0:
        return Unit
    if len(types) == 1:
        return types[0]
    return Product(tuple(types))


def pack(values: Sequence[WireValue]) -> WireValue:
    if len(values) == 0:
        return UNIT
    if len(values) == 1:
        return values[0]
    return tuple(values)


def unpack(value: WireValue, arity: int) -> tuple:
    if arity == 0:
        return ()
    if arity == 1:
        return (value,)
    return tuple(value)


# -- surface syntax for literals ------------------------------------------


def format_value(value: WireValue) -> str:
    if isinstance(value, Variant):
        return value.name
    if isinstance(value, Tagged):
        inner = format_value(value.value)
        return f"{value.tag}.{inner}"
    if isinstance(value, tuple):
        if not value:
            return "unit"
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    raise TypeError(f"not a wire value: {value!r}")


def format_type(t: WireType) -> str:
    return str(t)


class _LiteralReader:
    def __init__(self, text: str):
        self.tokens = re.findall(r"-?[0-9]+|[A-Za-z_][A-Za-z0-9_]*|[(),.]", text)
        if "".join(self.tokens) != re.sub(r"\s+", "", text):
            raise ValueError(f"cannot parse literal {text!r}")
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of literal")
        self.pos += 1
        return tok

    def read(self, t: WireType) -> WireValue:
        if isinstance(t, UnitType):
            tok = self.take()
            if tok == "unit":
                return UNIT
            if tok == "(" and self.take() == ")":
                return UNIT
            raise ValueError("expected 'unit'")
        if isinstance(t, Enum):
            tok = self.take()
            return t.variant(tok)
        if isinstance(t, Product):
            if not t.components:
                return self.read(Unit)
            if self.take() != "(":
                raise ValueError("expected '('")
            out = []
            for i, c in enumerate(t.components):
                if i and self.take() != ",":
                    raise ValueError("expected ','")
                out.append(self.read(c))
            if self.take() != ")":
                raise ValueError("expected ')'")
            return tuple(out)
        if isinstance(t, Sum):
            tag = self.take()
            index, inner = t.alternative(tag)
            if self.take() != ".":
                raise ValueError("expected '.' after tag")
            return Tagged(index, tag, self.read(inner))
        raise TypeError(f"not a wire type: {t!r}")


def parse_value(text: str, t: WireType) -> WireValue:
    """Parse a literal in DSL surface syntax (``H``, ``(a, 2)``, ``L.unit``)."""
    reader = _LiteralReader(text)
    try:
        value = reader.read(t)
    except KeyError as exc:
        raise ValueError(str(exc)) from None
    if reader.peek() is not None:
        raise ValueError(f"trailing input in literal {text!r}")
    return value


def type_to_json(t: WireType) -> Any:
    if isinstance(t, UnitType):
        return "Unit"
    if isinstance(t, Enum):
        return {"enum": t.name, "variants": list(t.variants)}
    if isinstance(t, Product):
        return {"product": [type_to_json(c) for c in t.components]}
    return {"sum": [[tag, type_to_json(inner)] for tag, inner in t.alternatives]}
