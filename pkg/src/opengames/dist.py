"""Finite-support probability distributions over wire values."""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Iterator, Mapping

from .types import WireValue

TOLERANCE = 1e-9


class DistError(ValueError):
    pass


class Dist:
    """Immutable distribution with canonically sorted, strictly positive support.

    Zero-weight entries are dropped on construction; equal values are merged.
    Weights must sum to one within :data:`TOLERANCE`.
    """

    __slots__ = ("_support",)

    def __init__(self, items: Mapping[WireValue, float] | Iterable[tuple[WireValue, float]]):
        pairs = items.items() if isinstance(items, Mapping) else items
        merged: dict = defaultdict(float)
        for value, weight in pairs:
            weight = float(weight)
            if weight < 0 or weight != weight:
                raise DistError(f"invalid weight {weight!r} for {value!r}")
            merged[value] += weight
        support = tuple(sorted((v, w) for v, w in merged.items() if w > 0))
        total = sum(w for _, w in support)
        if abs(total - 1.0) > TOLERANCE:
            raise DistError(f"weights sum to {total!r}, not 1")
        self._support = support

    @classmethod
    def dirac(cls, value: WireValue) -> Dist:
        return cls(((value, 1.0),))

    @classmethod
    def uniform(cls, values: Iterable[WireValue]) -> Dist:
        values = list(values)
        return cls((v, 1.0 / len(values)) for v in values)

    @property
    def support(self) -> tuple[tuple[WireValue, float], ...]:
        return self._support

    def values(self) -> list:
        return [v for v, _ in self._support]

    def items(self) -> tuple[tuple[WireValue, float], ...]:
        return self._support

    def __iter__(self) -> Iterator[tuple[WireValue, float]]:
        return iter(self._support)

    def __len__(self) -> int:
        return len(self._support)

    def __getitem__(self, value: WireValue) -> float:
        for v, w in self._support:
            if v == value:
                return w
        return 0.0

    def total(self) -> float:
        return sum(w for _, w in self._support)

    def expectation(self, f: Callable[[WireValue], float] | Mapping[WireValue, float]) -> float:
        fn = f.__getitem__ if isinstance(f, Mapping) else f
        return sum(w * fn(v) for v, w in self._support)

    def bind(self, k: Callable[[WireValue], Dist] | Mapping[WireValue, Dist]) -> Dist:
        fn = k.__getitem__ if isinstance(k, Mapping) else k
        out: dict = defaultdict(float)
        for v, w in self._support:
            for u, p in fn(v):
                out[u] += w * p
        return Dist(out.items())

    def map(self, f: Callable[[WireValue], WireValue]) -> Dist:
        return self.bind(lambda v: Dist.dirac(f(v)))

    def isclose(self, other: Dist, tol: float = TOLERANCE) -> bool:
        if [v for v, _ in self._support] != [v for v, _ in other._support]:
            return False
        return all(abs(a - b) <= tol for (_, a), (_, b) in zip(self._support, other._support))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dist) and self._support == other._support

    def __hash__(self) -> int:
        return hash(self._support)

    def __repr__(self) -> str:
        body = ", ".join(f"{v!r}: {w:g}" for v, w in self._support)
        return f"Dist({{{body}}})"


def dist_expectation(d: Dist, f) -> float:
    return d.expectation(f)


def dist_bind(d: Dist, k) -> Dist:
    return d.bind(k)
