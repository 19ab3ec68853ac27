"""Outward-rounded interval arithmetic over exact and floating numbers.

Exact values (``int``/``Fraction``) stay exact; any float result is widened by
one ulp in the outward direction so that enclosures survive rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, float]

INF = math.inf


def down(x: Number) -> Number:
    if isinstance(x, float) and math.isfinite(x):
        return math.nextafter(x, -INF)
    return x


def up(x: Number) -> Number:
    if isinstance(x, float) and math.isfinite(x):
        return math.nextafter(x, INF)
    return x


def mul0(a: Number, b: Number) -> Number:
    """Product with the measure-theory convention 0 * inf = 0."""
    if a == 0 or b == 0:
        return 0
    return a * b


@dataclass(frozen=True)
class Interval:
    lo: Number
    hi: Number

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> Number:
        if self.hi == self.lo:
            return 0
        return self.hi - self.lo

    @property
    def mid(self) -> Number:
        if math.isinf(self.hi) or math.isinf(self.lo):
            return self.hi if math.isinf(self.hi) else self.lo
        return (self.lo + self.hi) / 2

    def __add__(self, other: "Interval | Number") -> "Interval":
        other = _as_interval(other)
        return Interval(down(self.lo + other.lo), up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other: "Interval | Number") -> "Interval":
        other = _as_interval(other)
        return Interval(down(self.lo - other.hi), up(self.hi - other.lo))

    def __rsub__(self, other: Number) -> "Interval":
        return _as_interval(other) - self

    def scale(self, c: Number) -> "Interval":
        """Multiply by a non-negative scalar (0 * inf = 0)."""
        if c < 0:
            raise ValueError("scale expects a non-negative factor")
        return Interval(down(mul0(self.lo, c)), up(mul0(self.hi, c)))

    def times(self, other: "Interval") -> "Interval":
        """Product of two non-negative intervals."""
        return Interval(down(mul0(self.lo, other.lo)), up(mul0(self.hi, other.hi)))

    def clip(self, lo: Number = 0, hi: Number = 1) -> "Interval":
        a = min(max(self.lo, lo), hi)
        b = max(min(self.hi, hi), lo)
        return Interval(a, b)

    def intersect(self, other: "Interval") -> "Interval | None":
        a = max(self.lo, other.lo)
        b = min(self.hi, other.hi)
        if a > b:
            return None
        return Interval(a, b)

    def contains(self, x: Number, slack: Number = 0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def overlaps(self, other: "Interval", slack: Number = 0) -> bool:
        return self.lo - slack <= other.hi and other.lo - slack <= self.hi


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval(x, x)


def as_float(x: Number) -> float:
    return float(x)
