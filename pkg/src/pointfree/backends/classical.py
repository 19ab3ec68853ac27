"""Classical measure spaces seen through coordinate 1 (exact rational arithmetic)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import ConfigError
from ..intervals import INF, Interval
from .base import GeneratorBackend


def _exact(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class FiniteBackend(GeneratorBackend):
    """Finite space: atom ``k`` sits at the point ``x_1 = k`` with weight ``weights[k]``."""

    name = "finite"
    exact = True
    max_coord = 1

    def __init__(self, weights: Sequence):
        super().__init__()
        w = tuple(_exact(x) for x in weights)
        if not w:
            raise ConfigError("finite backend needs at least one atom")
        if any(x < 0 for x in w):
            raise ConfigError("atom weights must be non-negative")
        if sum(w) != 1:
            raise ConfigError(f"atom weights must sum to 1, got {sum(w)}")
        self.weights = w

    def cell_measure(self, coord, lo, hi):
        s = sum((w for k, w in enumerate(self.weights) if lo <= k < hi), Fraction(0))
        return Interval(s, s)

    def atom_set(self, lo, hi) -> frozenset:
        return frozenset(k for k in range(len(self.weights)) if lo <= k < hi)

    def sample_coords(self):
        return (1,)

    def sample_points(self, coord):
        return (-INF, *(Fraction(k) for k in range(len(self.weights) + 1)), INF)

    def describe(self):
        return {"type": "classical", "space": "finite", "weights": [str(w) for w in self.weights]}


class UnitIntervalBackend(GeneratorBackend):
    """Lebesgue measure on ``[0, 1]`` carried by coordinate 1."""

    name = "unit"
    exact = True
    max_coord = 1

    def cell_measure(self, coord, lo, hi):
        a = Fraction(0) if lo <= 0 else (Fraction(1) if lo >= 1 else Fraction(lo))
        b = Fraction(0) if hi <= 0 else (Fraction(1) if hi >= 1 else Fraction(hi))
        v = max(b - a, Fraction(0))
        return Interval(v, v)

    def sample_coords(self):
        return (1,)

    def sample_points(self, coord):
        return (-INF, *(Fraction(k, 8) for k in range(-1, 10)), INF)

    def describe(self):
        return {"type": "classical", "space": "unit"}
