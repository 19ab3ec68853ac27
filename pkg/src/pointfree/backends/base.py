"""Generator backends and the exact finite-combination evaluator.

Every backend measures coordinate boxes ``a <= x_i < b``.  A finite Boolean
combination is measured by splitting the referenced coordinates into
independent blocks and Shannon-expanding over the grid cells of one block at
a time; inside a single block the combination is evaluated cell by cell with
bitmasks.  Results are :class:`~pointfree.intervals.Interval` enclosures.
"""

from __future__ import annotations

import abc
import itertools
import random
import threading
import weakref
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from ..errors import ConfigError
from ..intervals import INF, Interval, Number
from ..sigma_terms import (
    BOTTOM,
    TOP,
    FinJoin,
    FinMeet,
    Kind,
    Not,
    Term,
    cyl,
)

Cell = tuple  # (lo, hi) for one coordinate


class GeneratorBackend(abc.ABC):
    """Finitely additive ``mu0`` on finite combinations of coordinate boxes."""

    name = "backend"
    #: True when every value is an exact rational (zero-width intervals)
    exact = False
    #: largest coordinate index accepted (None: unbounded)
    max_coord: Optional[int] = None

    def __init__(self):
        self._cache: "weakref.WeakKeyDictionary[Term, Interval]" = weakref.WeakKeyDictionary()
        self._lock = threading.Lock()

    # -- per-backend pieces ---------------------------------------------------
    @abc.abstractmethod
    def cell_measure(self, coord: int, lo: Number, hi: Number) -> Interval:
        """Marginal measure of ``lo <= x_coord < hi``."""

    def blocks(self, coords: Iterable[int]) -> list[tuple[int, ...]]:
        """Partition coordinates into mutually independent groups."""
        return [(c,) for c in sorted(coords)]

    def block_cell_measure(self, block: tuple[int, ...], cell: tuple[Cell, ...]) -> Interval:
        """Joint measure of a product cell within one dependent block."""
        raise NotImplementedError

    def sample_points(self, coord: int) -> Sequence[Number]:
        """Endpoints used by random combo generators in self-tests."""
        return (-INF, Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(1), Fraction(2), INF)

    def sample_coords(self) -> Sequence[int]:
        return (1, 2, 3)

    def describe(self) -> dict:
        return {"type": self.name}

    # -- shared machinery -----------------------------------------------------
    def validate_coords(self, coords: Iterable[int]) -> None:
        if self.max_coord is None:
            return
        bad = [c for c in coords if c > self.max_coord]
        if bad:
            raise ConfigError(f"{self.name} backend has coordinates 1..{self.max_coord}, got {bad}")

    def mu0(self, term: Term) -> Interval:
        """Enclosure of ``mu0(term)`` for a closed finite term."""
        if term.free:
            raise ValueError(f"term has free index variables {sorted(term.free)}")
        if not term.is_finite:
            raise ValueError("mu0 is only defined on finite combinations")
        return _Evaluator(self).measure(term)

    def _cached(self, term: Term) -> Optional[Interval]:
        with self._lock:
            return self._cache.get(term)

    def _store(self, term: Term, value: Interval) -> None:
        with self._lock:
            self._cache[term] = value


class _Evaluator:
    def __init__(self, backend: GeneratorBackend):
        self.b = backend

    def measure(self, t: Term) -> Interval:
        if t is TOP:
            return Interval(1, 1)
        if t is BOTTOM:
            return Interval(0, 0)
        hit = self.b._cached(t)
        if hit is not None:
            return hit
        coords = t.coords
        self.b.validate_coords(coords)
        blocks = self.b.blocks(coords)
        if len(blocks) == 1:
            out = self._direct(t, blocks[0])
        else:
            out = self._expand(t, blocks[0])
        out = out.clip(0, 1)
        self.b._store(t, out)
        return out

    def _cell_measure(self, block, cell) -> Interval:
        if len(block) == 1:
            return self.b.cell_measure(block[0], *cell[0])
        return self.b.block_cell_measure(block, cell)

    def _expand(self, t: Term, block: tuple[int, ...]) -> Interval:
        cells = list(_block_cells(t, block))
        groups: dict[int, tuple[Term, Interval]] = {}
        for cell in cells:
            r = restrict(t, dict(zip(block, cell)))
            p = self._cell_measure(block, cell)
            prev = groups.get(r.serial)
            groups[r.serial] = (r, p if prev is None else prev[1] + p)
        total = Interval(0, 0)
        for r, p in groups.values():
            if r is BOTTOM:
                continue
            m = Interval(1, 1) if r is TOP else self.measure(r)
            total = total + p.clip(0, 1).times(m)
        return total

    def _direct(self, t: Term, block: tuple[int, ...]) -> Interval:
        cells = list(_block_cells(t, block))
        index = {c: k for k, c in enumerate(block)}
        masks: dict[int, int] = {}
        for gen in _generators(t):
            box = gen.args[0]
            k = index[box.coord]
            m = 0
            for j, cell in enumerate(cells):
                lo, hi = cell[k]
                if box.lower <= lo and hi <= box.upper:
                    m |= 1 << j
            masks[gen.serial] = m
        full = (1 << len(cells)) - 1
        bits = _eval_bits(t, masks, full)
        ones = bin(bits).count("1")
        if ones * 2 <= len(cells):
            total = Interval(0, 0)
            for j, cell in enumerate(cells):
                if bits >> j & 1:
                    total = total + self._cell_measure(block, cell)
            return total
        missing = Interval(0, 0)
        for j, cell in enumerate(cells):
            if not bits >> j & 1:
                missing = missing + self._cell_measure(block, cell)
        return 1 - missing


def _generators(t: Term) -> list[Term]:
    out, seen, stack = [], set(), [t]
    while stack:
        x = stack.pop()
        if x.serial in seen:
            continue
        seen.add(x.serial)
        if x.kind is Kind.GEN:
            out.append(x)
        else:
            stack.extend(x.args)
    return out


def breakpoints(t: Term) -> dict[int, list[Number]]:
    pts: dict[int, set] = {}
    for g in _generators(t):
        box = g.args[0]
        s = pts.setdefault(box.coord, set())
        for v in (box.lower, box.upper):
            if v not in (-INF, INF):
                s.add(v)
    return {c: [-INF, *sorted(v), INF] for c, v in pts.items()}


def _block_cells(t: Term, block: tuple[int, ...]):
    bp = breakpoints(t)
    per = []
    for c in block:
        p = bp.get(c, [-INF, INF])
        per.append([(p[i], p[i + 1]) for i in range(len(p) - 1)])
    return itertools.product(*per)


def _eval_bits(t: Term, masks: dict[int, int], full: int) -> int:
    memo: dict[int, int] = {}

    def go(x: Term) -> int:
        hit = memo.get(x.serial)
        if hit is not None:
            return hit
        k = x.kind
        if k is Kind.TOP:
            r = full
        elif k is Kind.BOT:
            r = 0
        elif k is Kind.GEN:
            r = masks[x.serial]
        elif k is Kind.NOT:
            r = full & ~go(x.args[0])
        elif k is Kind.AND:
            r = full
            for a in x.args:
                r &= go(a)
        elif k is Kind.OR:
            r = 0
            for a in x.args:
                r |= go(a)
        else:
            raise ValueError("countable operator in a finite evaluation")
        memo[x.serial] = r
        return r

    return go(t)


def restrict(t: Term, assignment: dict[int, Cell]) -> Term:
    """Fix the coordinates in ``assignment`` to lie in the given cells."""
    memo: dict[int, Term] = {}

    def go(x: Term) -> Term:
        hit = memo.get(x.serial)
        if hit is not None:
            return hit
        k = x.kind
        if k in (Kind.TOP, Kind.BOT):
            r = x
        elif k is Kind.GEN:
            box = x.args[0]
            cell = assignment.get(box.coord)
            if cell is None:
                r = x
            else:
                r = TOP if box.lower <= cell[0] and cell[1] <= box.upper else BOTTOM
        elif k is Kind.NOT:
            r = Not(go(x.args[0]))
        elif k is Kind.AND:
            r = FinMeet(*map(go, x.args))
        elif k is Kind.OR:
            r = FinJoin(*map(go, x.args))
        else:
            raise ValueError("countable operator in a finite evaluation")
        memo[x.serial] = r
        return r

    return go(t)


def holds_at(t: Term, points: np.ndarray) -> np.ndarray:
    """Vectorised membership of sample points (rows; column ``i-1`` is ``x_i``)."""
    n = points.shape[0]
    memo: dict[int, np.ndarray] = {}

    def go(x: Term) -> np.ndarray:
        hit = memo.get(x.serial)
        if hit is not None:
            return hit
        k = x.kind
        if k is Kind.TOP:
            r = np.ones(n, dtype=bool)
        elif k is Kind.BOT:
            r = np.zeros(n, dtype=bool)
        elif k is Kind.GEN:
            box = x.args[0]
            if box.coord > points.shape[1]:
                raise ValueError(f"coordinate {box.coord} not sampled")
            col = points[:, box.coord - 1]
            r = (col >= float(box.lower)) & (col < float(box.upper))
        elif k is Kind.NOT:
            r = ~go(x.args[0])
        elif k is Kind.AND:
            r = np.logical_and.reduce([go(a) for a in x.args])
        elif k is Kind.OR:
            r = np.logical_or.reduce([go(a) for a in x.args])
        else:
            raise ValueError("countable operator in a finite evaluation")
        memo[x.serial] = r
        return r

    return go(t)


def random_combo(backend: GeneratorBackend, rng: random.Random, size: int = 3) -> Term:
    """Random finite combination over the backend's sample coordinates and endpoints."""

    def gen():
        c = rng.choice(list(backend.sample_coords()))
        pts = list(backend.sample_points(c))
        a, b = sorted(rng.sample(pts, 2))
        return cyl(c, a, b)

    def build(depth):
        if depth == 0 or rng.random() < 0.3:
            g = gen()
            return Not(g) if rng.random() < 0.3 else g
        op = rng.choice((FinJoin, FinMeet))
        return op(*(build(depth - 1) for _ in range(rng.randint(2, 3))))

    return build(size)


class CorruptedBackend(GeneratorBackend):
    """Negative-control fixture: squares the wrapped backend's values.

    Squaring keeps ``mu0(0)=0`` and ``mu0(1)=1`` but breaks finite additivity.
    """

    name = "corrupted"

    def __init__(self, inner: GeneratorBackend):
        super().__init__()
        self.inner = inner
        self.exact = inner.exact
        self.max_coord = inner.max_coord

    def cell_measure(self, coord, lo, hi):
        return self.inner.cell_measure(coord, lo, hi)

    def mu0(self, term):
        v = self.inner.mu0(term)
        return v.times(v)

    def sample_points(self, coord):
        return self.inner.sample_points(coord)

    def sample_coords(self):
        return self.inner.sample_coords()

    def describe(self):
        return {**self.inner.describe(), "corrupt": True}
