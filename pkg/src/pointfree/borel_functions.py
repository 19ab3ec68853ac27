"""Non-negative measurable functions as monotone level-set maps.

A function ``f`` is represented by ``level(t)``, the sigma-term for the set
``{f <= t}``, together with ``strict_level(t)`` for ``{f < t}``.  Simple
functions keep an explicit finite partition and are combined exactly;
everything else builds level sets out of countable joins and meets whose
streams carry envelopes, so the evaluator can bound them from both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import NotMonotone
from .index_expr import format_number
from .intervals import INF, Number
from .sigma_terms import (
    BOTTOM,
    TOP,
    CountJoin,
    CountMeet,
    FinJoin,
    FinMeet,
    FnStream,
    Not,
    Term,
    cyl,
)

TRUE, FALSE, UNKNOWN = True, False, None


def _num(x) -> Number:
    if isinstance(x, bool):
        raise TypeError("booleans are not values")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        return INF if s in ("inf", "+inf") else Fraction(s)
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    return x


def _dyadic(k: int, m: int) -> Fraction:
    return Fraction(k, 1 << m)


class NonNegMeasurable:
    """Base class: subclasses implement ``_level`` and optionally ``_strict``."""

    #: nesting of countable operators inside level terms (rough upper bound)
    depth: int = 0

    def __post_init__(self):
        object.__setattr__(self, "_levels", {})
        object.__setattr__(self, "_stricts", {})

    def level(self, t) -> Term:
        """Term for ``{f <= t}``."""
        t = _num(t)
        if t < 0:
            return BOTTOM
        if t == INF:
            return TOP
        hit = self._levels.get(t)
        if hit is None:
            hit = self._level(t)
            self._levels[t] = hit
        return hit

    def strict_level(self, t) -> Term:
        """Term for ``{f < t}``."""
        t = _num(t)
        if t <= 0:
            return BOTTOM
        hit = self._stricts.get(t)
        if hit is None:
            hit = self._strict(t)
            self._stricts[t] = hit
        return hit

    def _level(self, t: Number) -> Term:
        raise NotImplementedError

    def _strict(self, t: Number) -> Term:
        # {f < t} is the union of {f <= t - 2^-j}
        level = self.level
        stream = FnStream(
            lambda j: level(t - Fraction(1, 2 ** (j + 1))),
            envelope_fn=lambda n: level(t),
            stream_depth=self.depth,
            monotone=True,
            label=f"strict<{format_number(t) if not isinstance(t, float) else t}>",
        )
        return CountJoin(stream)

    @property
    def bound(self) -> Optional[Number]:
        """Known upper bound on the values, or None."""
        return None

    def as_simple(self) -> Optional["SimpleFunction"]:
        """Exact simple representation when one is available."""
        return None

    # sugar
    def __add__(self, other):
        return fsum(self, other)

    def __mul__(self, c):
        return scaled(c, self)

    __rmul__ = __mul__


# -- simple functions ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimpleFunction(NonNegMeasurable):
    """Finitely many values on a partition: ``parts = ((a_1, x_1), ...)``.

    The sets should be pairwise disjoint and cover everything (up to null);
    :func:`check_partition` verifies this against a measure.
    """

    parts: tuple

    def __post_init__(self):
        super().__post_init__()
        for a, x in self.parts:
            if not isinstance(a, Term):
                raise TypeError("simple-function parts must be (term, value) pairs")
            if x < 0:
                raise ValueError("simple functions are non-negative")

    def _level(self, t):
        return FinJoin(*(a for a, x in self.parts if x <= t))

    def _strict(self, t):
        return FinJoin(*(a for a, x in self.parts if x < t))

    @property
    def depth(self):
        return max((a.depth for a, _ in self.parts), default=0)

    @property
    def bound(self):
        return max((x for _, x in self.parts), default=Fraction(0))

    @property
    def values(self) -> tuple:
        return tuple(x for _, x in self.parts)

    def as_simple(self):
        return self

    def __repr__(self):
        inner = ", ".join(f"({a}, {_fmt(x)})" for a, x in self.parts)
        return f"SimpleFunction[{inner}]"


def _fmt(x: Number) -> str:
    return format_number(x) if not isinstance(x, float) or math.isinf(x) else repr(x)


def simple(parts: Iterable[tuple[Term, Number]]) -> SimpleFunction:
    """Canonical simple function: empty parts dropped, equal values merged."""
    by_value: dict = {}
    order = []
    for a, x in parts:
        x = _num(x)
        if a is BOTTOM:
            continue
        if x not in by_value:
            by_value[x] = []
            order.append(x)
        by_value[x].append(a)
    merged = tuple((FinJoin(*by_value[x]), x) for x in sorted(order))
    if not merged:
        merged = ((TOP, Fraction(0)),)
    return SimpleFunction(merged)


def combine_simple(s: SimpleFunction, u: SimpleFunction, op: Callable[[Number, Number], Number]) -> SimpleFunction:
    """Pointwise ``op`` of two simple functions on the common refinement."""
    return simple((FinMeet(a, b), op(x, y)) for a, x in s.parts for b, y in u.parts)


def indicator(a: Term) -> "Indicator":
    return Indicator(a)


@dataclass(frozen=True, eq=False)
class Indicator(NonNegMeasurable):
    set: Term

    def _level(self, t):
        return TOP if t >= 1 else Not(self.set)

    def _strict(self, t):
        return TOP if t > 1 else Not(self.set)

    @property
    def depth(self):
        return self.set.depth

    @property
    def bound(self):
        return Fraction(1)

    def as_simple(self):
        return simple([(self.set, 1), (Not(self.set), 0)])


@dataclass(frozen=True, eq=False)
class Constant(NonNegMeasurable):
    value: Number

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "value", _num(self.value))
        if self.value < 0:
            raise ValueError("constant must be non-negative")

    def _level(self, t):
        return TOP if t >= self.value else BOTTOM

    def _strict(self, t):
        return TOP if t > self.value else BOTTOM

    @property
    def bound(self):
        return self.value

    def as_simple(self):
        return SimpleFunction(((TOP, self.value),))


def constant(c) -> Constant:
    return Constant(c)


ZERO = Constant(0)


@dataclass(frozen=True, eq=False)
class Scaled(NonNegMeasurable):
    """``factor * inner`` for a finite factor > 0."""

    factor: Number
    inner: NonNegMeasurable

    def _level(self, t):
        return self.inner.level(t / self.factor)

    def _strict(self, t):
        return self.inner.strict_level(t / self.factor)

    @property
    def depth(self):
        return self.inner.depth

    @property
    def bound(self):
        b = self.inner.bound
        return None if b is None else b * self.factor

    def as_simple(self):
        s = self.inner.as_simple()
        return None if s is None else simple((a, x * self.factor) for a, x in s.parts)


def scaled(c, f: NonNegMeasurable) -> NonNegMeasurable:
    c = _num(c)
    if c < 0 or c == INF:
        raise ValueError("scale factor must be finite and non-negative")
    if c == 0:
        return ZERO
    if c == 1:
        return f
    return Scaled(c, f)


@dataclass(frozen=True, eq=False)
class Coordinate(NonNegMeasurable):
    """``max(sign * x_i, 0)``.

    ``{x_i <= t}`` is not a half-open box, so for ``sign=+1`` the level set is
    ``x_i < t``; the two differ by ``{x_i = t}``, which is null exactly when
    the backend has no atoms on coordinate ``i``.
    """

    coord: int
    sign: int = 1

    def _level(self, t):
        return cyl(self.coord, -INF, t) if self.sign > 0 else cyl(self.coord, -t, INF)

    def _strict(self, t):
        # same null-set caveat, mirrored for sign=-1
        return self._level(t)

    def __repr__(self):
        return f"coord({self.coord})" if self.sign > 0 else f"coord(-{self.coord})"


# -- lattice operations -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Min(NonNegMeasurable):
    args: tuple

    def _level(self, t):
        return FinJoin(*(f.level(t) for f in self.args))

    def _strict(self, t):
        return FinJoin(*(f.strict_level(t) for f in self.args))

    @property
    def depth(self):
        return max(f.depth for f in self.args)

    @property
    def bound(self):
        bs = [f.bound for f in self.args if f.bound is not None]
        return min(bs) if bs else None

    def as_simple(self):
        return _fold_simple(self.args, min)


@dataclass(frozen=True, eq=False)
class Max(NonNegMeasurable):
    args: tuple

    def _level(self, t):
        return FinMeet(*(f.level(t) for f in self.args))

    def _strict(self, t):
        return FinMeet(*(f.strict_level(t) for f in self.args))

    @property
    def depth(self):
        return max(f.depth for f in self.args)

    @property
    def bound(self):
        bs = [f.bound for f in self.args]
        return None if any(b is None for b in bs) else max(bs)

    def as_simple(self):
        return _fold_simple(self.args, max)


def _fold_simple(fs, op) -> Optional[SimpleFunction]:
    out = None
    for f in fs:
        s = f.as_simple()
        if s is None:
            return None
        out = s if out is None else combine_simple(out, s, op)
    return out


def pointwise_min(*fs: NonNegMeasurable) -> NonNegMeasurable:
    if len(fs) == 1:
        return fs[0]
    return Min(tuple(fs))


def pointwise_max(*fs: NonNegMeasurable) -> NonNegMeasurable:
    if len(fs) == 1:
        return fs[0]
    return Max(tuple(fs))


# -- sums and truncated differences ----------------------------------------------

def _resolution(n: int) -> int:
    """Grid resolution used by the n-th stream item (2^m about n)."""
    return max(n + 1, 1).bit_length() - 1


def _grid(m: int, top: Number) -> list[Fraction]:
    """Dyadics ``k / 2^m`` in ``[0, top]``."""
    if top == INF:
        raise ValueError("unbounded grid")
    kmax = math.floor(top * (1 << m))
    return [_dyadic(k, m) for k in range(kmax + 1)]


@dataclass(frozen=True, eq=False)
class Sum(NonNegMeasurable):
    """``f + g`` through level sets.

    ``{f+g <= t}`` is the meet over ``j`` of the join, over dyadic ``r`` in
    ``[0, t + 2^-j]``, of ``{f <= r} & {g <= t + 2^-j - r}``.  The outer meet
    is needed because the join alone misses points where ``f`` takes a
    non-dyadic value and ``f + g = t`` exactly.
    """

    f: NonNegMeasurable
    g: NonNegMeasurable

    @property
    def depth(self):
        return 2 + max(self.f.depth, self.g.depth)

    @property
    def bound(self):
        a, b = self.f.bound, self.g.bound
        return None if a is None or b is None else a + b

    def _pairs_join(self, top: Number) -> Term:
        f, g = self.f, self.g

        def item(i):
            m = _resolution(i)
            return FinJoin(*(FinMeet(f.level(r), g.level(top - r)) for r in _grid(m, top)))

        def majorant(n):
            m = _resolution(n)
            step = _dyadic(1, m)
            return FinJoin(*(FinMeet(f.level(r + step), g.level(top - r)) for r in _grid(m, top)))

        return CountJoin(FnStream(item, envelope_fn=majorant, stream_depth=max(f.depth, g.depth),
                                  monotone=True, label=f"pairs<={top}"))

    def _level(self, t):
        f, g = self.f, self.g

        def minorant(n):
            m = _resolution(n)
            return FinJoin(*(FinMeet(f.level(r), g.level(t - r)) for r in _grid(m, t)))

        return CountMeet(FnStream(lambda j: self._pairs_join(t + Fraction(1, 2 ** (j + 1))),
                                  envelope_fn=minorant, stream_depth=1 + max(f.depth, g.depth),
                                  monotone=True, label=f"sum<={t}"))

    def as_simple(self):
        a, b = self.f.as_simple(), self.g.as_simple()
        if a is None or b is None:
            return None
        return combine_simple(a, b, lambda x, y: x + y)


def fsum(f: NonNegMeasurable, g: NonNegMeasurable) -> NonNegMeasurable:
    """Pointwise sum; exact on simple operands."""
    a, b = f.as_simple(), g.as_simple()
    if a is not None and b is not None:
        return combine_simple(a, b, lambda x, y: x + y)
    return Sum(f, g)


@dataclass(frozen=True, eq=False)
class Monus(NonNegMeasurable):
    """``max(f - g, 0)``; the level-set form assumes ``g`` is finite wherever ``f`` is infinite."""

    f: NonNegMeasurable
    g: NonNegMeasurable

    @property
    def depth(self):
        return 2 + max(self.f.depth, self.g.depth)

    @property
    def bound(self):
        return self.f.bound

    def _g_range(self, m: int) -> Number:
        b = self.g.bound
        return b if b is not None else Fraction(m)

    def _join(self, top: Number) -> Term:
        f, g = self.f, self.g

        def item(i):
            m = _resolution(i)
            return FinJoin(*(FinMeet(Not(g.strict_level(r)), f.level(r + top)) for r in _grid(m, self._g_range(m))))

        def majorant(n):
            m = _resolution(n)
            step = _dyadic(1, m)
            hi = self._g_range(m)
            parts = [FinMeet(Not(g.strict_level(r)), f.level(r + step + top)) for r in _grid(m, hi)]
            if g.bound is None:
                parts.append(Not(g.strict_level(hi)))
            return FinJoin(*parts)

        return CountJoin(FnStream(item, envelope_fn=majorant, stream_depth=max(f.depth, g.depth),
                                  monotone=True, label=f"monus<={top}"))

    def _level(self, t):
        f, g = self.f, self.g

        def minorant(n):
            m = _resolution(n)
            return FinJoin(*(FinMeet(Not(g.strict_level(r)), f.level(r + t)) for r in _grid(m, self._g_range(m))))

        return CountMeet(FnStream(lambda j: self._join(t + Fraction(1, 2 ** (j + 1))),
                                  envelope_fn=minorant, stream_depth=1 + max(f.depth, g.depth),
                                  monotone=True, label=f"monus<={t}"))

    def as_simple(self):
        a, b = self.f.as_simple(), self.g.as_simple()
        if a is None or b is None:
            return None
        return combine_simple(a, b, _monus)


def _monus(x: Number, y: Number) -> Number:
    if x == INF and y == INF:
        return Fraction(0)
    return max(x - y, Fraction(0))


def monus(f: NonNegMeasurable, g: NonNegMeasurable) -> NonNegMeasurable:
    a, b = f.as_simple(), g.as_simple()
    if a is not None and b is not None:
        return combine_simple(a, b, _monus)
    return Monus(f, g)


def abs_diff(f: NonNegMeasurable, g: NonNegMeasurable) -> NonNegMeasurable:
    """``|f - g|`` for finite-valued operands."""
    return fsum(monus(f, g), monus(g, f))


# -- streams of functions and their limits -----------------------------------------

@dataclass(frozen=True, eq=False)
class FunStream:
    """``f_start, f_start+1, ...`` produced by ``rule(n)``.

    Optional certificates:
    ``modulus(n)`` bounds ``sup |f - f_n|`` for the limit ``f``;
    ``period`` states ``f_{n+period} = f_n`` for every ``n``;
    ``bound`` caps every ``f_n``;
    ``monotone`` is ``"up"`` or ``"down"`` for streams known to be monotone.
    """

    rule: Callable[[int], NonNegMeasurable]
    start: int = 0
    modulus: Optional[Callable[[int], Number]] = None
    period: Optional[int] = None
    bound: Optional[Number] = None
    label: str = "f"
    monotone: Optional[str] = None
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.monotone not in (None, "up", "down"):
            raise ValueError("monotone must be 'up', 'down' or None")

    def at(self, n: int) -> NonNegMeasurable:
        """The function with index ``n`` (``n >= start``)."""
        f = self._memo.get(n)
        if f is None:
            f = self.rule(n)
            self._memo[n] = f
        return f

    def item(self, i: int) -> NonNegMeasurable:
        return self.at(self.start + i)

    def error(self, i: int) -> Optional[Number]:
        return None if self.modulus is None else self.modulus(self.start + i)

    @property
    def depth(self) -> int:
        return self.item(0).depth


@dataclass(frozen=True, eq=False)
class LimUp(NonNegMeasurable):
    """Limit of an increasing stream: ``{f <= t}`` is the meet of ``{f_n <= t}``."""

    stream: FunStream

    @property
    def depth(self):
        return 1 + self.stream.depth

    @property
    def bound(self):
        return self.stream.bound

    def _level(self, t):
        s = self.stream

        def minorant(n):
            err = s.error(n)
            return None if err is None else s.item(n).level(t - err)

        return CountMeet(FnStream(lambda i: s.item(i).level(t), envelope_fn=minorant if s.modulus else None,
                                  stream_depth=s.depth, monotone=True, label=f"limup<={t}"))

    def _strict(self, t):
        return NonNegMeasurable._strict(self, t)


@dataclass(frozen=True, eq=False)
class LimDown(NonNegMeasurable):
    """Limit of a decreasing stream.

    ``{f < t}`` is the union of ``{f_n < t}``; ``{f <= t}`` is the meet over
    ``j`` of the union of ``{f_n <= t + 2^-j}``.
    """

    stream: FunStream

    @property
    def depth(self):
        return 2 + self.stream.depth

    @property
    def bound(self):
        return self.stream.bound if self.stream.bound is not None else self.stream.item(0).bound

    def _union(self, top: Number) -> Term:
        s = self.stream

        def majorant(n):
            err = s.error(n)
            return None if err is None else s.item(n).level(top + err)

        return CountJoin(FnStream(lambda i: s.item(i).level(top), envelope_fn=majorant if s.modulus else None,
                                  stream_depth=s.depth, monotone=True, label=f"limdown-union<={top}"))

    def _level(self, t):
        s = self.stream
        return CountMeet(FnStream(lambda j: self._union(t + Fraction(1, 2 ** (j + 1))),
                                  envelope_fn=lambda n: s.item(n).level(t),
                                  stream_depth=1 + s.depth, monotone=True, label=f"limdown<={t}"))

    def _strict(self, t):
        s = self.stream

        def majorant(n):
            err = s.error(n)
            return None if err is None else s.item(n).strict_level(t + err)

        return CountJoin(FnStream(lambda i: s.item(i).strict_level(t), envelope_fn=majorant if s.modulus else None,
                                  stream_depth=s.depth, monotone=True, label=f"limdown<{t}"))


def mono_limit_up(stream: FunStream) -> NonNegMeasurable:
    return LimUp(stream)


def mono_limit_down(stream: FunStream) -> NonNegMeasurable:
    return LimDown(stream)


def _period_slice(stream: FunStream) -> list[NonNegMeasurable]:
    return [stream.item(i) for i in range(stream.period)]


def liminf_fns(stream: FunStream) -> NonNegMeasurable:
    """Pointwise liminf.

    A periodic stream's liminf is the minimum over one period and a monotone
    stream's is its limit.  Otherwise it
    is the increasing limit of the tail infima ``g_k``, each the decreasing
    limit of running minima.
    """
    if stream.period:
        return pointwise_min(*_period_slice(stream))
    if stream.monotone:
        return LimUp(stream) if stream.monotone == "up" else LimDown(stream)

    def tail_inf(k):
        return LimDown(FunStream(lambda n: pointwise_min(*(stream.at(i) for i in range(k, n + 1))),
                                 start=k, bound=stream.bound, label=f"inf_{k}"))

    return LimUp(FunStream(tail_inf, start=stream.start, bound=stream.bound, label="liminf"))


def limsup_fns(stream: FunStream) -> NonNegMeasurable:
    """Pointwise limsup (dual of :func:`liminf_fns`)."""
    if stream.period:
        return pointwise_max(*_period_slice(stream))
    if stream.monotone:
        return LimUp(stream) if stream.monotone == "up" else LimDown(stream)

    def tail_sup(k):
        return LimUp(FunStream(lambda n: pointwise_max(*(stream.at(i) for i in range(k, n + 1))),
                               start=k, bound=stream.bound, label=f"sup_{k}"))

    return LimDown(FunStream(tail_sup, start=stream.start, bound=stream.bound, label="limsup"))


# -- dyadic ladder ------------------------------------------------------------------

def dyadic_approx(f: NonNegMeasurable, n: int) -> SimpleFunction:
    """Simple minorant taking the value ``k/2^n`` on ``{k/2^n <= f < (k+1)/2^n}``
    for ``k < n 2^n`` and ``n`` on ``{f >= n}``; empty parts are dropped."""
    if n < 1:
        raise ValueError("ladder level must be >= 1")
    s = f.as_simple()
    if s is not None:
        # round each value down directly instead of scanning n 2^n cells
        return simple((a, _ladder_value(x, n)) for a, x in s.parts)
    parts = []
    prev = BOTTOM
    for k in range(n << n):
        cur = f.strict_level(_dyadic(k + 1, n))
        parts.append((FinMeet(cur, Not(prev)), _dyadic(k, n)))
        prev = cur
    parts.append((Not(prev), Fraction(n)))
    return simple(parts)


def _ladder_value(x: Number, n: int) -> Fraction:
    if x >= n:
        return Fraction(n)
    return _dyadic(math.floor(x * (1 << n)), n)


def approx(f: NonNegMeasurable, n: int) -> SimpleFunction:
    return dyadic_approx(f, n)


# -- order and partition checks -----------------------------------------------------

def leq(f: NonNegMeasurable, g: NonNegMeasurable, measure, resolution: int = 3,
        top: Optional[Number] = None, eps: float = 1e-12, budget: Optional[int] = None):
    """Three-valued ``f <= g`` (True / False / None for unknown).

    Checks that ``{g <= t} - {f <= t}`` is null for ``t`` on the dyadic grid of
    the given resolution up to ``top`` (default: the larger known bound, else 4).
    """
    if top is None:
        bs = [b for b in (f.bound, g.bound) if b is not None and b != INF]
        top = max(bs) if bs else Fraction(4)
    verdict = TRUE
    for t in _grid(resolution, top):
        v = measure.is_null(FinMeet(g.level(t), Not(f.level(t))), eps, budget)
        if v == "nonnull":
            return FALSE
        if v == "unknown":
            verdict = UNKNOWN
    return verdict


def check_monotone_stream(stream: FunStream, measure, count: int = 4, increasing: bool = True, **kw):
    """Raise :class:`NotMonotone` if a consecutive pair is certifiably out of order."""
    verdict = TRUE
    for i in range(count):
        a, b = stream.item(i), stream.item(i + 1)
        v = leq(a, b, measure, **kw) if increasing else leq(b, a, measure, **kw)
        if v is FALSE:
            raise NotMonotone(f"stream items {i} and {i + 1} are not {'increasing' if increasing else 'decreasing'}")
        if v is UNKNOWN:
            verdict = UNKNOWN
    return verdict


def check_partition(s: SimpleFunction, measure, eps: float = 1e-12):
    """Three-valued check that the parts are pairwise disjoint and cover 1 (up to null)."""
    terms = [a for a, _ in s.parts]
    checks = [FinMeet(a, b) for i, a in enumerate(terms) for b in terms[i + 1:]]
    checks.append(Not(FinJoin(*terms)))
    verdict = TRUE
    for c in checks:
        v = measure.is_null(c, eps)
        if v == "nonnull":
            return FALSE
        if v == "unknown":
            verdict = UNKNOWN
    return verdict


# -- real and complex functions -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class RealMeasurable:
    """``u = pos - neg`` with ``pos = max(u, 0)`` and ``neg = max(-u, 0)``."""

    pos: NonNegMeasurable
    neg: NonNegMeasurable = ZERO

    def __neg__(self):
        return RealMeasurable(self.neg, self.pos)

    def split(self) -> tuple[NonNegMeasurable, NonNegMeasurable]:
        return self.pos, self.neg

    def abs(self) -> NonNegMeasurable:
        return fsum(self.pos, self.neg)


def split_real(u: RealMeasurable) -> tuple[NonNegMeasurable, NonNegMeasurable]:
    return u.split()


def real_from_nonneg(f: NonNegMeasurable) -> RealMeasurable:
    return RealMeasurable(f, ZERO)


def real_difference(f: NonNegMeasurable, g: NonNegMeasurable) -> RealMeasurable:
    """``f - g`` for finite-valued ``f``, ``g``."""
    return RealMeasurable(monus(f, g), monus(g, f))


def real_simple(parts: Iterable[tuple[Term, Number]]) -> RealMeasurable:
    """Signed simple function split part-wise."""
    parts = [(a, _num(x)) for a, x in parts]
    pos = simple((a, max(x, Fraction(0))) for a, x in parts)
    neg = simple((a, max(-x, Fraction(0))) for a, x in parts)
    return RealMeasurable(pos, neg)


@dataclass(frozen=True, eq=False)
class ComplexMeasurable:
    re: RealMeasurable
    im: RealMeasurable = field(default_factory=lambda: RealMeasurable(ZERO, ZERO))

    def parts(self) -> tuple[NonNegMeasurable, NonNegMeasurable, NonNegMeasurable, NonNegMeasurable]:
        return self.re.pos, self.re.neg, self.im.pos, self.im.neg

    def abs_majorant(self) -> NonNegMeasurable:
        """``u+ + u- + v+ + v-``: between ``|f|`` and ``2|f|``, so it decides integrability."""
        a, b, c, d = self.parts()
        return fsum(fsum(a, b), fsum(c, d))
