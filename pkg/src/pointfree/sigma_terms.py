"""Lazy terms for the free abstract sigma-algebra over a generator backend.

A :class:`Term` is a hash-consed syntax tree: structurally equal terms are the
same Python object, so identity doubles as equality and memo tables can be
keyed on terms directly.  Countable joins and meets wrap a :class:`Stream`,
an immutable rule producing the i-th operand on demand.

Streams may carry two kinds of certificate that let the evaluator bound a
countable operation from both sides:

``tail(n)``
    a number bounding the measure of what the first ``n`` operands miss,
    i.e. ``mu(V s - V_{i<n} s_i)`` for a join (dually for a meet);
``envelope(n)``
    a term known to dominate the join (or be dominated by the meet).

Without either, a countable join is only bounded above by 1.
"""

from __future__ import annotations

import enum
import itertools
import threading
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional

from .index_expr import (
    IndexExpr,
    as_number,
    cantor_unpair,
    format_value,
    free_vars_of,
    lift,
    subst_value,
)
from .intervals import INF, Number

#: default cap on nesting of countable operators
DEFAULT_DEPTH_CAP = 3


class Kind(enum.IntEnum):
    TOP = 0
    BOT = 1
    GEN = 2
    NOT = 3
    AND = 4
    OR = 5
    CJOIN = 6
    CMEET = 7


@dataclass(frozen=True)
class Box:
    """Cylinder ``{x : lower <= <e_coord, x> < upper}``; fields may be templates."""

    coord: object
    lower: object
    upper: object

    def free_vars(self) -> frozenset:
        return free_vars_of(self.coord) | free_vars_of(self.lower) | free_vars_of(self.upper)

    @property
    def closed(self) -> bool:
        return not self.free_vars()

    def substitute(self, env: Mapping[str, Number]) -> "Box":
        return Box(
            subst_value(self.coord, env),
            subst_value(self.lower, env),
            subst_value(self.upper, env),
        )

    def __str__(self):
        return f"cyl({format_value(self.coord)}, {format_value(self.lower)}, {format_value(self.upper)})"


class Term:
    """Interned node; construct through :func:`Gen`, :func:`Not`, :func:`FinJoin`, ..."""

    __slots__ = ("kind", "args", "serial", "free", "depth", "_coords", "__weakref__")

    def __init__(self, kind: Kind, args: tuple, serial: int):
        self.kind = kind
        self.args = args
        self.serial = serial
        self._coords = None
        if kind is Kind.GEN:
            self.free = args[0].free_vars()
            self.depth = 0
        elif kind in (Kind.CJOIN, Kind.CMEET):
            self.free = args[0].free_vars
            self.depth = 1 + args[0].depth
        else:
            free = frozenset()
            depth = 0
            for a in args:
                free |= a.free
                depth = max(depth, a.depth)
            self.free = free
            self.depth = depth

    @property
    def is_finite(self) -> bool:
        """No countable operator anywhere below."""
        return self.depth == 0

    @property
    def coords(self) -> frozenset:
        """Coordinates referenced by a closed finite term."""
        if self._coords is None:
            if self.kind is Kind.GEN:
                self._coords = frozenset((self.args[0].coord,))
            elif self.kind in (Kind.CJOIN, Kind.CMEET):
                raise ValueError("coords are only defined for finite terms")
            else:
                out = frozenset()
                for a in self.args:
                    out |= a.coords
                self._coords = out
        return self._coords

    def __repr__(self):
        return f"Term<{term_str(self)}>"

    def __str__(self):
        return term_str(self)

    # operator sugar
    def __and__(self, other):
        return FinMeet(self, other)

    def __or__(self, other):
        return FinJoin(self, other)

    def __invert__(self):
        return Not(self)

    def __xor__(self, other):
        return symdiff_term(self, other)


_TABLE: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
_LOCK = threading.Lock()
_SERIAL = itertools.count()


def _intern(kind: Kind, args: tuple) -> Term:
    key = (kind, args)
    with _LOCK:
        t = _TABLE.get(key)
        if t is None:
            t = Term(kind, args, next(_SERIAL))
            _TABLE[key] = t
    return t


TOP = _intern(Kind.TOP, ())
BOTTOM = _intern(Kind.BOT, ())


def _canonical_coord(c):
    c = as_number(c)
    if isinstance(c, float) or c.denominator != 1 or c < 1:
        raise ValueError(f"coordinate index must be an integer >= 1, got {c}")
    return int(c)


def Gen(box: Box) -> Term:
    """Generator term; closed empty boxes fold to BOTTOM and full ones to TOP."""
    if box.closed:
        lo, hi = as_number(box.lower), as_number(box.upper)
        coord = _canonical_coord(box.coord)
        if lo >= hi:
            return BOTTOM
        if lo == -INF and hi == INF:
            return TOP
        box = Box(coord, lo, hi)
    return _intern(Kind.GEN, (box,))


def cyl(coord, lower, upper) -> Term:
    """``cyl(i, a, b)``: the cylinder ``a <= x_i < b``."""
    return Gen(Box(lift(coord), lift(lower), lift(upper)))


def Not(t: Term) -> Term:
    if t is TOP:
        return BOTTOM
    if t is BOTTOM:
        return TOP
    if t.kind is Kind.NOT:
        return t.args[0]
    return _intern(Kind.NOT, (t,))


def _nary(kind: Kind, unit: Term, absorbing: Term, terms: Iterable[Term]) -> Term:
    out: list[Term] = []
    seen: set[int] = set()
    for t in terms:
        if t.kind is kind:
            children = t.args
        else:
            children = (t,)
        for c in children:
            if c is absorbing:
                return absorbing
            if c is unit or id(c) in seen:
                continue
            seen.add(id(c))
            out.append(c)
    # x and not-x side by side
    for c in out:
        if c.kind is Kind.NOT and id(c.args[0]) in seen:
            return absorbing
    if not out:
        return unit
    if len(out) == 1:
        return out[0]
    return _intern(kind, tuple(out))


def FinJoin(*terms: Term) -> Term:
    return _nary(Kind.OR, BOTTOM, TOP, terms)


def FinMeet(*terms: Term) -> Term:
    return _nary(Kind.AND, TOP, BOTTOM, terms)


def CountJoin(stream: "Stream") -> Term:
    return _intern(Kind.CJOIN, (stream,))


def CountMeet(stream: "Stream") -> Term:
    return _intern(Kind.CMEET, (stream,))


def symdiff_term(s: Term, t: Term) -> Term:
    """Term for ``s (+) t``."""
    return FinJoin(FinMeet(s, Not(t)), FinMeet(Not(s), t))


def difference(s: Term, t: Term) -> Term:
    return FinMeet(s, Not(t))


# -- streams -----------------------------------------------------------------------

class Stream:
    """Rule for the operands of a countable join or meet (item 0 is the first)."""

    #: monotone flag: items increase (join) / decrease (meet) in the algebra
    monotone: bool = False

    def item(self, i: int) -> Term:
        raise NotImplementedError

    def tail(self, n: int) -> Optional[Number]:
        return None

    def envelope(self, n: int) -> Optional[Term]:
        return None

    @property
    def depth(self) -> int:
        return 0

    @property
    def free_vars(self) -> frozenset:
        return frozenset()

    def substitute(self, env: Mapping[str, Number]) -> "Stream":
        return self

    def describe(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class TemplateStream(Stream):
    """``item(i) = body[var := start + i]`` with an optional closed-form tail bound.

    ``tail_expr`` is evaluated with ``var`` bound to the first omitted index
    value and must bound the measure missed by the truncated operation.
    """

    var: str
    start: object
    body: Term
    tail_expr: object = None
    monotone: bool = False

    def _start(self) -> int:
        s = as_number(self.start)
        return int(s)

    def item(self, i: int) -> Term:
        return substitute(self.body, {self.var: Fraction(self._start() + i)})

    def tail(self, n: int) -> Optional[Number]:
        if self.tail_expr is None:
            return None
        v = subst_value(self.tail_expr, {self.var: Fraction(self._start() + n)})
        if isinstance(v, IndexExpr):
            return None
        return max(as_number(v), 0)

    @property
    def depth(self) -> int:
        return self.body.depth

    @property
    def free_vars(self) -> frozenset:
        inner = (self.body.free | free_vars_of(self.tail_expr)) - {self.var}
        return inner | free_vars_of(self.start)

    def substitute(self, env):
        env = {k: v for k, v in env.items() if k != self.var}
        if not (self.free_vars & env.keys()):
            return self
        return TemplateStream(
            self.var,
            subst_value(self.start, env),
            substitute(self.body, env),
            subst_value(self.tail_expr, env) if self.tail_expr is not None else None,
            self.monotone,
        )

    def describe(self):
        return f"{self.var} in {format_value(self.start)}.."


@dataclass(frozen=True)
class DiagonalStream(Stream):
    """Flattening of a countable operation over a countable operation of the same kind.

    Item ``k`` is ``body[outer := o0 + pi1(k), inner := i0 + pi2(k)]`` with the
    Cantor enumeration of index pairs.
    """

    outer_var: str
    outer_start: object
    inner_var: str
    inner_start: object
    body: Term

    def item(self, k: int) -> Term:
        a, b = cantor_unpair(k)
        env = {
            self.outer_var: Fraction(int(as_number(self.outer_start)) + a),
            self.inner_var: Fraction(int(as_number(self.inner_start)) + b),
        }
        return substitute(self.body, env)

    @property
    def depth(self) -> int:
        return self.body.depth

    @property
    def free_vars(self) -> frozenset:
        inner = self.body.free - {self.outer_var, self.inner_var}
        return inner | free_vars_of(self.outer_start) | free_vars_of(self.inner_start)

    def substitute(self, env):
        env = {k: v for k, v in env.items() if k not in (self.outer_var, self.inner_var)}
        if not (self.free_vars & env.keys()):
            return self
        return DiagonalStream(
            self.outer_var,
            subst_value(self.outer_start, env),
            self.inner_var,
            subst_value(self.inner_start, env),
            substitute(self.body, env),
        )

    def describe(self):
        return f"({self.outer_var}, {self.inner_var}) diagonal"


@dataclass(frozen=True)
class NegatedStream(Stream):
    """Pointwise complement of another stream (used by De Morgan)."""

    inner: Stream

    def item(self, i):
        return negate(normalize(self.inner.item(i)))

    def tail(self, n):
        return self.inner.tail(n)

    def envelope(self, n):
        env = self.inner.envelope(n)
        return None if env is None else negate(normalize(env))

    @property
    def monotone(self):
        return self.inner.monotone

    @property
    def depth(self):
        return self.inner.depth

    @property
    def free_vars(self):
        return self.inner.free_vars

    def substitute(self, env):
        s = self.inner.substitute(env)
        return self if s is self.inner else NegatedStream(s)

    def describe(self):
        return f"not({self.inner.describe()})"


@dataclass(frozen=True, eq=False)
class FnStream(Stream):
    """Stream from Python callables (library use; not serializable).

    Identity-compared, so build it once and reuse the object.
    """

    fn: Callable[[int], Term]
    tail_fn: Optional[Callable[[int], Number]] = None
    envelope_fn: Optional[Callable[[int], Term]] = None
    stream_depth: int = 0
    monotone: bool = False
    label: str = "fn"
    _memo: dict = field(default_factory=dict, repr=False)

    def item(self, i):
        t = self._memo.get(i)
        if t is None:
            t = self.fn(i)
            self._memo[i] = t
        return t

    def tail(self, n):
        return None if self.tail_fn is None else self.tail_fn(n)

    def envelope(self, n):
        return None if self.envelope_fn is None else self.envelope_fn(n)

    @property
    def depth(self):
        return self.stream_depth

    def describe(self):
        return self.label


def Vee(var: str, start, body: Term, tail=None, monotone: bool = False) -> Term:
    """Countable join over ``var = start, start+1, ...`` of a template body."""
    return CountJoin(TemplateStream(var, lift(start), body, lift(tail) if tail is not None else None, monotone))


def Wedge(var: str, start, body: Term, tail=None, monotone: bool = False) -> Term:
    return CountMeet(TemplateStream(var, lift(start), body, lift(tail) if tail is not None else None, monotone))


# -- substitution and normalization -------------------------------------------------

def substitute(t: Term, env: Mapping[str, Number]) -> Term:
    if not (t.free & env.keys()):
        return t
    k = t.kind
    if k is Kind.GEN:
        return Gen(t.args[0].substitute(env))
    if k is Kind.NOT:
        return Not(substitute(t.args[0], env))
    if k is Kind.AND:
        return FinMeet(*(substitute(a, env) for a in t.args))
    if k is Kind.OR:
        return FinJoin(*(substitute(a, env) for a in t.args))
    s = t.args[0].substitute(env)
    return CountJoin(s) if k is Kind.CJOIN else CountMeet(s)


_NORMAL: "weakref.WeakKeyDictionary[Term, Term]" = weakref.WeakKeyDictionary()
_NORMAL_LOCK = threading.Lock()


def normalize(t: Term) -> Term:
    """Negation normal form with flattened joins/meets.

    Complements are pushed down to generators (through countable operations
    too), double negations vanish, and a countable join of countable joins
    (both plain templates without certificates) becomes one join over the
    diagonal enumeration of index pairs.  Idempotent: the result is its own
    normal form.
    """
    with _NORMAL_LOCK:
        hit = _NORMAL.get(t)
    if hit is not None:
        return hit
    out = _normalize(t)
    with _NORMAL_LOCK:
        _NORMAL[t] = out
        _NORMAL[out] = out
    return out


def _normalize(t: Term) -> Term:
    k = t.kind
    if k in (Kind.TOP, Kind.BOT, Kind.GEN):
        return t
    if k is Kind.NOT:
        return negate(normalize(t.args[0]))
    if k is Kind.AND:
        return FinMeet(*map(normalize, t.args))
    if k is Kind.OR:
        return FinJoin(*map(normalize, t.args))
    return _normalize_countable(k, t.args[0])


def _normalize_countable(kind: Kind, s: Stream) -> Term:
    wrap = CountJoin if kind is Kind.CJOIN else CountMeet
    if isinstance(s, TemplateStream):
        body = normalize(s.body)
        if (
            s.tail_expr is None
            and body.kind is kind
            and isinstance(body.args[0], TemplateStream)
            and body.args[0].tail_expr is None
            and s.var not in free_vars_of(body.args[0].start)
        ):
            inner = body.args[0]
            return wrap(DiagonalStream(s.var, s.start, inner.var, inner.start, inner.body))
        if body is not s.body:
            s = TemplateStream(s.var, s.start, body, s.tail_expr, s.monotone)
    return wrap(s)


def negate(t: Term) -> Term:
    """Complement of a term already in normal form, staying in normal form."""
    k = t.kind
    if k is Kind.TOP:
        return BOTTOM
    if k is Kind.BOT:
        return TOP
    if k is Kind.GEN:
        return Not(t)
    if k is Kind.NOT:
        return t.args[0]
    if k is Kind.AND:
        return FinJoin(*map(negate, t.args))
    if k is Kind.OR:
        return FinMeet(*map(negate, t.args))
    s = t.args[0]
    ns = s.inner if isinstance(s, NegatedStream) else NegatedStream(s)
    return CountMeet(ns) if k is Kind.CJOIN else CountJoin(ns)


# -- truncation -------------------------------------------------------------------

@dataclass(frozen=True)
class Truncation:
    """Finite bounds: ``mu(lower) - lower_slack <= mu(t) <= mu(upper) + upper_slack``."""

    lower: Term
    upper: Term
    lower_slack: Number = 0
    upper_slack: Number = 0


def truncate(t: Term, n: int) -> tuple[Term, Term]:
    """Finite combinations ``lower <= t <= upper`` using the first ``n`` stream items.

    A countable join contributes its first ``n`` operands below and its
    envelope (or 1) above; a countable meet is treated dually.
    """
    tr = _Truncator(n, use_tails=False).run(normalize(t))
    return tr.lower, tr.upper


def truncate_with_slack(t: Term, n: int) -> Truncation:
    """Like :func:`truncate`, but also exploits declared tail bounds.

    Where a stream certifies that its first ``n`` items miss at most
    ``tail(n)`` of measure, the finite prefix is used on the loose side too and
    the tail is added to the slack.
    """
    return _Truncator(n, use_tails=True).run(normalize(t))


class _Truncator:
    def __init__(self, n: int, use_tails: bool):
        self.n = n
        self.use_tails = use_tails
        self.memo: dict[int, Truncation] = {}

    def run(self, t: Term) -> Truncation:
        hit = self.memo.get(t.serial)
        if hit is not None:
            return hit
        out = self._run(t)
        self.memo[t.serial] = out
        return out

    def _run(self, t: Term) -> Truncation:
        k = t.kind
        if t.free:
            raise ValueError(f"cannot truncate a term with free index variables {sorted(t.free)}")
        if t.is_finite:
            return Truncation(t, t)
        if k in (Kind.AND, Kind.OR):
            parts = [self.run(a) for a in t.args]
            comb = FinMeet if k is Kind.AND else FinJoin
            return Truncation(
                comb(*(p.lower for p in parts)),
                comb(*(p.upper for p in parts)),
                sum(p.lower_slack for p in parts),
                sum(p.upper_slack for p in parts),
            )
        s: Stream = t.args[0]
        items = [self.run(normalize(s.item(i))) for i in range(self.n)]
        env = s.envelope(self.n)
        env_tr = self.run(normalize(env)) if env is not None else None
        tail = s.tail(self.n) if self.use_tails else None
        if k is Kind.CJOIN:
            lower = FinJoin(*(p.lower for p in items))
            lower_slack = sum(p.lower_slack for p in items)
            uppers, upper_slack = [], 0
            if tail is not None:
                uppers.append(FinJoin(*(p.upper for p in items)))
                upper_slack += tail + sum(p.upper_slack for p in items)
            if env_tr is not None:
                uppers.append(env_tr.upper)
                upper_slack += env_tr.upper_slack
            upper = FinMeet(*uppers) if uppers else TOP
            return Truncation(lower, upper, lower_slack, upper_slack)
        upper = FinMeet(*(p.upper for p in items))
        upper_slack = sum(p.upper_slack for p in items)
        lowers, lower_slack = [], 0
        if tail is not None:
            lowers.append(FinMeet(*(p.lower for p in items)))
            lower_slack += tail + sum(p.lower_slack for p in items)
        if env_tr is not None:
            lowers.append(env_tr.lower)
            lower_slack += env_tr.lower_slack
        lower = FinJoin(*lowers) if lowers else BOTTOM
        return Truncation(lower, upper, lower_slack, upper_slack)


# -- printing ---------------------------------------------------------------------

def term_str(t: Term) -> str:
    k = t.kind
    if k is Kind.TOP:
        return "top"
    if k is Kind.BOT:
        return "bot"
    if k is Kind.GEN:
        return str(t.args[0])
    if k is Kind.NOT:
        inner = term_str(t.args[0])
        return f"!{inner}" if t.args[0].kind in (Kind.GEN, Kind.NOT, Kind.TOP, Kind.BOT) else f"!({inner})"
    if k in (Kind.AND, Kind.OR):
        op = " & " if k is Kind.AND else " | "
        return "(" + op.join(term_str(a) for a in t.args) + ")"
    s = t.args[0]
    name = "Vee" if k is Kind.CJOIN else "Wedge"
    if isinstance(s, TemplateStream):
        extra = f", tail={format_value(s.tail_expr)}" if s.tail_expr is not None else ""
        return f"{name}({s.var} in {format_value(s.start)}.., {term_str(s.body)}{extra})"
    return f"{name}<{s.describe()}>"
