"""Lebesgue integrals against an :class:`~pointfree.extension.ExtendedMeasure`.

Simple functions are integrated exactly (up to the enclosures of the part
measures).  A general non-negative ``f`` goes through the layer-cake formula
``int f = int_0^inf mu(f > t) dt``: the integrand ``g(t) = 1 - mu({f <= t})``
is non-increasing, so on each cell ``[a, b]`` it lies between ``(b-a) g(b)``
and ``(b-a) g(a)``.  Cells are bisected where that gap is large, up to a
maximum ladder level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .borel_functions import (
    ComplexMeasurable,
    FunStream,
    NonNegMeasurable,
    RealMeasurable,
    SimpleFunction,
    ZERO,
    abs_diff,
    fsum,
    leq,
    liminf_fns,
)
from .errors import BudgetExhausted, DominationFails, InconsistentCertificate, NotIntegrable, UnboundedTail
from .extension import ExtendedMeasure
from .intervals import INF, Interval, Number, mul0
from .sigma_terms import TOP

OK, BUDGET, UNBOUNDED = "ok", "budget_exhausted", "unbounded_tail"


@dataclass(frozen=True)
class IntegralResult:
    lo: Number
    hi: Number
    converged: bool
    effort: int = 0
    status: str = OK
    method: str = "simple"

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"invalid integral interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Number:
        return INF if self.hi == INF else self.hi - self.lo

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def raise_for_status(self) -> "IntegralResult":
        if self.status == UNBOUNDED:
            raise UnboundedTail("tail mass could not be certified small; lo is still a valid lower bound", self)
        if not self.converged:
            raise BudgetExhausted(f"integral not resolved to tolerance (width {float(self.width):g})", self)
        return self

    def to_dict(self) -> dict:
        return {
            "lo": float(self.lo),
            "hi": float(self.hi),
            "converged": self.converged,
            "effort": self.effort,
            "status": self.status,
            "method": self.method,
        }


def integrate_simple(s: SimpleFunction, mu: ExtendedMeasure, eps: float = 1e-9,
                     budget: Optional[int] = None, strict: bool = False) -> IntegralResult:
    """``sum x_i * mu(a_i)`` with interval arithmetic and ``0 * inf = 0``."""
    finite = [x for _, x in s.parts if x != INF]
    scale = max(sum(finite, Fraction(0)), 1)
    part_eps = eps / (2 * scale * max(len(s.parts), 1))
    lo: Number = 0
    hi: Number = 0
    effort = 0
    converged_parts = True
    for a, x in s.parts:
        if x == 0:
            continue
        m = mu.eval(a, part_eps, budget)
        effort += m.effort
        converged_parts &= m.converged
        lo += mul0(x, m.lo)
        hi += mul0(x, m.hi)
    iv = Interval(lo, hi)
    if isinstance(iv.lo, float) or isinstance(iv.hi, float):
        iv = Interval(math.nextafter(float(lo), -INF) if lo and lo != INF else lo,
                      math.nextafter(float(hi), INF) if hi and hi != INF else hi)
    width = INF if iv.hi == INF else iv.hi - iv.lo
    converged = width <= eps or (iv.lo == INF)
    res = IntegralResult(iv.lo, iv.hi, converged, effort, OK if converged else BUDGET, "simple")
    if strict:
        res.raise_for_status()
    return res


def integrate(f: NonNegMeasurable, mu: ExtendedMeasure, eps: float = 1e-6,
              budget: Optional[int] = None, ladder: int = 12, bound: Optional[Number] = None,
              method: str = "auto", strict: bool = False, max_points: int = 20000) -> IntegralResult:
    """Enclosure of ``int f dmu``.

    ``method='auto'`` uses the exact simple path when ``f`` has one and the
    layer-cake ladder otherwise; ``'ladder'`` forces the latter.  ``bound``
    declares ``f <= bound`` everywhere.  Without any bound the upper end is
    certified only if ``mu(f > R)`` is null for the largest range ``R`` tried
    (``R`` doubles up to ``2^ladder``); otherwise ``hi`` is infinite and the
    status is ``unbounded_tail``.  ``max_points`` caps the number of level
    sets evaluated; hitting it leaves a sound but unconverged result.
    """
    if method not in ("auto", "ladder", "simple"):
        raise ValueError(f"unknown method {method!r}")
    if method != "ladder":
        s = f.as_simple()
        if s is not None:
            return integrate_simple(s, mu, eps, budget, strict)
        if method == "simple":
            raise ValueError("function has no exact simple representation")
    res = _LayerCake(f, mu, eps, budget, ladder, bound, max_points).run()
    if strict:
        res.raise_for_status()
    return res


class _LayerCake:
    def __init__(self, f, mu, eps, budget, ladder, bound, max_points=20000):
        self.f = f
        self.max_points = max_points
        self.mu = mu
        self.eps = eps
        self.budget = budget
        self.ladder = ladder
        caps = [b for b in (f.bound, None if bound is None else Fraction(bound) if not isinstance(bound, float) else bound)
                if b is not None and b != INF]
        self.cap = min(caps) if caps else None
        self.g: dict = {}
        self.effort = 0
        self.point_eps = eps

    def tail_mass(self, t) -> Interval:
        """Enclosure of ``mu(f > t)``."""
        hit = self.g.get(t)
        if hit is None:
            m = self.mu.eval(self.f.level(t), self.point_eps, self.budget)
            self.effort += max(m.effort, 1)
            hit = Interval(1 - m.hi, 1 - m.lo).clip(0, 1)
            self.g[t] = hit
        return hit

    def run(self) -> IntegralResult:
        status = OK
        if self.cap is not None:
            R = self.cap
        else:
            R = Fraction(1)
            while self.tail_mass(R).hi > self.mu.zero_threshold and R < (1 << self.ladder):
                R *= 2
            if self.tail_mass(R).hi > self.mu.zero_threshold:
                status = UNBOUNDED
        if R == 0:
            return IntegralResult(0, 0, True, self.effort, OK, "ladder")
        self.point_eps = min(self.eps / (4 * float(R)), 1e-9)
        g0 = self.tail_mass(Fraction(0))
        gR = Interval(0, 0) if self.cap is not None else self.tail_mass(R)
        cells = [(Fraction(0), R, g0, gR)]
        for _ in range(self.ladder + 1):
            lo, hi = self._sums(cells)
            if hi - lo <= self.eps:
                break
            limit = self.eps / (2 * R)
            nxt = []
            split_any = False
            for a, b, ga, gb in cells:
                w = b - a
                if (w * (ga.hi - gb.lo) > limit * w and w > R / (1 << self.ladder)
                        and len(self.g) < self.max_points):
                    m = (a + b) / 2
                    gm = self.tail_mass(m)
                    # the true value lies between the neighbours' values
                    lo_m = min(max(gm.lo, gb.lo), ga.hi)
                    hi_m = max(min(gm.hi, ga.hi), lo_m)
                    gm = Interval(lo_m, hi_m)
                    nxt += [(a, m, ga, gm), (m, b, gm, gb)]
                    split_any = True
                else:
                    nxt.append((a, b, ga, gb))
            cells = nxt
            if not split_any:
                break
        lo, hi = self._sums(cells)
        if status == UNBOUNDED:
            return IntegralResult(float(lo), INF, False, self.effort, UNBOUNDED, "ladder")
        lo_f = math.nextafter(float(lo), -INF) if lo > 0 else 0.0
        hi_f = math.nextafter(float(hi), INF)
        converged = hi - lo <= self.eps
        return IntegralResult(lo_f, hi_f, converged, self.effort, OK if converged else BUDGET, "ladder")

    @staticmethod
    def _sums(cells):
        lo = hi = 0
        for a, b, ga, gb in cells:
            w = b - a
            lo += w * gb.lo
            hi += w * ga.hi
        return lo, hi


# -- signed and complex integrals -------------------------------------------------

@dataclass(frozen=True)
class SignedResult:
    lo: Number
    hi: Number
    converged: bool
    effort: int
    pos: IntegralResult
    neg: IntegralResult

    @property
    def width(self):
        return self.hi - self.lo

    def to_dict(self):
        return {"lo": float(self.lo), "hi": float(self.hi), "converged": self.converged, "effort": self.effort}


@dataclass(frozen=True)
class ComplexResult:
    re: SignedResult
    im: SignedResult

    @property
    def converged(self):
        return self.re.converged and self.im.converged

    def to_dict(self):
        return {"re": self.re.to_dict(), "im": self.im.to_dict(), "converged": self.converged}


def _as_real(u) -> RealMeasurable:
    if isinstance(u, RealMeasurable):
        return u
    if isinstance(u, NonNegMeasurable):
        return RealMeasurable(u, ZERO)
    raise TypeError(f"not a real measurable function: {u!r}")


def _as_complex(u) -> ComplexMeasurable:
    if isinstance(u, ComplexMeasurable):
        return u
    return ComplexMeasurable(_as_real(u))


def integrate_real(u, mu: ExtendedMeasure, eps: float = 1e-6, budget: Optional[int] = None, **kw) -> SignedResult:
    """``int u+ - int u-``; raises :class:`NotIntegrable` unless both are certifiably finite."""
    u = _as_real(u)
    p = integrate(u.pos, mu, eps / 2, budget, **kw)
    n = integrate(u.neg, mu, eps / 2, budget, **kw)
    if p.hi == INF or n.hi == INF:
        raise NotIntegrable("integral of |u| is not certifiably finite")
    diff = p.interval - n.interval
    return SignedResult(diff.lo, diff.hi, p.converged and n.converged, p.effort + n.effort, p, n)


def integrate_complex(f, mu: ExtendedMeasure, eps: float = 1e-6, budget: Optional[int] = None, **kw) -> ComplexResult:
    f = _as_complex(f)
    return ComplexResult(integrate_real(f.re, mu, eps / 2, budget, **kw), integrate_real(f.im, mu, eps / 2, budget, **kw))


# -- convergence-theorem checks ---------------------------------------------------

@dataclass(frozen=True)
class FatouReport:
    left: IntegralResult
    right: Interval
    holds: bool
    strict: bool

    @property
    def margin(self) -> Number:
        return self.right.lo - self.left.hi

    def to_dict(self):
        return {
            "left": [float(self.left.lo), float(self.left.hi)],
            "right": [float(self.right.lo), float(self.right.hi)],
            "holds": self.holds,
            "strict": self.strict,
        }


def check_fatou(stream: FunStream, mu: ExtendedMeasure, eps: float = 1e-9, N: int = 16,
                budget: Optional[int] = None, **kw) -> FatouReport:
    """Compare ``int liminf f_n`` with ``liminf int f_n`` on items ``N//2 .. N-1``.

    With a modulus certificate the stream converges uniformly, so every
    ``int f_i`` widened by ``modulus(i) * mu(1)`` encloses the right side and
    the window's intersection is a rigorous enclosure.  Without one the right
    side is estimated by the window minimum.  ``holds`` is False only when
    the left side certifiably exceeds the right.
    """
    left = integrate(liminf_fns(stream), mu, eps, budget, **kw)
    window = range(N // 2, N)
    tail = [integrate(stream.item(i), mu, eps, budget, **kw) for i in window]
    right = None
    if stream.modulus is not None:
        total = mu.eval(TOP, eps, budget).hi
        boxes = [Interval(max(r.lo - mul0(stream.error(i), total), 0), r.hi + mul0(stream.error(i), total))
                 for i, r in zip(window, tail)]
        right = boxes[0]
        for b in boxes[1:]:
            right = right.intersect(b)
            if right is None:
                raise InconsistentCertificate("stream modulus contradicts the computed integrals")
    else:
        right = Interval(min(r.lo for r in tail), min(r.hi for r in tail))
    return FatouReport(left, right, not left.lo > right.hi, left.hi < right.lo)


@dataclass(frozen=True)
class DominatedReport:
    indices: tuple
    margins: tuple        # upper bounds on |int f_n - int f|
    l1: tuple             # upper bounds on int |f_n - f|

    @property
    def decreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.margins, self.margins[1:]))

    @property
    def final_margin(self) -> Number:
        return self.margins[-1]

    def to_dict(self):
        return {
            "indices": list(self.indices),
            "margins": [float(m) for m in self.margins],
            "l1": [float(x) for x in self.l1],
            "decreasing": self.decreasing,
        }


def _abs_majorant(u: ComplexMeasurable) -> NonNegMeasurable:
    re_abs = fsum(u.re.pos, u.re.neg)
    if u.im.pos is ZERO and u.im.neg is ZERO:
        return re_abs
    return u.abs_majorant()


def _sub(a: ComplexMeasurable, b: ComplexMeasurable) -> NonNegMeasurable:
    """Majorant of ``|a - b|``: ``|Re a - Re b| + |Im a - Im b|``."""
    def part(x: RealMeasurable, y: RealMeasurable):
        return abs_diff(fsum(x.pos, y.neg), fsum(y.pos, x.neg))

    re = part(a.re, b.re)
    if all(f is ZERO for f in (a.im.pos, a.im.neg, b.im.pos, b.im.neg)):
        return re
    return fsum(re, part(a.im, b.im))


def check_dominated(stream: FunStream, limit, g: NonNegMeasurable, mu: ExtendedMeasure,
                    eps: float = 1e-9, N: int = 64, indices: Optional[Sequence[int]] = None,
                    budget: Optional[int] = None, **kw) -> DominatedReport:
    """Check ``|f_n| <= g`` and report how ``int f_n`` approaches ``int f``.

    Domination is certified through ``|Re| + |Im|``, which equals ``|f_n|``
    for real streams.  Raises :class:`DominationFails` when that check fails.
    """
    if indices is None:
        indices = sorted({1, 2, 4, 8, 16, 32, N} | set(range(1, min(N, 8) + 1)))
        indices = [i for i in indices if i <= N]
    f = _as_complex(limit)
    fi = integrate_complex(f, mu, eps, budget, **kw)
    margins, l1 = [], []
    for i in indices:
        fn = _as_complex(stream.at(i))
        if leq(_abs_majorant(fn), g, mu) is False:
            raise DominationFails(f"|f_{i}| <= g fails")
        r = integrate_complex(fn, mu, eps, budget, **kw)
        m = max(abs(r.re.hi - fi.re.lo), abs(fi.re.hi - r.re.lo)) + max(abs(r.im.hi - fi.im.lo), abs(fi.im.hi - r.im.lo))
        margins.append(m)
        l1.append(integrate(_sub(fn, f), mu, eps, budget, **kw).hi)
    return DominatedReport(tuple(indices), tuple(margins), tuple(l1))
