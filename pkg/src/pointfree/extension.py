"""Certified evaluation of the countably additive extension of ``mu0``.

The value on a sigma-term is the limit of ``mu0`` on finite truncations.  Each
round truncates at a larger depth and converts the two finite bounds (plus any
tail slack) into an interval; rounds are intersected, so cached enclosures
only ever shrink.
"""

from __future__ import annotations

import random
import threading
import weakref
from dataclasses import dataclass, field
from typing import Optional

from .backends.base import GeneratorBackend, random_combo
from .errors import BudgetExhausted, DepthCapExceeded, InconsistentCertificate
from .intervals import Interval, Number
from .sigma_terms import DEFAULT_DEPTH_CAP, Not, Term, FinJoin, FinMeet, normalize, truncate_with_slack

NULL, NONNULL, UNKNOWN = "null", "nonnull", "unknown"


@dataclass(frozen=True)
class MeasureInterval:
    lo: Number
    hi: Number
    effort: int = 0
    converged: bool = True
    status: str = "ok"

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi <= 1:
            raise ValueError(f"invalid measure interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def to_dict(self) -> dict:
        return {
            "lo": float(self.lo),
            "hi": float(self.hi),
            "converged": self.converged,
            "effort": self.effort,
            "status": self.status,
        }


def depth_schedule(budget: int) -> list[int]:
    """Truncation depths 1, 2, 4, ... ending exactly at ``budget``."""
    out, n = [], 1
    while n < budget:
        out.append(n)
        n *= 2
    out.append(max(budget, 1))
    return out


class ExtendedMeasure:
    """The unique measure extending a backend's ``mu0``, evaluated on demand."""

    def __init__(
        self,
        backend: GeneratorBackend,
        budget: int = 64,
        zero_threshold: float = 1e-12,
        depth_cap: int = DEFAULT_DEPTH_CAP,
    ):
        self.backend = backend
        self.budget = budget
        self.zero_threshold = zero_threshold
        self.depth_cap = depth_cap
        self._cache: "weakref.WeakKeyDictionary[Term, MeasureInterval]" = weakref.WeakKeyDictionary()
        self._lock = threading.Lock()

    def cached(self, t: Term) -> Optional[MeasureInterval]:
        with self._lock:
            return self._cache.get(normalize(t))

    def eval(self, t: Term, eps: float = 1e-9, budget: Optional[int] = None, strict: bool = False) -> MeasureInterval:
        """Interval containing ``mu(t)``.

        Stops once the width is at most ``eps``; otherwise returns the best
        interval after the final round with ``converged=False`` (or raises
        :class:`BudgetExhausted` when ``strict``).
        """
        if eps <= 0:
            raise ValueError("eps must be positive")
        budget = self.budget if budget is None else budget
        t = normalize(t)
        if t.free:
            raise ValueError(f"term has free index variables {sorted(t.free)}")
        if t.depth > self.depth_cap:
            raise DepthCapExceeded(f"countable nesting depth {t.depth} exceeds cap {self.depth_cap}")
        with self._lock:
            best = self._cache.get(t)
        if best is not None and best.hi - best.lo <= eps:
            return best
        if t.is_finite:
            v = self.backend.mu0(t)
            res = MeasureInterval(v.lo, v.hi, 0, v.hi - v.lo <= eps, "ok")
            return self._commit(t, res, strict)
        cur = best.interval if best is not None else Interval(0, 1)
        effort = best.effort if best is not None else 0
        converged = False
        for n in depth_schedule(budget):
            tr = truncate_with_slack(t, n)
            effort += n
            lo = self.backend.mu0(tr.lower).lo - tr.lower_slack
            hi = self.backend.mu0(tr.upper).hi + tr.upper_slack
            step = Interval(min(max(lo, 0), 1), max(min(hi, 1), 0)) if lo <= hi else None
            if step is None:
                raise InconsistentCertificate(
                    f"truncation bounds crossed at depth {n}: lower {lo} > upper {hi}"
                )
            nxt = cur.intersect(step)
            if nxt is None:
                raise InconsistentCertificate(
                    f"round at depth {n} gave [{step.lo}, {step.hi}] disjoint from earlier [{cur.lo}, {cur.hi}]"
                )
            cur = nxt
            if cur.hi - cur.lo <= eps:
                converged = True
                break
        res = MeasureInterval(cur.lo, cur.hi, effort, converged, "ok" if converged else "budget_exhausted")
        return self._commit(t, res, strict)

    __call__ = eval

    def _commit(self, t: Term, res: MeasureInterval, strict: bool) -> MeasureInterval:
        with self._lock:
            old = self._cache.get(t)
            if old is not None:
                both = old.interval.intersect(res.interval)
                if both is None:
                    raise InconsistentCertificate(f"new enclosure of {t} disjoint from cached one")
                res = MeasureInterval(
                    both.lo, both.hi, max(old.effort, res.effort), res.converged or old.converged, res.status
                )
            self._cache[t] = res
        if strict and not res.converged:
            raise BudgetExhausted(f"budget exhausted with width {res.width}", res)
        return res

    def is_null(self, t: Term, eps: float = 1e-12, budget: Optional[int] = None) -> str:
        """Three-valued null test: ``null``, ``nonnull`` or ``unknown``."""
        r = self.eval(t, eps, budget)
        if r.hi <= self.zero_threshold:
            return NULL
        if r.lo > 0:
            return NONNULL
        return UNKNOWN

    def equal_mod_null(self, s: Term, t: Term, eps: float = 1e-12, budget: Optional[int] = None) -> str:
        """Three-valued test that ``s (+) t`` is null."""
        from .sigma_terms import symdiff_term

        return self.is_null(symdiff_term(s, t), eps, budget)


@dataclass
class AdditivityReport:
    backend: str
    samples: int
    max_residual: float = 0.0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "violations": len(self.violations),
            "ok": self.ok,
        }


def check_additivity(backend: GeneratorBackend, samples: int = 1000, seed: int = 0, size: int = 2) -> AdditivityReport:
    """Spot-check ``mu0(a | b) = mu0(a) + mu0(b)`` on random disjoint pairs.

    ``b`` is made disjoint from ``a`` by replacing it with ``b & !a``.  A
    violation is a pair whose enclosures cannot be reconciled: the interval
    for the join and the summed intervals do not overlap.
    """
    rng = random.Random(seed)
    rep = AdditivityReport(backend.name, samples)
    for _ in range(samples):
        a = random_combo(backend, rng, size)
        b = FinMeet(random_combo(backend, rng, size), Not(a))
        whole = backend.mu0(FinJoin(a, b))
        parts = backend.mu0(a) + backend.mu0(b)
        gap = max(float(whole.lo - parts.hi), float(parts.lo - whole.hi), 0.0)
        resid = abs(float(whole.mid) - float(parts.mid))
        rep.max_residual = max(rep.max_residual, resid)
        if gap > 0:
            rep.violations.append((str(a), str(b), resid))
    return rep
