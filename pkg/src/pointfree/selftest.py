"""Invariant suites run by ``pointfree selftest`` against one backend."""

from __future__ import annotations

import random
import time

from .backends.base import GeneratorBackend, random_combo
from .boolean_core import FiniteBoolAlgebra, check_laws
from .extension import ExtendedMeasure, check_additivity
from .sigma_terms import CountJoin, FinJoin, FnStream, Not, normalize, truncate


def _suite(name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing suite is a failing suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"name": name, "ok": bool(ok), "detail": detail, "seconds": round(time.perf_counter() - t0, 3)}


def run_selftest(backend: GeneratorBackend, samples: int = 200, seed: int = 0) -> dict:
    mu = ExtendedMeasure(backend, budget=16)

    def ring_laws():
        alg = FiniteBoolAlgebra.free(["a", "b"])
        fails = {k: v for k, v in check_laws(alg).items() if v}
        return not fails, "all laws hold on the free algebra with 4 atoms" if not fails else f"failures: {fails}"

    def additivity():
        rep = check_additivity(backend, samples, seed)
        return rep.ok, f"{samples} disjoint pairs, {len(rep.violations)} violation(s), max residual {rep.max_residual:.3g}"

    def complement():
        rng = random.Random(seed + 1)
        bad = 0
        for _ in range(max(samples // 4, 1)):
            c = random_combo(backend, rng)
            s = backend.mu0(c) + backend.mu0(Not(c))
            if not s.contains(1):
                bad += 1
        return bad == 0, f"{bad} complement pair(s) not summing to 1"

    def monotone_limit():
        rng = random.Random(seed + 2)
        items = [random_combo(backend, rng) for _ in range(16)]
        prefix = [FinJoin(*items[: i + 1]) for i in range(16)]
        t = CountJoin(FnStream(lambda i: prefix[min(i, 15)], tail_fn=lambda n: 0 if n >= 16 else 1,
                               monotone=True, label="selftest"))
        encl = [backend.mu0(truncate(t, n)[0]) for n in (1, 2, 4, 8, 16)]
        lows = [e.lo for e in encl]
        r = mu.eval(normalize(t), 1e-9)
        # enclosures of a non-decreasing sequence must never be certifiably decreasing
        ok = all(b.hi >= a.lo for a, b in zip(encl, encl[1:])) and r.interval.overlaps(encl[-1])
        return ok, f"lower bounds {[round(float(x), 6) for x in lows]}, limit in [{float(r.lo):.6g}, {float(r.hi):.6g}]"

    suites = [
        _suite("ring_laws", ring_laws),
        _suite("additivity", additivity),
        _suite("complement", complement),
        _suite("monotone_limit", monotone_limit),
    ]
    return {"ok": all(s["ok"] for s in suites), "suites": suites}
