"""Acceptance criteria 1-10.

Each test carries an ``acceptance`` marker; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run.  Run on its own with
``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from pointfree.backends import (
    CorruptedBackend, FiniteBackend, GaussianBackend, ProductBackend, SkewNormalBackend,
    UnitIntervalBackend, mc_oracle_sample,
)
from pointfree.backends.product import Exponential, Laplace, Normal, Uniform
from pointfree.boolean_core import LAWS, FiniteBoolAlgebra, check_laws, complement, join, meet, symdiff
from pointfree.borel_functions import (
    Coordinate, FunStream, constant, dyadic_approx, fsum, indicator, mono_limit_up, pointwise_min, scaled, simple,
)
from pointfree.errors import ConfigError, DominationFails
from pointfree.extension import ExtendedMeasure, check_additivity
from pointfree.index_expr import BinOp, Call, Const, Var
from pointfree.integration import check_dominated, check_fatou, integrate
from pointfree.sigma_terms import FinJoin, FinMeet, Not, Vee, cyl


def note(request, text):
    request.node.user_properties.append(("detail", text))
    print(text)


def random_simple_on(rng, cells, values):
    return simple([(c, v) for c, v in zip(cells, values)])


# 1 ------------------------------------------------------------------------------

@pytest.mark.acceptance(1, "Boolean-ring, De Morgan and distributivity laws on all algebras with <= 4 atoms")
def test_criterion_1_algebraic_laws(request):
    start = time.perf_counter()
    failures = {}
    for n in range(0, 5):
        alg = FiniteBoolAlgebra(n)
        failures.update({(n, k): v for k, v in check_laws(alg).items() if v})
        # independent route: compare every operation with frozenset algebra
        as_set = lambda e: frozenset(i for i in range(n) if e.bits >> i & 1)
        universe = frozenset(range(n))
        elems = list(alg.elements())
        for a, b in itertools.product(elems, repeat=2):
            A, B = as_set(a), as_set(b)
            assert as_set(meet(a, b)) == A & B
            assert as_set(join(a, b)) == A | B
            assert as_set(symdiff(a, b)) == A ^ B
            assert (a <= b) == (A <= B)
        for a in elems:
            assert as_set(complement(a)) == universe - as_set(a)
    elapsed = time.perf_counter() - start
    note(request, f"{len(LAWS)} laws, {elapsed:.2f}s")
    assert not failures
    assert elapsed < 10


# 2 ------------------------------------------------------------------------------

@pytest.mark.acceptance(2, "unit-interval identity at ladder 12 encloses 1/2 with width <= 2^-10")
def test_criterion_2_classical_compatibility(request):
    start = time.perf_counter()
    r = integrate(Coordinate(1), ExtendedMeasure(UnitIntervalBackend()), eps=1e-12, ladder=12)
    elapsed = time.perf_counter() - start
    note(request, f"[{float(r.lo):.6f}, {float(r.hi):.6f}] width {float(r.width):.3g}, {elapsed:.2f}s")
    assert r.lo <= Fraction(1, 2) <= r.hi
    assert r.width <= Fraction(1, 2 ** 10)
    assert elapsed < 5


# 3 ------------------------------------------------------------------------------

def _monotone_case(rng, k):
    """An exact backend, a bounded simple ``f`` and an increasing stream to it."""
    if k % 2 == 0:
        w = [Fraction(rng.randint(1, 9)) for _ in range(4)]
        backend = FiniteBackend([x / sum(w) for x in w])
        cells = [cyl(1, i, i + 1) for i in range(4)]
    else:
        cuts = sorted({Fraction(rng.randint(1, 15), 16) for _ in range(3)})
        edges = [Fraction(0)] + cuts + [Fraction(1)]
        backend = UnitIntervalBackend()
        cells = [cyl(1, "-inf" if i == 0 else a, "inf" if i == len(edges) - 2 else b)
                 for i, (a, b) in enumerate(zip(edges, edges[1:]))]
    values = [Fraction(rng.randint(0, 48), rng.randint(1, 12)) for _ in cells]
    f = random_simple_on(rng, cells, values)
    B = f.bound
    kind = k % 3
    if kind == 0:
        stream = FunStream(lambda n: dyadic_approx(f, n), start=1,
                           modulus=lambda n: max(Fraction(1, 2 ** n), B - n), bound=B, monotone="up")
    elif kind == 1:
        stream = FunStream(lambda n: pointwise_min(f, constant(n)), start=1,
                           modulus=lambda n: max(B - n, 0), bound=B, monotone="up")
    else:
        stream = FunStream(lambda n: scaled(1 - Fraction(1, 2 ** n), f), start=1,
                           modulus=lambda n: B / 2 ** n, bound=B, monotone="up")
    return ExtendedMeasure(backend, budget=64), f, stream


@pytest.mark.acceptance(3, "monotone convergence on 20 random streams over exact backends")
def test_criterion_3_monotone_convergence(request):
    rng = random.Random(2024)
    worst = 0.0
    for k in range(20):
        mu, f, stream = _monotone_case(rng, k)
        lows = [integrate(stream.at(n), mu, eps=1e-12).lo for n in range(1, 65)]
        assert all(b >= a for a, b in zip(lows, lows[1:])), f"case {k}: lower bounds decrease"
        final = integrate(stream.at(64), mu, eps=1e-12)
        lim = integrate(mono_limit_up(stream), mu, eps=1e-7, ladder=28, budget=64)
        combined = float(final.width) + float(lim.width)
        worst = max(worst, combined)
        assert final.interval.overlaps(lim.interval), f"case {k}: {final} vs {lim}"
        assert combined <= 1e-6, f"case {k}: combined width {combined}"
    note(request, f"worst combined width {worst:.3g}")


# 4 ------------------------------------------------------------------------------

@pytest.mark.acceptance(4, "linearity on 50 random pairs over the finite backend")
def test_criterion_4_linearity(request):
    rng = random.Random(7)
    worst = 0.0
    for _ in range(50):
        w = [Fraction(rng.randint(1, 20)) for _ in range(5)]
        weights = [x / sum(w) for x in w]
        mu = ExtendedMeasure(FiniteBackend(weights))
        cells = [cyl(1, i, i + 1) for i in range(5)]
        xs = [Fraction(rng.randint(0, 100), rng.randint(1, 16)) for _ in cells]
        ys = [Fraction(rng.randint(0, 100), rng.randint(1, 16)) for _ in cells]
        f, g = simple(zip(cells, xs)), simple(zip(cells, ys))
        a, b, c = integrate(f, mu), integrate(g, mu), integrate(fsum(f, g), mu)
        gap = abs(c.lo - a.lo - b.lo)
        assert gap <= a.width + b.width + c.width
        worst = max(worst, float(gap))
        # brute force over atoms
        assert c.lo == c.hi == sum(p * (x + y) for p, x, y in zip(weights, xs, ys))
    note(request, f"max residual {worst:.3g}")
    assert worst <= 1e-12


# 5 ------------------------------------------------------------------------------

@pytest.mark.acceptance(5, "Fatou: strict for alternating indicators, equality for monotone streams")
def test_criterion_5_fatou(request):
    mu = ExtendedMeasure(FiniteBackend(["1/4", "1/4", "1/2"]))
    a = FinJoin(cyl(1, 0, 1), cyl(1, 1, 2))  # measure 1/2
    alt = FunStream(lambda n: indicator(a) if n % 2 == 0 else indicator(Not(a)), period=2)
    rep = check_fatou(alt, mu, eps=1e-12, N=16)
    assert rep.left.hi <= 1e-9
    assert abs(rep.right.lo - 0.5) <= 1e-9 and abs(rep.right.hi - 0.5) <= 1e-9
    assert rep.strict
    rng = random.Random(11)
    for k in range(3):
        mu, f, stream = _monotone_case(rng, 3 * k)
        rep = check_fatou(stream, mu, eps=1e-7, N=64, ladder=28, budget=64)
        assert rep.holds and not rep.strict
        assert rep.left.interval.overlaps(rep.right)
        assert float(rep.left.width) + float(rep.right.width) <= 1e-6
    note(request, "alternating: 0 < 1/2; monotone: equal within widths")


# 6 ------------------------------------------------------------------------------

@pytest.mark.acceptance(6, "dominated convergence margins shrink; undominated stream rejected")
def test_criterion_6_dominated(request):
    mu = ExtendedMeasure(FiniteBackend(["1/8", "3/8", "1/2"]))
    f = simple([(cyl(1, 0, 1), 3), (cyl(1, 1, 2), Fraction(1, 2)), (cyl(1, 2, 3), 2)])
    stream = FunStream(lambda n: scaled(1 + Fraction(1, 2 ** n), f), start=1)
    rep = check_dominated(stream, f, scaled(2, f), mu, eps=1e-12, N=64)
    total = Fraction(3, 8) + Fraction(3, 16) + 1
    assert rep.indices[-1] == 64
    assert rep.decreasing
    for n, m in zip(rep.indices, rep.margins):
        assert m == total / 2 ** n
    assert rep.final_margin <= 1e-6
    blow = FunStream(lambda n: scaled(n, f), start=1)
    with pytest.raises(DominationFails):
        check_dominated(blow, f, scaled(2, f), mu, N=8)
    note(request, f"final margin {float(rep.final_margin):.3g}")


# 7 ------------------------------------------------------------------------------

def _product_oracle():
    with mpmath.workdps(40):
        p = mpmath.mpf(1)
        for k in range(1, 400):
            p *= 1 - mpmath.mpf(2) ** -k
        return 1 - p


@pytest.mark.acceptance(7, "Gaussian countable join at budget 30 encloses 1 - prod(1 - 2^-n)")
def test_criterion_7_extension(request):
    n = Var("n")
    term = Vee("n", 1, cyl(n, Call("c", (n,)), "inf"),
               tail=BinOp("**", Const(Fraction(2)), BinOp("-", Const(Fraction(1)), n)))
    start = time.perf_counter()
    r = ExtendedMeasure(GaussianBackend()).eval(term, eps=1e-3, budget=30)
    elapsed = time.perf_counter() - start
    want = _product_oracle()
    note(request, f"[{float(r.lo):.10f}, {float(r.hi):.10f}] oracle {float(want):.10f}, {elapsed:.2f}s")
    assert r.lo <= want <= r.hi
    assert r.width <= 1e-3
    assert abs(float(want) - 0.711212) < 1e-6
    assert elapsed < 10


# 8 ------------------------------------------------------------------------------

@pytest.mark.acceptance(8, "Gaussian reference values")
def test_criterion_8_gaussian_values(request):
    g = GaussianBackend()
    half = g.mu0(cyl(1, 0, "inf"))
    assert half.lo == half.hi == Fraction(1, 2)
    with mpmath.workdps(30):
        want = mpmath.erf(1 / mpmath.sqrt(2))
    one_sd = g.mu0(cyl(1, -1, 1))
    assert abs(float(one_sd.mid) - float(want)) <= 1e-9
    assert one_sd.lo <= want <= one_sd.hi
    quad = g.mu0(FinMeet(cyl(1, 0, "inf"), cyl(2, 0, "inf")))
    assert quad.lo == quad.hi == Fraction(1, 4)
    note(request, f"2Phi(1)-1 = {float(one_sd.mid):.12f}")


# 9 ------------------------------------------------------------------------------

@pytest.mark.acceptance(9, "skew-normal quadrature vs Monte Carlo, zero-delta and constraint gate")
def test_criterion_9_skew_normal(request):
    boxes = [cyl(1, "-inf", 0), cyl(1, -1, Fraction(1, 2)), cyl(1, Fraction(1, 5), 2), cyl(1, Fraction(3, 2), "inf")]
    worst = 0.0
    for seed, delta in enumerate((0.3, 0.6, 0.9)):
        sk = SkewNormalBackend([delta])
        oracle = mc_oracle_sample(sk, 1, 1_000_000, seed=100 + seed)
        for b in boxes:
            p, se = oracle.estimate(b)
            z = abs(p - float(sk.mu0(b).mid)) / se
            worst = max(worst, z)
            assert z <= 3, f"delta={delta} {b}: {z:.2f} standard errors"
    g, flat = GaussianBackend(), SkewNormalBackend([0.0, 0.0])
    for b in boxes + [FinMeet(cyl(1, 0, 1), cyl(2, -2, Fraction(1, 3)))]:
        assert abs(float(flat.mu0(b).mid) - float(g.mu0(b).mid)) <= 1e-6
    for bad in ([1.0], [0.8, 0.6], [0.7, 0.5, 0.6]):
        with pytest.raises(ConfigError):
            SkewNormalBackend(bad)
    note(request, f"worst deviation {worst:.2f} standard errors")


# 10 -----------------------------------------------------------------------------

@pytest.mark.acceptance(10, "finite additivity on 1000 disjoint combos per backend; corrupted fixture flagged")
def test_criterion_10_additivity(request):
    backends = [
        FiniteBackend(["1/6", "1/3", "1/2"]),
        UnitIntervalBackend(),
        GaussianBackend(),
        ProductBackend([Uniform(0, 1), Exponential(2), Laplace(0, 1)], default=Normal()),
        SkewNormalBackend([0.6, 0.3]),
    ]
    summary = []
    for b in backends:
        rep = check_additivity(b, samples=1000, seed=3)
        summary.append(f"{b.name}:{rep.max_residual:.1g}")
        assert rep.ok, f"{b.name}: {rep.violations[:3]}"
    bad = check_additivity(CorruptedBackend(FiniteBackend(["1/6", "1/3", "1/2"])), samples=1000, seed=3)
    assert not bad.ok
    note(request, " ".join(summary))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
