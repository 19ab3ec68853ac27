import threading
from fractions import Fraction

import mpmath
import pytest

from pointfree.backends import CorruptedBackend, FiniteBackend, GaussianBackend, UnitIntervalBackend
from pointfree.errors import BudgetExhausted, DepthCapExceeded, InconsistentCertificate
from pointfree.extension import ExtendedMeasure, check_additivity, depth_schedule
from pointfree.index_expr import BinOp, Call, Const, Var
from pointfree.sigma_terms import BOTTOM, TOP, FinJoin, FinMeet, Not, Vee, Wedge, cyl, symdiff_term

n = Var("n")
two_pow = lambda e: BinOp("**", Const(Fraction(2)), e)


def gaussian_tail_join(tail=True):
    body = cyl(n, Call("c", (n,)), "inf")
    return Vee("n", 1, body, tail=two_pow(BinOp("-", Const(Fraction(1)), n)) if tail else None)


def product_oracle():
    mpmath.mp.dps = 30
    p = mpmath.mpf(1)
    for k in range(1, 200):
        p *= 1 - mpmath.mpf(2) ** -k
    return float(1 - p)


def test_schedule_doubles_to_budget():
    assert depth_schedule(30) == [1, 2, 4, 8, 16, 30]
    assert depth_schedule(1) == [1]


def test_trivial_values():
    mu = ExtendedMeasure(GaussianBackend())
    assert mu.eval(cyl(1, 2, 1)).hi == 0
    assert mu.eval(TOP).lo == 1
    t = gaussian_tail_join()
    a, b = mu.eval(t, 1e-6, 30), mu.eval(Not(t), 1e-6, 30)
    assert a.interval.overlaps(1 - b.interval)
    assert a.lo <= 1 - b.lo and 1 - b.hi <= a.hi


def test_gaussian_independent_tail_join():
    mu = ExtendedMeasure(GaussianBackend())
    r = mu.eval(gaussian_tail_join(), 1e-6, 30)
    want = product_oracle()
    assert r.lo <= want <= r.hi
    assert r.width <= 1e-3
    assert abs(want - 0.711212) < 1e-6


def test_without_certificate_upper_stays_trivial():
    mu = ExtendedMeasure(GaussianBackend())
    r = mu.eval(gaussian_tail_join(tail=False), 1e-6, 30)
    assert not r.converged and r.status == "budget_exhausted"
    assert r.lo <= product_oracle() <= r.hi == 1
    with pytest.raises(BudgetExhausted) as info:
        ExtendedMeasure(GaussianBackend()).eval(gaussian_tail_join(tail=False), 1e-6, 8, strict=True)
    assert info.value.result.hi == 1


def test_cache_only_shrinks():
    mu = ExtendedMeasure(GaussianBackend())
    t = gaussian_tail_join()
    coarse = mu.eval(t, 1e-12, 4)
    fine = mu.eval(t, 1e-12, 16)
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi
    again = mu.eval(t, 1e-12, 2)
    assert again.hi - again.lo <= fine.hi - fine.lo


def test_lying_certificate_detected():
    mu = ExtendedMeasure(GaussianBackend())
    # claims the missed mass is at most 2^-n / 1000, which is false
    lie = BinOp("/", two_pow(BinOp("-", Const(Fraction(0)), n)), Const(Fraction(1000)))
    t = Vee("n", 1, cyl(1, BinOp("-", Const(Fraction(0)), n), n), tail=lie)
    with pytest.raises(InconsistentCertificate):
        mu.eval(t, 1e-9, 8)


def test_depth_cap():
    m = Var("m")
    deep = cyl(1, 0, 1)
    for v in "abcd":
        deep = Vee(v, 1, FinMeet(deep, cyl(2, Var(v), "inf")))
    with pytest.raises(DepthCapExceeded):
        ExtendedMeasure(GaussianBackend()).eval(deep)
    ExtendedMeasure(GaussianBackend(), depth_cap=4).eval(deep, 1e-3, 2)


def test_monotone_lower_bounds_and_limit():
    # Vee of [-n, n) increases to the whole line
    mu = ExtendedMeasure(GaussianBackend())
    from pointfree.sigma_terms import truncate

    t = Vee("n", 1, cyl(1, BinOp("-", Const(Fraction(0)), n), n), monotone=True)
    lows = [GaussianBackend().mu0(truncate(t, k)[0]).lo for k in range(1, 9)]
    assert all(b >= a for a, b in zip(lows, lows[1:]))
    r = mu.eval(t, 1e-9, 8)
    assert r.lo <= 1 <= r.hi


def test_is_null_examples():
    mu = ExtendedMeasure(FiniteBackend(["1/2", "1/2"]))
    a = cyl(1, 0, 1)
    assert mu.is_null(symdiff_term(a, a)) == "null"
    assert mu.is_null(TOP) == "nonnull"
    assert mu.equal_mod_null(FinJoin(a, cyl(1, 5, 6)), a) == "null"


def test_lebesgue_cover_of_rationals():
    eps0 = Fraction(1, 100)
    half_len = BinOp("*", two_pow(BinOp("-", Const(Fraction(-2)), n)), Const(eps0))
    q = Call("q", (n,))
    body = cyl(1, BinOp("-", q, half_len), BinOp("+", q, half_len))
    tail = BinOp("*", two_pow(BinOp("-", Const(Fraction(0)), n)), Const(eps0))
    t = Vee("n", 0, body, tail=tail)
    mu = ExtendedMeasure(UnitIntervalBackend())
    r = mu.eval(t, 1e-12, 32)
    assert mu.is_null(t, 1e-12, 32) == "nonnull"
    assert r.lo > 0 and r.hi <= eps0


def test_additivity_reports():
    exact = check_additivity(FiniteBackend(["1/4", "1/4", "1/2"]), 300, seed=1)
    assert exact.ok and exact.max_residual == 0
    gauss = check_additivity(GaussianBackend(), 300, seed=1)
    assert gauss.ok
    bad = check_additivity(CorruptedBackend(FiniteBackend(["1/4", "1/4", "1/2"])), 300, seed=1)
    assert not bad.ok


def test_concurrent_evaluation_is_consistent():
    mu = ExtendedMeasure(GaussianBackend())
    terms = [Vee("n", 1, cyl(n, Call("c", (BinOp("+", n, Const(Fraction(k))),)), "inf"),
                 tail=two_pow(BinOp("-", Const(Fraction(1 - k)), n))) for k in range(4)]
    out = {}

    def work(i):
        out[i] = [mu.eval(t, 1e-6, 16).interval for t in terms]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for i in range(1, 6):
        for a, b in zip(out[0], out[i]):
            assert a.overlaps(b)


def test_gaussian_disjoint_boxes_residual():
    g = GaussianBackend()
    cuts = [-9, -2.5, Fraction(-1, 3), 0, Fraction(7, 10), 1.9, 6]
    worst = 0.0
    for i in range(len(cuts) - 2):
        for j in range(i + 1, len(cuts) - 1):
            a, b = cyl(1, cuts[i], cuts[i + 1]), cyl(1, cuts[j], cuts[j + 1])
            whole = g.mu0(FinJoin(a, b))
            parts = g.mu0(a) + g.mu0(b)
            assert whole.overlaps(parts)
            worst = max(worst, abs(float(whole.mid) - float(parts.mid)))
    assert worst <= 1e-12
