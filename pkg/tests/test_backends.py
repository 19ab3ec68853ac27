import json
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import stats
from scipy.special import owens_t

from pointfree.backends import (
    CorruptedBackend,
    Exponential,
    FiniteBackend,
    GaussianBackend,
    Laplace,
    Logistic,
    Normal,
    ProductBackend,
    SkewNormalBackend,
    Uniform,
    UnitIntervalBackend,
    holds_at,
    load_backend,
    mc_oracle_sample,
    random_combo,
)
from pointfree.errors import ConfigError, DimensionCapExceeded, QuadratureFailure
from pointfree.sigma_terms import TOP, FinJoin, FinMeet, Not, cyl

mpmath.mp.dps = 40


def mp_phi(x):
    return 0.5 * (1 + mpmath.erf(mpmath.mpf(x) / mpmath.sqrt(2)))


# -- Gaussian -------------------------------------------------------------------------

def test_gaussian_reference_values():
    g = GaussianBackend()
    half = g.mu0(cyl(1, 0, "inf"))
    assert half.lo == half.hi == Fraction(1, 2)
    quarter = g.mu0(FinMeet(cyl(1, 0, "inf"), cyl(2, 0, "inf")))
    assert quarter.lo == quarter.hi == Fraction(1, 4)
    want = float(2 * mp_phi(1) - 1)
    got = g.mu0(cyl(1, -1, 1))
    assert got.lo <= want <= got.hi
    assert got.width < 1e-11


@pytest.mark.parametrize("a,b", [(-3, -2), (-0.5, 0.25), (1, 8), (5, 6), (-40, -30)])
def test_gaussian_cells_against_erf(a, b):
    got = GaussianBackend().mu0(cyl(1, a, b))
    # difference of upper tails keeps full relative precision far from the mode
    tail = lambda x: 0.5 * mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2))
    want = float(tail(a) - tail(b)) if a >= 0 else float(tail(-b) - tail(-a))
    assert got.lo <= want <= got.hi


def test_gaussian_exchangeable_coordinates():
    g = GaussianBackend()
    vals = {g.mu0(cyl(i, -0.3, 1.7)) for i in range(1, 6)}
    assert len(vals) == 1


def test_cylindrical_consistency():
    g = GaussianBackend()
    t = FinJoin(cyl(1, -1, 0.5), FinMeet(cyl(2, 0, 1), Not(cyl(1, 2, 3))))
    lifted = FinMeet(t, cyl(3, "-inf", "inf"))
    assert lifted is t  # the full box folds away
    padded = FinJoin(FinMeet(t, cyl(3, 0, "inf")), FinMeet(t, cyl(3, "-inf", 0)))
    a, b = g.mu0(t), g.mu0(padded)
    assert a.overlaps(b)


def test_gaussian_matches_brute_force_monte_carlo_on_random_combos():
    g = GaussianBackend()
    rng = random.Random(3)
    pts = np.random.default_rng(3).standard_normal((200_000, 3))
    for _ in range(10):
        t = random_combo(g, rng)
        p = holds_at(t, pts).mean()
        se = math.sqrt(max(p * (1 - p), 1e-6) / len(pts))
        assert abs(p - float(g.mu0(t).mid)) <= 5 * se


# -- product laws ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "law,ref",
    [
        (Normal(1.0, 2.0), stats.norm(1.0, 2.0)),
        (Exponential(0.5), stats.expon(scale=2.0)),
        (Laplace(-1.0, 0.5), stats.laplace(-1.0, 0.5)),
        (Logistic(0.3, 1.5), stats.logistic(0.3, 1.5)),
        (Uniform(Fraction(-1), Fraction(3)), stats.uniform(-1, 4)),
    ],
)
def test_product_laws_against_scipy_stats(law, ref):
    be = ProductBackend([law])
    for a, b in [(-2, 0), (0, 0.5), (1, 4), (-math.inf, 0.2), (2.5, math.inf)]:
        got = be.mu0(cyl(1, a, b))
        want = ref.cdf(b) - ref.cdf(a)
        assert abs(float(got.mid) - want) <= 1e-12
    assert be.mu0(cyl(1, "-inf", "inf")) .lo == 1


def test_product_independence():
    be = ProductBackend([Exponential(1.0), Uniform()], default=None)
    both = be.mu0(FinMeet(cyl(1, 0, 1), cyl(2, 0, Fraction(1, 4))))
    assert abs(float(both.mid) - (1 - math.exp(-1)) / 4) < 1e-14
    with pytest.raises(ConfigError):
        be.mu0(cyl(3, 0, 1))


# -- classical adapters ---------------------------------------------------------------

def test_finite_backend_matches_atom_brute_force():
    w = [Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)]
    be = FiniteBackend(w)
    rng = random.Random(0)
    pts = np.array([[k] for k in range(4)], dtype=float)
    for _ in range(100):
        t = random_combo(be, rng)
        inside = holds_at(t, pts)
        want = sum(wk for wk, hit in zip(w, inside) if hit)
        got = be.mu0(t)
        assert got.lo == got.hi == want


def test_finite_backend_validation():
    with pytest.raises(ConfigError):
        FiniteBackend(["1/2", "1/3"])
    with pytest.raises(ConfigError):
        FiniteBackend(["-1/2", "3/2"])
    with pytest.raises(ConfigError):
        FiniteBackend(["1"]).mu0(cyl(2, 0, 1))


def test_unit_interval_lengths_exact():
    u = UnitIntervalBackend()
    assert u.mu0(cyl(1, Fraction(1, 3), Fraction(1, 2))).lo == Fraction(1, 6)
    assert u.mu0(cyl(1, -5, 0.25)).lo == Fraction(1, 4)
    assert u.mu0(FinJoin(cyl(1, 0, 0.5), cyl(1, 0.25, 2))).lo == 1


# -- skew normal ----------------------------------------------------------------------

def owen_cdf(z, delta):
    alpha = delta / math.sqrt(1 - delta * delta)
    return float(stats.norm.cdf(z)) - 2 * float(owens_t(z, alpha))


@pytest.mark.parametrize("delta", [0.3, 0.6, 0.9, -0.7])
@pytest.mark.parametrize("a,b", [(-math.inf, 0.0), (-1.0, 0.5), (0.2, 3.0), (1.5, math.inf)])
def test_skew_quadrature_against_owens_t(delta, a, b):
    sk = SkewNormalBackend([delta])
    got = sk.mu0(cyl(1, a, b))
    fa = 0.0 if a == -math.inf else owen_cdf(a, delta)
    fb = 1.0 if b == math.inf else owen_cdf(b, delta)
    assert abs(float(got.mid) - (fb - fa)) <= 1e-9


def test_skew_density_normalization_and_zero_delta():
    from scipy import integrate

    sk = SkewNormalBackend([0.5, 0.4])
    total, _ = integrate.dblquad(lambda y, x: sk.density((1, 2), (x, y)), -9, 9, -9, 9)
    assert abs(total - 1) < 1e-6
    flat = SkewNormalBackend([0.0])
    x = 0.37
    assert abs(flat.density((1,), [x]) - math.exp(-x * x / 2) / math.sqrt(2 * math.pi)) < 1e-15


def test_skew_zero_delta_reproduces_gaussian():
    g, sk = GaussianBackend(), SkewNormalBackend([0.0, 0.0])
    for t in [cyl(1, -1, 1), FinMeet(cyl(1, 0, 2), cyl(2, -1, 0.5))]:
        assert abs(float(g.mu0(t).mid) - float(sk.mu0(t).mid)) <= 1e-6


def test_skew_small_delta_approaches_gaussian():
    g = GaussianBackend()
    t = cyl(1, -0.5, 1.2)
    gaps = [abs(float(SkewNormalBackend([d]).mu0(t).mid) - float(g.mu0(t).mid)) for d in (0.1, 0.01, 0.001)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_skew_two_dimensional_block_against_monte_carlo():
    sk = SkewNormalBackend([0.5, 0.4])
    t = FinMeet(cyl(1, 0, "inf"), cyl(2, -0.5, 1))
    oracle = mc_oracle_sample(sk, 2, 200_000, seed=11)
    p, se = oracle.estimate(t)
    assert abs(p - float(sk.mu0(t).mid)) <= 4 * se


def test_skew_marginals_are_consistent():
    sk = SkewNormalBackend([0.5, 0.4])
    one = sk.mu0(cyl(1, -0.3, 0.8))
    # integrate the second coordinate out explicitly
    split = FinJoin(FinMeet(cyl(1, -0.3, 0.8), cyl(2, "-inf", 0)), FinMeet(cyl(1, -0.3, 0.8), cyl(2, 0, "inf")))
    assert abs(float(sk.mu0(split).mid) - float(one.mid)) < 1e-7


def test_skew_constraints():
    with pytest.raises(ConfigError):
        SkewNormalBackend([0.8, 0.6])
    with pytest.raises(DimensionCapExceeded):
        SkewNormalBackend([0.1, 0.1, 0.1, 0.1]).mu0(FinMeet(*(cyl(i, 0, 1) for i in range(1, 5))))
    with pytest.raises(QuadratureFailure):
        SkewNormalBackend([0.5], error_cap=0.0).mu0(cyl(1, 0, 1))


def test_monte_carlo_oracle_basics():
    sk = SkewNormalBackend([0.6])
    o = mc_oracle_sample(sk, 1, 10_000, seed=1)
    assert o.estimate(TOP) == (1.0, 0.0)
    again = mc_oracle_sample(sk, 1, 10_000, seed=1)
    assert np.array_equal(o.samples, again.samples)
    flat = mc_oracle_sample(SkewNormalBackend([0.0]), 1, 100_000, seed=2)
    p, se = flat.estimate(cyl(1, -1, 1))
    assert abs(p - float(GaussianBackend().mu0(cyl(1, -1, 1)).mid)) <= 3 * se


# -- config ---------------------------------------------------------------------------

def test_config_loading(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"version": 1, "type": "skew", "delta": [0.6]}))
    assert isinstance(load_backend(str(path)), SkewNormalBackend)
    assert isinstance(load_backend('{"type": "classical", "space": "unit"}'), UnitIntervalBackend)
    prod = load_backend({"type": "product", "densities": [{"law": "exponential", "rate": 2}], "default": None})
    assert prod.max_coord == 1
    assert isinstance(load_backend({"type": "gaussian", "corrupt": True}), CorruptedBackend)
    for bad in ({"type": "nope"}, {"type": "gaussian", "version": 9}, {"type": "gaussian", "extra": 1},
                {"type": "product", "densities": [{"law": "cauchy"}]},
                {"type": "product", "default": "normal"}, "missing-file.json"):
        with pytest.raises(ConfigError):
            load_backend(bad)
