"""Skew-normal cylindrical measure.

The law is that of ``Z = X`` if ``X0 > 0`` and ``Z = -X`` otherwise, where
``(X0, X1, ..., Xn)`` is centred Gaussian with unit variances, ``cov(X0, Xi) =
delta_i`` and ``cov(Xi, Xj) = 0``.  Conditioning on ``X = z`` gives
``X0 ~ N(delta.z, 1 - |delta|^2)``, hence the density

    p(z) = 2 phi_n(z) Phi(alpha . z),   alpha = delta / sqrt(1 - |delta|^2).

A coordinate with ``delta_i = 0`` factors out as an independent N(0,1), and
the marginal on a coordinate subset ``S`` has the same form with ``delta_S``.
"""

from __future__ import annotations

import math
import threading
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from ..errors import ConfigError, DimensionCapExceeded, QuadratureFailure
from ..intervals import INF, Interval
from ..sigma_terms import Term
from .base import GeneratorBackend, holds_at
from .product import Normal

#: maximum number of skewed coordinates in one joint block
DIMENSION_CAP = 3
_SQRT2PI = math.sqrt(2 * math.pi)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
CLIP = 12.0
_CLIP_TAIL = 4.0 * float(ndtr(-CLIP))  # mass bound per clipped coordinate


def _std_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z * _INV_SQRT2)


class SkewNormalBackend(GeneratorBackend):
    name = "skew"

    def __init__(self, delta: Sequence[float], epsabs: float = 1e-12, error_cap: float = 1e-7):
        super().__init__()
        d = [float(x) for x in delta]
        if any(math.isnan(x) for x in d):
            raise ConfigError("delta entries must be numbers")
        s = math.fsum(x * x for x in d)
        if not s < 1:
            raise ConfigError(f"sum of delta^2 must be < 1 for a positive-definite covariance, got {s}")
        while d and d[-1] == 0.0:
            d.pop()
        self.delta = tuple(d)
        self.epsabs = epsabs
        self.error_cap = error_cap
        self._normal = Normal()
        self._cells: dict = {}
        self._cell_lock = threading.Lock()

    def delta_at(self, coord: int) -> float:
        return self.delta[coord - 1] if coord <= len(self.delta) else 0.0

    def blocks(self, coords):
        skewed = tuple(sorted(c for c in coords if self.delta_at(c) != 0.0))
        plain = [(c,) for c in sorted(coords) if self.delta_at(c) == 0.0]
        if len(skewed) > DIMENSION_CAP:
            raise DimensionCapExceeded(
                f"{len(skewed)} skewed coordinates in one combination (cap {DIMENSION_CAP})"
            )
        return ([skewed] if skewed else []) + plain

    def alpha(self, block: Sequence[int]) -> np.ndarray:
        d = np.array([self.delta_at(c) for c in block])
        return d / math.sqrt(1.0 - float(d @ d))

    def density(self, block: Sequence[int], x: Sequence[float]) -> float:
        """Joint density of the coordinates in ``block`` at ``x``."""
        x = np.asarray(x, dtype=float)
        a = self.alpha(block)
        k = len(block)
        phi = math.exp(-0.5 * float(x @ x)) / _SQRT2PI**k
        return 2.0 * phi * float(ndtr(float(a @ x)))

    def cell_measure(self, coord, lo, hi):
        if self.delta_at(coord) == 0.0:
            return self._normal.cell(lo, hi)
        return self.block_cell_measure((coord,), ((lo, hi),))

    def block_cell_measure(self, block, cell):
        if any(lo >= hi for lo, hi in cell):
            return Interval(0, 0)
        key = (tuple(block), tuple((lo, hi) for lo, hi in cell))
        with self._cell_lock:
            hit = self._cells.get(key)
        if hit is None:
            hit = self._integrate_cell(block, cell)
            with self._cell_lock:
                self._cells[key] = hit
        return hit

    def _integrate_cell(self, block, cell) -> Interval:
        a = [float(x) for x in self.alpha(block)]
        k = len(block)
        norm = 2.0 / _SQRT2PI**k
        # the density is at most 2 * phi_k, so each coordinate carries at most
        # 4 Phi(-CLIP) of mass beyond +-CLIP; clip there and account for it
        bounds = [(max(float(lo), -CLIP), min(float(hi), CLIP)) for lo, hi in cell]
        if any(lo >= hi for lo, hi in bounds):
            return Interval(0.0, min(k * _CLIP_TAIL, 1.0))
        clipped = sum(_CLIP_TAIL for (lo, hi) in cell if lo < -CLIP or hi > CLIP)
        if k == 1:
            (al,) = a

            def f(x):
                return norm * math.exp(-0.5 * x * x) * _std_cdf(al * x)

            val, err = integrate.quad(f, *bounds[0], epsabs=self.epsabs, epsrel=1e-12, limit=200)
        else:
            def f(*xs):
                return norm * math.exp(-0.5 * math.fsum(x * x for x in xs)) * _std_cdf(math.fsum(c * x for c, x in zip(a, xs)))

            val, err = integrate.nquad(f, bounds, opts={"epsabs": 1e-10, "epsrel": 1e-10, "limit": 100})
        if not err <= self.error_cap:
            raise QuadratureFailure(f"quadrature error estimate {err:g} above cap {self.error_cap:g}")
        pad = max(err, self.epsabs) * 2
        return Interval(max(val - pad, 0.0), min(val + pad + clipped, 1.0))

    def sample_coords(self):
        return tuple(range(1, max(len(self.delta), 1) + 2))

    def describe(self):
        return {"type": self.name, "delta": list(self.delta)}


class MonteCarloOracle:
    """Empirical measures from direct simulation of the sign-flip construction.

    Draws ``(X0, X1..Xn)`` from the Gaussian with the block covariance, sets
    ``Z = X`` where ``X0 > 0`` and ``Z = -X`` elsewhere, and answers box /
    finite-combination queries with the sample frequency and its standard
    error ``sqrt(p(1-p)/N)``.
    """

    def __init__(self, backend: SkewNormalBackend, n: int, count: int, seed: int, chunks: int = 4):
        self.n = n
        self.count = count
        d = np.array([backend.delta_at(c) for c in range(1, n + 1)])
        cov = np.eye(n + 1)
        cov[0, 1:] = d
        cov[1:, 0] = d
        children = np.random.SeedSequence(seed).spawn(chunks)
        sizes = [count // chunks + (1 if i < count % chunks else 0) for i in range(chunks)]
        parts = []
        for ss, m in zip(children, sizes):
            rng = np.random.default_rng(ss)
            draw = rng.multivariate_normal(np.zeros(n + 1), cov, size=m, method="cholesky")
            sign = np.where(draw[:, 0] > 0, 1.0, -1.0)
            parts.append(draw[:, 1:] * sign[:, None])
        self.samples = np.concatenate(parts, axis=0)

    def estimate(self, term: Term) -> tuple[float, float]:
        """(frequency, standard error) for a finite combination."""
        hits = holds_at(term, self.samples)
        p = float(hits.mean())
        return p, math.sqrt(p * (1 - p) / self.count)


def mc_oracle_sample(backend: SkewNormalBackend, n: int, count: int, seed: int) -> MonteCarloOracle:
    return MonteCarloOracle(backend, n, count, seed)
