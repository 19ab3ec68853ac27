"""Independent-coordinate backends: product densities and the standard Gaussian."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from scipy.special import ndtr

from ..errors import ConfigError
from ..intervals import INF, Interval, Number
from .base import GeneratorBackend

# relative padding applied to floating CDF values
REL_PAD = 1e-12  # scipy ndtr is within ~2.3e-13 relative over the whole double range
ABS_PAD = 1e-300


def _pad(x: float) -> Interval:
    e = abs(x) * REL_PAD + ABS_PAD
    return Interval(max(x - e, 0.0), min(x + e, 1.0))


class Distribution:
    """One-dimensional law given by its CDF and survival function."""

    median: Number = 0

    def cdf(self, x: Number) -> Interval:
        raise NotImplementedError

    def sf(self, x: Number) -> Interval:
        return 1 - self.cdf(x)

    def cell(self, lo: Number, hi: Number) -> Interval:
        if lo >= hi:
            return Interval(0, 0)
        # difference of the smaller tail values loses less precision
        if lo >= self.median:
            return (self.sf(lo) - self.sf(hi)).clip(0, 1)
        return (self.cdf(hi) - self.cdf(lo)).clip(0, 1)

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Normal(Distribution):
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if not self.sd > 0:
            raise ConfigError("normal sd must be positive")

    @property
    def median(self):
        return self.mean

    def _z(self, x):
        return (float(x) - self.mean) / self.sd

    def cdf(self, x):
        if x == -INF:
            return Interval(0, 0)
        if x == INF:
            return Interval(1, 1)
        if x == self.mean:
            return Interval(Fraction(1, 2), Fraction(1, 2))
        return _pad(float(ndtr(self._z(x))))

    def sf(self, x):
        if x == -INF:
            return Interval(1, 1)
        if x == INF:
            return Interval(0, 0)
        if x == self.mean:
            return Interval(Fraction(1, 2), Fraction(1, 2))
        return _pad(float(ndtr(-self._z(x))))

    def to_config(self):
        return {"law": "normal", "mean": self.mean, "sd": self.sd}


@dataclass(frozen=True)
class Uniform(Distribution):
    """Uniform law on ``[a, b]``; exact when the endpoints are rational."""

    a: Number = Fraction(0)
    b: Number = Fraction(1)

    def __post_init__(self):
        if not self.a < self.b:
            raise ConfigError("uniform needs a < b")

    @property
    def median(self):
        return (self.a + self.b) / 2

    def cdf(self, x):
        if x <= self.a:
            return Interval(0, 0)
        if x >= self.b:
            return Interval(1, 1)
        # floats are converted exactly, so the result stays rational
        v = (Fraction(x) - Fraction(self.a)) / (Fraction(self.b) - Fraction(self.a))
        return Interval(v, v)

    def sf(self, x):
        return 1 - self.cdf(x)

    def to_config(self):
        return {"law": "uniform", "a": str(self.a), "b": str(self.b)}


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ConfigError("exponential rate must be positive")

    @property
    def median(self):
        return math.log(2) / self.rate

    def cdf(self, x):
        if x <= 0:
            return Interval(0, 0)
        if x == INF:
            return Interval(1, 1)
        return _pad(-math.expm1(-self.rate * float(x)))

    def sf(self, x):
        if x <= 0:
            return Interval(1, 1)
        if x == INF:
            return Interval(0, 0)
        return _pad(math.exp(-self.rate * float(x)))

    def to_config(self):
        return {"law": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class Laplace(Distribution):
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ConfigError("laplace scale must be positive")

    @property
    def median(self):
        return self.loc

    def _lower_tail(self, z):
        # P(X < loc + z*scale) for z <= 0
        return 0.5 * math.exp(z)

    def cdf(self, x):
        if x == -INF:
            return Interval(0, 0)
        if x == INF:
            return Interval(1, 1)
        z = (float(x) - self.loc) / self.scale
        if z <= 0:
            return _pad(self._lower_tail(z))
        return 1 - _pad(self._lower_tail(-z))

    def sf(self, x):
        if x == -INF:
            return Interval(1, 1)
        if x == INF:
            return Interval(0, 0)
        z = (float(x) - self.loc) / self.scale
        if z >= 0:
            return _pad(self._lower_tail(-z))
        return 1 - _pad(self._lower_tail(z))

    def to_config(self):
        return {"law": "laplace", "loc": self.loc, "scale": self.scale}


@dataclass(frozen=True)
class Logistic(Distribution):
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ConfigError("logistic scale must be positive")

    @property
    def median(self):
        return self.loc

    @staticmethod
    def _expit(z):
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-z))
        e = math.exp(z)
        return e / (1.0 + e)

    def cdf(self, x):
        if x == -INF:
            return Interval(0, 0)
        if x == INF:
            return Interval(1, 1)
        return _pad(self._expit((float(x) - self.loc) / self.scale))

    def sf(self, x):
        if x == -INF:
            return Interval(1, 1)
        if x == INF:
            return Interval(0, 0)
        return _pad(self._expit(-(float(x) - self.loc) / self.scale))

    def to_config(self):
        return {"law": "logistic", "loc": self.loc, "scale": self.scale}


LAWS = {
    "normal": lambda d: Normal(float(d.get("mean", 0.0)), float(d.get("sd", 1.0))),
    "uniform": lambda d: Uniform(Fraction(str(d.get("a", 0))), Fraction(str(d.get("b", 1)))),
    "exponential": lambda d: Exponential(float(d.get("rate", 1.0))),
    "laplace": lambda d: Laplace(float(d.get("loc", 0.0)), float(d.get("scale", 1.0))),
    "logistic": lambda d: Logistic(float(d.get("loc", 0.0)), float(d.get("scale", 1.0))),
}


def distribution_from_spec(d: Mapping) -> Distribution:
    if not isinstance(d, Mapping):
        raise ConfigError(f"a law must be an object like {{\"law\": \"normal\"}}, got {d!r}")
    law = d.get("law")
    if law not in LAWS:
        raise ConfigError(f"unknown law {law!r}; expected one of {sorted(LAWS)}")
    return LAWS[law](d)


class ProductBackend(GeneratorBackend):
    """Independent coordinates with the listed laws; later coordinates reuse ``default``."""

    name = "product"

    def __init__(self, laws: Sequence[Distribution] = (), default: Optional[Distribution] = Normal()):
        super().__init__()
        self.laws = tuple(laws)
        self.default = default
        if default is None:
            self.max_coord = len(self.laws)
        self.exact = all(isinstance(l, Uniform) for l in self.laws) and (
            default is None or isinstance(default, Uniform)
        )

    def law(self, coord: int) -> Distribution:
        if coord <= len(self.laws):
            return self.laws[coord - 1]
        if self.default is None:
            raise ConfigError(f"no law for coordinate {coord}")
        return self.default

    def cell_measure(self, coord, lo, hi):
        return self.law(coord).cell(lo, hi)

    def sample_coords(self):
        n = len(self.laws) if self.default is None else max(len(self.laws), 3)
        return tuple(range(1, n + 1))

    def describe(self):
        out = {"type": self.name, "densities": [l.to_config() for l in self.laws]}
        if self.default is not None:
            out["default"] = self.default.to_config()
        return out


class GaussianBackend(ProductBackend):
    """Standard cylindrical Gaussian: independent N(0,1) coordinates."""

    name = "gaussian"

    def __init__(self):
        super().__init__((), Normal())

    def describe(self):
        return {"type": self.name}
