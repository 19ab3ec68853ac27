"""Concrete generator backends."""

from .base import CorruptedBackend, GeneratorBackend, holds_at, random_combo, restrict
from .classical import FiniteBackend, UnitIntervalBackend
from .config import CONFIG_VERSION, backend_from_config, load_backend
from .product import (
    Distribution,
    Exponential,
    GaussianBackend,
    Laplace,
    Logistic,
    Normal,
    ProductBackend,
    Uniform,
)
from .skew import DIMENSION_CAP, MonteCarloOracle, SkewNormalBackend, mc_oracle_sample

__all__ = [
    "CONFIG_VERSION",
    "CorruptedBackend",
    "DIMENSION_CAP",
    "Distribution",
    "Exponential",
    "FiniteBackend",
    "GaussianBackend",
    "GeneratorBackend",
    "Laplace",
    "Logistic",
    "MonteCarloOracle",
    "Normal",
    "ProductBackend",
    "SkewNormalBackend",
    "Uniform",
    "UnitIntervalBackend",
    "backend_from_config",
    "holds_at",
    "load_backend",
    "mc_oracle_sample",
    "random_combo",
    "restrict",
]
