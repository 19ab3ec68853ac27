"""Point-free measure theory: sigma-terms, certified measure extension and integration."""

__version__ = "0.1.0"

from .backends import (
    FiniteBackend,
    GaussianBackend,
    ProductBackend,
    SkewNormalBackend,
    UnitIntervalBackend,
    load_backend,
)
from .borel_functions import (
    FunStream,
    constant,
    dyadic_approx,
    fsum,
    indicator,
    leq,
    mono_limit_down,
    mono_limit_up,
    pointwise_max,
    pointwise_min,
    simple,
)
from .extension import ExtendedMeasure, MeasureInterval, check_additivity
from .integration import integrate, integrate_complex, integrate_real, integrate_simple
from .sigma_terms import BOTTOM, TOP, CountJoin, CountMeet, FinJoin, FinMeet, Not, Vee, Wedge, cyl, normalize

__all__ = [
    "BOTTOM", "TOP", "CountJoin", "CountMeet", "ExtendedMeasure", "FinJoin", "FinMeet", "FiniteBackend",
    "FunStream", "GaussianBackend", "MeasureInterval", "Not", "ProductBackend", "SkewNormalBackend",
    "UnitIntervalBackend", "Vee", "Wedge", "check_additivity", "constant", "cyl", "dyadic_approx", "fsum",
    "indicator", "integrate", "integrate_complex", "integrate_real", "integrate_simple", "leq",
    "load_backend", "mono_limit_down", "mono_limit_up", "normalize", "pointwise_max", "pointwise_min", "simple",
]
