"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations


class PointfreeError(Exception):
    """Base class for all engine errors."""


class AlgebraMismatch(PointfreeError, ValueError):
    """Operands live in different finite Boolean algebras."""


class SizeOverflow(PointfreeError):
    """A constructed finite algebra would exceed the configured atom cap."""


class NotAnIdeal(PointfreeError, ValueError):
    """A member set is not downward closed or not closed under joins."""


class NotAHomomorphism(PointfreeError, ValueError):
    """Atom images do not form a partition of the target's unit."""


class DepthCapExceeded(PointfreeError):
    """A term nests countable operators deeper than the evaluator allows."""


class BackendError(PointfreeError):
    """The generator oracle failed or was asked something it cannot answer."""


class ConfigError(BackendError, ValueError):
    """Invalid backend configuration."""


class QuadratureFailure(BackendError):
    """Adaptive quadrature could not reach the requested error cap."""


class DimensionCapExceeded(BackendError):
    """A combination couples more coordinates than the backend will integrate."""


class InconsistentCertificate(BackendError):
    """Bounds from different refinement rounds are disjoint.

    This only happens when a stream declared a tail bound or envelope that is
    false, so the evaluator refuses to return a (certainly wrong) interval.
    """


class _CarriesResult(PointfreeError):
    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class BudgetExhausted(_CarriesResult):
    """Refinement budget ran out before the requested tolerance was reached.

    ``result`` holds the best enclosure achieved; it is sound, only wide.
    """


class UnboundedTail(_CarriesResult):
    """An integral's tail could not be certified small; ``result.lo`` is still sound."""


class NotMonotone(PointfreeError):
    """A stream declared monotone failed a pointwise-order check."""


class NotIntegrable(PointfreeError):
    """The absolute value of a function does not have a finite integral."""


class DominationFails(PointfreeError):
    """Some stream member is not dominated by the supplied bound."""


class ExpressionSyntaxError(PointfreeError):
    """Malformed CLI expression; carries the 1-based line/column and expected tokens."""

    def __init__(self, message: str, line: int = 0, column: int = 0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class UnboundIndexVariable(ExpressionSyntaxError):
    """An identifier is used without an enclosing binder."""
