"""Closed-form index expressions for stream templates.

Templates such as ``cyl(n, c(n), inf)`` are stored with their endpoints as
small expression trees over an index variable, which keeps streams
serializable and every truncation reproducible.  Arithmetic is exact on
rationals and falls back to floats only for irrational helpers like ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

from scipy.special import ndtri

from .errors import UnboundIndexVariable
from .intervals import INF, Number


def as_number(x) -> Number:
    """Canonical numeric value: ints and exact decimals become Fractions."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isnan(x):
            raise ValueError("NaN is not a valid endpoint")
        return x
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return Fraction(s)
    raise TypeError(f"not a number: {x!r}")


def format_number(x: Number) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    # exact decimal when the denominator is 2^a 5^b
    d = x.denominator
    a = b = 0
    while d % 2 == 0:
        d //= 2
        a += 1
    while d % 5 == 0:
        d //= 5
        b += 1
    if d == 1:
        digits = max(a, b)
        scaled = x * 10**digits
        sign = "-" if scaled < 0 else ""
        s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}"
    return f"{x.numerator}/{x.denominator}"


# -- registered closed-form helpers ------------------------------------------------

def gaussian_tail_quantile(n) -> float:
    """c(n) with 1 - Phi(c(n)) = 2^-n."""
    n = int(n)
    return float(-ndtri(math.ldexp(1.0, -n)))


def cantor_unpair(k: int) -> tuple[int, int]:
    """Inverse of the Cantor pairing (i, j) -> (i+j)(i+j+1)/2 + j."""
    k = int(k)
    w = (math.isqrt(8 * k + 1) - 1) // 2
    j = k - w * (w + 1) // 2
    return w - j, j


def rational_enum(n) -> Fraction:
    """q(0)=0, q(1)=1, then p/d for d=2,3,... and 0<p<d (duplicates allowed)."""
    n = int(n)
    if n < 2:
        return Fraction(n)
    n -= 2
    d = 2
    while n >= d - 1:
        n -= d - 1
        d += 1
    return Fraction(n + 1, d)


def _exact_or_float(fn):
    def wrapped(*args):
        if any(isinstance(a, float) for a in args):
            return fn(*map(float, args))
        return fn(*args)
    return wrapped


FUNCTIONS: dict[str, tuple[Callable, int]] = {
    "c": (gaussian_tail_quantile, 1),
    "ninv": (lambda p: float(ndtri(float(p))), 1),
    "pi1": (lambda k: Fraction(cantor_unpair(k)[0]), 1),
    "pi2": (lambda k: Fraction(cantor_unpair(k)[1]), 1),
    "q": (rational_enum, 1),
    "floor": (lambda x: x if math.isinf(x) else Fraction(math.floor(x)), 1),
    "ceil": (lambda x: x if math.isinf(x) else Fraction(math.ceil(x)), 1),
    "abs": (abs, 1),
    "min": (min, 2),
    "max": (max, 2),
    "sqrt": (lambda x: math.sqrt(float(x)), 1),
}


def register_function(name: str, fn: Callable, arity: int) -> None:
    """Add a deterministic helper usable inside templates."""
    FUNCTIONS[name] = (fn, arity)


# -- AST ---------------------------------------------------------------------------

class IndexExpr:
    """Base class for index expression nodes (all immutable and hashable)."""

    precedence = 100

    def free_vars(self) -> frozenset:
        raise NotImplementedError

    def evaluate(self, env: Mapping[str, Number]) -> Number:
        raise NotImplementedError

    def substitute(self, env: Mapping[str, Number]) -> "IndexExpr | Number":
        """Evaluate if closed after substitution, else return a partially bound tree."""
        if not (self.free_vars() - env.keys()):
            return self.evaluate(env)
        return self._subst(env)

    def _subst(self, env):
        raise NotImplementedError


@dataclass(frozen=True)
class Const(IndexExpr):
    value: Number

    def free_vars(self):
        return frozenset()

    def evaluate(self, env):
        return self.value

    def _subst(self, env):
        return self

    def __str__(self):
        return format_number(self.value)


@dataclass(frozen=True)
class Var(IndexExpr):
    name: str

    def free_vars(self):
        return frozenset((self.name,))

    def evaluate(self, env):
        try:
            return as_number(env[self.name])
        except KeyError:
            raise UnboundIndexVariable(f"unbound index variable {self.name!r}") from None

    def _subst(self, env):
        return Const(as_number(env[self.name])) if self.name in env else self

    def __str__(self):
        return self.name


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "**": 4}


def _pow(a: Number, b: Number) -> Number:
    if isinstance(a, Fraction) and isinstance(b, Fraction) and b.denominator == 1:
        if a == 0 and b < 0:
            return INF
        return a ** int(b)
    return float(a) ** float(b)


def _div(a: Number, b: Number) -> Number:
    if b == 0:
        if a == 0:
            raise ZeroDivisionError("0/0 in index expression")
        return INF if a > 0 else -INF
    if isinstance(a, float) or isinstance(b, float):
        return float(a) / float(b)
    return Fraction(a) / Fraction(b)


_OPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: 0 if (a == 0 or b == 0) else a * b,
    "/": _div,
    "**": _pow,
}


@dataclass(frozen=True)
class BinOp(IndexExpr):
    op: str
    left: IndexExpr
    right: IndexExpr

    @property
    def precedence(self):
        return _PREC[self.op]

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def evaluate(self, env):
        return as_number(_OPS[self.op](self.left.evaluate(env), self.right.evaluate(env)))

    def _subst(self, env):
        return BinOp(self.op, _wrap(self.left.substitute(env)), _wrap(self.right.substitute(env)))

    def __str__(self):
        p = self.precedence
        left, right = str(self.left), str(self.right)
        if self.op == "**":
            # right associative
            if self.left.precedence <= p:
                left = f"({left})"
            if self.right.precedence < p:
                right = f"({right})"
        else:
            if self.left.precedence < p:
                left = f"({left})"
            if self.right.precedence <= p:
                right = f"({right})"
        return f"{left} {self.op} {right}" if p < 4 else f"{left}**{right}"


@dataclass(frozen=True)
class Neg(IndexExpr):
    operand: IndexExpr
    precedence = 3

    def free_vars(self):
        return self.operand.free_vars()

    def evaluate(self, env):
        return -self.operand.evaluate(env)

    def _subst(self, env):
        return Neg(_wrap(self.operand.substitute(env)))

    def __str__(self):
        inner = str(self.operand)
        if self.operand.precedence < 3:
            inner = f"({inner})"
        return f"-{inner}"


@dataclass(frozen=True)
class Call(IndexExpr):
    name: str
    args: tuple

    def free_vars(self):
        out = frozenset()
        for a in self.args:
            out |= a.free_vars()
        return out

    def evaluate(self, env):
        fn, _ = FUNCTIONS[self.name]
        return as_number(fn(*(a.evaluate(env) for a in self.args)))

    def _subst(self, env):
        return Call(self.name, tuple(_wrap(a.substitute(env)) for a in self.args))

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


def _wrap(x) -> IndexExpr:
    return x if isinstance(x, IndexExpr) else Const(as_number(x))


def lift(x) -> IndexExpr | Number:
    """Accept numbers, numeric strings or expressions; keep numbers as numbers."""
    if isinstance(x, IndexExpr):
        return x.evaluate({}) if not x.free_vars() else x
    return as_number(x)


def free_vars_of(x) -> frozenset:
    return x.free_vars() if isinstance(x, IndexExpr) else frozenset()


def subst_value(x, env):
    return x.substitute(env) if isinstance(x, IndexExpr) else x


def format_value(x) -> str:
    return str(x) if isinstance(x, IndexExpr) else format_number(x)
