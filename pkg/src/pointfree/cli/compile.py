"""Turn parsed expressions into sigma-terms and measurable functions."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .. import borel_functions as bf
from ..index_expr import IndexExpr, as_number
from ..intervals import INF
from ..sigma_terms import BOTTOM, TOP, FinJoin, FinMeet, Not, Term, Vee, Wedge, cyl, symdiff_term
from .language import FUN, SET, Node


def _ix(e, env: Mapping):
    """Bind what is known; leave a template when variables remain free."""
    if isinstance(e, IndexExpr):
        return e.substitute(env)
    return e


def _value(e, env: Mapping):
    v = _ix(e, env)
    if isinstance(v, IndexExpr):
        raise ValueError(f"index expression {v} is not closed here")
    return as_number(v)


def compile_set(n: Node, env: Mapping = None) -> Term:
    env = env or {}
    op, a = n.op, n.args
    if n.sort != SET:
        raise TypeError(f"{op} is not a set expression")
    if op == "top":
        return TOP
    if op == "bot":
        return BOTTOM
    if op == "cyl":
        return cyl(_ix(a[0], env), _ix(a[1], env), _ix(a[2], env))
    if op == "not":
        return Not(compile_set(a[0], env))
    if op == "and":
        return FinMeet(compile_set(a[0], env), compile_set(a[1], env))
    if op == "or":
        return FinJoin(compile_set(a[0], env), compile_set(a[1], env))
    if op == "xor":
        return symdiff_term(compile_set(a[0], env), compile_set(a[1], env))
    var, start, body, tail, mono = a
    inner = {k: v for k, v in env.items() if k != var}
    build = Vee if op == "vee" else Wedge
    return build(var, _ix(start, inner), compile_set(body, inner), tail=_ix(tail, inner) if tail is not None else None,
                 monotone=mono)


def compile_fun(n: Node, env: Mapping = None) -> bf.NonNegMeasurable:
    env = env or {}
    op, a = n.op, n.args
    if n.sort != FUN:
        raise TypeError(f"{op} is not a function expression")
    if op == "ind":
        return bf.indicator(compile_set(a[0], env))
    if op == "const":
        return bf.constant(_value(a[0], env))
    if op in ("coord", "negcoord"):
        i = _value(a[0], env)
        return bf.Coordinate(int(i), 1 if op == "coord" else -1)
    if op == "sum":
        return bf.fsum(compile_fun(a[0], env), compile_fun(a[1], env))
    if op == "min":
        return bf.pointwise_min(*(compile_fun(x, env) for x in a))
    if op == "max":
        return bf.pointwise_max(*(compile_fun(x, env) for x in a))
    if op == "scale":
        return bf.scaled(_value(a[0], env), compile_fun(a[1], env))
    if op == "approx":
        return bf.dyadic_approx(compile_fun(a[0], env), int(_value(a[1], env)))
    var, start, body, mod = a
    k0 = int(_value(start, env))

    def rule(k):
        return compile_fun(body, {**env, var: Fraction(k)})

    modulus = None
    if mod is not None:
        def modulus(k):
            return _value(mod, {**env, var: Fraction(k)})

    stream = bf.FunStream(rule, start=k0, modulus=modulus, label=var)
    return bf.LimUp(stream) if op == "limup" else bf.LimDown(stream)


def compile_node(n: Node):
    return compile_set(n) if n.sort == SET else compile_fun(n)
