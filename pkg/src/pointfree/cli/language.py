"""Expression language for sets and functions.

Grammar (LL(1)); ``iexpr`` is an index expression::

    program  := ("let" NAME "=" expr ";")* expr EOF
    expr     := xor ("|" xor)*
    xor      := and ("^" and)*
    and      := add ("&" add)*
    add      := mul ("+" mul)*          sets: symmetric difference, functions: sum
    mul      := unary ("*" unary)*      sets only: meet
    unary    := "!" unary | atom
    atom     := "(" expr ")" | "top" | "bot" | NAME
              | "cyl" "(" iexpr "," iexpr "," iexpr ")"
              | ("Vee" | "Wedge") "(" VAR "in" iexpr ".." "," expr ("," "tail" "=" iexpr | "," "monotone")* ")"
              | "ind" "(" expr ")" | "const" "(" iexpr ")" | ("coord" | "negcoord") "(" iexpr ")"
              | ("min" | "max") "(" expr ("," expr)+ ")" | "scale" "(" iexpr "," expr ")"
              | ("limup" | "limdown") "(" VAR "in" iexpr ".." "," expr ("," "mod" "=" iexpr)? ")"
              | "approx" "(" expr "," iexpr ")"
    iexpr    := iterm (("+" | "-") iterm)*
    iterm    := ifactor (("*" | "/") ifactor)*
    ifactor  := "-" ifactor | iatom ("**" ifactor)?
    iatom    := NUMBER | "inf" | VAR | FUNC "(" iexpr ("," iexpr)* ")" | "(" iexpr ")"

``let`` bindings are expanded in place, so the AST never contains names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import ExpressionSyntaxError, UnboundIndexVariable
from ..index_expr import FUNCTIONS, BinOp, Call, Const, IndexExpr, Neg, Var
from ..intervals import INF

SET, FUN = "set", "fun"

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|\.\.|[()\[\],;=&|^!+\-*/])
    """,
    re.VERBOSE,
)

KEYWORDS = {"let", "in", "top", "bot", "inf", "cyl", "Vee", "Wedge", "ind", "const", "coord", "negcoord",
            "min", "max", "scale", "limup", "limdown", "approx", "tail", "mod", "monotone"}


@dataclass(frozen=True)
class Token:
    kind: str   # num | name | op | eof
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out, pos, line, col = [], 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# -- AST ---------------------------------------------------------------------------

_SORT = {
    "top": SET, "bot": SET, "cyl": SET, "not": SET, "and": SET, "or": SET, "xor": SET,
    "vee": SET, "wedge": SET,
    "ind": FUN, "const": FUN, "sum": FUN, "min": FUN, "max": FUN, "scale": FUN,
    "limup": FUN, "limdown": FUN, "approx": FUN, "coord": FUN, "negcoord": FUN,
}


@dataclass(frozen=True)
class Node:
    """AST node; ``args`` hold child nodes, index expressions, names and flags."""

    op: str
    args: tuple = ()

    @property
    def sort(self) -> str:
        return _SORT[self.op]


_BIN_PREC = {"or": 1, "xor": 2, "and": 3, "sum": 4}
_BIN_SYM = {"or": "|", "xor": "^", "and": "&", "sum": "+"}


def _prec(n: Node) -> int:
    if n.op in _BIN_PREC:
        return _BIN_PREC[n.op]
    if n.op == "not":
        return 6
    return 7


def to_source(n: Node) -> str:
    """Canonical concrete syntax; parsing it gives back an equal AST."""
    op, a = n.op, n.args
    if op in _BIN_PREC:
        p = _BIN_PREC[op]
        left, right = to_source(a[0]), to_source(a[1])
        if _prec(a[0]) < p:
            left = f"({left})"
        if _prec(a[1]) <= p:
            right = f"({right})"
        return f"{left} {_BIN_SYM[op]} {right}"
    if op == "not":
        inner = to_source(a[0])
        return f"!{inner}" if _prec(a[0]) >= 6 else f"!({inner})"
    if op in ("top", "bot"):
        return op
    if op == "cyl":
        return f"cyl({a[0]}, {a[1]}, {a[2]})"
    if op in ("vee", "wedge"):
        var, start, body, tail, mono = a
        s = f"{'Vee' if op == 'vee' else 'Wedge'}({var} in {start}.., {to_source(body)}"
        if tail is not None:
            s += f", tail={tail}"
        if mono:
            s += ", monotone"
        return s + ")"
    if op == "ind":
        return f"ind({to_source(a[0])})"
    if op in ("const", "coord", "negcoord"):
        return f"{op}({a[0]})"
    if op in ("min", "max"):
        return f"{op}({', '.join(to_source(x) for x in a)})"
    if op == "scale":
        return f"scale({a[0]}, {to_source(a[1])})"
    if op in ("limup", "limdown"):
        var, start, body, mod = a
        s = f"{op}({var} in {start}.., {to_source(body)}"
        if mod is not None:
            s += f", mod={mod}"
        return s + ")"
    if op == "approx":
        return f"approx({to_source(a[0])}, {a[1]})"
    raise ValueError(f"unknown node {op!r}")


def to_json(n: Node) -> dict:
    """Tree form: index expressions are stored as canonical source strings."""
    def enc(x):
        if isinstance(x, Node):
            return to_json(x)
        if isinstance(x, IndexExpr):
            return {"index": str(x)}
        return x

    return {"op": n.op, "args": [enc(x) for x in n.args]}


def from_json(obj: dict) -> Node:
    def dec(x):
        if isinstance(x, dict) and "op" in x:
            return from_json(x)
        if isinstance(x, dict) and "index" in x:
            return parse_index(x["index"], free_ok=True)
        return x

    return Node(obj["op"], tuple(dec(x) for x in obj["args"]))


# -- parser ------------------------------------------------------------------------

class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0
        self.scope: list[str] = []
        self.lets: dict[str, Node] = {}
        self.free_ok = False

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, expected=(), tok: Optional[Token] = None):
        t = tok or self.tok
        found = t.text or "end of input"
        exp = f"; expected {' or '.join(expected)}" if expected else ""
        raise ExpressionSyntaxError(f"{msg} (found {found!r}){exp}",
                                    t.line, t.col, expected)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("op", "name")

    def eat(self, text: str) -> Token:
        if not self.at(text):
            self.error("syntax error", (repr(text),))
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            self.error("expected a name", ("identifier",))
        self.i += 1
        return t

    # entry points
    def program(self) -> Node:
        while self.at("let"):
            self.eat("let")
            name = self.ident()
            self.eat("=")
            self.lets[name.text] = self.expr()
            self.eat(";")
        n = self.expr()
        if self.tok.kind != "eof":
            self.error("unexpected trailing input", ("end of input",))
        return n

    # sets and functions
    def _binary(self, sub, sym, op_for):
        left = sub()
        while self.at(sym):
            t = self.eat(sym)
            right = sub()
            left = self._combine(op_for, left, right, t)
        return left

    def _combine(self, sym, left: Node, right: Node, t: Token) -> Node:
        if left.sort != right.sort:
            self.error(f"operator {sym!r} mixes a {left.sort} and a {right.sort}", tok=t)
        if sym == "+":
            return Node("xor" if left.sort == SET else "sum", (left, right))
        if left.sort != SET:
            self.error(f"operator {sym!r} needs sets", tok=t)
        return Node({"|": "or", "^": "xor", "&": "and", "*": "and"}[sym], (left, right))

    def expr(self) -> Node:
        return self._binary(self.xor, "|", "|")

    def xor(self) -> Node:
        return self._binary(self.and_, "^", "^")

    def and_(self) -> Node:
        return self._binary(self.add, "&", "&")

    def add(self) -> Node:
        return self._binary(self.mul, "+", "+")

    def mul(self) -> Node:
        return self._binary(self.unary, "*", "*")

    def unary(self) -> Node:
        if self.at("!"):
            t = self.eat("!")
            x = self.unary()
            if x.sort != SET:
                self.error("'!' needs a set", tok=t)
            return Node("not", (x,))
        return self.atom()

    def _expect_sort(self, n: Node, sort: str, t: Token) -> Node:
        if n.sort != sort:
            self.error(f"expected a {sort} expression, got a {n.sort}", tok=t)
        return n

    def _sub(self, sort: str) -> Node:
        t = self.tok
        return self._expect_sort(self.expr(), sort, t)

    def _binder(self):
        var = self.ident().text
        self.eat("in")
        start = self.iexpr()
        self.eat("..")
        self.eat(",")
        return var, start

    def atom(self) -> Node:
        t = self.tok
        if self.at("("):
            self.eat("(")
            n = self.expr()
            self.eat(")")
            return n
        if t.kind != "name":
            self.error("expected an expression", ("'('", "name"))
        name = t.text
        self.i += 1
        if name in ("top", "bot"):
            return Node(name)
        if name == "cyl":
            self.eat("(")
            i = self.iexpr()
            self.eat(",")
            lo = self.iexpr()
            self.eat(",")
            hi = self.iexpr()
            self.eat(")")
            return Node("cyl", (i, lo, hi))
        if name in ("Vee", "Wedge"):
            self.eat("(")
            var, start = self._binder()
            self.scope.append(var)
            body = self._sub(SET)
            tail, mono = None, False
            while self.at(","):
                self.eat(",")
                if self.at("tail"):
                    self.eat("tail")
                    self.eat("=")
                    tail = self.iexpr()
                elif self.at("monotone"):
                    self.eat("monotone")
                    mono = True
                else:
                    self.error("unknown option", ("tail=", "monotone"))
            self.scope.pop()
            self.eat(")")
            return Node(name.lower(), (var, start, body, tail, mono))
        if name == "ind":
            self.eat("(")
            s = self._sub(SET)
            self.eat(")")
            return Node("ind", (s,))
        if name in ("const", "coord", "negcoord"):
            self.eat("(")
            v = self.iexpr()
            self.eat(")")
            return Node(name, (v,))
        if name in ("min", "max"):
            self.eat("(")
            args = [self._sub(FUN)]
            while self.at(","):
                self.eat(",")
                args.append(self._sub(FUN))
            self.eat(")")
            if len(args) < 2:
                self.error(f"{name} needs at least two functions", tok=t)
            return Node(name, tuple(args))
        if name == "scale":
            self.eat("(")
            c = self.iexpr()
            self.eat(",")
            f = self._sub(FUN)
            self.eat(")")
            return Node("scale", (c, f))
        if name in ("limup", "limdown"):
            self.eat("(")
            var, start = self._binder()
            self.scope.append(var)
            body = self._sub(FUN)
            mod = None
            if self.at(","):
                self.eat(",")
                self.eat("mod")
                self.eat("=")
                mod = self.iexpr()
            self.scope.pop()
            self.eat(")")
            return Node(name, (var, start, body, mod))
        if name == "approx":
            self.eat("(")
            f = self._sub(FUN)
            self.eat(",")
            n = self.iexpr()
            self.eat(")")
            return Node("approx", (f, n))
        if name in self.lets:
            return self.lets[name]
        self.i -= 1
        self.error(f"unknown name {name!r}")

    # index expressions
    def iexpr(self) -> IndexExpr:
        left = self.iterm()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.iterm())
        return left

    def iterm(self) -> IndexExpr:
        left = self.ifactor()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.ifactor())
        return left

    def ifactor(self) -> IndexExpr:
        if self.at("-"):
            self.eat("-")
            return Neg(self.ifactor())
        base = self.iatom()
        if self.at("**"):
            self.eat("**")
            return BinOp("**", base, self.ifactor())
        return base

    def iatom(self) -> IndexExpr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Const(Fraction(t.text))
        if self.at("("):
            self.eat("(")
            e = self.iexpr()
            self.eat(")")
            return e
        if t.kind == "name":
            self.i += 1
            if t.text == "inf":
                return Const(INF)
            if self.at("("):
                if t.text not in FUNCTIONS:
                    self.error(f"unknown function {t.text!r}", tok=t)
                self.eat("(")
                args = [self.iexpr()]
                while self.at(","):
                    self.eat(",")
                    args.append(self.iexpr())
                self.eat(")")
                arity = FUNCTIONS[t.text][1]
                if len(args) != arity:
                    self.error(f"{t.text} takes {arity} argument(s), got {len(args)}", tok=t)
                return Call(t.text, tuple(args))
            if t.text in self.scope or self.free_ok:
                return Var(t.text)
            raise UnboundIndexVariable(
                f"unbound index variable {t.text!r}", t.line, t.col, ("bound variable",)
            )
        self.error("expected an index expression", ("number", "variable", "'('"))


def parse(src: str) -> Node:
    """Parse a program (optional ``let`` bindings then one expression)."""
    return Parser(src).program()


def parse_index(src: str, variables=(), free_ok: bool = False) -> IndexExpr:
    """Parse one index expression; ``free_ok`` accepts any identifier as a variable."""
    p = Parser(src)
    p.scope.extend(variables)
    p.free_ok = free_ok
    e = p.iexpr()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input", ("end of input",))
    return e
