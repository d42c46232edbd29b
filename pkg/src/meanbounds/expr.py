"""A small expression language for real functions of one variable ``x``.

Grammar::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = atom [ "^" exponent ] ;
    exponent = ("-" | "+") exponent | power ;
    atom    = number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")" ;
    func    = "exp" | "ln" | "sqrt" | "sin" | "cos" | "abs" ;
    number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
            | "." digits [ ("e" | "E") [ "+" | "-" ] digits ] ;

``^`` binds tighter than unary minus and is right-associative, so
``-x^2`` is ``-(x^2)`` and ``2^3^2`` is 512. A minus sign directly after
``^`` belongs to the exponent. There is no implicit multiplication.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvalError, ParseError
from .quadrature import Integrand

FUNCS = ("exp", "ln", "sqrt", "sin", "cos", "abs")
CONSTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Const:
    value: float
    name: str | None = None


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a name from FUNCS
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


Node = Union[Const, Var, Unary, Binary]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    offset: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             {"number", "x", "function", "(", "operator"})
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


_ATOM_START = frozenset({"number", "x", "pi", "e", "(", "-", "+"} | set(FUNCS))


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str):
        if self.tok.text != text or self.tok.kind == "num":
            raise ParseError(f"unexpected {self._describe()}", self.tok.offset, {text})
        self.take()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe()}", self.tok.offset,
                             {"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = self.take().text
            arg = self.unary()
            return Unary("neg", arg) if sign == "-" else arg
        return self.power()

    def exponent(self) -> Node:
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = self.take().text
            arg = self.exponent()
            return Unary("neg", arg) if sign == "-" else arg
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            return Binary("^", base, self.exponent())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.take()
            v = float(t.text)
            if not math.isfinite(v):
                raise ParseError(f"number {t.text} overflows", t.offset, {"finite number"})
            return Const(v)
        if t.kind == "name":
            self.take()
            if t.text == "x":
                return Var()
            if t.text in CONSTS:
                return Const(CONSTS[t.text], t.text)
            if t.text in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            raise ParseError(f"unknown name {t.text!r}", t.offset, _ATOM_START)
        if t.kind == "op" and t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {self._describe()}", t.offset, _ATOM_START)


def parse(text: str) -> Node:
    if not text or not text.strip():
        raise ParseError("empty expression", 0, _ATOM_START)
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text.encode("utf-8")) if ch > 127)
        raise ParseError("non-ASCII input", bad, _ATOM_START)
    return _Parser(text).parse()


def unparse(node: Node) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(node, Const):
        return node.name if node.name else repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{unparse(node.arg)})"
        return f"{node.op}({unparse(node.arg)})"
    return f"({unparse(node.left)} {node.op} {unparse(node.right)})"


def _fail(msg, node, x, mask):
    xs = np.broadcast_to(np.asarray(x, dtype=float), np.shape(mask))
    bad = float(xs[mask][0]) if np.ndim(mask) else float(xs)
    raise EvalError(f"{msg} in {unparse(node)} at x={bad!r}", node, bad)


def _ev(node: Node, x):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Unary):
        a = _ev(node.arg, x)
        op = node.op
        if op == "neg":
            return -a
        if op == "ln":
            bad = np.asarray(a) <= 0
            if np.any(bad):
                _fail("ln of a nonpositive value", node, x, bad)
            return np.log(a)
        if op == "sqrt":
            bad = np.asarray(a) < 0
            if np.any(bad):
                _fail("sqrt of a negative value", node, x, bad)
            return np.sqrt(a)
        if op == "exp":
            r = np.exp(a)
            if not np.all(np.isfinite(r)):
                raise OverflowError(f"exp overflow in {unparse(node)}")
            return r
        return {"sin": np.sin, "cos": np.cos, "abs": np.abs}[op](a)
    a = _ev(node.left, x)
    b = _ev(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        bad = np.asarray(b) == 0
        if np.any(bad):
            _fail("division by zero", node, x, bad)
        return a / b
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    bad = (a_arr < 0) & (b_arr != np.round(b_arr))
    if np.any(bad):
        _fail("negative base with a non-integer exponent", node, x, bad)
    bad = (a_arr == 0) & (b_arr < 0)
    if np.any(bad):
        _fail("zero to a negative power", node, x, bad)
    r = np.power(a_arr, b_arr)
    if not np.all(np.isfinite(r)):
        raise OverflowError(f"power overflow in {unparse(node)}")
    return r


def evaluate(node: Node, x):
    """Evaluate at a scalar (returns float) or elementwise over an array."""
    with np.errstate(all="ignore"):
        r = _ev(node, x if np.ndim(x) else float(x))
        if np.ndim(x) == 0:
            r = float(r)
            if not math.isfinite(r):
                raise OverflowError(f"non-finite result {r} in {unparse(node)}")
            return r
        r = np.broadcast_to(np.asarray(r, dtype=float), np.shape(x)).copy()
        if not np.all(np.isfinite(r)):
            raise OverflowError(f"non-finite result in {unparse(node)}")
        return r


# ``eval`` as named in the public interface; shadows the builtin only inside this module's namespace
eval = evaluate  # noqa: A001


def compile_expr(text_or_node) -> Integrand:
    node = parse(text_or_node) if isinstance(text_or_node, str) else text_or_node
    return Integrand(lambda x: evaluate(node, x), unparse(node), True)
