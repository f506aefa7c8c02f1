"""Tiny expression language for user-supplied j(n).

Grammar (left-associative, whitespace ignored)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | atom
    atom  := number | 'n' | 'log' '(' expr ')' | '(' expr ')'

``log`` is the natural logarithm. There is deliberately no ``ln``/``log2``
alias: an iterated logarithm must be written ``log(log(n))``.
Evaluation works on floats and on numpy arrays alike.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .errors import DomainError, InvalidInput


class ExprSyntaxError(InvalidInput):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Neg:
    child: "ExprNode"


@dataclass(frozen=True)
class Log:
    child: "ExprNode"


ExprNode = Num | Var | BinOp | Neg | Log

_TOKEN = re.compile(r"(\d+(?:\.\d+)?)|([A-Za-z_]\w*)|(\S)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        kind = ("num", "ident", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> None:
        kind, val, off = self.tok
        if val != value or kind != "op":
            found = "end of input" if kind == "eof" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", off)
        self.advance()

    def expr(self) -> ExprNode:
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExprNode:
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> ExprNode:
        if self.tok == ("op", "-", self.tok[2]):
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> ExprNode:
        kind, val, off = self.tok
        if kind == "num":
            self.advance()
            return Num(float(val))
        if kind == "ident":
            self.advance()
            if val == "n":
                return Var()
            if val == "log":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Log(inner)
            raise UnknownIdentifier(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "eof":
            raise ExprSyntaxError("unexpected end of input", off)
        raise ExprSyntaxError(f"unexpected {val!r}", off)


def parse(text: str) -> ExprNode:
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    p = _Parser(text)
    node = p.expr()
    kind, val, off = p.tok
    if kind != "eof":
        raise ExprSyntaxError(f"unexpected {val!r}", off)
    return node


def _fmt_number(v: float) -> str:
    s = format(Decimal(repr(v)), "f")
    return s if "." in s else s + ".0"


def serialize(e: ExprNode) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(e, Num):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return "n"
    if isinstance(e, Neg):
        return f"-({serialize(e.child)})"
    if isinstance(e, Log):
        return f"log({serialize(e.child)})"
    return f"({serialize(e.left)} {e.op} {serialize(e.right)})"


def evaluate(e: ExprNode, n):
    """Evaluate at ``n`` (float or ndarray). Raises DomainError, never returns NaN."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return n
    if isinstance(e, Neg):
        return -evaluate(e.child, n)
    if isinstance(e, Log):
        arg = evaluate(e.child, n)
        if np.any(np.asarray(arg) <= 0):
            raise DomainError("log of a non-positive value")
        return np.log(arg) if isinstance(arg, np.ndarray) else float(np.log(arg))
    a = evaluate(e.left, n)
    b = evaluate(e.right, n)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if np.any(np.asarray(b) == 0):
        raise DomainError("division by zero")
    return a / b


def derivative_est(e: ExprNode, n):
    """Central difference with step max(1e-4 * n, 1e-3)."""
    h = np.maximum(1e-4 * np.asarray(n, dtype=float), 1e-3)
    d = (evaluate(e, n + h) - evaluate(e, n - h)) / (2 * h)
    return float(d) if np.ndim(d) == 0 else d
