"""Parser for ASCII polynomial / rational-function expressions in ``x``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*        # juxtaposition means '*'
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | 'x' | '(' expr ')'
    NUMBER := digits ('/' digits)?                # "3/4" binds tighter than '/'

``^`` and ``**`` are both accepted. Only integer exponents are allowed;
negative exponents are allowed on rational functions.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import ExactPoly
from .rational import RationalFunction


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|(\*\*|[x+\-*/^()]))")


def _tokenize(text: str) -> list[str]:
    text = text.replace("−", "-").strip()
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        tok = m.group(1) or m.group(2)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self) -> RationalFunction:
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RationalFunction:
        val = self.unary()
        while True:
            tok = self.peek()
            if tok in ("*", "/"):
                self.take()
                rhs = self.unary()
                val = val * rhs if tok == "*" else val / rhs
            elif tok is not None and (tok == "x" or tok == "(" or tok[0].isdigit()):
                val = val * self.unary()
            else:
                return val

    def unary(self) -> RationalFunction:
        tok = self.peek()
        if tok == "-":
            self.take()
            return -self.unary()
        if tok == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be an integer, got {tok!r}")
            base = base ** (sign * int(tok))
        return base

    def atom(self) -> RationalFunction:
        tok = self.take()
        if tok == "x":
            return RationalFunction.from_poly(ExactPoly.x())
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        if tok[0].isdigit():
            return RationalFunction.from_poly(ExactPoly.constant(Fraction(tok)))
        raise ParseError(f"unexpected token {tok!r}")


def parse_rational_function(text: str) -> RationalFunction:
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    p = _Parser(toks)
    try:
        val = p.expr()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc
    if p.peek() is not None:
        raise ParseError(f"trailing input starting at {p.peek()!r} in {text!r}")
    return val


def parse_poly(text: str) -> ExactPoly:
    val = parse_rational_function(text)
    if not val.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return val.num
