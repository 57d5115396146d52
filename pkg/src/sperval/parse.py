"""Recursive-descent parser for polynomial and series expressions.

One grammar serves both polynomials in the coordinate variables and
power series in ``t``; coefficients are rational functions of ``u``::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" exponent)?
    atom   := NUMBER | NAME | "(" expr ")"
    exponent := INT | "(" ["-"] INT ["/" INT] ")"

Division is only allowed by expressions free of variables and ``t``.
Rational exponents are only allowed on a bare power of ``t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import SyntaxErrorAt, UnknownVariable
from .exact_arith import PARAM, RatFn
from .poly_series import INF, Poly, TruncSeries

T = "t"
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1) -> List[Token]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SyntaxErrorAt(f"unexpected character {text[bad]!r}", line, col0 + bad)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), line, col0 + m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", line, col0 + len(text)))
    return out


Key = Tuple[Tuple[int, ...], Fraction]


class _Val:
    """Finite sum of c * x^e * t^q with c in Q(u)."""

    def __init__(self, nvars: int, terms: Optional[Dict[Key, RatFn]] = None):
        self.n = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, n, c) -> "_Val":
        return cls(n, {((0,) * n, Fraction(0)): RatFn.coerce(c)})

    def is_scalar(self) -> bool:
        return all(k == ((0,) * self.n, Fraction(0)) for k in self.terms)

    def scalar(self) -> RatFn:
        return self.terms.get(((0,) * self.n, Fraction(0)), RatFn())

    def __add__(self, o):
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return _Val(self.n, out)

    def __neg__(self):
        return _Val(self.n, {k: -v for k, v in self.terms.items()})

    def __mul__(self, o):
        out: Dict[Key, RatFn] = {}
        for (e1, q1), c1 in self.terms.items():
            for (e2, q2), c2 in o.terms.items():
                k = (tuple(a + b for a, b in zip(e1, e2)), q1 + q2)
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return _Val(self.n, out)


class ExpressionParser:
    def __init__(self, text: str, variables: Sequence[str], allow_t: bool, line: int = 1, col0: int = 1):
        self.variables = tuple(variables)
        self.allow_t = allow_t
        self.toks = tokenize(text, line, col0)
        self.i = 0
        self.n = len(self.variables)

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            raise SyntaxErrorAt(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def parse(self) -> _Val:
        v = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise SyntaxErrorAt(f"unexpected {tok.text!r}", tok.line, tok.col)
        return v

    def expr(self) -> _Val:
        v = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            w = self.term()
            v = v + w if op == "+" else v + (-w)
        return v

    def term(self) -> _Val:
        v = self.unary()
        while self.peek().text in ("*", "/"):
            tok = self.take()
            w = self.unary()
            if tok.text == "*":
                v = v * w
            else:
                if not w.is_scalar():
                    raise SyntaxErrorAt("division only by expressions in u", tok.line, tok.col)
                d = w.scalar()
                if not d:
                    raise SyntaxErrorAt("division by zero", tok.line, tok.col)
                v = v * _Val.const(self.n, d.inverse())
        return v

    def unary(self) -> _Val:
        if self.peek().text == "-":
            self.take()
            return -self.unary()
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> _Val:
        start = self.peek()
        base = self.atom()
        if self.peek().text != "^":
            return base
        caret = self.take()
        e = self.exponent(caret)
        if e.denominator != 1 or e < 0:
            bare_t = ((0,) * self.n, Fraction(1))
            if start.text != T or base.terms != {bare_t: RatFn.const(1)}:
                raise SyntaxErrorAt("fractional or negative exponents are only allowed on t", caret.line, caret.col)
            return _Val(self.n, {((0,) * self.n, e): RatFn.const(1)})
        out = _Val.const(self.n, 1)
        for _ in range(int(e)):
            out = out * base
        return out

    def exponent(self, caret: Token) -> Fraction:
        tok = self.take()
        if tok.kind == "num" and "." not in tok.text:
            return Fraction(int(tok.text))
        if tok.text != "(":
            raise SyntaxErrorAt("expected an exponent after '^'", tok.line, tok.col)
        sign = 1
        if self.peek().text == "-":
            self.take()
            sign = -1
        a = self.take()
        if a.kind != "num" or "." in a.text:
            raise SyntaxErrorAt("expected an integer exponent", a.line, a.col)
        q = Fraction(int(a.text))
        if self.peek().text == "/":
            self.take()
            b = self.take()
            if b.kind != "num" or "." in b.text or int(b.text) == 0:
                raise SyntaxErrorAt("expected a positive integer denominator", b.line, b.col)
            q /= int(b.text)
        self.expect(")")
        return sign * q

    def atom(self) -> _Val:
        tok = self.take()
        if tok.kind == "num":
            return _Val.const(self.n, Fraction(tok.text))
        if tok.kind == "name":
            if tok.text == PARAM:
                return _Val.const(self.n, RatFn.param())
            if tok.text == T:
                if not self.allow_t:
                    raise UnknownVariable(f"t is not allowed here (line {tok.line}, col {tok.col})",
                                          line=tok.line, col=tok.col)
                return _Val(self.n, {((0,) * self.n, Fraction(1)): RatFn.const(1)})
            if tok.text in self.variables:
                e = [0] * self.n
                e[self.variables.index(tok.text)] = 1
                return _Val(self.n, {(tuple(e), Fraction(0)): RatFn.const(1)})
            raise UnknownVariable(f"unknown variable {tok.text!r} (line {tok.line}, col {tok.col})",
                                  name=tok.text, line=tok.line, col=tok.col)
        if tok.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise SyntaxErrorAt(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.col)


def parse_poly(text: str, variables: Sequence[str], line: int = 1, col0: int = 1) -> Poly:
    v = ExpressionParser(text, variables, allow_t=False, line=line, col0=col0).parse()
    return Poly(variables, {e: c for (e, _), c in v.terms.items()})


def parse_series(text: str, trunc=INF, line: int = 1, col0: int = 1) -> TruncSeries:
    v = ExpressionParser(text, (), allow_t=True, line=line, col0=col0).parse()
    return TruncSeries({q: c for (_, q), c in v.terms.items()}, trunc)


def parse_ratfn(text: str, line: int = 1, col0: int = 1) -> RatFn:
    v = ExpressionParser(text, (), allow_t=False, line=line, col0=col0).parse()
    return v.scalar()
