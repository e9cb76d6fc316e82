"""Polynomial expressions over a base valued field.

Grammar (usual precedence, ``^`` binds tightest and does not chain)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' exponent)?
    atom   := INT | NAME | '(' expr ')'
    exponent := ['-'] INT ['/' INT] | '(' ['-'] INT ['/' INT] ')' | INT

Names: ``x`` always; ``t`` on fqt, fqst and tower bases; ``s`` on fqst;
``a`` (generator of the constant field) on bases with a prime-power
constant field.  Division is only allowed by expressions free of ``x``.
Rational exponents are accepted on tower bases for powers of ``t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core.fields import FiniteField, RatFuncField
from .core.poly import Poly
from .errors import ParseError, UnknownIndeterminate
from .valued import LaurentPlace, PRootTower, ValuedField, parse_base

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


@dataclass(frozen=True)
class PolyExpr:
    source: str
    poly: Poly
    base: ValuedField

    def __str__(self):
        return str(self.poly)


def _tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append(("op", ch, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def _constant_field(base):
    f = base.field
    while isinstance(f, RatFuncField):
        f = f.const
    return getattr(f, "const", f)


class _Parser:
    def __init__(self, text, base: ValuedField):
        self.text, self.base = text, base
        self.toks = _tokens(text)
        self.i = 0
        K = base.field
        self.K = K
        self.names = {"x": Poly.gen(K, "x")}
        if isinstance(base, (LaurentPlace, PRootTower)):
            self.names["t"] = Poly.constant(K, base.t())
        if isinstance(K, RatFuncField) and isinstance(K.const, RatFuncField):
            self.names["s"] = Poly.constant(K, K(K.const.gen()))
        cf = _constant_field(base)
        if isinstance(cf, FiniteField) and cf.k > 1:
            self.names["a"] = Poly.constant(K, K(cf.gen()))

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.degree() > 0:
                    raise ParseError("division by an expression in x", pos)
                if not rhs:
                    raise ParseError("division by zero", pos)
                value = value * (self.K.one / rhs[0])
        return value

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        start = self.peek()
        value = self.atom()
        if self.peek()[:2] == ("op", "^"):
            pos = self.take()[2]
            e = self.exponent()
            if e.denominator != 1:
                if not (start[:2] == ("name", "t") and isinstance(self.base, PRootTower)):
                    raise ParseError("rational exponents only apply to t on tower bases", pos)
                return Poly.constant(self.K, self.base.element_of_value(e))
            e = int(e)
            if e < 0:
                if value.degree() > 0 or not value:
                    raise ParseError("negative exponent of an expression in x", pos)
                return Poly.constant(self.K, (self.K.one / value[0]) ** -e)
            return value ** e
        return value

    def exponent(self):
        paren = self.peek()[:2] == ("op", "(")
        if paren:
            self.take()
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ParseError("exponent must be an integer or a fraction", pos)
        e = Fraction(val)
        if paren and self.peek()[:2] == ("op", "/"):
            self.take()
            kind, den, pos = self.take()
            if kind != "int" or den == 0:
                raise ParseError("bad exponent denominator", pos)
            e /= den
        if paren:
            self.expect(")")
        return sign * e

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Poly.constant(self.K, self.K(val))
        if kind == "name":
            if val not in self.names:
                raise UnknownIndeterminate(f"unknown indeterminate {val!r} for base {self.base}", pos)
            return self.names[val]
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError("unexpected end of input" if kind == "end" else f"unexpected {val!r}", pos)


def parse_poly(text: str, base) -> PolyExpr:
    """Parse ``text`` into a polynomial in ``x`` over the base field."""
    if isinstance(base, str):
        base = parse_base(base)
    return PolyExpr(text, _Parser(text, base).parse(), base)
