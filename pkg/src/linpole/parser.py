"""Expression grammar for germs, word literals and fraction-spec literals.

Germ grammar (ASCII):
    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' posint)*
    atom   := integer | 'z' posint | '(' expr ')'

Divisors must evaluate to a constant times a product of powers of homogeneous
linear forms; anything else (affine factors, genuinely polynomial factors)
raises NonHomogeneousPole.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .errors import NonHomogeneousPole, ParseError
from .exactlin import LinearForm, zvar
from .germs import RationalGerm, germ_add, germ_mul, germ_scale, germ_sub
from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|(z\d+)|([-+*/^()])|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(4) is not None:
            raise ParseError(f"unexpected character {m.group(4)!r}", m.start(4))
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("var", int(m.group(2)[1:]), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Value:
    """Germ plus, when available, its factorisation as coef * prod(form^exp)."""

    __slots__ = ("germ", "coef", "factors")

    def __init__(self, germ: RationalGerm, coef: Optional[Fraction] = None,
                 factors: Optional[dict[LinearForm, int]] = None):
        self.germ = germ
        self.coef = coef
        self.factors = factors

    @property
    def factorable(self) -> bool:
        return self.coef is not None


def _refresh_linear(value: _Value) -> _Value:
    """Detect a constant or a single homogeneous linear form after +/-."""
    g = value.germ
    if not g.is_holomorphic():
        return _Value(g)
    if g.numerator.is_constant():
        return _Value(g, g.numerator.constant_term(), {})
    if g.numerator.degree() == 1 and not g.numerator.constant_term():
        coeffs = {}
        for mono, c in g.numerator.terms:
            (v, _e), = mono
            coeffs[v] = c
        form = LinearForm(coeffs)
        prim, scalar = form.primitive()
        return _Value(g, scalar, {prim: 1})
    return _Value(g)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> _Value:
        v = self.expr()
        kind, _val, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return v

    def expr(self) -> _Value:
        v = self.term()
        while True:
            kind, val, _pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                g = germ_add(v.germ, rhs.germ) if val == "+" else germ_sub(v.germ, rhs.germ)
                v = _refresh_linear(_Value(g))
            else:
                return v

    def term(self) -> _Value:
        v = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.unary()
                if val == "*":
                    g = germ_mul(v.germ, rhs.germ)
                    if v.factorable and rhs.factorable:
                        factors = dict(v.factors)
                        for f, e in rhs.factors.items():
                            factors[f] = factors.get(f, 0) + e
                        v = _Value(g, v.coef * rhs.coef, factors)
                    else:
                        v = _Value(g)
                else:
                    v = _divide(v, rhs, pos)
            else:
                return v

    def unary(self) -> _Value:
        kind, val, _pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            inner = self.unary()
            g = germ_scale(inner.germ, -1)
            if inner.factorable:
                return _Value(g, -inner.coef, dict(inner.factors))
            return _Value(g)
        return self.power()

    def power(self) -> _Value:
        v = self.atom()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "^":
                self.next()
                kind2, k, pos2 = self.next()
                if kind2 != "int" or k < 0:
                    raise ParseError("exponent must be a nonnegative integer", pos2)
                out = RationalGerm(Polynomial.constant(1))
                for _ in range(k):
                    out = germ_mul(out, v.germ)
                if v.factorable:
                    v = _Value(out, v.coef ** k, {f: e * k for f, e in v.factors.items()})
                else:
                    v = _Value(out)
            else:
                return v

    def atom(self) -> _Value:
        kind, val, pos = self.next()
        if kind == "int":
            return _Value(RationalGerm(Polynomial.constant(val)), Fraction(val), {})
        if kind == "var":
            if val < 1:
                raise ParseError("variable index must be positive", pos)
            return _Value(RationalGerm(Polynomial.variable(val)), Fraction(1), {zvar(val): 1})
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        raise ParseError(f"unexpected token {val!r}", pos)


def _divide(lhs: _Value, rhs: _Value, pos: int) -> _Value:
    if not rhs.factorable:
        raise NonHomogeneousPole(
            "divisor is not a product of homogeneous linear forms")
    if rhs.coef == 0:
        raise ZeroDivisionError("division by zero")
    g = RationalGerm(lhs.germ.numerator * (1 / rhs.coef),
                     list(lhs.germ.denominator) + list(rhs.factors.items()))
    if lhs.factorable:
        factors = dict(lhs.factors)
        for f, e in rhs.factors.items():
            factors[f] = factors.get(f, 0) - e
        return _Value(g, lhs.coef / rhs.coef, factors)
    return _Value(g)


def parse_germ(text: str) -> RationalGerm:
    """Parse a germ expression; affine or nonlinear pole factors are rejected."""
    return _Parser(text).parse().germ


def render_germ(g: RationalGerm) -> str:
    """Expression string that parses back to the same germ."""
    return repr(g)


_WORD_TOKEN = re.compile(r"x0|x\{(\d+(?:,\d+)*)\}|x(\d+)")


def parse_word(text: str):
    """Word literal: x0, x<int> and x{i,j,...} concatenated; '1' is the empty word."""
    from .words import X0

    text = text.strip()
    if text in ("1", ""):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _WORD_TOKEN.match(text, pos)
        if not m:
            raise ParseError("bad word literal", pos)
        if m.group(1) is not None:
            letters.append(frozenset(int(x) for x in m.group(1).split(",")))
        elif m.group(2) is not None:
            letters.append(int(m.group(2)))
        else:
            letters.append(X0)
        pos = m.end()
    return tuple(letters)


_SPEC_RE = re.compile(r"^\s*f\[([^;\]]*);([^\]]*)\]\s*$")


def parse_spec(text: str, lmap=None):
    """Fraction-spec literal f[s1,...,sk; u1,...,uk]; set letters as {1,3}."""
    from .fracspec import FractionSpec, chen_lmap, speer_lmap

    m = _SPEC_RE.match(text)
    if not m:
        raise ParseError("bad fraction spec literal", 0)
    s_part, u_part = m.group(1).strip(), m.group(2).strip()
    exps = [int(x) for x in s_part.split(",")] if s_part else []
    letters: list = []
    for chunk in re.findall(r"\{[^}]*\}|[^,{}\s]+", u_part):
        if chunk.startswith("{"):
            letters.append(frozenset(int(x) for x in chunk[1:-1].split(",") if x.strip()))
        else:
            letters.append(int(chunk))
    if lmap is None:
        lmap = speer_lmap() if any(isinstance(u, frozenset) for u in letters) else chen_lmap()
    return FractionSpec(exps, letters, lmap)
