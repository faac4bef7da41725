"""Parser for jet-differential expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-')? atom ('^' int)?
    atom   := 'Z[' int ',' int ']' | 'z[' int ']' | 'det[' rows ']'
            | number | 'i' | '(' expr ')'
    rows   := exprlist (';' exprlist)*
    number := digits ('.' digits)? ('/' digits)? ('i')?

Numbers are exact (``0.25`` is ``1/4``); a trailing ``i`` makes them
imaginary.  The canonical output of :meth:`JetPolynomial.to_text` parses back
to an equal polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .polynomial import JetPolynomial, det
from .scalars import QQi

__all__ = ["parse_expression", "analyze_expression", "ParsedExpression"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?i?)|(?P<name>det|Z|z|i)|(?P<op>[-+*^()\[\],;]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _number(text: str):
    imag = text.endswith("i")
    if imag:
        text = text[:-1]
    if "/" in text:
        num, den = text.split("/")
        value = Fraction(num) / Fraction(den)
    else:
        value = Fraction(text)
    if value.denominator == 1:
        value = int(value)
    return QQi(0, value) if imag else value


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value:
            shown = "end of input" if kind == "end" else repr(v)
            raise ParseError(f"expected {value!r}, found {shown}", pos)

    def integer(self) -> int:
        kind, v, pos = self.take()
        if kind != "num" or not v.isdigit():
            raise ParseError("expected an integer", pos)
        return int(v)

    def parse(self) -> JetPolynomial:
        result = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", pos)
        return result

    def expr(self):
        total = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            total = total + rhs if op == "+" else total - rhs
        return total

    def term(self):
        prod = self.factor()
        while self.peek()[1] == "*":
            self.take()
            prod = prod * self.factor()
        return prod

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            base = base ** self.integer()
        return base

    def atom(self) -> JetPolynomial:
        kind, v, pos = self.take()
        if kind == "num":
            return JetPolynomial.constant(_number(v))
        if v == "i":
            return JetPolynomial.constant(QQi(0, 1))
        if v == "Z":
            self.expect("[")
            i = self.integer()
            self.expect(",")
            j = self.integer()
            self.expect("]")
            if i < 1 or j < 1:
                raise ParseError("indices of Z start at 1", pos)
            return JetPolynomial.var(("Z", i, j))
        if v == "z":
            self.expect("[")
            i = self.integer()
            self.expect("]")
            if i < 1:
                raise ParseError("indices of z start at 1", pos)
            return JetPolynomial.var(("z", i, 0))
        if v == "det":
            self.expect("[")
            rows = [self.exprlist()]
            while self.peek()[1] == ";":
                self.take()
                rows.append(self.exprlist())
            self.expect("]")
            if any(len(r) != len(rows) for r in rows):
                raise ParseError("det[] needs a square matrix", pos)
            return JetPolynomial.coerce(det(rows))
        if v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        shown = "end of input" if kind == "end" else repr(v)
        raise ParseError(f"unexpected {shown}", pos)

    def exprlist(self) -> list:
        items = [self.expr()]
        while self.peek()[1] == ",":
            self.take()
            items.append(self.expr())
        return items


def parse_expression(text: str) -> JetPolynomial:
    return _Parser(text).parse()


@dataclass
class ParsedExpression:
    polynomial: JetPolynomial
    weight: int | None
    warnings: list = field(default_factory=list)


def analyze_expression(text: str) -> ParsedExpression:
    """Parse and report the weighted degree, warning when it is not defined."""
    poly = parse_expression(text)
    weight = poly.weighted_degree()
    warnings = []
    if weight is None and not poly.is_zero():
        weights = sorted(poly.monomial_weights())
        warnings.append(f"expression is not weighted homogeneous (weights {weights})")
    return ParsedExpression(poly, weight, warnings)
