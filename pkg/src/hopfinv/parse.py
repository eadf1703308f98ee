"""Tokenizer and recursive-descent parsing of algebraic expressions.

Element expressions are sums of rational multiples of products of atoms,
e.g. ``x^2*y - 3/2*z`` or ``(a31 + a12)``.  Atoms and products are resolved
through callbacks so the same parser serves free and table models.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .lincomb import LinComb


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>->|[-+*/^|()\[\]{},;:=]))"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at column {pos + 1}")
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "op" or tok.text != text:
            self.fail(f"expected {text!r}", tok)
        return tok

    def expect_name(self) -> str:
        tok = self.next()
        if tok.kind != "name":
            self.fail("expected a name", tok)
        return tok.text

    def expect_int(self) -> int:
        tok = self.next()
        if tok.kind != "num":
            self.fail("expected an integer", tok)
        return int(tok.text)

    def done(self) -> bool:
        return self.peek().kind == "end"

    def expect_end(self):
        if not self.done():
            self.fail("unexpected trailing input", self.peek())

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        where = f"column {tok.pos + 1}" if tok.kind != "end" else "end of input"
        raise ParseError(f"{message} at {where} in {self.text!r}")


class ElementParser:
    """Parse element expressions given ``atom(name)`` and ``mul(a, b)``."""

    def __init__(self, stream: TokenStream, atom, mul):
        self.s = stream
        self.atom = atom
        self.mul = mul

    def coefficient(self) -> Fraction | None:
        """Consume ``p`` or ``p/q`` followed by ``*`` if present."""
        s = self.s
        if s.peek().kind != "num":
            return None
        num = int(s.next().text)
        den = 1
        if s.at("/") and s.peek(1).kind == "num":
            s.next()
            den = int(s.next().text)
            if den == 0:
                s.fail("zero denominator")
        c = Fraction(num, den)
        if not s.accept("*"):
            # bare scalar: only meaningful as the zero element
            if s.peek().kind in ("name",) or s.at("("):
                s.fail("use '*' between a coefficient and a factor")
            return _BareScalar(c)
        return c

    def sign(self) -> int:
        sgn = 1
        while self.s.peek().kind == "op" and self.s.peek().text in "+-":
            if self.s.next().text == "-":
                sgn = -sgn
        return sgn

    def factor(self) -> LinComb:
        s = self.s
        if s.accept("("):
            val = self.sum()
            s.expect(")")
        else:
            tok = s.next()
            if tok.kind != "name":
                s.fail("expected a symbol or '('", tok)
            val = self.atom(tok.text)
        if s.accept("^"):
            k = s.expect_int()
            if k < 1:
                s.fail("exponent must be positive")
            base = val
            for _ in range(k - 1):
                val = self.mul(val, base)
        return val

    def product(self) -> LinComb:
        val = self.factor()
        while self.s.at("*"):
            self.s.next()
            val = self.mul(val, self.factor())
        return val

    def term(self) -> LinComb:
        sgn = self.sign()
        c = self.coefficient()
        if isinstance(c, _BareScalar):
            if c.value != 0:
                self.s.fail("a nonzero constant is not an element of positive degree")
            return LinComb()
        val = self.product()
        return val.scale(sgn * (c if c is not None else 1))

    def sum(self) -> LinComb:
        total = LinComb()
        total.add_scaled(self.term())
        while self.s.peek().kind == "op" and self.s.peek().text in "+-":
            total.add_scaled(self.term())
        return total


class _BareScalar:
    def __init__(self, value: Fraction):
        self.value = value


def parse_element(text: str, atom, mul) -> LinComb:
    s = TokenStream(text)
    val = ElementParser(s, atom, mul).sum()
    s.expect_end()
    return val
