"""
Recursive descent parser for polynomial and rational-function text.

Grammar (no implicit multiplication):

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := INT ('^' exponent)?
    atom     := INT | IDENT | '(' expr ')'

`^` is right-associative and binds tighter than unary minus, so "-x^2"
is -(x^2). Printing lives in core.multipoly.format_poly; parse(str(f))
returns f again.
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Union

from core.errors import InputError, PolySyntaxError, UnknownVariable
from core.exact_arith import Domain
from core.multipoly import Poly, RatFunc

TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^()]))")


@dataclass
class Token:
    kind: str  # "int", "ident", "op", "eof"
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = TOKEN_RE.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolySyntaxError(f"Unexpected character '{text[bad]}'", bad, text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, gens: Sequence[str], domain: Domain, constants: Mapping[str, object]):
        self.text = text
        self.gens = tuple(gens)
        self.domain = domain
        self.constants = dict(constants)
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.current
        if tok.kind == "eof":
            raise PolySyntaxError("Unexpected end of input", tok.offset, self.text)
        raise PolySyntaxError(message, tok.offset, self.text)

    def parse(self):
        value = self.expr()
        if self.current.kind != "eof":
            self.error(f"Unexpected token '{self.current.text}'")
        return value

    def expr(self):
        value = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = _add(value, rhs) if op == "+" else _add(value, -rhs)
        return value

    def term(self):
        value = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            rhs = self.unary()
            value = _mul(value, rhs) if op == "*" else _div(value, rhs)
        return value

    def unary(self):
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.current
        if tok.kind != "int":
            self.error("Exponent must be a non-negative integer literal")
        self.advance()
        n = int(tok.text)
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            n = n ** self.exponent()
        return n

    def atom(self):
        tok = self.current
        if tok.kind == "int":
            self.advance()
            return Poly.constant(int(tok.text), self.gens, self.domain)
        if tok.kind == "ident":
            self.advance()
            if tok.text in self.gens:
                return Poly.gen(tok.text, self.gens, self.domain)
            if tok.text in self.constants:
                return Poly.constant(self.constants[tok.text], self.gens, self.domain)
            raise UnknownVariable(tok.text, tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            value = self.expr()
            if not (self.current.kind == "op" and self.current.text == ")"):
                self.error(f"Expected ')' but found '{self.current.text}'")
            self.advance()
            return value
        self.error(f"Unexpected token '{tok.text}'")


def _add(a, b):
    if isinstance(a, RatFunc) or isinstance(b, RatFunc):
        return RatFunc.lift(a) + b
    return a + b


def _mul(a, b):
    if isinstance(a, RatFunc) or isinstance(b, RatFunc):
        return RatFunc.lift(a) * b
    return a * b


def _div(a, b):
    if isinstance(b, Poly) and b.is_constant() and b:
        c = b.constant_value()
        if b.domain.is_field or c.is_unit():
            return a / c
    if isinstance(b, (Poly, RatFunc)) and b.is_zero():
        raise InputError("Division by zero in expression")
    return RatFunc.lift(a) / b


def parse(text: str, gens: Sequence[str], domain: Domain,
          constants: Optional[Mapping[str, object]] = None) -> Union[Poly, RatFunc]:
    """Parse text into a Poly, or a RatFunc when the denominator is not a constant."""
    value = _Parser(text, gens, domain, constants or {}).parse()
    if isinstance(value, RatFunc) and value.is_polynomial():
        return value.as_poly()
    return value


def parse_poly(text: str, gens: Sequence[str], domain: Domain,
               constants: Optional[Mapping[str, object]] = None) -> Poly:
    value = parse(text, gens, domain, constants)
    if not isinstance(value, Poly):
        raise InputError(f"'{text}' is not a polynomial")
    return value


def parse_ratfunc(text: str, gens: Sequence[str], domain: Domain,
                  constants: Optional[Mapping[str, object]] = None) -> RatFunc:
    return RatFunc.lift(parse(text, gens, domain, constants))


def uniformizer_constants(descriptor, domain: Optional[Domain] = None) -> Dict[str, object]:
    """The uniformizer symbol as a named constant, valued in `domain`."""
    if descriptor is None:
        return {}
    if domain is None or domain == descriptor.ring:
        return {descriptor.symbol: descriptor.uniformizer()}
    return {descriptor.symbol: descriptor.uniformizer_value()}
