"""
Unit expressions for the command line.

    expr    := term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := ["-"] atom ["^" ["-"] INT]
    atom    := INT | "w(" INT ("," INT)* ")" | "theta" | NAME | "(" expr ")"

INT is a p-adic integer constant, w(c0, c1, ...) the Teichmuller lift of the
residue element with those coordinates, theta the generator of O over Z_p and
NAME a group generator. A single-generator group also answers to "g".
Negative exponents are the only way to invert, and need a unit.
"""

import re
from dataclasses import dataclass

import structlog

from padic_k1.coeff.unramified import UnramifiedRing, teichmuller
from padic_k1.exceptions import ExpressionParseError, PadicK1Error
from padic_k1.groupring.element import GroupRingElement
from padic_k1.groups.group import Group

logger = structlog.get_logger(__name__)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            break
        if match.group(1):
            tokens.append(Token("int", match.group(1), match.start(1)))
        elif match.group(2):
            tokens.append(Token("name", match.group(2), match.start(2)))
        elif match.group(3):
            tokens.append(Token("op", match.group(3), match.start(3)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: UnramifiedRing, group: Group) -> None:
        self.tokens = tokenize(text)
        self.index = 0
        self.ring = ring
        self.group = group
        self.symbols = dict(group.generators)
        if len(self.symbols) == 1 and "g" not in self.symbols:
            self.symbols["g"] = next(iter(self.symbols.values()))

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def fail(self, message: str) -> ExpressionParseError:
        return ExpressionParseError(message, self.current.position)

    def take(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.take(text):
            raise self.fail(f"expected {text!r}, found {self.current.text or 'end of input'!r}")

    def integer(self) -> int:
        negative = self.take("-")
        if self.current.kind != "int":
            raise self.fail("expected an integer")
        value = int(self.current.text)
        self.index += 1
        return -value if negative else value

    def constant(self, value: int) -> GroupRingElement:
        return GroupRingElement.basis(self.ring, self.group, self.group.identity, value)

    def expression(self) -> GroupRingElement:
        acc = self.term()
        while True:
            if self.take("+"):
                acc = acc + self.term()
            elif self.take("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> GroupRingElement:
        acc = self.factor()
        while self.take("*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> GroupRingElement:
        if self.take("-"):
            return -self.factor()
        base = self.atom()
        if not self.take("^"):
            return base
        position = self.current.position
        exponent = self.integer()
        if exponent < 0 and not base.is_unit():
            msg = "negative power of an element that is not a unit"
            raise ExpressionParseError(msg, position)
        return base**exponent

    def atom(self) -> GroupRingElement:
        token = self.current
        if token.kind == "int":
            self.index += 1
            return self.constant(int(token.text))
        if self.take("("):
            inner = self.expression()
            self.expect(")")
            return inner
        if token.kind != "name":
            raise self.fail(f"unexpected {token.text or 'end of input'!r}")
        self.index += 1
        if token.text == "w":
            return self.teichmuller_lift(token)
        if token.text == "theta":
            return GroupRingElement.basis(self.ring, self.group, self.group.identity, self.ring.generator)
        if token.text not in self.symbols:
            msg = f"unknown symbol {token.text!r}; generators are {sorted(self.symbols)}"
            raise ExpressionParseError(msg, token.position)
        return GroupRingElement.basis(self.ring, self.group, self.symbols[token.text])

    def teichmuller_lift(self, token: Token) -> GroupRingElement:
        self.expect("(")
        coords = [self.integer()]
        while self.take(","):
            coords.append(self.integer())
        self.expect(")")
        if len(coords) > self.ring.n:
            msg = f"w() takes at most {self.ring.n} residue coordinates"
            raise ExpressionParseError(msg, token.position)
        residue = self.ring.field.element([c % self.ring.p for c in coords])
        try:
            omega = teichmuller(residue, self.ring.precision)
        except PadicK1Error as exc:
            raise ExpressionParseError(str(exc), token.position) from exc
        return GroupRingElement.basis(self.ring, self.group, self.group.identity, omega)


def parse_unit(text: str, ring: UnramifiedRing, group: Group) -> GroupRingElement:
    """
    Evaluate a unit expression in O[G].

    Raises:
        ExpressionParseError: On malformed input, unknown symbols, or a
            value that is not a unit
    """
    parser = _Parser(text, ring, group)
    value = parser.expression()
    if parser.current.kind != "end":
        raise parser.fail(f"unexpected {parser.current.text!r}")
    if not value.is_unit():
        msg = f"{text!r} is not a unit of {ring}[{group.name}]"
        raise ExpressionParseError(msg, 0)
    logger.debug("unit_parsed", expression=text, group=group.name)
    return value
