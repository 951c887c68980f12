"""
Recursive descent parser for polynomial expressions.

Grammar (binding tightest last):

    expr     := term (('+' | '-') term)*
    term     := unary ('*' unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := INT | '(' INT ')'
    atom     := NUMBER | VARIABLE | '(' expr ')'

NUMBER is an integer or a rational literal like 5/6. Variables come either
from x, y, z, w or from x0 ... x9; the two families cannot be mixed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from errors import ParseError
from series_core import MultiPoly

logger = logging.getLogger(__name__)

LETTER_VARIABLES = ("x", "y", "z", "w")
INDEXED_VARIABLES = tuple(f"x{i}" for i in range(10))
MAX_NESTING = 100


class Token:
    """Token kinds"""
    number = "number"
    integer = "integer"
    variable = "variable"
    plus = "'+'"
    minus = "'-'"
    star = "'*'"
    caret = "'^'"
    left_paren = "'('"
    right_paren = "')'"
    eof = "end of input"

    def __init__(self, typ, text, position, value=None):
        self.typ = typ
        self.text = text
        self.position = position  # byte offset
        self.value = value

    def __repr__(self):
        return f"({self.typ}, {self.text!r}, {self.position})"


_SINGLE = {
    "+": Token.plus,
    "-": Token.minus,
    "*": Token.star,
    "^": Token.caret,
    "(": Token.left_paren,
    ")": Token.right_paren,
}


# AST

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "PolyExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "PolyExpr"
    right: "PolyExpr"


@dataclass(frozen=True)
class Pow:
    base: "PolyExpr"
    exponent: int


PolyExpr = Union[Num, Var, Neg, BinOp, Pow]


def _is_digit(byte: int) -> bool:
    return 0x30 <= byte <= 0x39


def tokenize(text: str) -> List[Token]:
    tokens = []
    raw = text.encode("utf-8")
    i = 0
    while i < len(raw):
        ch = chr(raw[i])
        if raw[i] >= 0x80:
            raise ParseError(i, _ATOM_START, text)
        if ch.isspace():
            i += 1
            continue
        if ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], ch, i))
            i += 1
            continue
        if _is_digit(raw[i]):
            start = i
            while i < len(raw) and _is_digit(raw[i]):
                i += 1
            numerator = int(raw[start:i])
            if i < len(raw) and chr(raw[i]) == "/":
                i += 1
                digits_start = i
                while i < len(raw) and _is_digit(raw[i]):
                    i += 1
                if i == digits_start:
                    raise ParseError(i, [Token.integer], text)
                denominator = int(raw[digits_start:i])
                if denominator == 0:
                    raise ParseError(digits_start, ["nonzero denominator"], text)
                tokens.append(Token(Token.number, raw[start:i].decode(), start, Fraction(numerator, denominator)))
            else:
                tokens.append(Token(Token.integer, raw[start:i].decode(), start, numerator))
            continue
        if ch in LETTER_VARIABLES:
            start = i
            i += 1
            if ch == "x" and i < len(raw) and _is_digit(raw[i]):
                i += 1
            tokens.append(Token(Token.variable, raw[start:i].decode(), start))
            continue
        raise ParseError(i, _ATOM_START, text)
    tokens.append(Token(Token.eof, "", len(raw)))
    return tokens


_ATOM_START = (Token.number, Token.variable, Token.left_paren, Token.minus)


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        if token.typ != Token.eof:
            self.index += 1
        return token

    def error(self, expected: Sequence[str]):
        raise ParseError(self.current.position, expected, self.text)

    def expect(self, typ: str) -> Token:
        if self.current.typ != typ:
            self.error([typ])
        return self.advance()

    def parse(self) -> PolyExpr:
        expr = self.expression()
        if self.current.typ != Token.eof:
            self.error([Token.plus, Token.minus, Token.star, Token.caret, Token.eof])
        return expr

    def expression(self) -> PolyExpr:
        node = self.term()
        while self.current.typ in (Token.plus, Token.minus):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> PolyExpr:
        node = self.unary()
        while self.current.typ == Token.star:
            self.advance()
            node = BinOp("*", node, self.unary())
        return node

    def unary(self) -> PolyExpr:
        # every nested parenthesis and unary minus passes through here
        if self.depth >= MAX_NESTING:
            self.error([f"at most {MAX_NESTING} nested parentheses or signs"])
        self.depth += 1
        try:
            if self.current.typ == Token.minus:
                self.advance()
                return Neg(self.unary())
            return self.power()
        finally:
            self.depth -= 1

    def power(self) -> PolyExpr:
        base = self.atom()
        if self.current.typ == Token.caret:
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        if self.current.typ == Token.integer:
            return self.advance().value
        if self.current.typ == Token.left_paren:
            self.advance()
            value = self.expect(Token.integer).value
            self.expect(Token.right_paren)
            return value
        self.error([Token.integer, Token.left_paren])

    def atom(self) -> PolyExpr:
        token = self.current
        if token.typ == Token.integer:
            self.advance()
            return Num(Fraction(token.value))
        if token.typ == Token.number:
            self.advance()
            return Num(token.value)
        if token.typ == Token.variable:
            self.advance()
            return Var(token.text)
        if token.typ == Token.left_paren:
            self.advance()
            node = self.expression()
            self.expect(Token.right_paren)
            return node
        self.error([Token.number, Token.variable, Token.left_paren])


def parse_poly(text: str) -> PolyExpr:
    """Parse text into an expression tree; raises ParseError with a byte offset"""
    expr = Parser(text).parse()
    _check_families(text)
    return expr


def _check_families(text: str):
    letters, indexed = None, None
    for token in tokenize(text):
        if token.typ != Token.variable:
            continue
        if len(token.text) == 1:
            letters = letters or token
        else:
            indexed = indexed or token
    if letters and indexed:
        second = max(letters, indexed, key=lambda t: t.position)
        family = "x0..x9" if second is letters else "x, y, z, w"
        raise ParseError(second.position, [f"variable from {family}"], text)


def variables_of(expr: PolyExpr) -> Tuple[str, ...]:
    """Variables appearing in expr, in canonical order"""
    seen = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            seen.add(node.name)
        elif isinstance(node, Neg):
            stack.append(node.operand)
        elif isinstance(node, BinOp):
            stack.extend((node.left, node.right))
        elif isinstance(node, Pow):
            stack.append(node.base)
    order = LETTER_VARIABLES + INDEXED_VARIABLES
    return tuple(name for name in order if name in seen)


def _children(node: PolyExpr) -> Tuple[PolyExpr, ...]:
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, BinOp):
        return (node.left, node.right)
    return ()


def evaluate(expr: PolyExpr, variables: Sequence[str]) -> MultiPoly:
    """Exact expansion of the tree into a polynomial over the given variables"""
    variables = tuple(variables)
    values: List[MultiPoly] = []
    stack = [(expr, False)]
    # iterative post-order; left-nested operator chains can be thousands deep
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Num):
            values.append(MultiPoly.constant(variables, node.value))
        elif isinstance(node, Var):
            values.append(MultiPoly.variable(variables, variables.index(node.name)))
        elif not isinstance(node, (Neg, Pow, BinOp)):
            raise TypeError(f"unknown expression node {node!r}")
        elif not expanded:
            stack.append((node, True))
            stack.extend((child, False) for child in reversed(_children(node)))
        elif isinstance(node, Neg):
            values.append(-values.pop())
        elif isinstance(node, Pow):
            values.append(values.pop() ** node.exponent)
        else:
            right, left = values.pop(), values.pop()
            if node.op == "+":
                values.append(left + right)
            elif node.op == "-":
                values.append(left - right)
            else:
                values.append(left * right)
    return values.pop()


def parse_polynomial(text: str, variables: Optional[Sequence[str]] = None) -> MultiPoly:
    expr = parse_poly(text)
    if variables is None:
        variables = variables_of(expr)
    poly = evaluate(expr, variables)
    logger.debug(f"Parsed {text!r} as {poly} in {variables}")
    return poly
