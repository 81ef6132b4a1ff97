"""A small expression language in one variable ``x``.

Grammar (Pratt parser, loosest to tightest binding)::

    + -        left associative
    * /        left associative
    unary -    prefix; its operand binds ``^`` first, so -x^2 == -(x^2)
    ^          right associative
    atoms      numbers, x, pi, e, name(args...), ( expr )

Functions: sin cos exp ln sqrt abs gamma (one argument) and
mlf(order, argument) for the Mittag-Leffler function.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from .specfun import NonConvergenceError, gamma_fn, mittag_leffler


class ExpressionError(ValueError):
    """Base class for parse and evaluation failures."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        hint = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class UnknownIdentifierError(ExpressionSyntaxError):
    pass


class ArityError(ExpressionSyntaxError):
    pass


class EvaluationDomainError(ExpressionError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (sub-expression at offset {offset})")


FUNCTIONS = {
    "sin": (1, math.sin),
    "cos": (1, math.cos),
    "exp": (1, math.exp),
    "ln": (1, math.log),
    "sqrt": (1, math.sqrt),
    "abs": (1, abs),
    "gamma": (1, gamma_fn),
    "mlf": (2, mittag_leffler),
}
CONSTANTS = {"pi": math.pi, "e": math.e}


# AST. ``pos`` is the byte offset of the node in the source and does not
# take part in structural equality.
@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    pos: int = field(default=0, compare=False)


Node = Union[Num, Var, Const, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)
_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_PREFIX_NEG = 25


@dataclass
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind == "end":
            raise ExpressionSyntaxError(
                f"unexpected {self._describe(self.tok)}", self.tok.pos, (repr(text),)
            )
        return self.advance()

    @staticmethod
    def _describe(t: _Token) -> str:
        return "end of input" if t.kind == "end" else f"token {t.text!r}"

    def expression(self, rbp: int = 0) -> Node:
        left = self.nud(self.advance())
        while self.tok.kind == "op" and _INFIX.get(self.tok.text, 0) > rbp:
            t = self.advance()
            lbp = _INFIX[t.text]
            # right associativity for ^
            right = self.expression(lbp - 1 if t.text == "^" else lbp)
            left = BinOp(t.text, left, right, t.pos)
        return left

    def nud(self, t: _Token) -> Node:
        if t.kind == "num":
            return Num(float(t.text), t.pos)
        if t.kind == "name":
            return self.name(t)
        if t.text == "-":
            return Neg(self.expression(_PREFIX_NEG), t.pos)
        if t.text == "+":
            return self.expression(_PREFIX_NEG)
        if t.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        raise ExpressionSyntaxError(
            f"unexpected {self._describe(t)}", t.pos, ("number", "identifier", "'('", "'-'")
        )

    def name(self, t: _Token) -> Node:
        if t.text == "x":
            return Var(t.pos)
        if t.text in CONSTANTS:
            return Const(t.text, t.pos)
        if t.text not in FUNCTIONS:
            raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.pos)
        arity = FUNCTIONS[t.text][0]
        self.expect("(")
        args = [self.expression()]
        while self.tok.text == ",":
            self.advance()
            args.append(self.expression())
        self.expect(")")
        if len(args) != arity:
            raise ArityError(
                f"{t.text} takes {arity} argument{'s' if arity > 1 else ''}, got {len(args)}",
                t.pos,
            )
        return Call(t.text, tuple(args), t.pos)


def parse_expression(src: str) -> Node:
    """Parse ``src`` into an AST; raises :class:`ExpressionSyntaxError` on bad input."""
    parser = _Parser(src)
    node = parser.expression()
    if parser.tok.kind != "end":
        raise ExpressionSyntaxError(
            f"unexpected {parser._describe(parser.tok)}", parser.tok.pos, ("operator", "end of input")
        )
    return node


def _power(base: float, exp: float, pos: int) -> float:
    if base < 0 and exp != math.floor(exp):
        raise EvaluationDomainError(f"negative base {base!r} with non-integer exponent {exp!r}", pos)
    if base == 0 and exp < 0:
        raise EvaluationDomainError("zero raised to a negative power", pos)
    return math.pow(base, exp)


def eval_expression(node: Node, x: float) -> float:
    """Evaluate ``node`` at ``x`` in double precision."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(x)
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -eval_expression(node.operand, x)
    if isinstance(node, BinOp):
        a = eval_expression(node.left, x)
        b = eval_expression(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0:
                raise EvaluationDomainError("division by zero", node.pos)
            return a / b
        try:
            return _power(a, b, node.pos)
        except OverflowError as exc:
            raise EvaluationDomainError(f"overflow in {a!r}^{b!r}", node.pos) from exc
    if isinstance(node, Call):
        args = [eval_expression(a, x) for a in node.args]
        fn = FUNCTIONS[node.name][1]
        try:
            return float(fn(*args))
        except (ValueError, OverflowError, NonConvergenceError) as exc:
            raise EvaluationDomainError(f"{node.name}{tuple(args)}: {exc}", node.pos) from exc
    raise TypeError(f"not an expression node: {node!r}")


_PRINT_OP = {"+": " + ", "-": " - ", "*": "*", "/": "/", "^": "^"}


def unparse(node: Node) -> str:
    """Source text for ``node``; binary and unary operations are fully parenthesized."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{unparse(node.operand)})"
    if isinstance(node, BinOp):
        return f"({unparse(node.left)}{_PRINT_OP[node.op]}{unparse(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(unparse(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


class Expression:
    """Compiled expression; callable as ``expr(x)``."""

    def __init__(self, source: str):
        self.source = source
        self.ast = parse_expression(source)

    def __call__(self, x: float) -> float:
        return eval_expression(self.ast, x)

    def __repr__(self) -> str:
        return f"Expression({self.source!r})"
