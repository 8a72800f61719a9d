# Copyright 2026 The rispaces Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Expression grammar for Orlicz functions of one variable ``t``.

Binding powers, loosest first::

    + -        (left)
    * /        (left)
    unary -    (prefix)
    ^          (right, its right operand may carry a unary minus)

Calls are ``exp``, ``ln``, ``sin`` and ``cos``; ``pi`` and ``e`` are constants.
"""

import re
from dataclasses import dataclass

import numpy as np

FUNCTIONS = {
    "exp": np.exp,
    "ln": np.log,
    "sin": np.sin,
    "cos": np.cos,
}
CONSTANTS = {"pi": np.pi, "e": np.e}

_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}

_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_PREFIX_BP = 25

_TOKEN_RE = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


class ExpressionError(ValueError):
    def __init__(self, message, line, column):
        super().__init__("{} at line {}, column {}".format(message, line, column))
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Number:
    value: float

    def evaluate(self, t):
        return np.full_like(np.asarray(t, dtype=np.float64), self.value)

    def to_source(self):
        return repr(float(self.value))


@dataclass(frozen=True)
class Variable:
    name: str = "t"

    def evaluate(self, t):
        return np.asarray(t, dtype=np.float64)

    def to_source(self):
        return self.name


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object

    def evaluate(self, t):
        value = self.operand.evaluate(t)
        if self.op == "neg":
            return np.negative(value)
        return FUNCTIONS[self.op](value)

    def to_source(self):
        if self.op == "neg":
            return "(-{})".format(self.operand.to_source())
        return "{}({})".format(self.op, self.operand.to_source())


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object

    def evaluate(self, t):
        return _BINARY[self.op](self.left.evaluate(t), self.right.evaluate(t))

    def to_source(self):
        return "({} {} {})".format(
            self.left.to_source(), self.op, self.right.to_source())


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(src):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExpressionError(
                "unexpected character {!r}".format(src[pos]), line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind != "space":
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser(object):
    def __init__(self, src):
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def token(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok, message=None):
        if message is None:
            if tok.kind == "end":
                message = "unexpected end of input"
            else:
                message = "unexpected {!r}".format(tok.text)
        raise ExpressionError(message, tok.line, tok.column)

    def expect(self, text):
        if self.token.text != text or self.token.kind == "end":
            self.fail(self.token, "expected {!r}".format(text))
        return self.advance()

    def lbp(self):
        tok = self.token
        if tok.kind == "op" and tok.text in _LBP:
            return _LBP[tok.text]
        return 0

    def expression(self, rbp=0):
        left = self.nud(self.advance())
        while rbp < self.lbp():
            left = self.led(self.advance(), left)
        return left

    def nud(self, tok):
        if tok.kind == "number":
            return Number(float(tok.text))
        if tok.kind == "name":
            if tok.text == "t":
                return Variable()
            if tok.text in CONSTANTS:
                return Number(float(CONSTANTS[tok.text]))
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return Unary(tok.text, arg)
            self.fail(tok, "unknown identifier {!r}".format(tok.text))
        if tok.kind == "op":
            if tok.text == "-":
                return Unary("neg", self.expression(_PREFIX_BP))
            if tok.text == "+":
                return self.expression(_PREFIX_BP)
            if tok.text == "(":
                inner = self.expression()
                self.expect(")")
                return inner
        self.fail(tok)

    def led(self, tok, left):
        if tok.text == "^":
            # right associative, the exponent may start with a unary minus
            return Binary("^", left, self.expression(_LBP["^"] - 1))
        return Binary(tok.text, left, self.expression(_LBP[tok.text]))

    def parse(self):
        tree = self.expression()
        if self.token.kind != "end":
            self.fail(self.token)
        return tree


def parse_expression(src):
    """parse ``src`` into an AST; raises ExpressionError on any failure."""
    if not isinstance(src, str):
        raise ExpressionError("expression source must be text", 1, 1)
    try:
        return _Parser(src).parse()
    except RecursionError:
        raise ExpressionError("expression nested too deeply", 1, 1) from None
