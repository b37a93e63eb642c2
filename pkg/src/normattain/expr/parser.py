"""Recursive-descent parser for the symbol expression language.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := atom ("^" integer)?
    atom   := number | "x" | "i" | "(" expr ")"
            | ("sqrt" | "abs" | "conj" | "-") "(" expr ")" | "-" atom

``integer`` may carry a leading minus sign. Whitespace is insignificant.
Error offsets are byte offsets into the UTF-8 encoded text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from normattain.errors import ExprSyntaxError
from normattain.expr.nodes import I_UNIT, X, Binary, Const, Expr, Power, Unary

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_FUNCTIONS = ("sqrt", "abs", "conj")
_ATOM_START = frozenset({"number", "x", "i", "(", "-", *_FUNCTIONS})


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(f"Unexpected character {text[pos]!r}", _byte_offset(text, pos), _ATOM_START)
        kind = match.lastgroup or ""
        if kind != "ws":
            tokens.append(Token(kind, match.group(), _byte_offset(text, pos)))
        pos = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self._tokens = tokenize(text)
        self._pos = 0

    @property
    def _current(self) -> Token:
        return self._tokens[self._pos]

    def _advance(self) -> Token:
        token = self._current
        self._pos += 1
        return token

    def _fail(self, expected: set[str] | frozenset[str]) -> ExprSyntaxError:
        token = self._current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ExprSyntaxError(f"Unexpected {found}", token.offset, expected)

    def _expect(self, text: str) -> None:
        if self._current.text != text or self._current.kind == "end":
            raise self._fail({text})
        self._advance()

    # -- grammar rules -----------------------------------------------------------

    def parse(self) -> Expr:
        tree = self._expr()
        if self._current.kind != "end":
            raise self._fail({"+", "-", "*", "/", "^", "end of input"})
        return tree

    def _expr(self) -> Expr:
        node = self._term()
        while self._current.kind == "op" and self._current.text in "+-":
            op = self._advance().text
            node = Binary(op, node, self._term())
        return node

    def _term(self) -> Expr:
        node = self._factor()
        while self._current.kind == "op" and self._current.text in "*/":
            op = self._advance().text
            node = Binary(op, node, self._factor())
        return node

    def _factor(self) -> Expr:
        node = self._atom()
        if self._current.kind == "op" and self._current.text == "^":
            self._advance()
            sign = 1
            if self._current.kind == "op" and self._current.text == "-":
                self._advance()
                sign = -1
            token = self._current
            if token.kind != "number" or not token.text.isdigit():
                raise self._fail({"integer"})
            self._advance()
            node = Power(node, sign * int(token.text))
        return node

    def _atom(self) -> Expr:
        token = self._current
        if token.kind == "number":
            self._advance()
            return Const(float(token.text))
        if token.kind == "name":
            if token.text == "x":
                self._advance()
                return X
            if token.text == "i":
                self._advance()
                return I_UNIT
            if token.text in _FUNCTIONS:
                self._advance()
                self._expect("(")
                inner = self._expr()
                self._expect(")")
                return Unary(token.text, inner)
            raise self._fail(_ATOM_START)
        if token.kind == "op" and token.text == "(":
            self._advance()
            inner = self._expr()
            self._expect(")")
            return inner
        if token.kind == "op" and token.text == "-":
            self._advance()
            return Unary("neg", self._atom())
        raise self._fail(_ATOM_START)


def parse(text: str) -> Expr:
    """Parse expression text into a tree.

    Raises:
        ExprSyntaxError: with the byte offset of the offending token and the
            set of tokens that would have been accepted there.
    """
    return _Parser(text).parse()
