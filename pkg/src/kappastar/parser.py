"""Surface-syntax parser for exact polynomial expressions.

Grammar (precedence climbing, tightest first):

    atom   := INT ('/' INT)? | 'i' | VAR | '(' expr ')'
    factor := atom ('^' INT)?
    unary  := '-' unary | factor
    term   := unary ('*' unary)*
    expr   := term (('+' | '-') term)*

Exponents are non-negative integer literals.  Variables must belong to the
declared table (x0..xd, z1..zd, zb1..zbd).  Errors carry line, column and
the expected token kinds.  parse(print(p)) is the identity on canonical
polynomial strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .poly import Poly, VarTable
from .scalars import IMAG, GaussianRational


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int,
                 expected: Optional[List[str]] = None):
        self.line = line
        self.column = column
        self.expected = expected or []
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


@dataclass
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    line: int
    column: int


_OPS = "+-*/^()"
_MINUS_ALIASES = {"−": "-"}  # unicode minus


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        ch = _MINUS_ALIASES.get(ch, ch)
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _OPS:
            tokens.append(Token("OP", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(Token("INT", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha():
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("NAME", text[start:i], line, col))
            col += i - start
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], table: VarTable):
        self.tokens = tokens
        self.pos = 0
        self.table = table

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> Token:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == op:
            return self.advance()
        raise ParseError(f"unexpected token {tok.text or 'end of input'!r}",
                         tok.line, tok.column, expected=[repr(op)])

    def parse(self) -> Poly:
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected trailing token {tok.text!r}",
                             tok.line, tok.column, expected=["'+'", "'-'", "'*'", "end of input"])
        return value

    def expr(self) -> Poly:
        value = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if tok.text == "+" else value - rhs
            else:
                return value

    def term(self) -> Poly:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text == "*":
                self.advance()
                value = value * self.unary()
            else:
                return value

    def unary(self) -> Poly:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.advance()
            return -self.unary()
        return self.factor()

    def factor(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "^":
            self.advance()
            exp_tok = self.peek()
            if exp_tok.kind != "INT":
                raise ParseError("exponent must be a non-negative integer literal",
                                 exp_tok.line, exp_tok.column, expected=["integer"])
            self.advance()
            return base ** int(exp_tok.text)
        return base

    def atom(self) -> Poly:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            numerator = int(tok.text)
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.text == "/":
                self.advance()
                den_tok = self.peek()
                if den_tok.kind != "INT":
                    raise ParseError("malformed rational literal",
                                     den_tok.line, den_tok.column, expected=["integer"])
                self.advance()
                if int(den_tok.text) == 0:
                    raise ParseError("rational literal with zero denominator",
                                     den_tok.line, den_tok.column)
                return Poly.constant(self.table, Fraction(numerator, int(den_tok.text)))
            return Poly.constant(self.table, numerator)
        if tok.kind == "NAME":
            self.advance()
            if tok.text == "i":
                return Poly.constant(self.table, IMAG)
            if tok.text in self.table.names:
                return Poly.variable(self.table, tok.text)
            raise ParseError(f"unknown variable {tok.text!r}", tok.line, tok.column,
                             expected=[f"one of {', '.join(self.table.names)} or i"])
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {tok.text or 'end of input'!r}",
                         tok.line, tok.column,
                         expected=["integer", "variable", "'i'", "'('", "'-'"])


def parse(text: str, table: VarTable) -> Poly:
    """Parse an expression into an exact polynomial over the given table."""
    return _Parser(tokenize(text), table).parse()
