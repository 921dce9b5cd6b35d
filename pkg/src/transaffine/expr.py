"""Text syntax for differential forms.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/' | '^') factor)*
    factor := ('+' | '-') factor | atom ('^' nat)?
    atom   := number | number 'i' | ident | 'd(' ident ')' | '(' expr ')'

``^`` after a function is a power and needs a natural-number exponent; after
a form of degree >= 1 it is the wedge product.  ``*`` between forms is also
the wedge product.  A zero function may be added to a form of any degree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .forms import DifferentialForm, MatrixForm
from .polyalg import GaussianRational, RationalFunction

__all__ = ["ParseError", "parse_form", "parse_function", "parse_matrix", "format_matrix", "parse_scalar"]


class ParseError(ValueError):
    """Lexical, syntactic or dimensional error; ``line``/``column`` are 1-based."""

    def __init__(self, message: str, line: int = 1, column: int = 1, context: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.context = context
        where = f"{context}: " if context else ""
        super().__init__(f"{where}line {line}, column {column}: {message}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # number, ident, op, end
    text: str
    pos: int
    value: object = None


def _tokenize(text: str, context: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise _error(text, pos, f"unexpected character {text[pos]!r}", context)
        if m.group("number") is not None:
            lit = m.group("number")
            if "." in lit:
                raise _error(text, pos, "decimal literals are not exact; write a fraction", context)
            v = GaussianRational(0, int(lit)) if m.group("imag") else GaussianRational(int(lit))
            toks.append(_Tok("number", m.group(0), pos, v))
            end = m.end()
            if end < len(text) and (text[end].isalnum() or text[end] == "_"):
                raise _error(text, end, "a number must not run into a name", context)
        elif m.group("ident") is not None:
            toks.append(_Tok("ident", m.group("ident"), pos))
        elif m.group("op") is not None:
            toks.append(_Tok("op", m.group("op"), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _error(text: str, pos: int, message: str, context: str) -> ParseError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ParseError(message, line, col, context)


class _Parser:
    def __init__(self, text: str, names: Sequence[str], context: str):
        self.text = text
        self.context = context
        self.index = {name: k for k, name in enumerate(names)}
        self.n = len(names)
        self.toks = _tokenize(text, context)
        self.i = 0

    def fail(self, tok: _Tok, message: str) -> ParseError:
        return _error(self.text, tok.pos, message, self.context)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str) -> _Tok:
        t = self.take()
        if t.kind != "op" or t.text != op:
            raise self.fail(t, f"expected {op!r}" + (f", found {t.text!r}" if t.text else " before end of input"))
        return t

    def is_op(self, op: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == op

    # -- grammar ---------------------------------------------------------
    def parse(self) -> DifferentialForm:
        value = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise self.fail(t, f"unexpected {t.text!r}")
        return value

    def expr(self) -> DifferentialForm:
        left = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.take()
            right = self.term()
            left = self.combine(left, right, op)
        return left

    def combine(self, a: DifferentialForm, b: DifferentialForm, op: _Tok) -> DifferentialForm:
        if a.degree != b.degree:
            if a.is_zero:
                a = DifferentialForm.zero(self.n, b.degree)
            elif b.is_zero:
                b = DifferentialForm.zero(self.n, a.degree)
            else:
                raise self.fail(op, f"cannot add forms of degree {a.degree} and {b.degree}")
        return a + b if op.text == "+" else a - b

    def term(self) -> DifferentialForm:
        left = self.factor()
        while True:
            t = self.peek()
            if t.kind != "op" or t.text not in "*/^":
                return left
            self.take()
            if t.text == "^" and left.degree == 0:
                raise self.fail(t, "'^' after a function needs a natural-number exponent")
            right = self.factor()
            if t.text == "/":
                if right.degree != 0:
                    raise self.fail(t, "cannot divide by a form of positive degree")
                f = right.as_function
                if f.is_zero:
                    raise self.fail(t, "division by zero")
                left = left.scale(f.inverse())
            else:
                left = self.wedge(left, right, t)

    def wedge(self, a: DifferentialForm, b: DifferentialForm, tok: _Tok) -> DifferentialForm:
        if a.degree + b.degree > self.n:
            raise self.fail(tok, f"form degree exceeds {self.n}")
        return a.wedge(b)

    def factor(self) -> DifferentialForm:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.take()
            inner = self.factor()
            return -inner if t.text == "-" else inner
        base = self.atom()
        if self.is_op("^") and base.degree == 0:
            nxt = self.toks[self.i + 1]
            if nxt.kind == "number" and not nxt.text.endswith("i"):
                self.take()
                self.take()
                return DifferentialForm.function(base.as_function ** int(nxt.text), self.n)
        # otherwise '^' is a wedge handled by the enclosing term
        return base

    def atom(self) -> DifferentialForm:
        t = self.take()
        if t.kind == "number":
            return DifferentialForm.function(RationalFunction.constant(t.value, self.n), self.n)
        if t.kind == "ident":
            if t.text == "d" and self.is_op("("):
                self.take()
                v = self.take()
                if v.kind != "ident":
                    raise self.fail(v, "expected a variable name inside d(...)")
                self.expect(")")
                return DifferentialForm.differential(self.variable(v), self.n)
            return DifferentialForm.function(RationalFunction.variable(self.variable(t), self.n), self.n)
        if t.kind == "op" and t.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "end":
            raise self.fail(t, "unexpected end of input")
        raise self.fail(t, f"unexpected {t.text!r}")

    def variable(self, tok: _Tok) -> int:
        if tok.text not in self.index:
            raise self.fail(tok, f"unknown variable {tok.text!r}")
        return self.index[tok.text]


def parse_form(text: str, names: Sequence[str], degree: int | None = None, context: str = "") -> DifferentialForm:
    """Parse ``text`` over the variables ``names``.

    With ``degree`` given, the result must have that degree (a zero function
    is promoted to the zero form of that degree).
    """
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", 1, 1, context)
    form = _Parser(text, names, context).parse()
    if degree is not None and form.degree != degree:
        if form.is_zero and degree <= len(names):
            return DifferentialForm.zero(len(names), degree)
        raise ParseError(f"expected a form of degree {degree}, got degree {form.degree}", 1, 1, context)
    return form


def parse_function(text: str, names: Sequence[str], context: str = "") -> RationalFunction:
    return parse_form(text, names, 0, context).as_function


def parse_scalar(text: str, context: str = "") -> GaussianRational:
    """A constant such as ``-3``, ``1/2``, ``3i/4`` or ``(1/2 + 3i)``."""
    f = parse_function(text, [], context)
    return f.constant_value()


def parse_matrix(rows, names: Sequence[str], degree: int, context: str = "") -> MatrixForm:
    """Row-major nested lists of expression strings."""
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) and r for r in rows):
        raise ParseError("expected a non-empty list of non-empty rows", 1, 1, context)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("rows have different lengths", 1, 1, context)
    return MatrixForm(
        [[parse_form(e, names, degree, f"{context}[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(rows)]
    )


def format_matrix(M: MatrixForm, names: Sequence[str]) -> list[list[str]]:
    return M.format(names)
