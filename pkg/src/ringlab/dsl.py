"""Ring-expression language.

Grammar (whitespace-insensitive)::

    expr := term { "x" term }             left-associative product
    term := "Z" INT
          | "M" "(" INT "," expr ")"
          | "T" "(" INT "," expr ")"
          | "modJ" "(" expr ")"
          | "(" expr ")"
    INT  := decimal >= 1

Element literals are Python-style: ``4``, ``(1,2)``, ``[[1,1],[0,2]]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import CapExceededError, DSLSemanticError, DSLSyntaxError
from .rings import make_matrix_ring, make_product, make_triangular_ring, make_zn
from .structure import radical_quotient

MAX_DEPTH = 8

_TOKEN = re.compile(r"\s*(?:(?P<modJ>modJ)|(?P<int>\d+)|(?P<sym>[ZMTx(),])|(?P<bad>\S))")


@dataclass(frozen=True)
class Zn:
    n: int
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Product:
    left: object
    right: object
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Matrix:
    n: int
    inner: object
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Triangular:
    n: int
    inner: object
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class ModJ:
    inner: object
    span: tuple = field(default=(0, 0), compare=False, repr=False)


def depth(e) -> int:
    if isinstance(e, Zn):
        return 1
    if isinstance(e, Product):
        return 1 + max(depth(e.left), depth(e.right))
    return 1 + depth(e.inner)


def render(e) -> str:
    if isinstance(e, Zn):
        return f"Z{e.n}"
    if isinstance(e, Product):
        right = render(e.right)
        if isinstance(e.right, Product):
            right = f"({right})"
        return f"{render(e.left)} x {right}"
    if isinstance(e, Matrix):
        return f"M({e.n},{render(e.inner)})"
    if isinstance(e, Triangular):
        return f"T({e.n},{render(e.inner)})"
    if isinstance(e, ModJ):
        return f"modJ({render(e.inner)})"
    raise TypeError(f"not a ring expression: {e!r}")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            start = m.start(m.lastgroup)
            if m.lastgroup == "bad":
                raise DSLSyntaxError(f"unexpected character {m.group('bad')!r}",
                                     self._byte(start), self._term_starts())
            self.tokens.append((m.group(m.lastgroup), start, m.end()))
            pos = m.end()
        self.end = len(text)
        self.i = 0

    def _byte(self, offset):
        return len(self.text[:offset].encode("utf-8"))

    @staticmethod
    def _term_starts():
        return {"Z", "M", "T", "modJ", "("}

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _offset(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.end

    def fail(self, expected):
        found = self.peek()
        what = "end of input" if found is None else repr(found)
        raise DSLSyntaxError(f"unexpected {what}", self._byte(self._offset()), expected)

    def take(self, expected):
        if self.peek() != expected:
            self.fail({expected})
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def take_int(self):
        tok = self.peek()
        if tok is None or not tok.isdigit():
            self.fail({"INT"})
        _, start, end = self.tokens[self.i]
        self.i += 1
        n = int(tok)
        if n < 1:
            raise DSLSemanticError(f"size must be >= 1, got {n}", (start, end))
        return n

    def parse(self):
        e = self.expr()
        if self.peek() is not None:
            self.fail({"x", "end of input"})
        if depth(e) > MAX_DEPTH:
            raise DSLSemanticError(f"expression nests deeper than {MAX_DEPTH}", e.span)
        return e

    def expr(self):
        start = self._offset()
        left = self.term()
        while self.peek() == "x":
            self.i += 1
            right = self.term()
            left = Product(left, right, (start, self.tokens[self.i - 1][2]))
        return left

    def _call(self, node, start):
        self.take("(")
        n = self.take_int()
        self.take(",")
        inner = self.expr()
        _, _, end = self.take(")")
        return node(n, inner, (start, end))

    def term(self):
        tok, start = self.peek(), self._offset()
        if tok == "Z":
            self.i += 1
            n = self.take_int()
            return Zn(n, (start, self.tokens[self.i - 1][2]))
        if tok == "M":
            self.i += 1
            return self._call(Matrix, start)
        if tok == "T":
            self.i += 1
            return self._call(Triangular, start)
        if tok == "modJ":
            self.i += 1
            self.take("(")
            inner = self.expr()
            _, _, end = self.take(")")
            return ModJ(inner, (start, end))
        if tok == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        self.fail(self._term_starts())


def parse_ring_expr(text: str):
    return _Parser(text).parse()


def eval_ring_expr(e, max_order=None):
    """Build the FiniteRing an expression denotes (or a DSL string)."""
    if isinstance(e, str):
        e = parse_ring_expr(e)
    try:
        if isinstance(e, Zn):
            return make_zn(e.n, max_order=max_order)
        if isinstance(e, Product):
            return make_product(eval_ring_expr(e.left, max_order),
                                eval_ring_expr(e.right, max_order), max_order=max_order)
        if isinstance(e, Matrix):
            return make_matrix_ring(e.n, eval_ring_expr(e.inner, max_order), max_order=max_order)
        if isinstance(e, Triangular):
            return make_triangular_ring(e.n, eval_ring_expr(e.inner, max_order),
                                        max_order=max_order)
        if isinstance(e, ModJ):
            return radical_quotient(eval_ring_expr(e.inner, max_order))
    except CapExceededError as exc:
        if exc.span is None:
            exc.span = e.span
        raise
    raise TypeError(f"not a ring expression: {e!r}")


def parse_element(text: str, R):
    """Element of ``R`` from a literal; Z_n entries are reduced mod n."""
    return R.element(text)
