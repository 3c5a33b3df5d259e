"""Finite unital rings with index-coded elements.

An element of a ring of order N is an integer in ``[0, N)``.  Arithmetic is
vectorised over int64 numpy arrays (any broadcastable shapes); rings of order
at most ``TABLE_MAX_ORDER`` additionally memoise full operation tables.

Index codings:

* ``Z_n``: the residue itself.
* product ``R x S``: ``a * |S| + b`` for the pair ``(a, b)``.
* ``M_n(R)`` / ``T_n(R)``: the entries (row-major; upper triangle only for
  ``T_n``) read as base-``|R|`` digits, first entry most significant.
* quotients: cosets numbered by ascending minimal representative.
* corners ``fRf``: members numbered by ascending index in ``R``.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CapExceededError,
    ElementParseError,
    InvalidIdealError,
    InvalidParameterError,
    RingMismatchError,
)

DEFAULT_MAX_ORDER = 65_536
DEFAULT_CLASSIFY_MAX_ORDER = 4_096
TABLE_MAX_ORDER = 256

# rows * columns budget for chunked all-pairs evaluations
_CHUNK_CELLS = 1 << 21


def _arr(x):
    return np.asarray(x, dtype=np.int64)


def _check_cap(what, required, max_order):
    allowed = DEFAULT_MAX_ORDER if max_order is None else max_order
    if required > allowed:
        raise CapExceededError(what, required, allowed)


class FiniteRing:
    """Base class; subclasses supply ``_add``, ``_mul``, ``_neg`` and codings."""

    kind = "abstract"

    def __init__(self, order):
        self.order = int(order)
        self.zero = 0
        self.one = 0
        # lazily filled structural data (units, radical, idempotents, ...);
        # every entry is a pure function of the ring, so racing fills agree
        self.cache = {}

    def __repr__(self):
        return f"<{type(self).__name__} {self.expr} order={self.order}>"

    @property
    def expr(self) -> str:
        raise NotImplementedError

    # primitives on broadcastable int64 arrays
    def _add(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_MAX_ORDER

    @cached_property
    def add_table(self) -> np.ndarray:
        idx = self.elements
        return self._add(idx[:, None], idx[None, :])

    @cached_property
    def mul_table(self) -> np.ndarray:
        idx = self.elements
        return self._mul(idx[:, None], idx[None, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._neg(self.elements)

    @cached_property
    def commute_table(self) -> np.ndarray:
        m = self.mul_table
        return m == m.T

    def vadd(self, a, b):
        a, b = _arr(a), _arr(b)
        if self.has_tables:
            return self.add_table[a, b]
        return self._add(a, b)

    def vmul(self, a, b):
        a, b = _arr(a), _arr(b)
        if self.has_tables:
            return self.mul_table[a, b]
        return self._mul(a, b)

    def vneg(self, a):
        a = _arr(a)
        if self.has_tables:
            return self.neg_table[a]
        return self._neg(a)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def add(self, a, b) -> int:
        return int(self.vadd(a, b))

    def mul(self, a, b) -> int:
        return int(self.vmul(a, b))

    def neg(self, a) -> int:
        return int(self.vneg(a))

    def sub(self, a, b) -> int:
        return int(self.vsub(a, b))

    def power(self, a, k) -> int:
        result, base = self.one, int(a)
        while k > 0:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def vpower(self, a, k):
        result = np.full(np.shape(a), self.one, dtype=np.int64)
        base = _arr(a)
        while k > 0:
            if k & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            k >>= 1
        return result

    def integer(self, k) -> int:
        """The element ``k * 1`` (negative ``k`` allowed)."""
        result, base, m = self.zero, self.one, abs(int(k))
        while m > 0:
            if m & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            m >>= 1
        return self.neg(result) if k < 0 else result

    def pairwise(self, fn, rows, cols):
        """Evaluate ``fn(rows[:, None], cols[None, :])`` in memory-bounded chunks.

        Yields ``(row_slice, block)`` pairs.
        """
        rows, cols = _arr(rows), _arr(cols)
        step = max(1, _CHUNK_CELLS // max(1, len(cols)))
        for start in range(0, len(rows), step):
            chunk = rows[start:start + step]
            yield slice(start, start + len(chunk)), fn(chunk[:, None], cols[None, :])

    # codings
    def decode(self, i):
        raise NotImplementedError

    def encode(self, value) -> int:
        raise NotImplementedError

    def literal(self, i) -> str:
        raise NotImplementedError

    def element(self, value) -> "Element":
        """Element from an index (int) or a literal string."""
        if isinstance(value, Element):
            if value.ring is not self:
                raise RingMismatchError("element belongs to a different ring")
            return value
        if isinstance(value, str):
            return Element(self, self.parse_literal(value))
        i = int(value)
        if not 0 <= i < self.order:
            raise InvalidParameterError(f"index {i} out of range for order {self.order}")
        return Element(self, i)

    def parse_literal(self, text: str) -> int:
        try:
            value = ast.literal_eval(text.strip())
        except (ValueError, SyntaxError) as exc:
            raise ElementParseError(f"malformed element literal {text!r}") from exc
        return self.encode(value)


class ZnRing(FiniteRing):
    kind = "Zn"

    def __init__(self, n):
        super().__init__(n)
        self.n = n
        self.one = 1 % n

    @property
    def expr(self):
        return f"Z{self.n}"

    def _add(self, a, b):
        return (a + b) % self.n

    def _mul(self, a, b):
        return (a * b) % self.n

    def _neg(self, a):
        return (-a) % self.n

    def decode(self, i):
        return int(i)

    def encode(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ElementParseError(f"expected an integer for {self.expr}, got {value!r}")
        return value % self.n

    def literal(self, i):
        return str(int(i))


class ProductRing(FiniteRing):
    kind = "Product"

    def __init__(self, left, right):
        super().__init__(left.order * right.order)
        self.left, self.right = left, right
        self.one = left.one * right.order + right.one

    @property
    def expr(self):
        r = self.right.expr
        if isinstance(self.right, ProductRing):
            r = f"({r})"
        return f"{self.left.expr} x {r}"

    def _split(self, a):
        return a // self.right.order, a % self.right.order

    def _join(self, l, r):
        return l * self.right.order + r

    def _add(self, a, b):
        (al, ar), (bl, br) = self._split(a), self._split(b)
        return self._join(self.left.vadd(al, bl), self.right.vadd(ar, br))

    def _mul(self, a, b):
        (al, ar), (bl, br) = self._split(a), self._split(b)
        return self._join(self.left.vmul(al, bl), self.right.vmul(ar, br))

    def _neg(self, a):
        al, ar = self._split(a)
        return self._join(self.left.vneg(al), self.right.vneg(ar))

    def decode(self, i):
        l, r = divmod(int(i), self.right.order)
        return (self.left.decode(l), self.right.decode(r))

    def encode(self, value):
        if not isinstance(value, tuple) or len(value) != 2:
            raise ElementParseError(f"expected a pair for {self.expr}, got {value!r}")
        return self.left.encode(value[0]) * self.right.order + self.right.encode(value[1])

    def literal(self, i):
        l, r = divmod(int(i), self.right.order)
        return f"({self.left.literal(l)},{self.right.literal(r)})"


class MatrixRing(FiniteRing):
    """Full (``triangular=False``) or upper-triangular n x n matrices over a base ring."""

    def __init__(self, n, base, triangular=False):
        self.n, self.base, self.triangular = n, base, triangular
        if triangular:
            self.positions = [(i, j) for i in range(n) for j in range(i, n)]
        else:
            self.positions = [(i, j) for i in range(n) for j in range(n)]
        m = len(self.positions)
        super().__init__(base.order ** m)
        q = base.order
        self._place = np.array([q ** (m - 1 - k) for k in range(m)], dtype=np.int64)
        self._slot = {pos: k for k, pos in enumerate(self.positions)}
        self.one = self.encode_entries(
            {(i, j): (base.one if i == j else base.zero) for (i, j) in self.positions})

    @property
    def kind(self):
        return "Triangular" if self.triangular else "Matrix"

    @property
    def expr(self):
        return f"{'T' if self.triangular else 'M'}({self.n},{self.base.expr})"

    def digits(self, a):
        a = _arr(a)
        return (a[..., None] // self._place) % self.base.order

    def entries(self, a):
        """Map (i, j) -> array of base indices; below-diagonal slots of T_n are zero."""
        d = self.digits(a)
        out = {}
        for i in range(self.n):
            for j in range(self.n):
                k = self._slot.get((i, j))
                out[i, j] = d[..., k] if k is not None else np.zeros(d.shape[:-1], np.int64)
        return out

    def encode_entries(self, entries):
        total = 0
        for k, pos in enumerate(self.positions):
            total = total + _arr(entries[pos]) * self._place[k]
        return total if isinstance(total, np.ndarray) and total.ndim else int(total)

    def _add(self, a, b):
        da, db = self.digits(a), self.digits(b)
        return (self.base.vadd(da, db) * self._place).sum(axis=-1)

    def _neg(self, a):
        return (self.base.vneg(self.digits(a)) * self._place).sum(axis=-1)

    def _mul(self, a, b):
        A, B = self.entries(a), self.entries(b)
        base = self.base
        out = {}
        for (i, k) in self.positions:
            acc = None
            for j in range(self.n):
                if self.triangular and not i <= j <= k:
                    continue
                t = base.vmul(A[i, j], B[j, k])
                acc = t if acc is None else base.vadd(acc, t)
            out[i, k] = acc
        shape = np.broadcast_shapes(np.shape(a), np.shape(b))
        return np.broadcast_to(self.encode_entries(out), shape).astype(np.int64)

    def decode(self, i):
        e = self.entries(int(i))
        return tuple(tuple(self.base.decode(int(e[r, c])) for c in range(self.n))
                     for r in range(self.n))

    def encode(self, value):
        if (not isinstance(value, (list, tuple)) or len(value) != self.n
                or any(not isinstance(row, (list, tuple)) or len(row) != self.n
                       for row in value)):
            raise ElementParseError(
                f"expected a {self.n}x{self.n} matrix literal for {self.expr}, got {value!r}")
        entries = {}
        for r in range(self.n):
            for c in range(self.n):
                x = self.base.encode(value[r][c])
                if (r, c) in self._slot:
                    entries[r, c] = x
                elif x != self.base.zero:
                    raise ElementParseError(
                        f"below-diagonal entry ({r + 1},{c + 1}) is nonzero in {self.expr}")
        return self.encode_entries(entries)

    def literal(self, i):
        e = self.entries(int(i))
        rows = (",".join(self.base.literal(int(e[r, c])) for c in range(self.n))
                for r in range(self.n))
        return "[" + ",".join(f"[{row}]" for row in rows) + "]"


class QuotientRing(FiniteRing):
    kind = "Quotient"

    def __init__(self, base, ideal, label=None):
        self.base = base
        self.ideal = np.array(sorted(set(int(x) for x in ideal)), dtype=np.int64)
        self.label = label
        index_of = np.full(base.order, -1, dtype=np.int64)
        reps = []
        for x in range(base.order):
            if index_of[x] < 0:
                # x is the smallest unvisited index, hence the minimum of its coset
                index_of[base.vadd(x, self.ideal)] = len(reps)
                reps.append(x)
        self.reps = np.array(reps, dtype=np.int64)
        self.index_of = index_of
        super().__init__(len(reps))
        self.zero = int(index_of[base.zero])
        self.one = int(index_of[base.one])

    @property
    def expr(self):
        if self.label == "modJ":
            return f"modJ({self.base.expr})"
        return f"quotient({self.base.expr})"

    def _add(self, a, b):
        return self.index_of[self.base.vadd(self.reps[a], self.reps[b])]

    def _mul(self, a, b):
        return self.index_of[self.base.vmul(self.reps[a], self.reps[b])]

    def _neg(self, a):
        return self.index_of[self.base.vneg(self.reps[a])]

    def decode(self, i):
        return self.base.decode(int(self.reps[int(i)]))

    def encode(self, value):
        return int(self.index_of[self.base.encode(value)])

    def literal(self, i):
        return self.base.literal(int(self.reps[int(i)]))


class CornerRing(FiniteRing):
    kind = "Corner"

    def __init__(self, base, f):
        self.base, self.f = base, int(f)
        all_ = base.elements
        members = np.unique(base.vmul(base.vmul(self.f, all_), self.f))
        self.members = members.astype(np.int64)
        index_of = np.full(base.order, -1, dtype=np.int64)
        index_of[self.members] = np.arange(len(self.members))
        self.index_of = index_of
        super().__init__(len(self.members))
        self.zero = int(index_of[base.zero])
        self.one = int(index_of[self.f])

    @property
    def expr(self):
        return f"corner({self.base.expr},{self.base.literal(self.f)})"

    def _lift(self, op, *args):
        out = self.index_of[op(*(self.members[a] for a in args))]
        if np.any(out < 0):
            raise AssertionError("corner ring not closed under a ring operation")
        return out

    def _add(self, a, b):
        return self._lift(self.base.vadd, a, b)

    def _mul(self, a, b):
        return self._lift(self.base.vmul, a, b)

    def _neg(self, a):
        return self._lift(self.base.vneg, a)

    def decode(self, i):
        return self.base.decode(int(self.members[int(i)]))

    def encode(self, value):
        x = self.base.encode(value)
        if self.index_of[x] < 0:
            raise ElementParseError(f"{self.base.literal(x)} is not in {self.expr}")
        return int(self.index_of[x])

    def literal(self, i):
        return self.base.literal(int(self.members[int(i)]))


@dataclass(frozen=True, slots=True)
class Element:
    ring: FiniteRing
    index: int

    def _other(self, other):
        if not isinstance(other, Element):
            return Element(self.ring, self.ring.integer(other)).index
        if other.ring is not self.ring:
            raise RingMismatchError(f"operands from {self.ring.expr} and {other.ring.expr}")
        return other.index

    def __add__(self, other):
        return Element(self.ring, self.ring.add(self.index, self._other(other)))

    def __sub__(self, other):
        return Element(self.ring, self.ring.sub(self.index, self._other(other)))

    def __mul__(self, other):
        return Element(self.ring, self.ring.mul(self.index, self._other(other)))

    def __neg__(self):
        return Element(self.ring, self.ring.neg(self.index))

    def __pow__(self, k):
        return Element(self.ring, self.ring.power(self.index, k))

    def __int__(self):
        return self.index

    def decode(self):
        return self.ring.decode(self.index)

    @property
    def literal(self):
        return self.ring.literal(self.index)

    def __str__(self):
        return self.literal

    def __repr__(self):
        return f"Element({self.ring.expr}, {self.literal})"


def make_zn(n, max_order=None) -> ZnRing:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameterError(f"Z_n needs n >= 1, got {n!r}")
    _check_cap(f"Z{n}", int(n), max_order)
    return ZnRing(int(n))


def make_product(R, S, max_order=None) -> ProductRing:
    _check_cap(f"{R.expr} x {S.expr}", R.order * S.order, max_order)
    return ProductRing(R, S)


def make_matrix_ring(n, R, max_order=None) -> MatrixRing:
    if n < 1:
        raise InvalidParameterError(f"matrix size must be >= 1, got {n}")
    _check_cap(f"M({n},{R.expr})", R.order ** (n * n), max_order)
    return MatrixRing(n, R)


def make_triangular_ring(n, R, max_order=None) -> MatrixRing:
    if n < 1:
        raise InvalidParameterError(f"matrix size must be >= 1, got {n}")
    _check_cap(f"T({n},{R.expr})", R.order ** (n * (n + 1) // 2), max_order)
    return MatrixRing(n, R, triangular=True)


def ideal_violation(R, members):
    """Name of the first ideal axiom ``members`` violates, or None."""
    members = _arr(sorted(set(int(x) for x in members)))
    if len(members) == 0 or not np.any(members == R.zero):
        return "contains zero"
    mask = np.zeros(R.order, dtype=bool)
    mask[members] = True
    if not mask[R.vadd(members[:, None], members[None, :])].all():
        return "closed under addition"
    if not mask[R.vneg(members)].all():
        return "closed under negation"
    for _, block in R.pairwise(R.vmul, R.elements, members):
        if not mask[block].all():
            return "closed under left multiplication"
    for _, block in R.pairwise(R.vmul, members, R.elements):
        if not mask[block].all():
            return "closed under right multiplication"
    return None


def make_quotient(R, ideal, label=None) -> QuotientRing:
    bad = ideal_violation(R, ideal)
    if bad is not None:
        raise InvalidIdealError(f"not a two-sided ideal of {R.expr}: fails '{bad}'")
    return QuotientRing(R, ideal, label=label)


def make_corner(R, f) -> CornerRing:
    f = int(f)
    if R.mul(f, f) != f:
        raise InvalidParameterError(f"{R.literal(f)} is not idempotent in {R.expr}")
    return CornerRing(R, f)


_OPS = {"add": "add", "mul": "mul", "sub": "sub"}


def ring_arith(R, op, a, b=None) -> Element:
    """Apply ``op`` in {add, mul, neg, sub} to elements of ``R``."""
    for x in (a, b):
        if isinstance(x, Element) and x.ring is not R:
            raise RingMismatchError(f"operand belongs to {x.ring.expr}, not {R.expr}")
    a = R.element(a).index
    if op == "neg":
        return Element(R, R.neg(a))
    if op not in _OPS:
        raise InvalidParameterError(f"unknown ring operation {op!r}")
    return Element(R, getattr(R, _OPS[op])(a, R.element(b).index))
