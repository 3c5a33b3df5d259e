"""Closed-form weak J-quasipolarity criteria for 2x2 matrices.

Base rings are commutative (and mostly local) finite rings.  Every fast path
that answers True builds a certificate from its closed form and runs it
through ``polarity.validate_certificate``; a rejected certificate raises
``InternalInconsistencyError`` instead of falling back to search.

When several clauses certify the same matrix (common when 2 lies in the
radical, so +1 and -1 agree modulo J) the certificate with the smallest
radical witness index is reported, ties going to the earlier clause.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import structure as st
from .errors import ArithmeticOverflowError, InternalInconsistencyError
from .polarity import PolarityCertificate, six_in_j_gate, validate_certificate
from .rings import Element, make_matrix_ring, make_triangular_ring


@dataclass(frozen=True)
class Mat2:
    base: object
    a11: int
    a12: int
    a21: int
    a22: int
    triangular: bool = False

    def __post_init__(self):
        if self.triangular and self.a21 != self.base.zero:
            raise ValueError("triangular Mat2 needs a zero (2,1) entry")

    @property
    def trace(self):
        return self.base.add(self.a11, self.a22)

    @property
    def det(self):
        R = self.base
        return R.sub(R.mul(self.a11, self.a22), R.mul(self.a12, self.a21))

    @property
    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def index_in(self, ambient) -> int:
        e = {(0, 0): self.a11, (0, 1): self.a12, (1, 0): self.a21, (1, 1): self.a22}
        return int(ambient.encode_entries({pos: e[pos] for pos in ambient.positions}))

    @classmethod
    def from_index(cls, ambient, i):
        e = ambient.entries(int(i))
        return cls(ambient.base, *(int(e[pos]) for pos in ((0, 0), (0, 1), (1, 0), (1, 1))),
                   triangular=ambient.triangular)

    @classmethod
    def from_rows(cls, base, rows, triangular=False):
        (a, b), (c, d) = rows
        return cls(base, *(base.encode(x) for x in (a, b, c, d)), triangular=triangular)

    def __str__(self):
        R = self.base
        lit = [R.literal(x) for x in self.entries]
        return f"[[{lit[0]},{lit[1]}],[{lit[2]},{lit[3]}]]"


@dataclass(frozen=True)
class FastPathVerdict:
    applicable: bool
    verdict: bool | None = None
    case_tag: str | None = None
    certificate: PolarityCertificate | None = None


NOT_APPLICABLE = FastPathVerdict(False)


def ambient_ring(R, triangular):
    key = "T2_ambient" if triangular else "M2_ambient"
    if key not in R.cache:
        make = make_triangular_ring if triangular else make_matrix_ring
        R.cache[key] = make(2, R)
    return R.cache[key]


def _coerce(R, A, triangular):
    if isinstance(A, Mat2):
        return A
    if isinstance(A, Element):
        return Mat2.from_index(A.ring, A.index)
    return Mat2.from_rows(R, A, triangular=triangular)


def require_commutative_local(R) -> bool:
    return st.is_commutative_local(R)


def _radical(R, x):
    return st.in_radical(R, x)


def _near(R, x, s):
    """x lies in s + J(R)."""
    return _radical(R, R.sub(x, s))


def _pick(ambient, A_index, options, case_prefix):
    """Build, rank and validate certificates for ``(case, P_index, sign)`` options."""
    best = None
    for case, p, sign in options:
        j = ambient.add(A_index, p) if sign > 0 else ambient.sub(A_index, p)
        key = (j, case)
        if best is None or key < best[0]:
            best = (key, case, p, sign, j)
    if best is None:
        return None
    _, case, p, sign, j = best
    cert = PolarityCertificate(Element(ambient, A_index), "weakly_j_quasipolar",
                               Element(ambient, p), Element(ambient, j), sign=sign)
    if not validate_certificate(cert):
        raise InternalInconsistencyError(
            f"{case_prefix}{case} certificate for {ambient.literal(A_index)} failed validation")
    return FastPathVerdict(True, True, f"{case_prefix}{case}", cert)


# -- idempotent classification ---------------------------------------------------

def t2_idempotent_forms(R) -> list:
    if not require_commutative_local(R):
        raise ValueError(f"{R.expr} is not commutative local")
    z, o = R.zero, R.one
    forms = [Mat2(R, o, z, z, o, True), Mat2(R, z, z, z, z, True)]
    for x in range(R.order):
        forms.append(Mat2(R, o, x, z, z, True))
        forms.append(Mat2(R, z, x, z, o, True))
    return forms


def m2_idempotent_forms(R) -> list:
    if not require_commutative_local(R):
        raise ValueError(f"{R.expr} is not commutative local")
    z, o = R.zero, R.one
    forms = {Mat2(R, z, z, z, z), Mat2(R, o, z, z, o)}
    for a in range(R.order):
        target = R.sub(a, R.mul(a, a))
        for b in range(R.order):
            for c in range(R.order):
                if R.mul(b, c) == target:
                    forms.add(Mat2(R, a, b, c, R.sub(o, a)))
    return sorted(forms, key=lambda m: m.entries)


# -- T2 criterion ------------------------------------------------------------------

def t2_fast_classify(R, A, ambient=None) -> FastPathVerdict:
    A = _coerce(R, A, True)
    if A.a21 != R.zero or not require_commutative_local(R):
        return NOT_APPLICABLE
    T = ambient or ambient_ring(R, True)
    idx = A.index_in(T)
    a1, a2, a3 = A.a11, A.a12, A.a22
    z, o = R.zero, R.one
    options = []
    # J(T2(R)) = matrices with radical diagonal; locality makes each diagonal
    # entry either radical or a unit
    if _radical(R, a1) and _radical(R, a3):
        case = 1
        options.append((1, T.zero, 1))
    elif not _radical(R, a1) and not _radical(R, a3):
        case = 2
        for sign, s in ((1, R.neg(o)), (-1, o)):
            if _near(R, a1, s) and _near(R, a3, s):
                options.append((2, T.one, sign))
    else:
        if not _radical(R, a1):
            x = R.mul(st.inverse(R, R.sub(a1, a3)), a2)
            P = Mat2(R, o, x, z, z, True).index_in(T)
            case, pivot = 3, a1
        else:
            x = R.mul(st.inverse(R, R.sub(a3, a1)), a2)
            P = Mat2(R, z, x, z, o, True).index_in(T)
            case, pivot = 4, a3
        for sign, s in ((1, R.neg(o)), (-1, o)):
            if _near(R, pivot, s):
                options.append((case, P, sign))
    found = _pick(T, idx, options, "T2-case-")
    return found or FastPathVerdict(True, False, f"T2-case-{case}")


# -- M2 criteria -------------------------------------------------------------------

def _m2_in_radical(R, M: Mat2) -> bool:
    # J(M2(R)) = M2(J(R))
    return all(_radical(R, x) for x in M.entries)


def _shift(R, A: Mat2, s) -> Mat2:
    return Mat2(R, R.add(A.a11, s), A.a12, A.a21, R.add(A.a22, s))


def m2_unit_criterion(R, A, ambient=None) -> FastPathVerdict:
    A = _coerce(R, A, False)
    M = ambient or ambient_ring(R, False)
    idx = A.index_in(M)
    if not st.is_unit(M, idx):
        return NOT_APPLICABLE
    o = R.one
    options = []
    if _m2_in_radical(R, _shift(R, A, o)):
        options.append(("plus", M.one, 1))
    if _m2_in_radical(R, _shift(R, A, R.neg(o))):
        options.append(("minus", M.one, -1))
    found = _pick(M, idx, options, "M2-unit-")
    return found or FastPathVerdict(True, False, "M2-unit")


def m2_diagonal_classify(R, j, u, ambient=None) -> FastPathVerdict:
    if not require_commutative_local(R):
        return NOT_APPLICABLE
    M = ambient or ambient_ring(R, False)
    j, u = int(j), int(u)
    z, o = R.zero, R.one
    m1 = R.neg(o)
    idx = Mat2(R, j, z, z, u).index_in(M)
    e11 = Mat2(R, o, z, z, z).index_in(M)
    e22 = Mat2(R, z, z, z, o).index_in(M)
    rad = lambda x: _radical(R, x)  # noqa: E731
    clauses = [
        (1, rad(j) and rad(u), M.zero, 1),
        (2, _near(R, j, m1) and _near(R, u, m1), M.one, 1),
        (3, _near(R, j, o) and _near(R, u, o), M.one, -1),
        (4, _near(R, u, m1) and rad(j), e22, 1),
        (5, rad(u) and _near(R, j, m1), e11, 1),
        (6, rad(u) and _near(R, j, o), e11, -1),
        (7, _near(R, u, o) and rad(j), e22, -1),
    ]
    options = [(f"({case})", p, sign) for case, holds, p, sign in clauses if holds]
    found = _pick(M, idx, options, "M2-diagonal-")
    return found or FastPathVerdict(True, False, "M2-diagonal")


def m2_trace_det_obstruction(R, A) -> FastPathVerdict:
    A = _coerce(R, A, False)
    if not st.is_commutative(R).verdict or not six_in_j_gate(R):
        return NOT_APPLICABLE
    if _m2_in_radical(R, A) or not _radical(R, A.det) or not _radical(R, A.trace):
        return NOT_APPLICABLE
    return FastPathVerdict(True, False, "M2-trace-det")


def quadratic_roots(R, trace, det):
    """All x in R with x^2 - trace*x + det = 0, by exhaustive scan."""
    xs = R.elements
    vals = R.vadd(R.vsub(R.vmul(xs, xs), R.vmul(trace, xs)), det)
    return [int(x) for x in xs[vals == R.zero]]


def m2_quadratic_classify(R, A, ambient=None) -> FastPathVerdict:
    A = _coerce(R, A, False)
    if not require_commutative_local(R) or not six_in_j_gate(R):
        return NOT_APPLICABLE
    M = ambient or ambient_ring(R, False)
    idx = A.index_in(M)
    o = R.one
    options = []
    if _m2_in_radical(R, A):
        options.append(("clause-1", M.zero, 1))
    if _m2_in_radical(R, _shift(R, A, R.neg(o))):
        options.append(("clause-1", M.one, -1))
    if _m2_in_radical(R, _shift(R, A, o)):
        options.append(("clause-1", M.one, 1))
    tr, det = A.trace, A.det
    roots = quadratic_roots(R, tr, det)
    for r1 in roots:
        if not _radical(R, r1):
            continue
        for r2 in roots:
            signs = [s for s, c in ((-1, o), (1, R.neg(o))) if _near(R, r2, c)]
            if not signs or R.add(r1, r2) != tr or R.mul(r1, r2) != det:
                continue
            # A = r1*I + (r2 - r1)*P with P idempotent by Cayley-Hamilton
            k = st.inverse(R, R.sub(r2, r1))
            P = Mat2(R, R.mul(R.sub(A.a11, r1), k), R.mul(A.a12, k),
                     R.mul(A.a21, k), R.mul(R.sub(A.a22, r1), k)).index_in(M)
            options.extend(("root", P, s) for s in signs)
    found = _pick(M, idx, options, "quadratic-")
    return found or FastPathVerdict(True, False, "quadratic")


def applicable_fast_paths(ambient, i) -> dict:
    """Run every fast path that applies to element ``i`` of T2(R) or M2(R)."""
    R = ambient.base
    A = Mat2.from_index(ambient, i)
    out = {}
    if ambient.n != 2:
        return out
    if ambient.triangular:
        v = t2_fast_classify(R, A, ambient)
        if v.applicable:
            out["t2"] = v
        return out
    candidates = {"unit": lambda: m2_unit_criterion(R, A, ambient),
                  "trace_det": lambda: m2_trace_det_obstruction(R, A),
                  "quadratic": lambda: m2_quadratic_classify(R, A, ambient)}
    if A.a12 == R.zero and A.a21 == R.zero:
        candidates["diagonal"] = lambda: m2_diagonal_classify(R, A.a11, A.a22, ambient)
    for name, run in candidates.items():
        v = run()
        if v.applicable:
            out[name] = v
    return out


# -- integer matrices ---------------------------------------------------------------

_INT64_MAX = 2 ** 63 - 1
_ENTRY_MAX = 2 ** 31 - 1


def _checked(x):
    if not -_INT64_MAX - 1 <= x <= _INT64_MAX:
        raise ArithmeticOverflowError(f"intermediate {x} overflows 64-bit arithmetic")
    return x


def integer_m2_classify(A) -> bool:
    """Weak J-quasipolarity of an integer 2x2 matrix: A^2 = A or A^2 = -A.

    J(M2(Z)) = 0, so A must equal p or -p for an idempotent p commuting
    with everything A commutes with.
    """
    (a, b), (c, d) = A
    for x in (a, b, c, d):
        if isinstance(x, bool) or not isinstance(x, int):
            raise TypeError(f"integer entries required, got {x!r}")
        if abs(x) > _ENTRY_MAX:
            raise ArithmeticOverflowError(f"entry {x} exceeds 32-bit magnitude")
    m = lambda x, y: _checked(x * y)  # noqa: E731
    sq = (_checked(m(a, a) + m(b, c)), _checked(m(a, b) + m(b, d)),
          _checked(m(c, a) + m(d, c)), _checked(m(c, b) + m(d, d)))
    flat = (a, b, c, d)
    return sq == flat or sq == tuple(-x for x in flat)
