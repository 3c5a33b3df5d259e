"""Element- and ring-level deciders for the polarity / cleanness hierarchy.

Each decider searches idempotents in ascending index order and returns a
``PolarityCertificate`` (or None).  ``validate_certificate`` re-checks a
certificate from the definitions alone and is what fast paths and
conjugation are held to.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import structure as st
from .errors import CapExceededError, CertificateInvalidError, InternalInconsistencyError
from .rings import DEFAULT_CLASSIFY_MAX_ORDER, Element

CLASS_NAMES = ("weakly_j_quasipolar", "j_quasipolar", "quasipolar", "strongly_j_clean",
               "strongly_clean", "clean", "uniquely_clean")


@dataclass(frozen=True)
class PolarityCertificate:
    element: Element
    class_name: str
    idempotent: Element
    witness: Element
    sign: int | None = None
    count: int | None = None
    both_signs: bool = False

    @property
    def ring(self):
        return self.element.ring

    def to_json(self):
        return {
            "class": self.class_name,
            "element": self.element.literal,
            "idempotent": self.idempotent.literal,
            "sign": None if self.sign is None else ("+" if self.sign > 0 else "-"),
            "witness": self.witness.literal,
            "count": self.count,
            "both_signs": self.both_signs,
        }


def _cert(R, a, name, p, witness, **kw):
    return PolarityCertificate(Element(R, int(a)), name, Element(R, int(p)),
                               Element(R, int(witness)), **kw)


def _comm2_filter(R, a, candidates):
    """The subset of ``candidates`` lying in comm^2(a)."""
    if len(candidates) == 0:
        return candidates
    comm = st.commutant(R, a)
    if R.has_tables:
        keep = R.commute_table[np.ix_(candidates, comm)].all(axis=1)
    else:
        keep = np.array([st.in_double_commutant(R, p, a, comm) for p in candidates], bool)
    return candidates[keep]


# -- weakly J-quasipolar --------------------------------------------------------

def weakly_jqp_candidates(R, a):
    """All ``(p, plus_ok, minus_ok)`` with p^2 = p in comm^2(a) and a +- p in J."""
    a = int(a)
    memo = R.cache.setdefault("weakly_candidates", {})
    if a not in memo:
        memo[a] = _weakly_candidates(R, a)
    return memo[a]


def _weakly_candidates(R, a):
    idem = st.idempotent_indices(R)
    rad = st.radical_mask(R)
    plus = rad[R.vadd(a, idem)]
    minus = rad[R.vsub(a, idem)]
    hit = plus | minus
    good = set(int(p) for p in _comm2_filter(R, a, idem[hit]))
    return [(int(p), bool(pl), bool(mi))
            for p, pl, mi in zip(idem[hit], plus[hit], minus[hit]) if int(p) in good]


def weakly_jqp_element(R, a) -> PolarityCertificate | None:
    a = int(a)
    memo = R.cache.setdefault("weakly_certs", {})
    if a in memo:
        return memo[a]
    cert = None
    for p, plus_ok, minus_ok in weakly_jqp_candidates(R, a):
        sign = 1 if plus_ok else -1
        j = R.add(a, p) if sign > 0 else R.sub(a, p)
        cert = _cert(R, a, "weakly_j_quasipolar", p, j, sign=sign,
                     both_signs=plus_ok and minus_ok)
        break
    memo[a] = cert
    return cert


def spectral_idempotent_uniqueness(R, a) -> int:
    """Number of distinct weakly J-spectral idempotents of ``a``."""
    return len(weakly_jqp_candidates(R, a))


def jqp_element(R, a) -> PolarityCertificate | None:
    a = int(a)
    idem = st.idempotent_indices(R)
    hit = idem[st.radical_mask(R)[R.vadd(a, idem)]]
    for p in _comm2_filter(R, a, hit):
        return _cert(R, a, "j_quasipolar", p, R.add(a, int(p)), sign=1)
    return None


def quasipolar_element(R, a) -> PolarityCertificate | None:
    a = int(a)
    idem = st.idempotent_indices(R)
    ok = st.unit_mask(R)[R.vadd(a, idem)]
    for p in _comm2_filter(R, a, idem[ok]):
        if st.is_qnil(R, R.mul(a, int(p))):
            return _cert(R, a, "quasipolar", p, R.add(a, int(p)))
    return None


def clean_family_element(R, a, variant) -> PolarityCertificate | None:
    a = int(a)
    idem = st.idempotent_indices(R)
    diff = R.vsub(a, idem)
    if variant == "strongly_j_clean":
        ok = st.radical_mask(R)[diff]
    else:
        ok = st.unit_mask(R)[diff]
    if variant in ("strongly_clean", "strongly_j_clean"):
        ok &= R.vmul(a, idem) == R.vmul(idem, a)
    elif variant not in ("clean", "uniquely_clean"):
        raise ValueError(f"unknown clean variant {variant!r}")
    found = np.flatnonzero(ok)
    if variant == "uniquely_clean":
        if len(found) != 1:
            return None
        e = int(idem[found[0]])
        return _cert(R, a, variant, e, R.sub(a, e), count=1)
    if len(found) == 0:
        return None
    e = int(idem[found[0]])
    return _cert(R, a, variant, e, R.sub(a, e))


def clean_idempotent_count(R, a) -> int:
    a = int(a)
    idem = st.idempotent_indices(R)
    return int(st.unit_mask(R)[R.vsub(a, idem)].sum())


ELEMENT_DECIDERS = {
    "weakly_j_quasipolar": weakly_jqp_element,
    "j_quasipolar": jqp_element,
    "quasipolar": quasipolar_element,
    "strongly_j_clean": lambda R, a: clean_family_element(R, a, "strongly_j_clean"),
    "strongly_clean": lambda R, a: clean_family_element(R, a, "strongly_clean"),
    "clean": lambda R, a: clean_family_element(R, a, "clean"),
    "uniquely_clean": lambda R, a: clean_family_element(R, a, "uniquely_clean"),
}


# -- independent validation -----------------------------------------------------

def _commutes(R, x, y):
    return R.mul(x, y) == R.mul(y, x)


def _in_comm2_by_definition(R, p, a):
    # recomputed from raw products, not from the cached commutation table
    e = R.elements
    comm = e[R._mul(a, e) == R._mul(e, a)]
    return bool(np.all(R._mul(p, comm) == R._mul(comm, p)))


def validate_certificate(cert: PolarityCertificate) -> bool:
    """Re-derive a certificate from the definitions (scalar loops, no search)."""
    R = cert.ring
    a, p, w = cert.element.index, cert.idempotent.index, cert.witness.index
    if cert.idempotent.ring is not R or cert.witness.ring is not R:
        return False
    if R.mul(p, p) != p:
        return False
    rad, units = st.radical_mask(R), st.unit_mask(R)
    name = cert.class_name
    if name in ("weakly_j_quasipolar", "j_quasipolar"):
        if name == "j_quasipolar" and cert.sign != 1:
            return False
        if cert.sign not in (1, -1):
            return False
        expected = R.add(a, p) if cert.sign > 0 else R.sub(a, p)
        return w == expected and bool(rad[w]) and _in_comm2_by_definition(R, p, a)
    if name == "quasipolar":
        return (w == R.add(a, p) and bool(units[w]) and st.is_qnil(R, R.mul(a, p))
                and _in_comm2_by_definition(R, p, a))
    if name == "strongly_j_clean":
        return w == R.sub(a, p) and bool(rad[w]) and _commutes(R, a, p)
    if name in ("clean", "strongly_clean", "uniquely_clean"):
        if w != R.sub(a, p) or not units[w]:
            return False
        if name == "strongly_clean":
            return _commutes(R, a, p)
        if name == "uniquely_clean":
            return clean_idempotent_count(R, a) == 1
        return True
    return False


def conjugate_certificate(R, cert, u) -> PolarityCertificate:
    """Transport a weakly J-quasipolar certificate of a to one of u^-1 a u."""
    if cert.ring is not R or not validate_certificate(cert):
        raise CertificateInvalidError("input certificate does not validate")
    if cert.class_name not in ("weakly_j_quasipolar", "j_quasipolar"):
        raise CertificateInvalidError(f"cannot conjugate a {cert.class_name} certificate")
    u = int(u)
    v = st.inverse(R, u)
    a = R.mul(R.mul(v, cert.element.index), u)
    p = R.mul(R.mul(v, cert.idempotent.index), u)
    j = R.add(a, p) if cert.sign > 0 else R.sub(a, p)
    out = _cert(R, a, cert.class_name, p, j, sign=cert.sign)
    if not validate_certificate(out):
        raise InternalInconsistencyError("conjugated certificate failed validation")
    return out


# -- ring level ------------------------------------------------------------------

PROPERTY_ORDER = (
    "weakly_j_quasipolar", "j_quasipolar", "quasipolar", "strongly_j_clean",
    "strongly_clean", "clean", "uniquely_clean",
    "commutative", "abelian", "reduced", "boolean", "local", "directly_finite",
    "feckly_reduced", "rj_commutative", "rj_cubed_identity", "j_equals_j_sharp",
    "six_in_j", "two_in_j",
)


@dataclass
class PropertyReport:
    ring: object
    properties: dict
    elapsed_ms: int = 0
    extras: dict = field(default_factory=dict)

    @property
    def order(self):
        return self.ring.order

    def __getitem__(self, name):
        return self.properties[name].verdict

    def witness(self, name):
        return self.properties[name].witness_literal(self.ring)

    def profile(self):
        """Representation-independent fingerprint used for isomorphism-style comparisons."""
        sizes = tuple(len(s) for s in st.structural_sets(self.ring))
        return (self.ring.order, sizes,
                tuple((n, self.properties[n].verdict) for n in PROPERTY_ORDER))

    def to_json(self, include_members=False, include_sets=True):
        out = {
            "ring": self.ring.expr,
            "order": self.ring.order,
            "properties": [
                {"name": n,
                 "verdict": self.properties[n].verdict,
                 "witness": self.properties[n].witness_literal(self.ring),
                 "count": self.properties[n].count}
                for n in PROPERTY_ORDER
            ],
        }
        if include_sets:
            out["sets"] = [s.to_json(include_members) for s in st.structural_sets(self.ring)]
        out["elapsed_ms"] = self.elapsed_ms
        return out


def _witness_order(R):
    # nontrivial counterexamples first: 0, 1 and -1 fail for generic reasons
    trivial = sorted({R.zero, R.one, R.neg(R.one)})
    rest = [a for a in range(R.order) if a not in trivial]
    return rest + trivial


def _element_class_entry(R, name):
    decide = ELEMENT_DECIDERS[name]
    for a in _witness_order(R):
        if decide(R, a) is None:
            entry = st.PropertyEntry(name, False, (a,))
            if name == "uniquely_clean":
                entry.count = clean_idempotent_count(R, a)
            return entry
    return st.PropertyEntry(name, True)


def six_in_j_gate(R) -> bool:
    return st.in_radical(R, R.integer(6))


def two_in_j(R) -> bool:
    return st.in_radical(R, R.integer(2))


def classify_ring(R, max_order=None) -> PropertyReport:
    """Full property profile; memoised on the ring."""
    cap = DEFAULT_CLASSIFY_MAX_ORDER if max_order is None else max_order
    if R.order > cap:
        raise CapExceededError(f"classify {R.expr}", R.order, cap)
    cached = R.cache.get("report")
    if cached is not None:
        return cached
    t0 = time.perf_counter()
    props = {name: _element_class_entry(R, name) for name in CLASS_NAMES}
    props.update(st.structural_predicates(R))

    Q = st.radical_quotient(R)
    props["feckly_reduced"] = _rename(st.is_reduced(Q), "feckly_reduced", R, Q)
    props["rj_commutative"] = _rename(st.is_commutative(Q), "rj_commutative", R, Q)
    e = Q.elements
    cube = Q.vmul(Q.vmul(e, e), e)
    bad = np.flatnonzero(cube != e)
    props["rj_cubed_identity"] = _rename(
        st.PropertyEntry("", len(bad) == 0, (int(bad[0]),) if len(bad) else ()),
        "rj_cubed_identity", R, Q)
    extra = np.flatnonzero(st.j_sharp_mask(R) & ~st.radical_mask(R))
    props["j_equals_j_sharp"] = st.PropertyEntry(
        "j_equals_j_sharp", len(extra) == 0, (int(extra[0]),) if len(extra) else (),
        count=len(st.j_sharp(R)))
    six = six_in_j_gate(R)
    props["six_in_j"] = st.PropertyEntry("six_in_j", six, () if six else (R.integer(2),))
    two = two_in_j(R)
    props["two_in_j"] = st.PropertyEntry("two_in_j", two, () if two else (R.integer(2),))
    report = PropertyReport(R, props, int((time.perf_counter() - t0) * 1000))
    R.cache["report"] = report
    return report


def _rename(entry, name, R, Q):
    # witnesses in R/J are lifted to their minimal representatives in R
    witness = tuple(int(Q.reps[w]) for w in entry.witness)
    return st.PropertyEntry(name, entry.verdict, witness, entry.count)


def check_report_implications(report):
    """Pairs (premise, conclusion) of the in-report hierarchy that fail."""
    chain = [("j_quasipolar", "weakly_j_quasipolar"), ("weakly_j_quasipolar", "quasipolar"),
             ("quasipolar", "strongly_clean"), ("strongly_clean", "clean"),
             ("uniquely_clean", "clean"), ("boolean", "abelian")]
    return [(p, c) for p, c in chain if report[p] and not report[c]]
