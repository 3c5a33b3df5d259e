"""Structural sets of a finite ring: units, radical, idempotents and friends.

Everything here is brute force over the element indices, memoised in
``ring.cache``.  The Jacobson radical is computed from quasi-regularity:
``x`` is radical iff ``1 - r*x`` is a unit for every ``r``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalInconsistencyError
from .rings import TABLE_MAX_ORDER, ideal_violation, make_quotient


@dataclass(frozen=True)
class StructuralSet:
    ring: object
    name: str
    members: tuple

    def __contains__(self, x):
        return int(x) in self._lookup

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def _lookup(self):
        return frozenset(self.members)

    def to_json(self, include_members=True):
        out = {"name": self.name, "size": len(self.members)}
        if include_members:
            out["members"] = [self.ring.literal(m) for m in self.members]
        return out


def _cached(R, key, fn):
    value = R.cache.get(key)
    if value is None:
        value = fn()
        R.cache[key] = value
    return value


def _as_set(R, name, mask):
    return StructuralSet(R, name, tuple(int(i) for i in np.flatnonzero(mask)))


# -- units -------------------------------------------------------------------

def _compute_inverses(R):
    inv = np.full(R.order, -1, dtype=np.int64)
    if R.has_tables:
        hits = R.mul_table == R.one
        right = np.flatnonzero(hits.any(axis=1))
        inv[right] = hits[right].argmax(axis=1)
    else:
        for rows, block in R.pairwise(R.vmul, R.elements, R.elements):
            hits = block == R.one
            found = hits.any(axis=1)
            idx = np.arange(rows.start, rows.stop)[found]
            inv[idx] = hits[found].argmax(axis=1)
    # a one-sided inverse must also be two-sided
    u = np.flatnonzero(inv >= 0)
    if not np.all(R.vmul(inv[u], u) == R.one):
        raise InternalInconsistencyError(f"one-sided inverse that is not two-sided in {R.expr}")
    return inv


def inverses(R) -> np.ndarray:
    """Array mapping each unit to its inverse and each non-unit to -1."""
    return _cached(R, "inverses", lambda: _compute_inverses(R))


def unit_mask(R) -> np.ndarray:
    return _cached(R, "unit_mask", lambda: inverses(R) >= 0)


def units(R) -> StructuralSet:
    return _cached(R, "units", lambda: _as_set(R, "units", unit_mask(R)))


def inverse(R, u) -> int:
    v = int(inverses(R)[int(u)])
    if v < 0:
        raise ValueError(f"{R.literal(u)} is not a unit of {R.expr}")
    return v


def is_unit(R, x) -> bool:
    """Unit test for one element without filling the full unit cache."""
    if "inverses" in R.cache:
        return bool(R.cache["inverses"][int(x)] >= 0)
    return bool(np.any(R.vmul(int(x), R.elements) == R.one))


# -- Jacobson radical ----------------------------------------------------------

def _compute_radical(R):
    umask = unit_mask(R)
    mask = np.zeros(R.order, dtype=bool)
    candidates = np.flatnonzero(~umask) if R.order > 1 else R.elements
    one = R.one
    if R.order > TABLE_MAX_ORDER:
        # cheap rejection pass on a spread of multipliers; survivors get the full test
        probe = R.elements[:: max(1, R.order // 128)]
        keep = np.ones(len(candidates), dtype=bool)
        for cols, block in R.pairwise(lambda c, r: R.vmul(r, c), candidates, probe):
            keep[cols] = umask[R.vsub(one, block)].all(axis=1)
        candidates = candidates[keep]
    for cols, block in R.pairwise(lambda c, r: R.vmul(r, c), candidates, R.elements):
        # block[i, r] = r * x_i
        quasi = umask[R.vsub(one, block)].all(axis=1)
        mask[candidates[cols][quasi]] = True
    bad = ideal_violation(R, np.flatnonzero(mask))
    if bad is not None:
        raise InternalInconsistencyError(f"radical of {R.expr} fails ideal check '{bad}'")
    return mask


def radical_mask(R) -> np.ndarray:
    return _cached(R, "radical_mask", lambda: _compute_radical(R))


def jacobson_radical(R) -> StructuralSet:
    return _cached(R, "radical", lambda: _as_set(R, "radical", radical_mask(R)))


def in_radical(R, x) -> bool:
    return bool(radical_mask(R)[int(x)])


def _power_bound(R):
    k = 1
    while k < R.order:
        k <<= 1
    return k


def j_sharp_mask(R) -> np.ndarray:
    # x^n in J for some n <= |R| iff x^m in J for the first power of two m >= |R|,
    # because J absorbs further multiplication
    def compute():
        return radical_mask(R)[R.vpower(R.elements, _power_bound(R))]
    return _cached(R, "j_sharp_mask", compute)


def j_sharp(R) -> StructuralSet:
    return _cached(R, "j_sharp", lambda: _as_set(R, "j_sharp", j_sharp_mask(R)))


def nilpotent_mask(R) -> np.ndarray:
    return _cached(R, "nilpotent_mask",
                   lambda: R.vpower(R.elements, _power_bound(R)) == R.zero)


# -- idempotents, commutants, center -----------------------------------------

def idempotent_indices(R) -> np.ndarray:
    def compute():
        e = R.elements
        return np.flatnonzero(R.vmul(e, e) == e).astype(np.int64)
    return _cached(R, "idempotent_indices", compute)


def idempotents(R) -> StructuralSet:
    return _cached(R, "idempotents",
                   lambda: StructuralSet(R, "idempotents",
                                         tuple(int(i) for i in idempotent_indices(R))))


def commutant_mask(R, a) -> np.ndarray:
    a = int(a)
    if R.has_tables:
        return R.commute_table[a]
    e = R.elements
    return R.vmul(a, e) == R.vmul(e, a)


def commutant(R, a) -> np.ndarray:
    """Indices of all elements commuting with ``a`` (ascending)."""
    return np.flatnonzero(commutant_mask(R, a))


def in_double_commutant(R, b, a, comm=None) -> bool:
    """True iff ``b`` commutes with every element of comm(a)."""
    if comm is None:
        comm = commutant(R, a)
    if R.has_tables:
        return bool(R.commute_table[int(b), comm].all())
    return bool(np.all(R.vmul(int(b), comm) == R.vmul(comm, int(b))))


def double_commutant(R, a) -> np.ndarray:
    comm = commutant(R, a)
    if R.has_tables:
        return np.flatnonzero(R.commute_table[:, comm].all(axis=1))
    keep = np.zeros(R.order, dtype=bool)
    for rows, block in R.pairwise(lambda b, c: R.vmul(b, c) == R.vmul(c, b), R.elements, comm):
        keep[rows] = block.all(axis=1)
    return np.flatnonzero(keep)


def center_mask(R) -> np.ndarray:
    def compute():
        if R.has_tables:
            return R.commute_table.all(axis=1)
        keep = np.zeros(R.order, dtype=bool)
        for rows, block in R.pairwise(lambda b, c: R.vmul(b, c) == R.vmul(c, b),
                                      R.elements, R.elements):
            keep[rows] = block.all(axis=1)
        return keep
    return _cached(R, "center_mask", compute)


def center(R) -> StructuralSet:
    return _cached(R, "center", lambda: _as_set(R, "center", center_mask(R)))


# -- quasinilpotents -----------------------------------------------------------

def is_qnil(R, a) -> bool:
    """1 + a*x is a unit for every x commuting with a."""
    if "qnil_mask" in R.cache:
        return bool(R.cache["qnil_mask"][int(a)])
    comm = commutant(R, a)
    return bool(unit_mask(R)[R.vadd(R.one, R.vmul(int(a), comm))].all())


def qnil_mask(R) -> np.ndarray:
    def compute():
        umask = unit_mask(R)
        if R.has_tables:
            ok = umask[R.add_table[R.one][R.mul_table]]
            return (ok | ~R.commute_table).all(axis=1)
        return np.array([is_qnil(R, a) for a in range(R.order)], dtype=bool)
    return _cached(R, "qnil_mask", compute)


def qnil_set(R) -> StructuralSet:
    return _cached(R, "qnil", lambda: _as_set(R, "qnil", qnil_mask(R)))


def radical_quotient(R):
    """R / J(R), labelled so it renders as ``modJ(...)``."""
    return _cached(R, "radical_quotient",
                   lambda: make_quotient(R, jacobson_radical(R).members, label="modJ"))


def structural_sets(R):
    return [units(R), jacobson_radical(R), j_sharp(R), idempotents(R), center(R), qnil_set(R)]


# -- structural predicates -------------------------------------------------------

@dataclass
class PropertyEntry:
    name: str
    verdict: bool
    witness: tuple = ()   # element indices of the counterexample / witness
    count: int | None = None

    def witness_literal(self, R):
        if not self.witness:
            return None
        return "; ".join(R.literal(i) for i in self.witness)


def _first(mask):
    idx = np.flatnonzero(mask)
    return int(idx[0]) if len(idx) else None


def is_commutative(R) -> PropertyEntry:
    if R.has_tables:
        bad = ~R.commute_table
        a = _first(bad.any(axis=1))
        if a is None:
            return PropertyEntry("commutative", True)
        return PropertyEntry("commutative", False, (a, _first(bad[a])))
    a = _first(~center_mask(R))
    if a is None:
        return PropertyEntry("commutative", True)
    return PropertyEntry("commutative", False, (a, _first(~commutant_mask(R, a))))


def is_abelian(R) -> PropertyEntry:
    cmask = center_mask(R)
    for e in idempotent_indices(R):
        if not cmask[e]:
            return PropertyEntry("abelian", False, (int(e), _first(~commutant_mask(R, e))))
    return PropertyEntry("abelian", True)


def is_reduced(R) -> PropertyEntry:
    nil = nilpotent_mask(R).copy()
    nil[R.zero] = False
    x = _first(nil)
    return PropertyEntry("reduced", x is None, () if x is None else (x,))


def is_boolean(R) -> PropertyEntry:
    e = R.elements
    x = _first(R.vmul(e, e) != e)
    return PropertyEntry("boolean", x is None, () if x is None else (x,))


def is_local(R) -> PropertyEntry:
    """Non-units all lie in J(R); the witness prefers a nontrivial idempotent."""
    bad = ~unit_mask(R) & ~radical_mask(R)
    if not bad.any():
        return PropertyEntry("local", True)
    for e in idempotent_indices(R):
        if e not in (R.zero, R.one):
            return PropertyEntry("local", False, (int(e),))
    return PropertyEntry("local", False, (_first(bad),))


def is_directly_finite(R) -> PropertyEntry:
    one = R.one
    if R.has_tables:
        bad = (R.mul_table == one) & (R.mul_table.T != one)
        if bad.any():
            a = _first(bad.any(axis=1))
            return PropertyEntry("directly_finite", False, (a, _first(bad[a])))
        return PropertyEntry("directly_finite", True)
    for rows, block in R.pairwise(R.vmul, R.elements, R.elements):
        hits = np.argwhere(block == one)
        for a_off, b in hits:
            a = rows.start + int(a_off)
            if R.mul(int(b), a) != one:
                return PropertyEntry("directly_finite", False, (a, int(b)))
    return PropertyEntry("directly_finite", True)


def is_commutative_local(R) -> bool:
    return is_commutative(R).verdict and is_local(R).verdict


def structural_predicates(R) -> dict:
    """commutative, abelian, reduced, boolean, local, directly_finite."""
    def compute():
        entries = [is_commutative(R), is_abelian(R), is_reduced(R), is_boolean(R),
                   is_local(R), is_directly_finite(R)]
        return {e.name: e for e in entries}
    return _cached(R, "structural_predicates", compute)
