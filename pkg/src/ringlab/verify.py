"""Corpus verification: run property and theorem checks over many rings.

Each check is a function ``check(R) -> (ok, witness_text)``.  Checks that
only make sense for some rings return ``None`` and produce no row.
"""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import polarity as pol
from . import structure as st
from . import theorems as th
from .dsl import eval_ring_expr, parse_ring_expr, render
from .errors import CapExceededError
from .rings import MatrixRing, ideal_violation, make_corner

CSV_HEADER = ("ring", "order", "check", "result", "witness", "elapsed_ms")

BASE_CORPUS = ([f"Z{n}" for n in range(2, 31)]
               + ["Z2 x Z2", "Z2 x Z3", "Z2 x Z4", "Z3 x Z3",
                  "T(2,Z2)", "T(2,Z3)", "T(2,Z4)", "M(2,Z2)", "M(2,Z3)", "M(2,Z4)"])
BUILTIN_CORPUS = BASE_CORPUS + [f"modJ({e})" for e in BASE_CORPUS]


@dataclass
class Row:
    ring: str
    order: int
    check: str
    result: str
    witness: str
    elapsed_ms: int


def _report(R):
    return pol.classify_ring(R, max_order=R.order)


def _weakly(R):
    return _report(R)["weakly_j_quasipolar"]


def _b(flag):
    return "true" if flag else "false"


def _lit(R, *xs):
    return "; ".join(R.literal(int(x)) for x in xs)


def _vacuous():
    return True, "premise false"


def _first_failure(R, fn):
    for a in range(R.order):
        bad = fn(a)
        if bad:
            return False, bad
    return True, ""


# -- structure ----------------------------------------------------------------

def check_radical_ideal(R):
    J, U = st.jacobson_radical(R), st.units(R)
    if R.zero not in J or (R.order > 1 and set(J) & set(U)):
        return False, "0 not in J or J meets U"
    bad = ideal_violation(R, J.members)
    return bad is None, bad or f"|J|={len(J)}"


def check_radical_subsets(R):
    rad = st.radical_mask(R)
    for name, mask in (("qnil", st.qnil_mask(R)), ("j_sharp", st.j_sharp_mask(R))):
        bad = np.flatnonzero(rad & ~mask)
        if len(bad):
            return False, f"{_lit(R, bad[0])} in J but not in {name}"
    bad = np.flatnonzero(rad & ~st.unit_mask(R)[R.vsub(R.one, R.elements)])
    if len(bad):
        return False, f"1 - {_lit(R, bad[0])} is not a unit"
    return True, ""


def check_units_group(R):
    U = np.array(st.units(R).members, dtype=np.int64)
    umask = st.unit_mask(R)
    if not umask[R.one]:
        return False, "1 is not a unit"
    for rows, block in R.pairwise(R.vmul, U, U):
        if not umask[block].all():
            i, j = np.argwhere(~umask[block])[0]
            return False, _lit(R, U[rows][i], U[j])
    inv = st.inverses(R)
    if not np.all(R.vmul(U, inv[U]) == R.one):
        return False, "inverse table wrong"
    return True, f"|U|={len(U)}"


def check_double_commutant(R):
    def bad(a):
        comm = st.commutant(R, a)
        c2 = st.double_commutant(R, a)
        if a not in set(c2.tolist()) or not set(c2.tolist()) <= set(comm.tolist()):
            return _lit(R, a)
        if not np.all(R.vmul(c2[:, None], comm[None, :]) == R.vmul(comm[None, :], c2[:, None])):
            return _lit(R, a)
        return ""
    return _first_failure(R, bad)


def check_local_idempotents(R):
    idem = st.idempotents(R)
    if st.is_local(R).verdict and not set(idem) <= {R.zero, R.one}:
        return False, _lit(R, *idem)
    return True, f"local={_b(st.is_local(R).verdict)}; idempotents={len(idem)}"


# -- polarity, element level ---------------------------------------------------------

def check_element_hierarchy(R):
    def bad(a):
        jq, wk = pol.jqp_element(R, a), pol.weakly_jqp_element(R, a)
        if jq is not None and wk is None:
            return f"{_lit(R, a)}: J-quasipolar but not weakly"
        if wk is None:
            return ""
        qp = pol.quasipolar_element(R, a)
        if qp is None:
            return f"{_lit(R, a)}: weakly but not quasipolar"
        # 1 - p is the (unique) spectral idempotent
        q = R.sub(R.one, wk.idempotent.index)
        if qp.idempotent.index != q:
            return f"{_lit(R, a)}: spectral idempotent {qp.idempotent} != 1 - p"
        return ""
    return _first_failure(R, bad)


def check_report_implications(R):
    broken = pol.check_report_implications(_report(R))
    if broken:
        return False, "; ".join(f"{p}=>{c}" for p, c in broken)
    return True, ""


def check_negation_closure(R):
    def bad(a):
        if (pol.weakly_jqp_element(R, a) is None) != (pol.weakly_jqp_element(R, R.neg(a)) is None):
            return _lit(R, a)
        return ""
    return _first_failure(R, bad)


def check_unit_idempotent(R):
    def bad(a):
        if not st.unit_mask(R)[a]:
            return ""
        cert = pol.weakly_jqp_element(R, a)
        if cert is not None and cert.idempotent.index != R.one:
            return _lit(R, a)
        return ""
    return _first_failure(R, bad)


def check_annihilators(R):
    e = R.elements

    def bad(a):
        cert = pol.weakly_jqp_element(R, a)
        if cert is None:
            return ""
        p = cert.idempotent.index
        left = e[R.vmul(e, a) == R.zero]
        right = e[R.vmul(a, e) == R.zero]
        if np.any(R.vmul(left, p) != R.zero) or np.any(R.vmul(p, right) != R.zero):
            return _lit(R, a)
        return ""
    return _first_failure(R, bad)


def check_uniqueness(R):
    worst = 0
    for a in range(R.order):
        c = pol.spectral_idempotent_uniqueness(R, a)
        if c > 1:
            return False, f"{_lit(R, a)} has {c} spectral idempotents"
        worst = max(worst, c)
    return True, f"checked {R.order} elements"


def check_abundance(R):
    rad = st.radical_mask(R)
    boolean = st.is_boolean(R).verdict
    for a in range(R.order):
        idem = R.mul(a, a) == a
        if (idem or rad[a]) and pol.weakly_jqp_element(R, a) is None:
            return False, _lit(R, a)
        if boolean:
            x = R.element(a)
            cert = pol.PolarityCertificate(x, "weakly_j_quasipolar", x, x - x, sign=-1)
            if not pol.validate_certificate(cert):
                return False, f"{_lit(R, a)}: p=a, sign -1 rejected"
    return True, f"boolean={_b(boolean)}"


def check_conjugation(R):
    U = np.array(st.units(R).members, dtype=np.int64)
    inv = st.inverses(R)[U]
    for a in range(R.order):
        cert = pol.weakly_jqp_element(R, a)
        if cert is None:
            continue
        if not pol.validate_certificate(cert):
            return False, f"a={_lit(R, a)}; invalid certificate"
        p = cert.idempotent.index
        moved_a = R.vmul(R.vmul(inv, a), U)
        moved_p = R.vmul(R.vmul(inv, p), U)
        for u, a2, p2 in zip(U, moved_a, moved_p):
            signs = {q: (pl, mi) for q, pl, mi in pol.weakly_jqp_candidates(R, int(a2))}
            ok = signs.get(int(p2))
            if ok is None or not ok[0 if cert.sign > 0 else 1]:
                return False, f"a={_lit(R, a)}; u={_lit(R, int(u))}"
    return True, f"{len(U)} units"


def check_shift_by_five(R):
    if not pol.six_in_j_gate(R):
        return _vacuous()
    five = R.integer(5)

    def bad(a):
        if pol.weakly_jqp_element(R, a) is None:
            return ""
        if (pol.weakly_jqp_element(R, R.add(a, five)) is None
                and pol.weakly_jqp_element(R, R.sub(a, five)) is None):
            return _lit(R, a)
        return ""
    return _first_failure(R, bad)


# -- ring level theorems ----------------------------------------------------------

def _implies(R, conclusion_name):
    if not _weakly(R):
        return _vacuous()
    rep = _report(R)
    entry = rep.properties[conclusion_name]
    return entry.verdict, entry.witness_literal(R) or ""


def check_feckly(R):
    return _implies(R, "feckly_reduced")


def check_j_sharp(R):
    if not _weakly(R):
        return True, f"premise false; J==J#: {_b(_report(R)['j_equals_j_sharp'])}"
    return _implies(R, "j_equals_j_sharp")


def check_directly_finite(R):
    return _implies(R, "directly_finite")


def check_periodic(R):
    if not _weakly(R):
        return _vacuous()
    rep = _report(R)
    ok = rep["rj_commutative"] and rep["rj_cubed_identity"]
    return ok, rep.witness("rj_commutative") or rep.witness("rj_cubed_identity") or ""


def check_quotient(R):
    if not _weakly(R):
        return _vacuous()
    Q = st.radical_quotient(R)
    rep = _report(Q)
    return rep["weakly_j_quasipolar"], Q.expr


def check_six(R):
    if not _weakly(R):
        return True, f"premise false; six_in_j={_b(pol.six_in_j_gate(R))}"
    return pol.six_in_j_gate(R), "6 in J" if pol.six_in_j_gate(R) else _lit(R, R.integer(6))


def check_two(R):
    rep = _report(R)
    if not rep["weakly_j_quasipolar"]:
        return _vacuous()
    return pol.two_in_j(R) == rep["j_quasipolar"], \
        f"two_in_j={_b(pol.two_in_j(R))}; j_quasipolar={_b(rep['j_quasipolar'])}"


def check_uniquely_clean(R):
    rep = _report(R)
    if not rep["weakly_j_quasipolar"]:
        return _vacuous()
    text = f"abelian={_b(rep['abelian'])}; uniquely_clean={_b(rep['uniquely_clean'])}"
    if not rep["uniquely_clean"]:
        entry = rep.properties["uniquely_clean"]
        text += f"; a={rep.witness('uniquely_clean')} has {entry.count} clean idempotents"
    return rep["abelian"] == rep["uniquely_clean"], text


def check_uniquely_clean_with_two(R):
    rep = _report(R)
    if not rep["weakly_j_quasipolar"]:
        return _vacuous()
    lhs = rep["abelian"] and pol.two_in_j(R)
    return lhs == rep["uniquely_clean"], \
        f"abelian={_b(rep['abelian'])}; two_in_j={_b(pol.two_in_j(R))}; " \
        f"uniquely_clean={_b(rep['uniquely_clean'])}"


def check_local(R):
    rep = _report(R)
    if not rep["weakly_j_quasipolar"]:
        return _vacuous()
    trivial = set(st.idempotents(R)) <= {R.zero, R.one}
    return rep["local"] == trivial, f"local={_b(rep['local'])}; trivial_idempotents={_b(trivial)}"


def corner_rings(R):
    return [make_corner(R, f) for f in st.idempotent_indices(R)]


def check_corners(R):
    if not _weakly(R):
        return _vacuous()
    corners = corner_rings(R)
    for C in corners:
        if not _report(C)["weakly_j_quasipolar"]:
            return False, C.expr
    return True, f"{len(corners)} corners"


# -- matrix-specific ---------------------------------------------------------------

def _is_matrix(R, triangular=None):
    return isinstance(R, MatrixRing) and (triangular is None or R.triangular == triangular)


def check_matrix_not_weakly(R):
    if not _is_matrix(R, False) or R.n < 2:
        return None
    return not _weakly(R), f"weakly={_b(_weakly(R))}"


def check_triangular_corner(R):
    if not _is_matrix(R, True) or R.n < 2:
        return None
    base_weakly = _report(R.base)["weakly_j_quasipolar"]
    if _weakly(R) and not base_weakly:
        return False, R.base.expr
    if base_weakly and not _weakly(R):
        return True, f"converse fails: {R.base.expr} weakly, {R.expr} not"
    return True, f"base weakly={_b(base_weakly)}"


def _fast_path_ring(R):
    return _is_matrix(R) and R.n == 2 and th.require_commutative_local(R.base)


def check_fast_paths(R):
    if not _fast_path_ring(R):
        return None
    total = 0
    for i in range(R.order):
        brute = pol.weakly_jqp_element(R, i)
        verdicts = th.applicable_fast_paths(R, i)
        for name, v in verdicts.items():
            total += 1
            if v.verdict != (brute is not None):
                return False, f"{name} disagrees at {_lit(R, i)}"
            if v.verdict and v.certificate.idempotent != brute.idempotent:
                return False, f"{name} idempotent differs at {_lit(R, i)}"
        td, qd = verdicts.get("trace_det"), verdicts.get("quadratic")
        if td is not None and qd is not None and qd.verdict:
            return False, f"obstruction vs quadratic at {_lit(R, i)}"
    return True, f"{total} fast-path verdicts"


def check_idempotent_forms(R):
    if not _fast_path_ring(R):
        return None
    forms = th.t2_idempotent_forms(R.base) if R.triangular else th.m2_idempotent_forms(R.base)
    got = {m.index_in(R) for m in forms}
    want = set(st.idempotents(R))
    return got == want, f"{len(want)} idempotents"


CHECKS = {
    "structure.radical_ideal": check_radical_ideal,
    "structure.radical_subsets": check_radical_subsets,
    "structure.units_group": check_units_group,
    "structure.double_commutant": check_double_commutant,
    "structure.local_idempotents": check_local_idempotents,
    "polarity.element_hierarchy": check_element_hierarchy,
    "polarity.report_implications": check_report_implications,
    "polarity.negation_closure": check_negation_closure,
    "polarity.unit_idempotent": check_unit_idempotent,
    "polarity.annihilators": check_annihilators,
    "polarity.uniqueness": check_uniqueness,
    "polarity.abundance": check_abundance,
    "polarity.conjugation": check_conjugation,
    "polarity.shift_by_five": check_shift_by_five,
    "weakly=>feckly_reduced": check_feckly,
    "weakly=>j_equals_j_sharp": check_j_sharp,
    "weakly=>directly_finite": check_directly_finite,
    "weakly=>rj_periodic": check_periodic,
    "weakly=>modJ_weakly": check_quotient,
    "weakly=>six_in_j": check_six,
    "weakly=>(two_in_j<=>j_quasipolar)": check_two,
    "weakly=>(abelian<=>uniquely_clean)": check_uniquely_clean,
    "weakly=>(abelian&two_in_j<=>uniquely_clean)": check_uniquely_clean_with_two,
    "weakly=>(local<=>trivial_idempotents)": check_local,
    "weakly=>corners_weakly": check_corners,
    "matrix.not_weakly": check_matrix_not_weakly,
    "triangular.base_weakly": check_triangular_corner,
    "fastpath.agreement": check_fast_paths,
    "fastpath.idempotent_forms": check_idempotent_forms,
}


def run_check(R, name, expr=None):
    t0 = time.perf_counter()
    try:
        out = CHECKS[name](R)
    except Exception as exc:  # a crashing check is a defect, not a skip
        out = (False, f"{type(exc).__name__}: {exc}")
    if out is None:
        return None
    ok, witness = out
    return Row(expr or R.expr, R.order, name, "PASS" if ok else "FAIL", str(witness),
               int((time.perf_counter() - t0) * 1000))


def verify_corpus(corpus, checks=None, max_order=None, workers=1):
    """Run ``checks`` (default: all) over ``corpus`` (DSL strings or ASTs).

    Rows are sorted by (ring, check).  Rings over the cap yield a single
    SKIPPED row with check name ``all``.
    """
    names = list(CHECKS) if checks is None else list(checks)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    rows, tasks = [], []
    for item in corpus:
        ast = parse_ring_expr(item) if isinstance(item, str) else item
        expr = render(ast)
        try:
            R = eval_ring_expr(ast, max_order=max_order)
            pol.classify_ring(R, max_order=max_order)
        except CapExceededError as exc:
            rows.append(Row(expr, exc.required, "all", "SKIPPED", str(exc), 0))
            continue
        tasks.extend((R, n, expr) for n in names)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for row in pool.map(lambda t: run_check(*t), tasks):
            if row is not None:
                rows.append(row)
    rows.sort(key=lambda r: (r.ring, r.check))
    return rows


def read_corpus_file(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    return [ln for ln in lines if ln and not ln.startswith("#")]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.ring, r.order, r.check, r.result, r.witness, r.elapsed_ms])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2) + "\n"


def any_failed(rows) -> bool:
    return any(r.result == "FAIL" for r in rows)
