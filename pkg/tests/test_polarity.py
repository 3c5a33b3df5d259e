import pytest

from ringlab import (CertificateInvalidError, PolarityCertificate, classify_ring,
                     clean_family_element, conjugate_certificate, eval_ring_expr,
                     jqp_element, make_zn, quasipolar_element, spectral_idempotent_uniqueness,
                     validate_certificate, weakly_jqp_element)
from ringlab import polarity as pol
from ringlab import structure as st
from ringlab.rings import Element

RINGS = ["Z2", "Z4", "Z5", "Z6", "Z9", "Z12", "Z15", "Z2 x Z2", "Z2 x Z4", "T(2,Z2)",
         "T(2,Z3)", "T(2,Z4)", "M(2,Z2)", "M(2,Z3)", "modJ(T(2,Z4))"]


def oracle_weakly(R, a):
    """Scalar definition: idempotents p in comm2(a) with a+p or a-p in J."""
    J = set(st.jacobson_radical(R))
    comm = [c for c in range(R.order) if R.mul(a, c) == R.mul(c, a)]
    found = []
    for p in range(R.order):
        if R.mul(p, p) != p:
            continue
        if not all(R.mul(p, c) == R.mul(c, p) for c in comm):
            continue
        if R.add(a, p) in J or R.sub(a, p) in J:
            found.append(p)
    return found


def test_weakly_examples():
    Z6 = make_zn(6)
    cert = weakly_jqp_element(Z6, 2)
    assert (cert.idempotent.index, cert.sign, cert.witness.index) == (4, 1, 0)
    for expr in RINGS:
        R = eval_ring_expr(expr)
        zero = weakly_jqp_element(R, R.zero)
        assert zero.idempotent.index == R.zero and zero.witness.index == R.zero
    assert weakly_jqp_element(make_zn(15), 2) is None
    assert st.idempotents(make_zn(15)).members == (0, 1, 6, 10)


@pytest.mark.parametrize("expr", ["Z6", "Z9", "Z12", "T(2,Z2)", "T(2,Z3)", "M(2,Z2)"])
def test_weakly_matches_scalar_oracle(expr):
    R = eval_ring_expr(expr)
    for a in range(R.order):
        expected = oracle_weakly(R, a)
        cert = weakly_jqp_element(R, a)
        assert (cert is None) == (not expected)
        if cert is not None:
            assert cert.idempotent.index == expected[0]
            assert validate_certificate(cert)
        assert spectral_idempotent_uniqueness(R, a) == len(expected)


def test_jqp_examples():
    assert jqp_element(make_zn(6), 1) is None
    cert = jqp_element(make_zn(4), 3)
    assert (cert.idempotent.index, cert.witness.index, cert.sign) == (1, 0, 1)
    for expr in ["Z9", "T(2,Z4)", "M(2,Z2)"]:
        R = eval_ring_expr(expr)
        for j in st.jacobson_radical(R):
            assert jqp_element(R, j).idempotent.index == R.zero


def test_quasipolar_examples():
    Z5 = make_zn(5)
    cert = quasipolar_element(Z5, 3)
    assert cert.idempotent.index == 0 and cert.witness.index == 3
    assert validate_certificate(cert)
    for expr in ["Z4", "Z9", "Z8"]:
        R = eval_ring_expr(expr)
        assert all(quasipolar_element(R, a) is not None for a in range(R.order))
    M = eval_ring_expr("M(2,Z2)")
    e12 = M.encode([[0, 1], [0, 0]])
    cert = quasipolar_element(M, e12)
    assert cert is not None and validate_certificate(cert)


def test_clean_examples():
    Z3 = make_zn(3)
    assert clean_family_element(Z3, 2, "strongly_j_clean") is None
    cert = clean_family_element(Z3, 2, "clean")
    assert cert.idempotent.index == 0 and cert.witness.index == 2
    for expr in RINGS:
        R = eval_ring_expr(expr)
        one = clean_family_element(R, R.one, "clean")
        if R.order > 1:
            assert one.idempotent.index == R.zero and one.witness.index == R.one
    assert pol.clean_idempotent_count(Z3, 2) == 2
    assert clean_family_element(Z3, 2, "uniquely_clean") is None
    with pytest.raises(ValueError):
        clean_family_element(Z3, 2, "nearly_clean")


def test_uniqueness_examples():
    assert spectral_idempotent_uniqueness(make_zn(6), 2) == 1
    Z2 = make_zn(2)
    assert spectral_idempotent_uniqueness(Z2, 1) == 1
    assert weakly_jqp_element(Z2, 1).both_signs
    assert spectral_idempotent_uniqueness(make_zn(15), 2) == 0


def test_conjugation_example():
    T = eval_ring_expr("T(2,Z2)")
    a = T.encode([[1, 0], [0, 0]])
    cert = PolarityCertificate(Element(T, a), "weakly_j_quasipolar", Element(T, a),
                               Element(T, T.sub(a, a)), sign=-1)
    assert validate_certificate(cert)
    u = T.encode([[1, 1], [0, 1]])
    moved = conjugate_certificate(T, cert, u)
    assert moved.idempotent.literal == "[[1,1],[0,0]]"
    assert moved.sign == -1 and validate_certificate(moved)
    same = conjugate_certificate(T, cert, T.one)
    assert same == cert


def test_conjugation_rejects_bad_certificate():
    Z6 = make_zn(6)
    bogus = PolarityCertificate(Element(Z6, 2), "weakly_j_quasipolar", Element(Z6, 3),
                                Element(Z6, 5), sign=1)
    assert not validate_certificate(bogus)
    with pytest.raises(CertificateInvalidError):
        conjugate_certificate(Z6, bogus, 5)


def test_conjugation_commutative_is_trivial():
    Z9 = make_zn(9)
    for a in range(9):
        cert = weakly_jqp_element(Z9, a)
        for u in st.units(Z9):
            assert conjugate_certificate(Z9, cert, u).idempotent == cert.idempotent


def test_validator_rejects_each_broken_field():
    R = make_zn(9)
    good = weakly_jqp_element(R, 4)
    assert validate_certificate(good)
    E = lambda i: Element(R, i)  # noqa: E731
    broken = [
        PolarityCertificate(good.element, good.class_name, E(2), good.witness, sign=good.sign),
        PolarityCertificate(good.element, good.class_name, good.idempotent, E(1), sign=good.sign),
        PolarityCertificate(good.element, "j_quasipolar", good.idempotent, good.witness, sign=-1),
        PolarityCertificate(good.element, "quasipolar", E(1), E(5)),
    ]
    assert not any(validate_certificate(c) for c in broken)


def test_boolean_ring_certificates():
    R = eval_ring_expr("Z2 x Z2 x Z2")
    for a in range(R.order):
        cand = {p: (plus, minus) for p, plus, minus in pol.weakly_jqp_candidates(R, a)}
        assert list(cand) == [a] and cand[a][1]


@pytest.mark.parametrize("expr", RINGS)
def test_element_hierarchy(expr):
    R = eval_ring_expr(expr)
    for a in range(R.order):
        j = jqp_element(R, a)
        w = weakly_jqp_element(R, a)
        q = quasipolar_element(R, a)
        if j is not None:
            assert w is not None
        if w is not None:
            assert q is not None
        assert (w is None) == (weakly_jqp_element(R, R.neg(a)) is None)


@pytest.mark.parametrize("expr", RINGS)
def test_annihilator_inclusion(expr):
    R = eval_ring_expr(expr)
    e = R.elements
    for a in range(R.order):
        cert = weakly_jqp_element(R, a)
        if cert is None:
            continue
        p = cert.idempotent.index
        left = e[R.vmul(e, a) == R.zero]
        right = e[R.vmul(a, e) == R.zero]
        assert (R.vmul(left, p) == R.zero).all()
        assert (R.vmul(p, right) == R.zero).all()


def test_units_have_spectral_idempotent_one():
    for expr in RINGS:
        R = eval_ring_expr(expr)
        for u in st.units(R):
            cert = weakly_jqp_element(R, u)
            if cert is not None:
                assert cert.idempotent.index == R.one


def test_classify_examples():
    Z6 = classify_ring(make_zn(6))
    assert Z6["weakly_j_quasipolar"] and not Z6["j_quasipolar"]
    assert jqp_element(make_zn(6), int(Z6.witness("j_quasipolar"))) is None
    T3 = classify_ring(eval_ring_expr("T(2,Z3)"))
    assert not T3["weakly_j_quasipolar"]
    assert T3.witness("weakly_j_quasipolar") == "[[1,0],[0,2]]"
    Z9 = classify_ring(make_zn(9))
    assert Z9["weakly_j_quasipolar"] and not Z9["j_quasipolar"]
    assert Z9.witness("j_quasipolar") == "4"


def test_uniquely_clean_count_recorded():
    rep = classify_ring(make_zn(3))
    entry = rep.properties["uniquely_clean"]
    assert not entry.verdict and entry.count == 2


def test_report_json_order_and_memo():
    R = make_zn(6)
    rep = classify_ring(R)
    assert classify_ring(R) is rep
    data = rep.to_json()
    assert list(data) == ["ring", "order", "properties", "sets", "elapsed_ms"]
    assert [p["name"] for p in data["properties"]] == list(pol.PROPERTY_ORDER)
    assert list(data["properties"][0]) == ["name", "verdict", "witness", "count"]


def test_report_implications_consistent():
    for expr in RINGS:
        assert pol.check_report_implications(classify_ring(eval_ring_expr(expr))) == []


def test_classify_cap():
    from ringlab import CapExceededError
    R = eval_ring_expr("M(2,Z9)")
    with pytest.raises(CapExceededError):
        classify_ring(R)


def test_zero_ring_is_everything():
    rep = classify_ring(make_zn(1))
    for name in pol.CLASS_NAMES:
        assert rep[name]
