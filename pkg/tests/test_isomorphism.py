import pytest

from leibniz4.catalog import ClassId, instantiate, nabla, r16_coefficient
from leibniz4.core import abelian, change_basis, direct_sum, from_products
from leibniz4.isomorphism import (
    Certificate,
    Isomorphic,
    NonIsomorphic,
    PreconditionFailed,
    SearchFailure,
    Unclassified,
    Undecided,
    classify4,
    distinguish,
    find_isomorphism,
    shortlist,
    verify_isomorphism,
)
from leibniz4.linalg import DimensionMismatch, SingularMatrix, identity
from leibniz4.scalar import I, ONE, ZERO, Scalar
from leibniz4.testgen import random_invertible, scramble


def R(name, a=None):
    return instantiate(name, a)


def flip2():
    return tuple(tuple((-ONE if i == 1 else ONE) if i == j else ZERO for j in range(4)) for i in range(4))


def test_verify_examples():
    T = tuple(tuple(Scalar(v) if i == j else ZERO for j in range(4)) for i, v in enumerate((5, 5, 25, 125)))
    # change_basis(nabla(5,0), T) == nabla(1,0), so T carries nabla(1,0) onto nabla(5,0)
    assert change_basis(nabla(5, 0), T) == nabla(1, 0)
    assert verify_isomorphism(nabla(1, 0), nabla(5, 0), T)
    assert verify_isomorphism(R("R8"), R("R8"), identity(4))
    assert verify_isomorphism(R("R10", 2), R("R10", -2), flip2())
    assert not verify_isomorphism(R("R10", 2), R("R10", 3), flip2())


def test_verify_rejects_bad_matrices():
    with pytest.raises(SingularMatrix):
        verify_isomorphism(R("R8"), R("R8"), ((ZERO,) * 4,) * 4)
    with pytest.raises(DimensionMismatch):
        verify_isomorphism(R("R8"), abelian(3), identity(4))
    with pytest.raises(ValueError):
        Certificate(R("R8"), R("R13"), identity(4))


def test_certificate_algebra():
    inst = scramble("R13", None, 4)
    c = find_isomorphism(inst.algebra, R("R13"))
    back = c.inverse()
    assert back.source == R("R13") and verify_isomorphism(R("R13"), inst.algebra, back.matrix)
    assert c.then(back).matrix == identity(4)


def test_find_isomorphism_scramble():
    A = R("R4", 0)
    B = change_basis(A, random_invertible(4, 11))
    cert = find_isomorphism(A, B)
    assert verify_isomorphism(A, B, cert.matrix)


def test_identity_and_sign():
    assert find_isomorphism(R("R9", 1), R("R9", 1)).matrix == identity(4)
    cert = find_isomorphism(R("R10", 3), R("R10", -3))
    assert verify_isomorphism(R("R10", 3), R("R10", -3), cert.matrix)


def test_budget_zero_never_searches():
    with pytest.raises(SearchFailure):
        find_isomorphism(R("R8"), R("R8"), budget=0)
    v = distinguish(R("R8"), R("R8"), budget=0)
    assert isinstance(v, Undecided) and v.restarts == 0


def test_distinguish_named_invariants():
    v = distinguish(R("R3"), R("R2"))
    assert isinstance(v, NonIsomorphic) and v.component == "dim_right_ann" and v.values == (3, 2)
    v = distinguish(R("R5"), R("R6"))
    assert v.component == "dim_left_ann" and v.values == (2, 1)
    # the fixed fingerprint order reaches other components first; the
    # max-abelian values still differ (checked in test_invariants)
    assert distinguish(R("R2"), R("R4", 1)).component == "dim_left_ann"
    assert distinguish(R("R2"), R("R4", 0)).component == "dim_derivations"
    assert isinstance(distinguish(R("R10", 2), R("R10", -2)), Isomorphic)


def test_distinguish_uses_pencil_after_fingerprint():
    v = distinguish(R("R7"), R("R9", 2))
    assert isinstance(v, NonIsomorphic) and v.component == "pencil_profile"


def test_r9_one_is_r15():
    """R9(1) and R15 are isomorphic: e_1 + e_2 left-annihilates R9(1)."""
    T = ((ONE, -ONE, ZERO, ZERO), (ONE, ONE, ZERO, ZERO), (ZERO, ZERO, ONE, -ONE), (ZERO, ZERO, -ONE, -ONE))
    assert verify_isomorphism(R("R9", 1), R("R15"), T)
    assert isinstance(distinguish(R("R9", 1), R("R15")), Isomorphic)


def test_classify_nabla():
    res = classify4(nabla(7, 0))
    assert res.class_id == ClassId.R2 and res.alpha is None
    assert verify_isomorphism(nabla(7, 0), R("R2"), res.certificate.matrix)


def test_classify_r16_parameter():
    inst = scramble("R16", 3, 21)
    assert r16_coefficient(3) == Scalar(-2)
    res = classify4(inst.algebra)
    assert res.class_id == ClassId.R16 and res.alpha == Scalar(3)
    assert res.name == "R16(3)"


@pytest.mark.parametrize("a, want", [(Scalar(-2), Scalar(2)), (Scalar(0, -1), I), (Scalar(3, -1), Scalar(3, -1))])
def test_classify_r10_sign(a, want):
    res = classify4(scramble("R10", a, 8).algebra)
    assert res.class_id == ClassId.R10 and res.alpha == want


@pytest.mark.parametrize("cid, a", [("R1", None), ("R6", None), ("R9", Scalar(1, 2)), ("R11", None),
                                    ("R16", -ONE), ("R17", None), ("R4", 1)])
def test_classify_scrambles(cid, a):
    inst = scramble(cid, a, 3)
    res = classify4(inst.algebra)
    assert res.class_id == ClassId(cid)
    assert res.certificate.source == inst.algebra
    assert verify_isomorphism(inst.algebra, res.certificate.target, res.certificate.matrix)


def test_preconditions():
    lie = from_products(4, {(1, 2): {3: 1}, (2, 1): {3: -1}, (1, 3): {4: 1}, (3, 1): {4: -1}})
    cases = [
        (lie, "non-Lie"),
        (abelian(4), "non-abelian"),
        (direct_sum(from_products(2, {(1, 1): {2: 1}}), from_products(2, {(1, 1): {2: 1}})), "non-split"),
        (abelian(3), "dim-4"),
        (from_products(4, {(1, 2): {2: 1}, (2, 1): {2: -1}}), "nilpotent"),
        (from_products(4, {(1, 1): {2: 1}, (1, 2): {1: 1}}), "Leibniz"),
    ]
    for A, hyp in cases:
        with pytest.raises(PreconditionFailed) as info:
            classify4(A)
        assert info.value.hypothesis == hyp


def test_unclassified_with_small_budget():
    with pytest.raises(Unclassified):
        classify4(scramble("R11", None, 2).algebra, budget=1)


def test_shortlist_is_in_catalog_order():
    got = shortlist(scramble("R15", None, 1).algebra)
    names = [c.value for c, _, _ in got]
    assert names == sorted(names, key=lambda s: int(s[1:]))
    assert ("R9", ONE) in [(c.value, a) for c, a, _ in got]


def test_numeric_method_agrees():
    inst = scramble("R13", None, 5)
    res = classify4(inst.algebra, method="numeric", budget=50)
    assert res.class_id == ClassId.R13
