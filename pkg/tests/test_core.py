from fractions import Fraction

import pytest
from hypothesis import given

from conftest import invertible_matrices
from leibniz4.catalog import ClassId, instantiate
from leibniz4.core import (
    DuplicateEntry,
    IndexOutOfRange,
    NotAssociative,
    abelian,
    basis_vector,
    change_basis,
    direct_sum,
    from_products,
    is_associative,
    is_homomorphism,
    is_idempotent,
    is_leibniz,
    is_lie,
    is_maltsev,
    is_nilpotent,
    leibniz_defect,
    lower_central_series,
    nilindex,
    product,
    subspace_product,
    unitize,
    validate,
)
from leibniz4.invariants import chi
from leibniz4.linalg import Subspace, identity
from leibniz4.scalar import ONE, ZERO, Scalar

R1 = instantiate("R1")
HEIS = from_products(3, {(1, 2): {3: 1}, (2, 1): {3: -1}})


def e(n, i):
    return basis_vector(n, i - 1)


def test_validate_builds_r1():
    A = validate([(1, 1, 2, "1"), (2, 1, 3, "1"), (3, 1, 4, "1")], 4)
    assert A == R1


def test_validate_errors():
    assert validate([], 1) == abelian(1)
    with pytest.raises(IndexOutOfRange):
        validate([(1, 1, 5, "1")], 4)
    with pytest.raises(DuplicateEntry):
        validate([(1, 1, 2, "1"), (1, 1, 2, "2")], 4)


def test_products():
    assert product(R1, e(4, 2), e(4, 1)) == e(4, 3)
    assert product(R1, (ZERO,) * 4, e(4, 3)) == (ZERO,) * 4
    R9 = instantiate("R9", 2)
    assert product(R9, e(4, 2), e(4, 1)) == tuple(Scalar(-2) * x for x in e(4, 3))


def test_leibniz_defect():
    assert leibniz_defect(R1) == []
    assert leibniz_defect(abelian(4)) == []
    bad = from_products(2, {(1, 1): {2: 1}, (1, 2): {1: 1}})
    witnesses = dict(leibniz_defect(bad))
    assert (1, 1, 1) in witnesses and any(witnesses[(1, 1, 1)])


def test_identity_predicates():
    assert not is_lie(R1) and is_lie(abelian(4)) and not is_lie(instantiate("R14"))
    assert is_associative(instantiate("R13")) and is_associative(abelian(4)) and not is_associative(R1)
    assert is_maltsev(abelian(4)) and is_maltsev(HEIS) and not is_maltsev(R1)
    assert is_leibniz(HEIS)


def test_change_basis_examples():
    from leibniz4.catalog import nabla, omega

    T = tuple(tuple(Scalar(v) if i == j else ZERO for j in range(4)) for i, v in enumerate((5, 5, 25, 125)))
    assert change_basis(nabla(5, 0), T) == nabla(1, 0)
    T = tuple(tuple(Scalar(Fraction(1, 3)) if (i, j) == (1, 1) else ((ONE if i == j else ZERO)) for j in range(4))
              for i in range(4))
    assert change_basis(omega(3, 0), T) == omega(1, 0)
    assert change_basis(R1, identity(4)) == R1


@given(invertible_matrices())
def test_change_basis_is_homomorphism(T):
    R = instantiate("R8")
    A = change_basis(R, T)
    assert is_homomorphism(A, R, T)
    assert is_leibniz(A) and chi(A) == chi(R)


def test_series():
    L = Subspace.whole(4)
    assert subspace_product(R1, L, L) == Subspace.span([e(4, 2), e(4, 3), e(4, 4)], 4)
    R13 = instantiate("R13")
    L2 = lower_central_series(R13)[1]
    assert subspace_product(R13, L2, L).dim == 0
    assert [s.dim for s in lower_central_series(R1)] == [4, 3, 2, 1, 0]
    assert [s.dim for s in lower_central_series(abelian(4))] == [4, 0]
    assert [s.dim for s in lower_central_series(instantiate("R6"))] == [4, 2, 1, 0]
    assert is_nilpotent(R1) and nilindex(R1) == 5


def test_direct_sum():
    assert direct_sum(abelian(1), abelian(1)) == abelian(2)
    S = direct_sum(R1, abelian(1))
    assert S.dim == 5 and chi(S) == (5, 3, 2, 1, 0)


def test_unitization():
    U = unitize(abelian(1))
    assert product(U, e(2, 1), e(2, 1)) == e(2, 1)
    assert product(U, e(2, 1), e(2, 2)) == e(2, 2) == product(U, e(2, 2), e(2, 1))
    U = unitize(instantiate("R13"))
    assert U.dim == 5 and is_associative(U)
    with pytest.raises(NotAssociative):
        unitize(R1)
    assert is_idempotent(U, e(5, 1))
    assert not is_idempotent(U, tuple(a + b for a, b in zip(e(5, 1), e(5, 4))))
    assert is_idempotent(U, (ZERO,) * 5)


def test_catalog_representatives_are_leibniz():
    for cid in ClassId:
        alphas = {"R4": [0, 1], "R9": [0, 2], "R10": [1], "R16": [3]}.get(cid.value, [None])
        for a in alphas:
            R = instantiate(cid, a)
            assert is_leibniz(R) and is_nilpotent(R) and not is_lie(R)
