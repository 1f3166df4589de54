import pytest
from hypothesis import given, settings

from conftest import invertible_matrices, scalars
from leibniz4.catalog import ClassId, instantiate, omega, sample_instances
from leibniz4.core import abelian, basis_vector, change_basis, direct_sum, from_products
from leibniz4.invariants import (
    center,
    chi,
    derivation_dim,
    fingerprint,
    left_annihilator,
    linear_fingerprint,
    max_abelian_dim,
    max_abelian_subalgebra,
    pencil_profile,
    right_annihilator,
    split_detect,
)
from leibniz4.linalg import Subspace
from leibniz4.scalar import ONE, Scalar
from leibniz4.testgen import random_invertible


def span(*idx):
    return Subspace.span([basis_vector(4, i - 1) for i in idx], 4)


def R(name, a=None):
    return instantiate(name, a)


def test_chi_examples():
    assert chi(R("R1")) == (4, 3, 2, 1)
    assert chi(R("R4", 1)) == (4, 2, 1, 0)
    assert chi(R("R6")) == (4, 2, 1, 0)
    assert chi(R("R13")) == (4, 2, 0, 0)
    assert chi(R("R17")) == (4, 1, 0, 0)


def test_annihilators_and_center():
    assert right_annihilator(R("R3")) == span(2, 3, 4)
    assert right_annihilator(R("R2")).dim == 2
    assert right_annihilator(abelian(4)) == Subspace.whole(4)
    assert left_annihilator(R("R5")) == span(2, 4)
    assert left_annihilator(R("R6")) == span(4)
    assert center(R("R1")) == span(4)
    assert center(R("R13")) == span(3, 4)


def test_derivations():
    assert derivation_dim(abelian(4)) == 16
    assert derivation_dim(abelian(2)) == 4
    # dense oracle: solve D[e_i,e_j] = [De_i,e_j] + [e_i,De_j] over all 16 unknowns by sympy
    import sympy

    A = R("R1")
    d = sympy.symbols("d0:16")
    D = sympy.Matrix(4, 4, d)  # row i = image of e_i

    def mul(x, y):
        out = sympy.zeros(1, 4)
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    c = A.table[i][j][k]
                    if c:
                        out[k] += x[i] * y[j] * int(c.re)
        return out

    eqs = []
    E = sympy.eye(4)
    for i in range(4):
        for j in range(4):
            lhs = mul(E.row(i), E.row(j)) * D
            rhs = mul(D.row(i), E.row(j)) + mul(E.row(i), D.row(j))
            eqs.extend(lhs - rhs)
    M = sympy.Matrix([[sympy.diff(e, v) for v in d] for e in eqs])
    assert derivation_dim(A) == 16 - M.rank()


def test_max_abelian():
    assert max_abelian_dim(abelian(4)) == 4
    k, U = max_abelian_subalgebra(R("R2"))
    assert k == 3 and U == span(2, 3, 4)
    assert max_abelian_dim(R("R2")) != max_abelian_dim(R("R4", 0))
    assert max_abelian_dim(R("R2")) != max_abelian_dim(R("R4", 1))


def test_fingerprint_examples():
    diff = fingerprint(R("R3")).first_difference(fingerprint(R("R2")))
    assert diff[0] == "dim_right_ann" and diff[1:] == (3, 2)
    assert fingerprint(R("R9", 1 + 0 * ONE)) != fingerprint(R("R9", 0))  # special member
    assert fingerprint(R("R9", 2)) == fingerprint(R("R9", Scalar(0, 1))) == fingerprint(R("R9", 5))
    assert list(fingerprint(R("R1")).as_dict()) == [
        "chi", "dim_right_ann", "dim_left_ann", "dim_center", "dim_derivations", "max_abelian_dim",
        "is_lie", "is_associative"]


@pytest.mark.parametrize("cid, a", sample_instances())
def test_fingerprint_invariance(cid, a):
    A = R(cid, a)
    fp, pp = fingerprint(A), pencil_profile(A)
    for s in range(5):
        B = change_basis(A, random_invertible(4, 100 + s))
        assert fingerprint(B) == fp
        assert pencil_profile(B) == pp


@settings(max_examples=25)
@given(invertible_matrices())
def test_linear_fingerprint_invariance_random(T):
    for name in ("R7", "R11", "R16"):
        A = R(name, 3 if name == "R16" else None)
        assert linear_fingerprint(change_basis(A, T)) == linear_fingerprint(A)


def test_split_detect():
    R1 = R("R1")
    assert split_detect(direct_sum(R1, abelian(1))).split
    rep = split_detect(R1)
    assert not rep.split and rep.exhaustive and rep.verdict == "NoSplitFound"
    assert split_detect(omega(0, 0)).split
    for cid, a in sample_instances():
        assert not split_detect(R(cid, a)).split


def test_split_structural_agrees_with_enumeration():
    for cid, a in [("R7", None), ("R13", None), ("R10", 0), ("R17", None)]:
        A = R(cid, a)
        assert split_detect(A).split == split_detect(A, method="enumerate").split
    S = direct_sum(from_products(2, {(1, 1): {2: 1}}), from_products(2, {(1, 1): {2: 1}}))
    assert split_detect(S).split and split_detect(S, method="enumerate").split


def test_pencil_profile_separates_fingerprint_ties():
    assert pencil_profile(R("R1")) is None
    assert pencil_profile(R("R7")) != pencil_profile(R("R9", 2))
    assert pencil_profile(R("R12")) != pencil_profile(R("R10", 2))
    assert pencil_profile(R("R17")) != pencil_profile(R("R10", 0))
    assert pencil_profile(R("R14")) != pencil_profile(R("R16", 2))
    # R9(1) and R15 are isomorphic, so nothing may separate them
    assert pencil_profile(R("R9", 1)) == pencil_profile(R("R15"))


@settings(max_examples=30)
@given(scalars())
def test_family_invariants_constant_off_special_values(a):
    """Family members share every invariant except at the listed special values."""
    from leibniz4.isomorphism import family_special_values

    for cid in (ClassId.R9, ClassId.R10, ClassId.R16):
        special = set(family_special_values(cid))
        if cid == ClassId.R10:
            special |= {-x for x in special}
        if cid == ClassId.R16 and a == ONE:
            continue
        generic = R(cid, 3)
        A = R(cid, a)
        same = (linear_fingerprint(A), pencil_profile(A)) == (linear_fingerprint(generic), pencil_profile(generic))
        assert same == (a not in special)
