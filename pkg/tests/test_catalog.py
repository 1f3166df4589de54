import random
from fractions import Fraction

import pytest

from leibniz4.catalog import (
    CATALOG,
    FAMILIES,
    BadCoefficientCount,
    BadDimension,
    ClassId,
    ParamOutOfDomain,
    canonical_r10,
    filiform_mu1,
    filiform_mu2,
    instantiate,
    nabla,
    nulfiliform,
    omega,
    r16_alpha,
    r16_coefficient,
    reduce_filiform,
    sample_instances,
)
from leibniz4.core import from_products, is_leibniz, leibniz_defect
from leibniz4.invariants import chi, split_detect
from leibniz4.scalar import I, ONE, ZERO, Scalar


def test_seventeen_classes_five_families():
    assert len(CATALOG) == 17
    assert FAMILIES == {ClassId.R4, ClassId.R9, ClassId.R10, ClassId.R16}
    assert len(sample_instances()) == 27


def test_r7_table():
    assert instantiate("R7") == from_products(
        4, {(1, 1): {4: 1}, (1, 2): {3: 1}, (2, 1): {3: -1}, (2, 2): {3: -2, 4: 1}})


def test_r16_at_zero():
    assert instantiate("R16", 0) == from_products(4, {(1, 2): {4: 1}, (2, 1): {4: 1}, (2, 2): {3: 1}})


def test_parameter_domains():
    with pytest.raises(ParamOutOfDomain):
        instantiate("R4", 2)
    with pytest.raises(ParamOutOfDomain):
        instantiate("R16", 1)
    with pytest.raises(ParamOutOfDomain):
        instantiate("R9")
    with pytest.raises(ParamOutOfDomain):
        instantiate("R1", 0)


def test_r16_map_round_trip():
    for a in (ZERO, Scalar(3), -ONE, I, Scalar(Fraction(1, 2), 2)):
        assert r16_alpha(r16_coefficient(a)) == a
    assert r16_coefficient(3) == Scalar(-2)
    with pytest.raises(ParamOutOfDomain):
        r16_alpha(-1)


def test_canonical_r10():
    assert canonical_r10(-2) == Scalar(2)
    assert canonical_r10(Scalar(0, -1)) == I
    assert canonical_r10(Scalar(-1, 5)) == Scalar(1, -5)


def test_nulfiliform():
    assert nulfiliform(4) == instantiate("R1")
    assert nulfiliform(2) == from_products(2, {(1, 1): {2: 1}})
    assert chi(nulfiliform(5)) == (5, 4, 3, 2, 1)
    with pytest.raises(BadDimension):
        nulfiliform(1)


def _rand(rng):
    return Fraction(rng.randint(-7, 7), rng.randint(1, 7))


@pytest.mark.parametrize("make", [filiform_mu1, filiform_mu2])
def test_templates_are_leibniz(make):
    rng = random.Random(5)
    for n in (3, 4, 5, 6):
        A = make(n, [_rand(rng) for _ in range(n - 2)], _rand(rng))
        assert leibniz_defect(A) == []
    with pytest.raises(BadCoefficientCount):
        make(5, [1], 0)


def test_mu1_zero_coefficients():
    A = filiform_mu1(4, [0, 0], 0)
    expected = {(1, 1): {3: 1}}
    expected.update({(i + 1, 1): {i + 2: 1} for i in range(1, 4)})
    assert A == from_products(5, expected)


def test_small_templates_match_nabla_and_omega():
    # at n = 3 the templates are the 4-dim families with e_0..e_3 in file slots 1..4
    A = filiform_mu1(3, [2], 5)
    assert is_leibniz(A) and chi(A) == (4, 2, 1, 0)
    assert split_detect(filiform_mu2(3, [0], 0)).split


def test_reduction_examples():
    assert reduce_filiform("nabla", 0, 0).target_name == "R3"
    assert reduce_filiform("omega", 1, 0).target_name == "R5"
    assert reduce_filiform("nabla", 1, 1).target_name == "R4(1)"
    assert reduce_filiform("omega", 0, 0).target_name == "Split"
    cert = reduce_filiform("nabla", 7, 0)
    assert cert.target_name == "R2"
    assert [cert.basis_change[i][i] for i in range(4)] == [Scalar(7), Scalar(7), Scalar(49), Scalar(343)]
    assert reduce_filiform("omega", 3, 1).target_name == "R6"
    assert reduce_filiform("nabla", 3, 2).target_name == "R4(0)"


def test_nabla_and_omega_sources():
    assert nabla(0, 0) == instantiate("R3")
    assert omega(1, 0) == instantiate("R5")
    assert nabla(1, 1) == instantiate("R4", 1)


def test_reduction_steps_compose():
    from leibniz4.linalg import identity, matmul

    cert = reduce_filiform("omega", Scalar(2, 1), 3, t=2)
    total = identity(4)
    for s in cert.steps:
        total = matmul(s, total)
    assert total == cert.basis_change and cert.verify()
