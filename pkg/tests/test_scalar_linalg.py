from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import invertible_matrices, scalars
from leibniz4.linalg import (
    DimensionMismatch,
    SingularMatrix,
    Subspace,
    det,
    identity,
    inverse,
    kernel,
    matmul,
    rank,
    rref,
    vec_mat,
)
from leibniz4.scalar import I, ONE, ZERO, MalformedScalar, Scalar, as_scalar, parse_scalar


@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO
    if b:
        assert (a / b) * b == a
        assert b * b.inverse() == ONE


@given(scalars())
def test_text_round_trip(x):
    assert parse_scalar(str(x)) == x


@pytest.mark.parametrize("text, re, im", [
    ("3", 3, 0),
    ("-3/4", Fraction(-3, 4), 0),
    ("1+2i", 1, 2),
    ("3/4-1/2i", Fraction(3, 4), Fraction(-1, 2)),
    ("0+1i", 0, 1),
])
def test_parse(text, re, im):
    assert parse_scalar(text) == Scalar(re, im)


@pytest.mark.parametrize("text", ["1/0", "1.5", "i", "2+i", "", "1/2/3", "--1"])
def test_parse_rejects(text):
    with pytest.raises(MalformedScalar):
        parse_scalar(text)


def test_canonical_fractions():
    x = Scalar(Fraction(2, 4), Fraction(-3, -6))
    assert x.re.denominator == 2 and x.im == Fraction(1, 2)
    assert hash(x) == hash(Scalar(Fraction(1, 2), Fraction(1, 2)))


def test_floats_refused():
    with pytest.raises((TypeError, MalformedScalar)):
        as_scalar(0.5)


def test_i_squared():
    assert I * I == -ONE
    assert (ONE + I).conjugate() == ONE - I


def test_rref_and_kernel():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    red, piv = rref(rows)
    assert piv == [0, 1]
    ker = kernel(rows, 3)
    assert len(ker) == 1
    for r in rows:
        assert sum((as_scalar(a) * b for a, b in zip(r, ker[0])), ZERO) == ZERO


def test_rref_with_gaussian_entries():
    rows = [[ONE, I], [I, -ONE]]
    assert rank(rows) == 1


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        inverse(((ONE, ONE), (ONE, ONE)))


def test_det_shape():
    with pytest.raises(DimensionMismatch):
        det(((ONE, ZERO),))


@given(invertible_matrices())
def test_inverse_property(T):
    assert matmul(T, inverse(T)) == identity(4)
    assert det(T) * det(inverse(T)) == ONE


@given(invertible_matrices(n=3), st.lists(scalars(), min_size=3, max_size=3))
def test_vec_mat_matches_matmul(T, v):
    assert vec_mat(v, T) == matmul((tuple(v),), T)[0]


def test_subspace_equality_is_canonical():
    a = Subspace.span([(ONE, ONE, ZERO), (ZERO, ONE, ONE)], 3)
    b = Subspace.span([(ONE, ZERO, -ONE), (ONE, 2 * ONE, ONE)], 3)
    assert a == b and a.dim == 2
    assert a.intersect(Subspace.span([(ONE, ZERO, ZERO)], 3)).dim == 0
    assert (a + Subspace.span([(ONE, ZERO, ZERO)], 3)) == Subspace.whole(3)
