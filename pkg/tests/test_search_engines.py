"""Exact elimination, numeric restarts, frames and the symmetric-form route."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leibniz4.catalog import instantiate
from leibniz4.core import change_basis, from_products, is_homomorphism
from leibniz4.exact import exact_certificate
from leibniz4.forms import _conic_point, _descent, form_data, gaussian_sqrt, orthogonal_basis, symmetric_form_certificate
from leibniz4.frames import characteristic_flags, frame, word_basis
from leibniz4.isomorphism import SearchConfig, _search, _try
from leibniz4.linalg import det
from leibniz4.scalar import I, ONE, ZERO, Scalar
from leibniz4.testgen import random_invertible, scramble


def R(name, a=None):
    return instantiate(name, a)


def test_exact_fixed_target():
    A = scramble("R8", None, 9).algebra
    res = exact_certificate(A, R("R8"))
    assert res.matrix is not None and is_homomorphism(A, R("R8"), res.matrix) and det(res.matrix)


def test_exact_family_parameter():
    A = scramble("R9", Scalar(2), 4).algebra
    B0 = R("R9", 0)
    B1 = from_products(4, {(2, 1): {3: -1}})
    res = exact_certificate(A, B0, B1)
    assert res.param == Scalar(2)


def test_exact_node_limit():
    A = scramble("R11", None, 2).algebra
    res = exact_certificate(A, R("R11"), node_limit=1)
    assert res.nodes <= 2


def test_exact_rejects_wrong_target_quickly():
    res = exact_certificate(R("R10", 1), R("R11"))
    assert res.matrix is None


def test_numeric_search():
    A = scramble("R14", None, 6).algebra
    B = R("R14")
    cfg = SearchConfig(budget=40, method="numeric")
    cert, used, best = _search(A, B, None, lambda T, p: _try(A, B, T), cfg)
    assert cert is not None and 1 <= used <= 40


def test_frames_are_invariant():
    A = R("R13")
    B = change_basis(A, random_invertible(4, 2))
    assert [s.dim for s in characteristic_flags(A)] == [s.dim for s in characteristic_flags(B)]
    assert word_basis(A) is not None
    assert frame(B, A) is not None


@pytest.mark.parametrize("x, root", [(Scalar(-4), Scalar(0, 2)), (I * 2, ONE + I), (Scalar(Fraction(9, 4)), Scalar(Fraction(3, 2)))])
def test_gaussian_sqrt(x, root):
    r = gaussian_sqrt(x)
    assert r * r == x and r in (root, -root)


def test_gaussian_sqrt_none():
    assert gaussian_sqrt(Scalar(2)) is None
    assert gaussian_sqrt(I) is None


@given(st.integers(-40, 40).filter(bool), st.integers(-40, 40).filter(bool))
def test_descent_solutions_are_correct(a, b):
    from leibniz4.forms import _squarefree

    a, b = _squarefree(a)[0], _squarefree(b)[0]
    got = _descent(a, b)
    if got is not None:
        w, x, y = got
        assert (w, x, y) != (0, 0, 0) and w * w == a * x * x + b * y * y


def test_descent_known_cases():
    assert _descent(-1, -1) is None
    w, x, y = _descent(2, 7)
    assert w * w == 2 * x * x + 7 * y * y and (w, x, y) != (0, 0, 0)
    assert _descent(3, 5) is None  # 3 is not a square mod 5


@settings(max_examples=40)
@given(st.fractions(-9, 9, max_denominator=7).filter(bool), st.fractions(-9, 9, max_denominator=7).filter(bool),
       st.fractions(-9, 9, max_denominator=7).filter(bool))
def test_conic_points(a, b, c):
    pt = _conic_point(a, b, c)
    if pt is not None:
        y, t, s = pt
        assert a * y * y + b * t * t == c * s * s and (y, t, s) != (0, 0, 0)


def test_form_data():
    z, S = form_data(R("R10", 0))
    assert z == (ZERO, ZERO, ZERO, ONE)
    assert S[0][0] == S[1][1] == S[2][2] == ONE
    assert form_data(R("R1")) is None
    assert form_data(R("R10", 2)) is None  # not symmetric


@pytest.mark.parametrize("seed", range(6))
def test_symmetric_form_certificate(seed):
    A = scramble("R10", 0, seed).algebra
    T = symmetric_form_certificate(A, R("R10", 0))
    assert T is not None and is_homomorphism(A, R("R10", 0), T) and det(T)


def test_orthogonal_basis_of_rational_form():
    S = tuple(tuple(Scalar(x) for x in r) for r in ((1, 1, 0), (1, 2, 0), (0, 0, 3)))
    f, mu = orthogonal_basis(S)
    n = 3

    def B(u, v):
        return sum((u[i] * S[i][j] * v[j] for i in range(n) for j in range(n)), ZERO)

    assert len(f) == 3
    for i in range(3):
        for j in range(3):
            assert B(f[i], f[j]) == (mu if i == j else ZERO)
