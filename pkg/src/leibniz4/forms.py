"""Certificates for algebras whose product is a symmetric bilinear form.

Such an algebra has ``[L, L] = span(z)`` with ``z`` annihilating everything, and
``x y = beta(x, y) z`` for a symmetric ``beta``. Two of them are isomorphic iff
their forms are congruent up to a scalar, which reduces to writing each form
as ``mu`` times the identity on a complement of its radical.

Over Q(i) the plane ``x^2 + y^2 = (x + iy)(x - iy)`` is hyperbolic, so the
search only needs isotropic vectors. For forms with rational entries these
come from a binary subform ``c <1, 1>`` over Q, i.e. from one ternary
diophantine equation per attempt.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import isqrt

from sympy import factorint
from sympy.ntheory import sqrt_mod

from .core import Algebra, _mul, basis_vector, is_homomorphism
from .linalg import det, inverse, kernel, matmul, rank
from .scalar import I, ONE, ZERO, Scalar

__all__ = ["form_data", "orthogonal_basis", "symmetric_form_certificate"]

_SEARCH_BOX = 2
_MAX_TRIES = 80


def form_data(A: Algebra):
    """``(z, S)`` with ``e_i e_j = S[i][j] z``, or None when ``A`` is not of this shape."""
    n = A.dim
    z = None
    for i in range(n):
        for j in range(n):
            v = A.table[i][j]
            if any(v):
                z = v
                break
        if z is not None:
            break
    if z is None:
        return None
    k = next(c for c in range(n) if z[c])
    z = tuple(x / z[k] for x in z)
    S = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = A.table[i][j]
            s = v[k]
            if any(v[c] != s * z[c] for c in range(n)) or v != A.table[j][i]:
                return None
            S[i][j] = s
    for i in range(n):
        e = basis_vector(n, i)
        if any(_mul(A.table, n, z, e)) or any(_mul(A.table, n, e, z)):
            return None
    return z, tuple(tuple(r) for r in S)


def _form(S):
    n = len(S)

    def B(u, v):
        return sum((u[i] * S[i][j] * v[j] for i in range(n) for j in range(n) if S[i][j]), ZERO)
    return B


def _comb(coeffs, vecs):
    n = len(vecs[0])
    return tuple(sum((c * v[k] for c, v in zip(coeffs, vecs)), ZERO) for k in range(n))


def _diagonalize(vecs, B):
    """Orthogonal vectors with nonzero norms spanning ``span(vecs)`` modulo the radical."""
    vecs = [v for v in vecs if any(v)]
    out = []
    while vecs:
        pivot = next((v for v in vecs if B(v, v)), None)
        if pivot is None:
            pair = next(((v, w) for v in vecs for w in vecs if B(v, w)), None)
            if pair is None:
                break
            pivot = tuple(a + b for a, b in zip(*pair))
        d = B(pivot, pivot)
        out.append(pivot)
        rest = []
        for v in vecs:
            c = B(v, pivot) / d
            w = tuple(a - c * b for a, b in zip(v, pivot))
            if rank(out + rest + [w]) > len(out) + len(rest):
                rest.append(w)
        vecs = rest
    return out


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def gaussian_sqrt(x: Scalar) -> Scalar | None:
    """A square root in Q(i), or None."""
    if not x:
        return ZERO
    m = _fraction_sqrt(x.re * x.re + x.im * x.im)
    if m is None:
        return None
    u = _fraction_sqrt((x.re + m) / 2)
    if u is None:
        return None
    if u:
        return Scalar(u, x.im / (2 * u))
    v = _fraction_sqrt(-x.re)
    return None if v is None else Scalar(0, v)


def _real(S) -> bool:
    return all(not x.im for row in S for x in row)


def _small_vectors(r):
    pts = [c for c in iproduct(range(-_SEARCH_BOX, _SEARCH_BOX + 1), repeat=r) if any(c)]
    pts.sort(key=lambda c: (sum(map(abs, c)), c))
    return pts[:_MAX_TRIES]


def _squarefree(n: int):
    """``(m, k)`` with ``n = m k^2`` and ``m`` squarefree."""
    m, k = (1 if n > 0 else -1), 1
    for q, e in factorint(abs(n)).items():
        m *= q ** (e % 2)
        k *= q ** (e // 2)
    return m, k


def _descent(a: int, b: int):
    """Integers ``(w, x, y) != 0`` with ``w^2 = a x^2 + b y^2``; ``a, b`` squarefree."""
    if abs(a) > abs(b):
        got = _descent(b, a)
        return None if got is None else (got[0], got[2], got[1])
    if a == 1:
        return 1, 1, 0
    if b == 1:
        return 1, 0, 1
    if a < 0 and b < 0:
        return None
    t = sqrt_mod(a % abs(b), abs(b))
    if t is None:
        return None
    if t > abs(b) // 2:
        t -= abs(b)
    m, k = _squarefree((t * t - a) // b)
    got = _descent(a, m)
    if got is None:
        return None
    W, X, Y = got
    return t * W + a * X, W + t * X, m * k * Y


def _conic_point(a: Fraction, b: Fraction, c: Fraction):
    """Rational ``(y, t, s) != 0`` with ``a y^2 + b t^2 = c s^2``, or None."""
    # (c s)^2 = (a c) y^2 + (b c) t^2; clear denominators into the variables
    A, B = a * c, b * c
    ma, ka = _squarefree(A.numerator * A.denominator)
    mb, kb = _squarefree(B.numerator * B.denominator)
    got = _descent(ma, mb)
    if got is None:
        return None
    W, X, Y = got
    y = Fraction(A.denominator * X, ka)
    t = Fraction(B.denominator * Y, kb)
    s = Fraction(W) / c
    if a * y * y + b * t * t != c * s * s:
        return None
    return y, t, s


def _isotropic(basis, B, real: bool, span):
    """Nonzero ``w`` in the span of the orthogonal ``basis`` with ``B(w, w) = 0``.

    ``span`` spans the same space modulo the radical and supplies the small
    trial vectors of the rational search.
    """
    d = [B(v, v) for v in basis]
    for j in range(len(basis)):
        for k in range(j + 1, len(basis)):
            s = gaussian_sqrt(-d[j] / d[k])
            if s is not None:
                return tuple(x + s * y for x, y in zip(basis[j], basis[k]))
    if not real or len(basis) < 3:
        return None
    for coeffs in _small_vectors(len(span)):
        v1 = _comb([Scalar(c) for c in coeffs], span)
        if not any(B(v1, b) for b in basis):
            continue
        c = B(v1, v1)
        if not c:
            return v1
        perp = _diagonalize([tuple(x - (B(v, v1) / c) * y for x, y in zip(v, v1)) for v in span], B)
        if len(perp) < 2:
            continue
        b1, b2 = perp[0], perp[1]
        pt = _conic_point(B(b1, b1).re, B(b2, b2).re, c.re)
        if pt is None:
            continue
        y, t, s = (Scalar(x) for x in pt)
        if not s:
            return _comb([y, t], [b1, b2])
        v2 = _comb([y / s, t / s], [b1, b2])
        return tuple(x + I * w for x, w in zip(v1, v2))
    return None


def orthogonal_basis(S, vecs=None):
    """``(f, mu)`` with ``B(f_i, f_j) = mu`` on the diagonal and 0 elsewhere.

    ``f`` spans a complement of the radical of the Gram matrix ``S``. Returns
    None if no such basis was found over Q(i).
    """
    n = len(S)
    B = _form(S)
    if vecs is None:
        vecs = [basis_vector(n, i) for i in range(n)]
    return _split(vecs, B, _real(S))


def _split(span, B, real):
    basis = _diagonalize(span, B)
    if not basis:
        return [], None
    if len(basis) == 1:
        return [basis[0]], B(basis[0], basis[0])
    w = _isotropic(basis, B, real, span)
    if w is None:
        return None
    u = next(v for v in basis if B(w, v))
    u = tuple(x / B(w, u) for x in u)
    h = B(u, u) / 2
    w2 = tuple(x - h * y for x, y in zip(u, w))
    comp = []
    for v in basis:
        a, b = B(v, w2), B(v, w)
        comp.append(tuple(x - a * y - b * t for x, y, t in zip(v, w, w2)))
    got = _split(comp, B, real)
    if got is None:
        return None
    rest, mu = got
    mu = ONE if mu is None else mu
    half = mu / 2
    f1 = tuple(x + half * y for x, y in zip(w, w2))
    f2 = tuple(I * (x - half * y) for x, y in zip(w, w2))
    return [f1, f2] + rest, mu


def _frame(A: Algebra):
    data = form_data(A)
    if data is None:
        return None
    z, S = data
    got = orthogonal_basis(S)
    if got is None:
        return None
    f, mu = got
    n = A.dim
    rad = kernel(S, n)
    others = [v for v in rad if rank([z] + [v]) == 2]
    extra = []
    for v in others:
        if rank([z] + extra + [v]) > len(extra) + 1:
            extra.append(v)
    return f, extra, z, mu


def symmetric_form_certificate(A: Algebra, B: Algebra):
    """Exact ``T: A -> B`` when both are symmetric-form algebras, else None."""
    fa, fb = _frame(A), _frame(B)
    if fa is None or fb is None:
        return None
    f, rad, z, mu = fa
    g, radb, zb, mub = fb
    if len(f) != len(g) or len(rad) != len(radb):
        return None
    F = tuple(f) + tuple(rad) + (z,)
    G = tuple(g) + tuple(radb) + (tuple((mub / mu) * x for x in zb),)
    if len(F) != A.dim or not det(F):
        return None
    T = matmul(inverse(F), G)
    if det(T) and is_homomorphism(A, B, T):
        return T
    return None
