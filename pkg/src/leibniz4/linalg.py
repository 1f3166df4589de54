"""Small exact linear algebra over Gaussian rationals.

Matrices are tuples (or lists) of row tuples of :class:`Scalar`. Everything
here is dense; the ambient dimensions in this package stay tiny.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .scalar import ONE, ZERO, Scalar, as_scalar

_F0 = Fraction(0)

__all__ = [
    "SingularMatrix",
    "DimensionMismatch",
    "Subspace",
    "rref",
    "rank",
    "kernel",
    "det",
    "inverse",
    "matmul",
    "identity",
    "as_matrix",
    "vec_mat",
]


class SingularMatrix(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def as_matrix(rows) -> tuple[tuple[Scalar, ...], ...]:
    out = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise DimensionMismatch("ragged matrix")
    return out


def identity(n: int) -> tuple[tuple[Scalar, ...], ...]:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def _to_domain(m, ncols):
    real = all(not x.im for row in m for x in row)
    if real:
        conv = [[QQ(x.re.numerator, x.re.denominator) for x in row] for row in m]
        return DomainMatrix(conv, (len(m), ncols), QQ), True
    conv = [[QQ_I(QQ(x.re.numerator, x.re.denominator), QQ(x.im.numerator, x.im.denominator))
             for x in row] for row in m]
    return DomainMatrix(conv, (len(m), ncols), QQ_I), False


def _from_domain(v, real: bool) -> Scalar:
    if real:
        return Scalar._raw(Fraction(int(v.numerator), int(v.denominator)), _F0)
    return Scalar._raw(Fraction(int(v.x.numerator), int(v.x.denominator)),
                       Fraction(int(v.y.numerator), int(v.y.denominator)))


def rref(rows, ncols: int | None = None) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row-echelon form with leftmost-column pivots.

    Returns the nonzero rows and their pivot columns.
    """
    m = [[as_scalar(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m or not ncols:
        return [], []
    # pivots are only taken in the first ncols columns
    M, real = _to_domain(m, len(m[0]))
    red, pivots = M.rref()
    pivots = [c for c in pivots if c < ncols]
    dense = red.to_dense().rep.to_ddm()
    out = [[_from_domain(v, real) for v in dense[r]] for r in range(len(pivots))]
    return out, pivots


def rank(rows, ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def kernel(rows, ncols: int) -> list[tuple[Scalar, ...]]:
    """Basis of ``{x : M x = 0}`` for an ``m x ncols`` matrix ``M``."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def det(mat) -> Scalar:
    m = [list(r) for r in mat]
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        piv = m[c][c]
        d = d * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                f = f * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def inverse(mat) -> tuple[tuple[Scalar, ...], ...]:
    n = len(mat)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return tuple(tuple(row[n:]) for row in red)


def matmul(a, b) -> tuple[tuple[Scalar, ...], ...]:
    if a and len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    cols = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols)
        for row in a
    )


def vec_mat(v, mat) -> tuple[Scalar, ...]:
    """Row vector times matrix."""
    n = len(mat[0])
    out = [ZERO] * n
    for x, row in zip(v, mat):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] = out[j] + x * y
    return tuple(out)


@dataclass(frozen=True)
class Subspace:
    """A subspace stored by its canonical RREF basis."""

    ambient_dim: int
    basis: tuple[tuple[Scalar, ...], ...]

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vectors):
            raise DimensionMismatch("vector length differs from ambient dimension")
        red, _ = rref(vectors, ambient_dim) if vectors else ([], [])
        return cls(ambient_dim, tuple(tuple(r) for r in red))

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def contains(self, v) -> bool:
        return rank(list(self.basis) + [tuple(v)], self.ambient_dim) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        n = self.ambient_dim
        # x = sum a_r u_r = sum b_s v_s  <=>  [U; -V]^T (a, b) = 0
        rows_u, rows_v = self.basis, other.basis
        k = len(rows_u) + len(rows_v)
        if not rows_u or not rows_v:
            return Subspace.zero(n)
        system = [
            [u[c] for u in rows_u] + [-v[c] for v in rows_v] for c in range(n)
        ]
        vecs = []
        for sol in kernel(system, k):
            coeffs = sol[: len(rows_u)]
            vecs.append(vec_mat(coeffs, rows_u))
        return Subspace.span(vecs, n)

    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(row) if x) for row in self.basis]

    def __str__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"span{{{rows}}}"
