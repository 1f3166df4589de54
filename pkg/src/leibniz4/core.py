"""Structure-constant algebras and the identities they may satisfy.

Tensor indices are 0-based in Python (``table[i][j][k]`` is the coefficient
of ``e_{k+1}`` in ``[e_{i+1}, e_{j+1}]``). Anything that names basis vectors
for people to read (entry lists, defect witnesses, files) is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .linalg import (
    DimensionMismatch,
    SingularMatrix,
    Subspace,
    det,
    inverse,
    vec_mat,
)
from .scalar import ONE, ZERO, MalformedScalar, as_scalar

__all__ = [
    "Algebra",
    "IndexOutOfRange",
    "DuplicateEntry",
    "MalformedScalar",
    "DimensionMismatch",
    "SingularMatrix",
    "NotAssociative",
    "validate",
    "from_products",
    "abelian",
    "basis_vector",
    "product",
    "leibniz_defect",
    "is_leibniz",
    "is_lie",
    "is_associative",
    "is_maltsev",
    "change_basis",
    "is_homomorphism",
    "subspace_product",
    "lower_central_series",
    "is_nilpotent",
    "nilindex",
    "direct_sum",
    "unitize",
    "is_idempotent",
]


class IndexOutOfRange(ValueError):
    pass


class DuplicateEntry(ValueError):
    pass


class NotAssociative(ValueError):
    pass


Vector = tuple  # n Scalars


@dataclass(frozen=True)
class Algebra:
    dim: int
    table: tuple = field(repr=False)
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise ValueError("dimension must be positive")
        t = self.table
        if len(t) != n or any(len(r) != n or any(len(v) != n for v in r) for r in t):
            raise DimensionMismatch(f"table is not {n}x{n}x{n}")

    def mul_basis(self, i: int, j: int) -> Vector:
        """``[e_i, e_j]`` with 0-based indices."""
        return self.table[i][j]

    def entries(self):
        """Nonzero structure constants as 1-based ``(i, j, k, c)``."""
        n = self.dim
        for i, j, k in iproduct(range(n), repeat=3):
            c = self.table[i][j][k]
            if c:
                yield i + 1, j + 1, k + 1, c

    def relabel(self, label: str | None) -> "Algebra":
        return Algebra(self.dim, self.table, label)

    def __str__(self):
        name = self.label or f"Algebra(dim={self.dim})"
        rows = []
        n = self.dim
        for i in range(n):
            for j in range(n):
                v = self.table[i][j]
                if any(v):
                    rows.append(f"[e{i + 1},e{j + 1}]={_fmt_vec(v)}")
        return f"{name}: " + (", ".join(rows) if rows else "(abelian)")


def _fmt_vec(v) -> str:
    terms = []
    for k, c in enumerate(v):
        if not c:
            continue
        if c == ONE:
            terms.append(f"e{k + 1}")
        elif c == -ONE:
            terms.append(f"-e{k + 1}")
        else:
            terms.append(f"({c})e{k + 1}")
    return " + ".join(terms) if terms else "0"


def _zero_table(n):
    return [[[ZERO] * n for _ in range(n)] for _ in range(n)]


def _freeze(t):
    return tuple(tuple(tuple(v) for v in row) for row in t)


def validate(entries, dim: int, label: str | None = None) -> Algebra:
    """Build an :class:`Algebra` from 1-based ``(i, j, k, c)`` entries.

    ``c`` may be a scalar string, an int, a Fraction or a Scalar. Omitted
    products are zero.
    """
    if not isinstance(dim, int) or dim < 1:
        raise IndexOutOfRange(f"bad dimension {dim!r}")
    t = _zero_table(dim)
    seen = set()
    for entry in entries:
        i, j, k, c = entry
        for idx in (i, j, k):
            if not isinstance(idx, int) or not 1 <= idx <= dim:
                raise IndexOutOfRange(f"index {idx!r} outside 1..{dim}")
        if (i, j, k) in seen:
            raise DuplicateEntry(f"entry ({i},{j},{k}) given twice")
        seen.add((i, j, k))
        t[i - 1][j - 1][k - 1] = as_scalar(c)
    return Algebra(dim, _freeze(t), label)


def from_products(dim: int, products: dict, label: str | None = None) -> Algebra:
    """``{(i, j): {k: c, ...}}`` with 1-based indices, mirroring printed tables."""
    return validate(
        [(i, j, k, c) for (i, j), vec in products.items() for k, c in vec.items()],
        dim,
        label,
    )


def abelian(n: int) -> Algebra:
    return Algebra(n, _freeze(_zero_table(n)), f"abelian({n})")


def basis_vector(n: int, i: int) -> Vector:
    """0-based ``e_{i+1}`` of length ``n``."""
    return tuple(ONE if k == i else ZERO for k in range(n))


def _mul(table, n, x, y) -> Vector:
    out = [ZERO] * n
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        row = table[i]
        for j in range(n):
            yj = y[j]
            if not yj:
                continue
            f = xi * yj
            for k, c in enumerate(row[j]):
                if c:
                    out[k] = out[k] + f * c
    return tuple(out)


def product(A: Algebra, x, y) -> Vector:
    if len(x) != A.dim or len(y) != A.dim:
        raise DimensionMismatch("vector length differs from algebra dimension")
    return _mul(A.table, A.dim, x, y)


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def leibniz_defect(A: Algebra) -> list[tuple[tuple[int, int, int], Vector]]:
    """Basis triples where ``[x,[y,z]] - [[x,y],z] + [[x,z],y]`` is nonzero.

    Triples are 1-based. An empty list means ``A`` is a Leibniz algebra.
    """
    n, t = A.dim, A.table
    e = [basis_vector(n, i) for i in range(n)]
    out = []
    for i, j, k in iproduct(range(n), repeat=3):
        lhs = _mul(t, n, e[i], t[j][k])
        d = _add(_sub(lhs, _mul(t, n, t[i][j], e[k])), _mul(t, n, t[i][k], e[j]))
        if any(d):
            out.append(((i + 1, j + 1, k + 1), d))
    return out


def is_leibniz(A: Algebra) -> bool:
    return not leibniz_defect(A)


def _is_antisymmetric(A: Algebra) -> bool:
    n, t = A.dim, A.table
    for i in range(n):
        if any(t[i][i]):
            return False
        for j in range(i + 1, n):
            if any(a + b for a, b in zip(t[i][j], t[j][i])):
                return False
    return True


def _jacobi_holds(A: Algebra) -> bool:
    n, t = A.dim, A.table
    e = [basis_vector(n, i) for i in range(n)]
    for i, j, k in iproduct(range(n), repeat=3):
        s = _add(
            _add(_mul(t, n, t[i][j], e[k]), _mul(t, n, t[j][k], e[i])),
            _mul(t, n, t[k][i], e[j]),
        )
        if any(s):
            return False
    return True


def is_lie(A: Algebra) -> bool:
    if not _is_antisymmetric(A):
        return False
    leib = is_leibniz(A)
    jac = _jacobi_holds(A)
    if leib != jac:
        # antisymmetric Leibniz and Jacobi must agree
        raise AssertionError("Leibniz/Jacobi disagreement on an antisymmetric table")
    return leib


def is_associative(A: Algebra) -> bool:
    n, t = A.dim, A.table
    e = [basis_vector(n, i) for i in range(n)]
    for i, j, k in iproduct(range(n), repeat=3):
        if _mul(t, n, t[i][j], e[k]) != _mul(t, n, e[i], t[j][k]):
            return False
    return True


def is_maltsev(A: Algebra) -> bool:
    """Antisymmetry plus the quartic identity.

    The quartic identity is quadratic in ``x``, so it is checked on
    ``x = e_i`` and ``x = e_i + e_j`` (polarization) with ``y, z`` basis.
    """
    if not _is_antisymmetric(A):
        return False
    n, t = A.dim, A.table
    e = [basis_vector(n, i) for i in range(n)]
    xs = list(e) + [_add(e[i], e[j]) for i in range(n) for j in range(i + 1, n)]
    m = lambda u, v: _mul(t, n, u, v)  # noqa: E731
    for x in xs:
        for y, z in iproduct(e, repeat=2):
            xy = m(x, y)
            lhs = _add(_add(m(m(xy, z), x), m(m(m(y, z), x), x)), m(m(m(z, x), x), y))
            if lhs != m(xy, m(x, z)):
                return False
    return True


def _check_square(T, n):
    if len(T) != n or any(len(r) != n for r in T):
        raise DimensionMismatch(f"basis change must be {n}x{n}")


def change_basis(A: Algebra, T) -> Algebra:
    """Rewrite ``A`` in the basis ``e'_i = sum_j T[i][j] e_j``.

    The returned table ``c'`` satisfies ``[e'_i, e'_j] = sum_k c'_ijk e'_k``.
    """
    n = A.dim
    T = tuple(tuple(as_scalar(x) for x in row) for row in T)
    _check_square(T, n)
    if not det(T):
        raise SingularMatrix("basis change is singular")
    Tinv = inverse(T)
    t = A.table
    new = []
    for i in range(n):
        row = []
        for j in range(n):
            w = _mul(t, n, T[i], T[j])
            row.append(vec_mat(w, Tinv) if any(w) else tuple([ZERO] * n))
        new.append(tuple(row))
    return Algebra(n, tuple(new), A.label)


def is_homomorphism(A: Algebra, B: Algebra, T) -> bool:
    """Exact check that ``e_i -> sum_j T[i][j] f_j`` respects products."""
    n = A.dim
    tA, tB = A.table, B.table
    for i in range(n):
        for j in range(n):
            lhs = [ZERO] * n
            for k, c in enumerate(tA[i][j]):
                if c:
                    for l, x in enumerate(T[k]):
                        if x:
                            lhs[l] = lhs[l] + c * x
            if tuple(lhs) != _mul(tB, n, T[i], T[j]):
                return False
    return True


def subspace_product(A: Algebra, U: Subspace, V: Subspace) -> Subspace:
    n = A.dim
    if U.ambient_dim != n or V.ambient_dim != n:
        raise DimensionMismatch("subspace ambient dimension differs from algebra")
    prods = [_mul(A.table, n, u, v) for u in U.basis for v in V.basis]
    return Subspace.span([p for p in prods if any(p)], n)


def lower_central_series(A: Algebra) -> list[Subspace]:
    """``[L^1, L^2, ...]`` stopping at the first term that repeats.

    A nilpotent algebra's series ends with the zero subspace.
    """
    L = Subspace.whole(A.dim)
    series = [L]
    while series[-1].dim:
        nxt = subspace_product(A, series[-1], L)
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def is_nilpotent(A: Algebra) -> bool:
    return lower_central_series(A)[-1].dim == 0


def nilindex(A: Algebra) -> int | None:
    """Smallest ``s`` with ``L^s = 0``, or None if ``A`` is not nilpotent."""
    series = lower_central_series(A)
    return len(series) if series[-1].dim == 0 else None


def direct_sum(A: Algebra, B: Algebra) -> Algebra:
    n = A.dim + B.dim
    t = _zero_table(n)
    for i, j in iproduct(range(A.dim), repeat=2):
        for k, c in enumerate(A.table[i][j]):
            t[i][j][k] = c
    o = A.dim
    for i, j in iproduct(range(B.dim), repeat=2):
        for k, c in enumerate(B.table[i][j]):
            t[o + i][o + j][o + k] = c
    label = f"{A.label or 'A'}+{B.label or 'B'}"
    return Algebra(n, _freeze(t), label)


def unitize(L: Algebra) -> Algebra:
    """Adjoin a two-sided unit as the new first basis vector (index 0)."""
    if not is_associative(L):
        raise NotAssociative("unitization is defined for associative algebras")
    n = L.dim + 1
    t = _zero_table(n)
    t[0][0][0] = ONE
    for i in range(1, n):
        t[0][i][i] = ONE
        t[i][0][i] = ONE
    for i, j in iproduct(range(L.dim), repeat=2):
        for k, c in enumerate(L.table[i][j]):
            t[i + 1][j + 1][k + 1] = c
    return Algebra(n, _freeze(t), f"unitize({L.label or 'L'})")


def is_idempotent(A: Algebra, x) -> bool:
    return product(A, x, x) == tuple(x)
