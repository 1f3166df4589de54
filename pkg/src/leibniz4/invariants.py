"""Isomorphism invariants and the splitting test."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from functools import lru_cache
from itertools import product as iproduct

import sympy

from . import polysys as ps
from .core import (
    Algebra,
    _mul,
    basis_vector,
    is_associative,
    is_lie,
    is_nilpotent,
    lower_central_series,
    subspace_product,
)
from .linalg import Subspace, inverse, kernel, rank, vec_mat
from .scalar import ZERO

__all__ = [
    "DimensionTooLarge",
    "Fingerprint",
    "SplitReport",
    "chi",
    "right_annihilator",
    "left_annihilator",
    "center",
    "derivation_dim",
    "max_abelian_dim",
    "max_abelian_subalgebra",
    "fingerprint",
    "linear_fingerprint",
    "split_detect",
    "is_ideal",
    "pencil_profile",
]

EXACT_MAX_DIM = 4


class DimensionTooLarge(ValueError):
    pass


def chi(A: Algebra) -> tuple[int, ...]:
    dims = [s.dim for s in lower_central_series(A)]
    dims += [dims[-1]] * (A.dim - len(dims))
    return tuple(dims[: A.dim])


def right_annihilator(A: Algebra) -> Subspace:
    """``{z : [x, z] = 0 for all x}``."""
    n, t = A.dim, A.table
    rows = [[t[i][j][k] for j in range(n)] for i in range(n) for k in range(n)]
    return Subspace.span(kernel(rows, n), n)


def left_annihilator(A: Algebra) -> Subspace:
    """``{x : [x, z] = 0 for all z}``."""
    n, t = A.dim, A.table
    rows = [[t[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    return Subspace.span(kernel(rows, n), n)


def center(A: Algebra) -> Subspace:
    return left_annihilator(A).intersect(right_annihilator(A))


def derivation_dim(A: Algebra) -> int:
    """Dimension of the space of maps ``D`` with ``D[x,y] = [Dx,y] + [x,Dy]``."""
    n, t = A.dim, A.table
    nn = n * n
    rows = []
    for i, j, l in iproduct(range(n), repeat=3):
        row = [ZERO] * nn
        for k in range(n):
            c = t[i][j][k]
            if c:
                row[k * n + l] += c
        for m in range(n):
            c = t[m][j][l]
            if c:
                row[i * n + m] -= c
            c = t[i][m][l]
            if c:
                row[j * n + m] -= c
        if any(row):
            rows.append(row)
    return len(kernel(rows, nn))


def max_abelian_subalgebra(A: Algebra) -> tuple[int, Subspace | None]:
    """Largest abelian subalgebra dimension, with a Q(i) witness when one exists.

    Every subspace has a unique RREF pivot pattern, so enumerating patterns
    and deciding solvability of ``[U, U] = 0`` over C is complete.
    """
    n = A.dim
    if n > EXACT_MAX_DIM:
        raise DimensionTooLarge(f"exact max-abelian search is limited to dim <= {EXACT_MAX_DIM}")
    st = ps.sym_table(A)
    for k in range(n, 0, -1):
        systems = []
        for piv in ps.pivot_patterns(n, k):
            rows, gens = ps.pattern_basis(piv, n, "u")
            eqs = []
            for a, b in iproduct(range(k), repeat=2):
                eqs.extend(ps.sym_mul(st, rows[a], rows[b]))
            # coordinate subspace first: cheap and usually enough
            at_zero = [sympy.expand(e.subs({g: 0 for g in gens})) for e in eqs]
            if all(e == 0 for e in at_zero):
                return k, _subspace_from(rows, {g: 0 for g in gens}, n)
            systems.append((rows, gens, eqs))
        for rows, gens, eqs in systems:
            if not gens:
                continue
            pt = ps.gaussian_point(eqs, gens)
            if pt is not None:
                return k, _subspace_from(rows, pt, n)
            if ps.has_solution(eqs, gens):
                return k, None
    return 0, Subspace.zero(n)


def max_abelian_dim(A: Algebra) -> int:
    return _max_abelian_cached(A)


@lru_cache(maxsize=4096)
def _max_abelian_cached(A: Algebra) -> int:
    return max_abelian_subalgebra(A)[0]


def _subspace_from(rows, point, n) -> Subspace:
    vecs = [tuple(ps.from_sympy(sympy.sympify(x).subs(point)) for x in row) for row in rows]
    return Subspace.span(vecs, n)


@dataclass(frozen=True)
class Fingerprint:
    chi: tuple[int, ...]
    dim_right_ann: int
    dim_left_ann: int
    dim_center: int
    dim_derivations: int
    max_abelian_dim: int | None
    is_lie: bool
    is_associative: bool

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["chi"] = list(self.chi)
        return d

    def first_difference(self, other: "Fingerprint"):
        """``(component, mine, theirs)`` for the first differing component."""
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if a is None or b is None:
                continue
            if a != b:
                return f.name, a, b
        return None

    def astuple(self):
        return astuple(self)


@lru_cache(maxsize=8192)
def linear_fingerprint(A: Algebra) -> Fingerprint:
    """All components except the polynomial-system one (``max_abelian_dim=None``)."""
    return Fingerprint(
        chi=chi(A),
        dim_right_ann=right_annihilator(A).dim,
        dim_left_ann=left_annihilator(A).dim,
        dim_center=center(A).dim,
        dim_derivations=derivation_dim(A),
        max_abelian_dim=None,
        is_lie=is_lie(A),
        is_associative=is_associative(A),
    )


def fingerprint(A: Algebra) -> Fingerprint:
    lin = linear_fingerprint(A)
    mab = max_abelian_dim(A) if A.dim <= EXACT_MAX_DIM else None
    return Fingerprint(**{**lin.__dict__, "max_abelian_dim": mab})


# two-step pencils ----------------------------------------------------------


def _sympy(x):
    return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(
        x.im.numerator, x.im.denominator)


def _root_pattern(M1, M2) -> tuple:
    """Multiplicities of the roots of ``det(s M1 + t M2)`` on the projective line.

    ``()`` means the determinant vanishes identically.
    """
    t = sympy.Symbol("t")
    d = len(M1)
    f = sympy.Matrix(d, d, lambda i, j: _sympy(M1[i][j]) + t * _sympy(M2[i][j])).det()
    poly = sympy.Poly(sympy.expand(f), t, domain=sympy.QQ_I)
    if poly.is_zero:
        return ()
    mults = [e for fac, e in poly.sqf_list()[1] for _ in range(fac.degree())]
    if poly.degree() < d:
        mults.append(d - poly.degree())
    return tuple(sorted(mults))


@lru_cache(maxsize=4096)
def pencil_profile(A: Algebra):
    """Invariants of ``L/L^2 x L/L^2 -> L^2`` for algebras with ``L^2`` central.

    For each of the product, its symmetric part and its antisymmetric part:
    the rank when ``dim L^2 = 1``, and the root multiplicities of the
    determinant pencil when ``dim L^2 = 2``. None if ``L^2`` is not central
    or has another dimension.
    """
    n = A.dim
    L2 = lower_central_series(A)[1]
    m = L2.dim
    if m not in (1, 2) or not center(A).contains_subspace(L2):
        return None
    comp = []
    for i in range(n):
        e = basis_vector(n, i)
        if rank(list(L2.basis) + comp + [e]) > m + len(comp):
            comp.append(e)
    d = len(comp)
    Finv = inverse(tuple(comp) + tuple(L2.basis))
    prod = [[vec_mat(_mul(A.table, n, u, v), Finv)[d:] for v in comp] for u in comp]
    parts = []
    for sign in (0, 1, -1):
        mats = [[[prod[i][j][k] + sign * prod[j][i][k] for j in range(d)] for i in range(d)]
                for k in range(m)]
        if m == 1:
            parts.append(rank(mats[0], d))
        else:
            parts.append(_root_pattern(*mats))
    return tuple(parts)


# splitting ---------------------------------------------------------------


@dataclass(frozen=True)
class SplitReport:
    split: bool
    ideals: tuple[Subspace, Subspace] | None = None
    exhaustive: bool = True
    note: str = ""

    @property
    def verdict(self) -> str:
        return "Split" if self.split else "NoSplitFound"


def is_ideal(A: Algebra, U: Subspace) -> bool:
    L = Subspace.whole(A.dim)
    return (U.contains_subspace(subspace_product(A, U, L))
            and U.contains_subspace(subspace_product(A, L, U)))


def _verified(A: Algebra, I: Subspace, J: Subspace) -> bool:
    n = A.dim
    return (0 < I.dim < n and I.dim + J.dim == n and (I + J).dim == n
            and is_ideal(A, I) and is_ideal(A, J))


def _central_summand(A: Algebra, Z: Subspace, L2: Subspace):
    """If some central ``z`` lies outside ``L^2``, span{z} is a direct summand."""
    n = A.dim
    z = next((v for v in Z.basis if not L2.contains(v)), None)
    if z is None:
        return None
    basis = list(L2.basis)
    span = Subspace.span(basis + [z], n)
    others = []
    for i in range(n):
        e = basis_vector(n, i)
        if not span.contains(e):
            others.append(e)
            span = span + Subspace.span([e], n)
    I = Subspace.span([z], n)
    J = Subspace.span(basis + others, n)
    return I, J


def _double_n2_split(A: Algebra, L2: Subspace):
    """Search for ``L = N2 + N2`` when ``L^2`` is 2-dim and central.

    Returns ``(solvable_over_C, witness_or_None)``.
    """
    n = A.dim
    comp = []
    span = L2
    for i in range(n):
        e = basis_vector(n, i)
        if not span.contains(e):
            comp.append(e)
            span = span + Subspace.span([e], n)
    V1, V2 = comp
    w = sympy.Symbol("w")
    st = ps.sym_table(A)
    sv1 = [ps.to_sympy(x) for x in V1]
    sv2 = [ps.to_sympy(x) for x in V2]
    piv = L2.pivots()
    s, t = sympy.symbols("s t")
    found_any = False
    for (a1, b1), g1 in (((1, s), [s]), ((0, 1), [])):
        for (a2, b2), g2 in (((1, t), [t]), ((0, 1), [])):
            x1 = [a1 * p + b1 * q for p, q in zip(sv1, sv2)]
            x2 = [a2 * p + b2 * q for p, q in zip(sv1, sv2)]
            y1 = ps.sym_mul(st, x1, x1)
            y2 = ps.sym_mul(st, x2, x2)
            eqs = ps.sym_mul(st, x1, x2) + ps.sym_mul(st, x2, x1)
            d = y1[piv[0]] * y2[piv[1]] - y1[piv[1]] * y2[piv[0]]
            eqs.append(d * w - 1)
            gens = g1 + g2 + [w]
            pt = ps.gaussian_point(eqs, gens)
            if pt is not None:
                v1 = tuple(ps.from_sympy(sympy.sympify(c).subs(pt)) for c in x1)
                v2 = tuple(ps.from_sympy(sympy.sympify(c).subs(pt)) for c in x2)
                I = Subspace.span([v1, _mul(A.table, n, v1, v1)], n)
                J = Subspace.span([v2, _mul(A.table, n, v2, v2)], n)
                if _verified(A, I, J):
                    return True, (I, J)
            elif ps.has_solution(eqs, gens):
                found_any = True
    return found_any, None


def _split_structural(A: Algebra) -> SplitReport:
    """Nilpotent algebras of dim <= 4.

    A 1-dim summand exists iff the center is not inside ``L^2``; otherwise
    the only possible decomposition is into two copies of the 2-dim
    nulfiliform algebra, which forces ``chi = (4, 2, 0, 0)``.
    """
    n = A.dim
    series = lower_central_series(A)
    L2 = series[1] if len(series) > 1 else Subspace.zero(n)
    Z = center(A)
    pair = _central_summand(A, Z, L2)
    if pair is not None:
        return SplitReport(True, pair)
    if n == 4 and chi(A) == (4, 2, 0, 0):
        found, pair = _double_n2_split(A, L2)
        if pair is not None:
            return SplitReport(True, pair)
        if found:
            return SplitReport(True, None, note="split over C; no Gaussian-rational witness found")
    return SplitReport(False, exhaustive=True)


def _split_enumerate(A: Algebra) -> SplitReport:
    """Enumerate RREF patterns for an ideal pair (I, J) and solve."""
    n = A.dim
    st = ps.sym_table(A)
    E = [[sympy.Integer(1) if k == i else sympy.Integer(0) for k in range(n)] for i in range(n)]
    w = sympy.Symbol("w")
    pending = False
    for k in range(1, n // 2 + 1):
        for piv_i in ps.pivot_patterns(n, k):
            rows_i, gens_i = ps.pattern_basis(piv_i, n, "a")
            for piv_j in ps.pivot_patterns(n, n - k):
                rows_j, gens_j = ps.pattern_basis(piv_j, n, "b")
                eqs = []
                for rows, piv in ((rows_i, piv_i), (rows_j, piv_j)):
                    for u in rows:
                        for e in E:
                            eqs += ps.in_rowspace_conditions(ps.sym_mul(st, u, e), rows, piv)
                            eqs += ps.in_rowspace_conditions(ps.sym_mul(st, e, u), rows, piv)
                d = sympy.Matrix(rows_i + rows_j).det()
                eqs.append(sympy.expand(d * w - 1))
                gens = gens_i + gens_j + [w]
                pt = ps.gaussian_point(eqs, gens)
                if pt is not None:
                    I = _subspace_from(rows_i, pt, n)
                    J = _subspace_from(rows_j, pt, n)
                    if _verified(A, I, J):
                        return SplitReport(True, (I, J))
                if ps.has_solution(eqs, gens):
                    pending = True
    if pending:
        return SplitReport(True, None, note="split over C; no Gaussian-rational witness found")
    return SplitReport(False, exhaustive=True)


def split_detect(A: Algebra, method: str = "auto") -> SplitReport:
    """Look for two complementary proper ideals.

    ``method="enumerate"`` forces the pattern enumeration even where the
    structural shortcut for nilpotent algebras applies.
    """
    n = A.dim
    if n == 1:
        return SplitReport(False, exhaustive=True)
    if n > EXACT_MAX_DIM:
        series = lower_central_series(A)
        L2 = series[1] if len(series) > 1 else Subspace.zero(n)
        pair = _central_summand(A, center(A), L2)
        if pair is not None:
            return SplitReport(True, pair)
        return SplitReport(False, exhaustive=False)
    if method == "auto" and is_nilpotent(A):
        return _split_structural(A)
    return _split_enumerate(A)
