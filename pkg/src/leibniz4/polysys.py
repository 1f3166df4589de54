"""Tiny polynomial systems over Q(i).

Solvability over C is decided with a Groebner basis (the system is
inconsistent exactly when the basis is ``[1]``). When a Gaussian-rational
point is wanted, a lex basis is back-substituted one variable at a time.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy
from sympy import QQ_I, Poly, factor_list, groebner

from .scalar import Scalar

__all__ = [
    "to_sympy",
    "from_sympy",
    "sym_table",
    "sym_mul",
    "pattern_basis",
    "pivot_patterns",
    "in_rowspace_conditions",
    "has_solution",
    "gaussian_point",
]

_FREE_TRIALS = (0, 1, -1, 2, -2, 3, 5)


def to_sympy(s: Scalar):
    re = sympy.Rational(s.re.numerator, s.re.denominator)
    if not s.im:
        return re
    return re + sympy.I * sympy.Rational(s.im.numerator, s.im.denominator)


def from_sympy(v) -> Scalar:
    v = sympy.nsimplify(v) if not isinstance(v, sympy.Basic) else v
    re, im = sympy.re(v), sympy.im(v)
    if not (re.is_Rational and im.is_Rational):
        raise ValueError(f"{v} is not a Gaussian rational")
    return Scalar(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def sym_table(A):
    n = A.dim
    return [[[to_sympy(c) for c in A.table[i][j]] for j in range(n)] for i in range(n)]


def sym_mul(st, x, y):
    n = len(st)
    out = [sympy.Integer(0)] * n
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            f = x[i] * y[j]
            for k, c in enumerate(st[i][j]):
                if c != 0:
                    out[k] += f * c
    return [sympy.expand(v) for v in out]


def pivot_patterns(n: int, k: int):
    return combinations(range(n), k)


def pattern_basis(pivots, n: int, prefix: str):
    """RREF rows with the given pivot columns; free entries become symbols."""
    rows, gens = [], []
    pivset = set(pivots)
    for r, p in enumerate(pivots):
        row = [sympy.Integer(0)] * n
        row[p] = sympy.Integer(1)
        for c in range(p + 1, n):
            if c not in pivset:
                s = sympy.Symbol(f"{prefix}{r}_{c}")
                row[c] = s
                gens.append(s)
        rows.append(row)
    return rows, gens


def in_rowspace_conditions(w, rows, pivots):
    """Polynomials vanishing iff ``w`` lies in the span of RREF ``rows``."""
    resid = list(w)
    for row, p in zip(rows, pivots):
        coef = w[p]
        if coef != 0:
            resid = [a - coef * b for a, b in zip(resid, row)]
    return [sympy.expand(v) for v in resid]


def _clean(polys):
    out = []
    for p in polys:
        p = sympy.expand(p)
        if p != 0:
            out.append(p)
    return out


def has_solution(polys, gens) -> bool:
    polys = _clean(polys)
    if not polys:
        return True
    if not gens:
        return False
    if any(p.is_number for p in polys):
        return False
    G = groebner(polys, *gens, order="grevlex", domain=QQ_I)
    return list(G.exprs) != [1]


def _gaussian_roots(expr, var):
    poly = Poly(expr, var, domain=QQ_I)
    roots = []
    for fac, _ in factor_list(poly)[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            roots.append(sympy.expand(-sympy.sympify(b) / sympy.sympify(a)))
    return roots


def gaussian_point(polys, gens):
    """A common zero with coordinates in Q(i), or None if none was found.

    None does not prove the system has no complex solution; use
    :func:`has_solution` for that.
    """
    polys = _clean(polys)
    gens = list(gens)
    if not gens:
        return {} if not polys else None
    if any(p.is_number for p in polys):
        return None
    if not polys:
        return {g: sympy.Integer(0) for g in gens}
    G = list(groebner(polys, *gens, order="lex", domain=QQ_I).exprs)
    if G == [1]:
        return None
    last = gens[-1]
    uni = [g for g in G if g.free_symbols <= {last} and g.free_symbols]
    if uni:
        candidates = _gaussian_roots(uni[0], last)
    else:
        candidates = [sympy.Integer(v) for v in _FREE_TRIALS]
    for v in candidates:
        rest = gaussian_point([g.subs(last, v) for g in G], gens[:-1])
        if rest is not None:
            rest[last] = v
            return rest
    return None
