"""Exact certificate search over the Gaussian rationals.

The homomorphism equations are polynomials in the frame parameters ``u``
(and the pencil parameter ``p`` for families), together with
``s det(P) - 1``, which removes singular solutions. The solver alternates
three steps:

* propagate: solve every equation that is linear, branching on the rational
  roots of univariate ones;
* eliminate: replace a stuck system by its reduced lex Groebner basis, which
  exposes hidden linear or univariate consequences;
* fix: give one parameter a small value, or tie it to another parameter by a
  small ratio, and backtrack when the choice leads to an irrational point.

Every leaf is verified exactly, so a returned matrix is always a certificate.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy import QQ, QQ_I, Poly
from sympy.polys.groebnertools import groebner
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyRing, ring

from .core import Algebra, is_homomorphism
from .frames import Frame, frame, pencil_member
from .linalg import SingularMatrix, det
from .scalar import Scalar

log = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 300
_FIX_VALUES = (1, 2)
_RATIOS = (2, -1, 3)
_IDLE_VALUES = (1, 2, 3, -1, -2)


class _Exhausted(Exception):
    pass


class _Inconsistent(Exception):
    pass


def _q(x: Scalar):
    return QQ_I(QQ(x.re.numerator, x.re.denominator), QQ(x.im.numerator, x.im.denominator))


def _scalar(v) -> Scalar:
    return Scalar(Fraction(int(v.x.numerator), int(v.x.denominator)),
                  Fraction(int(v.y.numerator), int(v.y.denominator)))


def _det(M):
    if len(M) == 1:
        return M[0][0]
    out = M[0][0].ring.zero
    for c in range(len(M)):
        if M[0][c]:
            minor = [row[:c] + row[c + 1:] for row in M[1:]]
            out += (-1) ** c * M[0][c] * _det(minor)
    return out


def _support(f) -> set:
    out = set()
    for m in f.itermonoms():
        for k, e in enumerate(m):
            if e:
                out.add(k)
    return out


def _total_degree(f) -> int:
    return max(sum(m) for m in f.itermonoms())


class _System:
    """Ring, unknowns and equations for maps ``A -> B0 + p B1``.

    Generators are ordered ``s, [p,] u_0, ...``; ``s`` comes first so that a
    lex basis eliminates it, which discards singular maps.
    """

    def __init__(self, fr: Frame, B0: Algebra, B1: Algebra | None):
        n, g = fr.source.dim, fr.g
        names = ["s"] + (["p"] if B1 is not None else []) + [f"u{k}" for k in range(fr.n_params)]
        self.ring, *gens = ring(",".join(names), QQ_I)
        self.gens = gens
        self.first_u = 2 if B1 is not None else 1
        self.n_theta = fr.n_theta
        R = self.ring
        us = gens[self.first_u:]
        X = [[sum((_q(fr.L[r * n + c][k]) * us[k] for k in range(fr.n_params) if fr.L[r * n + c][k]),
                  R.zero) for c in range(n)] for r in range(g)]
        tb = [[[_q(c) for c in B0.table[i][j]] for j in range(n)] for i in range(n)]
        if B1 is not None:
            p = gens[1]
            tb = [[[tb[i][j][k] + _q(B1.table[i][j][k]) * p for k in range(n)] for j in range(n)]
                  for i in range(n)]
        self._tb = tb

        T = []
        for w in fr.words:
            T.append(X[w[1]] if w[0] == "g" else self._mul(T[w[1]], T[w[2]]))
        self.rows = T
        defining = {(w[1], w[2]) for w in fr.words if w[0] == "p"}
        ta = fr.AW.table
        eqs = set()
        for i in range(n):
            for j in range(n):
                if (i, j) in defining:
                    continue
                rhs = self._mul(T[i], T[j])
                for l in range(n):
                    lhs = sum((_q(ta[i][j][k]) * T[k][l] for k in range(n) if ta[i][j][k]), R.zero)
                    if lhs - rhs[l]:
                        eqs.add(lhs - rhs[l])
        P = [[sum((X[r][k] * _q(fr.Q[k][c]) for k in range(n) if fr.Q[k][c]), R.zero)
              for c in range(g)] for r in range(g)]
        eqs.add(gens[0] * _det(P) - 1)
        self.equations = list(eqs)

    def _mul(self, x, y):
        n = len(x)
        out = [self.ring.zero] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                xy = None
                for k in range(n):
                    c = self._tb[i][j][k]
                    if c:
                        if xy is None:
                            xy = x[i] * y[j]
                        out[k] += xy * c
        return out


class _Solver:
    def __init__(self, system: _System, accept, node_limit: int):
        self.sys = system
        self.gens = system.gens
        self.accept = accept
        self.node_limit = node_limit
        self.nodes = 0
        self._rings = {}
        self._bases = {}
        self._factors = {}

    # substitution and propagation

    def _substitute(self, eqs, assign, k, val):
        x = self.gens[k]
        if val.is_ground:
            c = val.LC if val else QQ_I(0)
            eqs = [e.subs(x, c) for e in eqs]
            for key in assign:
                assign[key] = assign[key].subs(x, c)
        else:
            eqs = [e.compose(x, val) for e in eqs]
            for key in assign:
                assign[key] = assign[key].compose(x, val)
        assign[k] = val
        return eqs

    def _propagate(self, eqs, assign):
        R = self.sys.ring
        while True:
            eqs = [f for f in eqs if f]
            if any(f.is_ground for f in eqs):
                raise _Inconsistent
            sups = [(f, _support(f)) for f in eqs]
            uni = [(f, next(iter(sp))) for f, sp in sups if len(sp) == 1]
            lin = [(f, k) for f, k in uni if f.degree(self.gens[k]) == 1]
            if lin:
                f, k = lin[0]
                eqs = self._substitute(eqs, assign, k, R(-f.coeff(1) / f.coeff(self.gens[k])))
                continue
            if uni:
                return eqs, uni[0]
            lin = [(f, sp) for f, sp in sups if _total_degree(f) <= 1]
            if not lin:
                return eqs, None
            cols = sorted(set().union(*(sp for _, sp in lin)))
            M = [[f.coeff(self.gens[k]) for k in cols] + [-f.coeff(1)] for f, _ in lin]
            rref, piv = DomainMatrix(M, (len(M), len(cols) + 1), QQ_I).rref()
            if len(cols) in piv:
                raise _Inconsistent
            rows = rref.rep.to_ddm()
            for r, c in enumerate(piv):
                expr = R(rows[r][-1])
                for c2 in range(len(cols)):
                    if c2 != c and c2 not in piv and rows[r][c2]:
                        expr -= rows[r][c2] * self.gens[cols[c2]]
                eqs = self._substitute(eqs, assign, cols[c], expr)

    # search

    def run(self, eqs, assign):
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise _Exhausted
        assign = dict(assign)
        try:
            eqs, uni = self._propagate(eqs, assign)
        except _Inconsistent:
            return None
        if uni is not None:
            return self._branch_roots(eqs, assign, *uni)
        R = self.sys.ring
        unknown = [k for k in range(1, len(self.gens)) if k not in assign]
        if not unknown:
            return self.accept(assign)
        active = set().union(*(_support(f) for f in eqs)) if eqs else set()
        idle = [k for k in unknown if k not in active]
        if idle:
            return self._fill_idle(eqs, assign, idle)
        act = sorted(active)
        G, zero_dim = self._basis(eqs, act, grevlex)
        if len(G) == 1 and G[0].is_ground:
            return None
        if set(G) != set(eqs):
            return self.run(G, assign)
        if zero_dim:
            f = self._basis(G, act, lex)[0][-1]
            return self._branch_roots(G, assign, f, max(_support(f)))
        theta_end = self.sys.first_u + self.sys.n_theta
        act = sorted(k for k in active if k >= self.sys.first_u)
        # unknowns shared by many equations first
        count = {k: sum(1 for f in eqs if f.degree(self.gens[k]) > 0) for k in act}
        act = sorted(act, key=lambda k: (-count[k], k))
        theta = [k for k in act if k < theta_end]
        rest = [k for k in act if k >= theta_end]
        moves = self._factor_moves(eqs)
        moves += [(k, R(QQ_I(v))) for k in theta for v in _FIX_VALUES]
        moves += [(k, QQ_I(c) * self.gens[i]) for k in theta for i in theta if i != k for c in _RATIOS]
        moves += [(k, R(QQ_I(v))) for k in rest for v in (0, 1)]
        for k, val in moves:
            a2 = dict(assign)
            found = self.run(self._substitute(eqs, a2, k, val), a2)
            if found is not None:
                return found
        return None

    def _basis(self, eqs, act, order):
        """Reduced Groebner basis computed in the ring of the active unknowns.

        Returns ``(basis in the full ring, zero-dimensional?)``.
        """
        memo_key = (frozenset(eqs), tuple(act), order)
        if memo_key in self._bases:
            return self._bases[memo_key]
        key = (tuple(act), order)
        sub = self._rings.get(key)
        if sub is None:
            sub = PolyRing([self.sys.ring.symbols[k] for k in act], QQ_I, order)
            self._rings[key] = sub
        down = [sub.from_dict({tuple(m[k] for k in act): c for m, c in f.iterterms()}) for f in eqs]
        G = groebner(down, sub)
        lead = [g.LM for g in G]
        zero_dim = all(any(m[j] and sum(m) == m[j] for m in lead) for j in range(len(act)))
        full = len(self.gens)
        up = []
        for g in G:
            terms = {}
            for m, c in g.iterterms():
                e = [0] * full
                for j, k in enumerate(act):
                    e[k] = m[j]
                terms[tuple(e)] = c
            up.append(self.sys.ring.from_dict(terms))
        self._bases[memo_key] = self._bases[(frozenset(up), tuple(act), order)] = (up, zero_dim)
        return up, zero_dim

    def _factor_moves(self, eqs):
        """Set a linear factor of a quadratic form to a constant.

        Over Q(i) a binary form like ``x^2 + y^2`` splits, and fixing one
        factor makes the equation linear in what is left.
        """
        moves = []
        seen = set()
        first = self.sys.first_u
        for f in eqs:
            if _total_degree(f) != 2:
                continue
            quad = f.ring.from_dict({m: c for m, c in f.iterterms() if sum(m) == 2})
            if any(m[k] for m in quad.itermonoms() for k in range(first)):
                continue
            for fac in self._linear_factors(quad):
                if _total_degree(fac) != 1 or fac in seen:
                    continue
                seen.add(fac)
                k = max(_support(fac))
                c = fac.coeff(self.gens[k])
                rest = fac - c * self.gens[k]
                for v in _FIX_VALUES:
                    moves.append((k, (self.sys.ring(QQ_I(v)) - rest) * (QQ_I(1) / c)))
        return moves

    def _linear_factors(self, quad):
        got = self._factors.get(quad)
        if got is None:
            got = []
            # a quadratic form splits into linear factors only if its rank is at most 2
            if _form_rank(quad) <= 2:
                got = [fac for fac, _ in quad.factor_list()[1] if _total_degree(fac) == 1]
            self._factors[quad] = got
        return got

    def _branch_roots(self, eqs, assign, f, k):
        R = self.sys.ring
        for r in _rational_roots(f, k):
            a2 = dict(assign)
            found = self.run(self._substitute(eqs, a2, k, R(r)), a2)
            if found is not None:
                return found
        return None

    def _fill_idle(self, eqs, assign, idle):
        """Unconstrained parameters: square parts get 0, quotient parts small values."""
        R = self.sys.ring
        theta_end = self.sys.first_u + self.sys.n_theta
        rng = random.Random(len(idle))
        for trial in range(4):
            a2, e2 = dict(assign), eqs
            for k in idle:
                if k >= theta_end:
                    v = 0
                else:
                    v = rng.choice(_IDLE_VALUES) if trial else 1
                e2 = self._substitute(e2, a2, k, R(QQ_I(v)))
            found = self.run(e2, a2)
            if found is not None:
                return found
        return None


def _form_rank(quad) -> int:
    idx = sorted(set().union(*(_support_monom(m) for m in quad.itermonoms())))
    pos = {k: j for j, k in enumerate(idx)}
    M = [[QQ_I(0)] * len(idx) for _ in idx]
    for m, c in quad.iterterms():
        ks = [k for k in idx if m[k]]
        if len(ks) == 1:
            M[pos[ks[0]]][pos[ks[0]]] += c
        else:
            a, b = pos[ks[0]], pos[ks[1]]
            M[a][b] += c / 2
            M[b][a] += c / 2
    return DomainMatrix(M, (len(idx), len(idx)), QQ_I).rank()


def _support_monom(m):
    return {k for k, e in enumerate(m) if e}


def _rational_roots(f, k):
    coeffs = {}
    for m, c in f.iterterms():
        coeffs[m[k]] = c
    t = sympy.Symbol("t")
    poly = Poly([coeffs.get(e, QQ_I(0)) for e in range(max(coeffs), -1, -1)], t, domain=QQ_I)
    roots = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            roots.append(QQ_I.convert(-b / a))
    return roots


@dataclass(frozen=True)
class ExactResult:
    matrix: tuple | None
    param: Scalar | None
    nodes: int


def exact_certificate(A: Algebra, B0: Algebra, B1: Algebra | None = None,
                      node_limit: int = DEFAULT_NODE_LIMIT) -> ExactResult:
    """Search for ``T: A -> B0 + p B1`` with ``T`` and ``p`` Gaussian rational.

    ``matrix`` is None when the search is exhausted or proves that no
    isomorphism into the pencil exists over the frame.
    """
    if node_limit <= 0:
        return ExactResult(None, None, 0)
    fr = frame(A, B0, B1)
    if fr is None:
        return ExactResult(None, None, 0)
    system = _System(fr, B0, B1)
    found: dict = {}

    def accept(assign):
        values = {}
        for k in range(1, len(system.gens)):
            v = assign[k]
            if v and not v.is_ground:
                return None
            values[k] = _scalar(v.LC) if v else Scalar(0)
        p = values[1] if B1 is not None else None
        target = pencil_member(B0, B1, p)
        u = [values[k] for k in range(system.first_u, len(system.gens))]
        try:
            T = fr.complete(target, fr.images(u))
        except (SingularMatrix, ZeroDivisionError):
            return None
        if not det(T) or not is_homomorphism(A, target, T):
            return None
        found["T"], found["p"] = T, p
        return assign

    solver = _Solver(system, accept, node_limit)
    try:
        solver.run(system.equations, {})
    except _Exhausted:
        log.debug("exact search exhausted after %d nodes", solver.nodes)
    return ExactResult(found.get("T"), found.get("p"), solver.nodes)
