"""Coordinates in which an isomorphism search is small.

A source algebra is rewritten in a basis of generators and product words, so
a map out of it is fixed by the images of the generators. Those images are
restricted further by subspaces that every isomorphism must respect.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core import Algebra, _mul, basis_vector, change_basis, subspace_product
from .linalg import Subspace, inverse, kernel, matmul, rank
from .scalar import ONE, ZERO, Scalar

# family members used to decide which subspaces do not move with the parameter
_PROBE_PARAMS = (Fraction(7, 3), Fraction(-5, 2), Fraction(11, 7))


def table_height(A: Algebra) -> int:
    h = 1
    for row in A.table:
        for vec in row:
            for c in vec:
                if c:
                    h = max(h, c.height())
    return h


def pencil_member(B0: Algebra, B1: Algebra | None, p) -> Algebra:
    if B1 is None:
        return B0
    n = B0.dim
    table = tuple(tuple(tuple(B0.table[i][j][k] + p * B1.table[i][j][k] for k in range(n))
                        for j in range(n)) for i in range(n))
    return Algebra(n, table)


# word bases ------------------------------------------------------------------


def _square(A: Algebra) -> Subspace:
    W = Subspace.whole(A.dim)
    return subspace_product(A, W, W)


def _generator_sets(A: Algebra):
    """Sets of basis indices whose span complements ``[A, A]``."""
    n = A.dim
    sq = _square(A)
    for idx in combinations(range(n), n - sq.dim):
        if (sq + Subspace.span([basis_vector(n, i) for i in idx], n)).dim == n:
            yield idx


def _word_bases(A: Algebra, gens, limit):
    n = A.dim
    found = []

    def grow(vecs, words):
        if len(found) >= limit:
            return
        if len(vecs) == n:
            found.append((tuple(words), tuple(vecs)))
            return
        for a in range(len(vecs)):
            for b in range(len(vecs)):
                v = _mul(A.table, n, vecs[a], vecs[b])
                if rank(list(vecs) + [v], n) > len(vecs):
                    grow(vecs + [v], words + [("p", a, b)])

    grow([basis_vector(n, i) for i in gens], [("g", r) for r in range(len(gens))])
    return found


@lru_cache(maxsize=256)
def word_basis(A: Algebra):
    """Generators and product words spanning ``A``.

    Returns ``(words, V)`` where row ``r`` of ``V`` is the ``r``-th word
    vector and ``words[r]`` is ``("g", r)`` or ``("p", a, b)``; None when the
    generators do not generate (possible only for non-nilpotent input).
    """
    for gens in _generator_sets(A):
        for words, vecs in _word_bases(A, gens, 1):
            return words, vecs
    return None


# characteristic subspaces ------------------------------------------------------


def _left_matrix(A: Algebra, w):
    """Rows ``[e_i, w]``."""
    n = A.dim
    return [_mul(A.table, n, basis_vector(n, i), w) for i in range(n)]


def _right_matrix(A: Algebra, w):
    """Rows ``[w, e_i]``."""
    n = A.dim
    return [_mul(A.table, n, w, basis_vector(n, i)) for i in range(n)]


def _relative(A: Algebra, U: Subspace, over: Subspace, kind: str) -> Subspace:
    """``{v : op(v, w) in U for all w in over}`` for a bilinear ``op``."""
    n = A.dim
    ann = kernel(list(U.basis), n)
    rows = []
    for w in over.basis:
        L, R = _left_matrix(A, w), _right_matrix(A, w)
        if kind == "left":
            M = L
        elif kind == "right":
            M = R
        elif kind == "sym":
            M = [tuple(a + b for a, b in zip(x, y)) for x, y in zip(L, R)]
        else:
            M = [tuple(a - b for a, b in zip(x, y)) for x, y in zip(L, R)]
        for phi in ann:
            rows.append(tuple(sum((M[i][k] * phi[k] for k in range(n)), ZERO) for i in range(n)))
    return Subspace.span(kernel(rows, n), n)


@lru_cache(maxsize=256)
def characteristic_flags(A: Algebra) -> tuple:
    """Subspaces every isomorphism must respect, in a fixed construction order."""
    n = A.dim
    W, Z = Subspace.whole(n), Subspace.zero(n)
    L2 = subspace_product(A, W, W)
    L3 = subspace_product(A, L2, W)
    out = []
    for U in (Z, L3):
        for over in (W, L2):
            for kind in ("left", "right", "sym", "skew"):
                out.append(_relative(A, U, over, kind))
    return tuple(out)


@lru_cache(maxsize=256)
def quotient_frame(B: Algebra):
    """``(Q, E, K)``: ``Q`` kills ``[B, B]``, ``E Q = I`` and ``K`` spans ``[B, B]``."""
    n = B.dim
    sq = _square(B)
    piv = sq.pivots()
    free = [c for c in range(n) if c not in piv]
    Q = []
    for k in range(n):
        if k in piv:
            row = sq.basis[piv.index(k)]
            Q.append(tuple(-row[c] for c in free))
        else:
            Q.append(tuple(ONE if c == k else ZERO for c in free))
    E = tuple(basis_vector(n, c) for c in free)
    return tuple(Q), E, sq.basis


def _project(S: Subspace, Q, g) -> Subspace:
    rows = [tuple(sum((v[k] * Q[k][c] for k in range(len(v))), ZERO) for c in range(g))
            for v in S.basis]
    return Subspace.span(rows, g)


def _first_coords(S: Subspace, g) -> Subspace:
    return Subspace.span([v[:g] for v in S.basis], g)


def admissible_quotient_maps(AW: Algebra, g: int, targets) -> list | None:
    """Basis of ``g x g`` matrices ``P`` respecting the flags of every target.

    ``AW`` is in word basis, so its quotient coordinates are the first ``g``.
    Flags that move across ``targets`` (family members) are ignored. None means
    a flag dimension disagrees, so no isomorphism exists.
    """
    fa = characteristic_flags(AW)
    projected = []
    for B in targets:
        Q, _, _ = quotient_frame(B)
        projected.append([_project(S, Q, g) for S in characteristic_flags(B)])
    rows = []
    for idx, SA in enumerate(fa):
        SB = projected[0][idx]
        if any(other[idx] != SB for other in projected[1:]):
            continue
        SAV = _first_coords(SA, g)
        if SAV.dim != SB.dim:
            return None
        ann = kernel(list(SB.basis), g)
        for u in SAV.basis:
            for phi in ann:
                rows.append(tuple(u[r] * phi[c] for r in range(g) for c in range(g)))
    basis = kernel(rows, g * g)
    return [tuple(tuple(b[r * g + c] for c in range(g)) for r in range(g)) for b in basis]



@dataclass(frozen=True)
class Frame:
    """Search coordinates for maps from ``source`` into a target pencil.

    ``words``/``Vinv`` rebuild a full matrix from generator images; the
    images are ``X = reshape(L u)`` where the first ``n_theta`` columns of
    ``L`` span the admissible quotient maps and the rest span the square of
    the target. ``Q`` projects target coordinates onto the quotient.
    """

    source: Algebra
    words: tuple
    Vinv: tuple
    AW: Algebra
    g: int
    Q: tuple
    L: tuple
    n_theta: int

    @property
    def n_params(self) -> int:
        return len(self.L[0]) if self.L else 0

    def images(self, u) -> list:
        n, g = self.source.dim, self.g
        flat = [sum((self.L[i][q] * u[q] for q in range(len(u)) if u[q]), ZERO)
                for i in range(g * n)]
        return [tuple(flat[r * n: (r + 1) * n]) for r in range(g)]

    def complete(self, B: Algebra, X) -> tuple:
        """Exact matrix ``source -> B`` from generator images."""
        n = B.dim
        imgs = []
        for w in self.words:
            imgs.append(tuple(X[w[1]]) if w[0] == "g" else _mul(B.table, n, imgs[w[1]], imgs[w[2]]))
        return matmul(self.Vinv, tuple(imgs))


@lru_cache(maxsize=256)
def frame(A: Algebra, B0: Algebra, B1: Algebra | None = None) -> Frame | None:
    """Frame for ``A -> B0 + p B1`` or None when no isomorphism can exist."""
    wb = word_basis(A)
    if wb is None:
        return None
    words, V = wb
    AW = change_basis(A, V)
    g = sum(1 for w in words if w[0] == "g")
    probe = [pencil_member(B0, B1, Scalar(q)) for q in _PROBE_PARAMS] if B1 is not None else [B0]
    Q, E, K = quotient_frame(probe[0])
    if len(Q[0]) != g:
        return None
    Ps = admissible_quotient_maps(AW, g, probe)
    if not Ps:
        return None
    n = A.dim
    cols = []
    for P in Ps:
        PE = matmul(P, E)
        cols.append([PE[r][c] for r in range(g) for c in range(n)])
    for r in range(g):
        for j in range(len(K)):
            cols.append([K[j][c] if rr == r else ZERO for rr in range(g) for c in range(n)])
    L = tuple(tuple(col[i] for col in cols) for i in range(g * n))
    return Frame(A, words, inverse(V), AW, g, Q, L, len(Ps))
