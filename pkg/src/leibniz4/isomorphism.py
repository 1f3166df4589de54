"""Isomorphism certificates, certificate search, and the 4-dimensional classifier.

Every isomorphism reported here has been verified in exact arithmetic, and
non-isomorphism is only ever claimed from a differing invariant. A search that
runs out of budget says nothing about the algebras.

Certificates are searched for in three ways:

* ``exact``: polynomial elimination over Q(i) on the reduced system of
  :mod:`leibniz4.exact` (default);
* ``numeric``: Levenberg-Marquardt restarts with rational reconstruction
  (:mod:`leibniz4.numeric`);
* ``auto``: exact first, numeric restarts with whatever budget is left.

Algebras whose product is a symmetric form into a central line are matched
directly by form congruence (:mod:`leibniz4.forms`) before either search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import numeric
from .catalog import CATALOG, FAMILIES, ClassId, canonical_r10, instantiate, r16_alpha
from .core import Algebra, from_products, is_homomorphism, is_leibniz, is_lie, is_nilpotent
from .exact import exact_certificate
from .forms import symmetric_form_certificate
from .invariants import Fingerprint, fingerprint, linear_fingerprint, pencil_profile, split_detect
from .linalg import DimensionMismatch, SingularMatrix, det, identity, inverse, matmul
from .scalar import ONE, ZERO, I, Scalar, as_scalar

__all__ = [
    "Certificate",
    "Isomorphic",
    "NonIsomorphic",
    "Undecided",
    "SearchFailure",
    "PreconditionFailed",
    "Unclassified",
    "ClassificationResult",
    "SearchConfig",
    "DEFAULT_BUDGET",
    "DEFAULT_SEED",
    "verify_isomorphism",
    "find_isomorphism",
    "distinguish",
    "classify4",
    "shortlist",
    "family_special_values",
]

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200
DEFAULT_SEED = 20240101
METHODS = ("exact", "numeric", "auto")


class SearchFailure(RuntimeError):
    def __init__(self, message, restarts=0, best_residual=float("inf")):
        super().__init__(message)
        self.restarts = restarts
        self.best_residual = best_residual


class PreconditionFailed(ValueError):
    def __init__(self, hypothesis: str, detail: str = ""):
        super().__init__(f"hypothesis violated: {hypothesis}" + (f" ({detail})" if detail else ""))
        self.hypothesis = hypothesis
        self.detail = detail


class Unclassified(SearchFailure):
    pass


def _as_square(T, n):
    T = tuple(tuple(as_scalar(x) for x in row) for row in T)
    if len(T) != n or any(len(r) != n for r in T):
        raise DimensionMismatch(f"certificate must be {n}x{n}")
    return T


def verify_isomorphism(A: Algebra, B: Algebra, T) -> bool:
    """Exact check that ``e_i -> sum_j T[i][j] f_j`` is an isomorphism ``A -> B``."""
    if A.dim != B.dim:
        raise DimensionMismatch("algebras have different dimensions")
    T = _as_square(T, A.dim)
    if not det(T):
        raise SingularMatrix("certificate matrix is singular")
    return is_homomorphism(A, B, T)


@dataclass(frozen=True)
class Certificate:
    """An exactly verified isomorphism ``source -> target``."""

    source: Algebra
    target: Algebra
    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_square(self.matrix, self.source.dim))
        if not verify_isomorphism(self.source, self.target, self.matrix):
            raise ValueError("matrix does not certify an isomorphism")

    def inverse(self) -> "Certificate":
        return Certificate(self.target, self.source, inverse(self.matrix))

    def then(self, other: "Certificate") -> "Certificate":
        """Compose ``self: A -> B`` with ``other: B -> C``."""
        return Certificate(self.source, other.target, matmul(self.matrix, other.matrix))


@dataclass(frozen=True)
class Isomorphic:
    certificate: Certificate
    kind: str = "Isomorphic"


@dataclass(frozen=True)
class NonIsomorphic:
    component: str
    values: tuple
    kind: str = "NonIsomorphic"


@dataclass(frozen=True)
class Undecided:
    restarts: int
    best_residual: float
    kind: str = "Undecided"


@dataclass(frozen=True)
class ClassificationResult:
    class_id: ClassId
    alpha: Scalar | None
    certificate: Certificate
    fingerprint: Fingerprint

    @property
    def name(self) -> str:
        return str(self.class_id) if self.alpha is None else f"{self.class_id}({self.alpha})"


@dataclass(frozen=True)
class SearchConfig:
    """``budget`` counts exact search nodes plus numeric restarts."""

    budget: int = DEFAULT_BUDGET
    seed: int = DEFAULT_SEED
    workers: int = 1
    method: str = "exact"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


def _try(A, B, T):
    try:
        if T is not None and det(T) and verify_isomorphism(A, B, T):
            return Certificate(A, B, T)
    except (SingularMatrix, ZeroDivisionError, DimensionMismatch):
        pass
    return None


def _search(A, B0, B1, accept, config: SearchConfig):
    """``(certificate or None, budget used, best residual)`` for ``A -> B0 + p B1``."""
    used, best = 0, float("inf")
    if config.budget <= 0:
        return None, 0, best
    if config.method in ("exact", "auto"):
        r = exact_certificate(A, B0, B1, node_limit=config.budget)
        used += r.nodes
        if r.matrix is not None:
            cert = accept(r.matrix, r.param)
            if cert is not None:
                return cert, used, 0.0
    left = config.budget - used
    if config.method in ("numeric", "auto") and left > 0:
        ncfg = numeric.SearchConfig(budget=left, seed=config.seed, workers=config.workers)
        cert, n, best = numeric.search(A, B0, B1, accept, ncfg)
        used += n
        if cert is not None:
            return cert, used, best
    return None, used, best


def _fixed_target(A: Algebra, B: Algebra, config: SearchConfig):
    """``(certificate or None, budget used, best residual)`` for ``A -> B``."""
    cert = _try(A, B, identity(A.dim))
    if cert is not None:
        return cert, 1, 0.0
    cert = _try(A, B, symmetric_form_certificate(A, B))
    if cert is not None:
        return cert, 1, 0.0
    cert, used, best = _search(A, B, None, lambda T, p: _try(A, B, T), config)
    if cert is None and used < config.budget:
        # the reverse direction sees a different frame
        rest = SearchConfig(config.budget - used, config.seed, config.workers, config.method)
        back, more, best2 = _search(B, A, None, lambda T, p: _try(B, A, T), rest)
        used += more
        best = min(best, best2)
        cert = None if back is None else back.inverse()
    return cert, used, best


def find_isomorphism(A: Algebra, B: Algebra, budget: int = DEFAULT_BUDGET,
                     seed: int = DEFAULT_SEED, workers: int = 1,
                     method: str = "exact") -> Certificate:
    """Search for an exact isomorphism ``A -> B``.

    Raises :class:`SearchFailure` when the budget runs out; that is not
    evidence of non-isomorphism. A budget of zero never searches.
    """
    if A.dim != B.dim:
        raise DimensionMismatch("algebras have different dimensions")
    config = SearchConfig(budget, seed, workers, method)
    if budget <= 0:
        raise SearchFailure("search budget is zero", 0)
    cert, used, best = _fixed_target(A, B, config)
    if cert is None:
        raise SearchFailure(f"no certificate within budget {budget} (used {used})", used, best)
    return cert


def distinguish(A: Algebra, B: Algebra, budget: int = DEFAULT_BUDGET,
                seed: int = DEFAULT_SEED, workers: int = 1, method: str = "exact"):
    """NonIsomorphic from the first differing invariant, else a certificate search.

    The fingerprint is compared first, then :func:`pencil_profile`.
    """
    if A.dim != B.dim:
        raise DimensionMismatch("algebras have different dimensions")
    diff = fingerprint(A).first_difference(fingerprint(B))
    if diff is not None:
        name, a, b = diff
        return NonIsomorphic(name, (a, b))
    pa, pb = pencil_profile(A), pencil_profile(B)
    if pa != pb:
        return NonIsomorphic("pencil_profile", (pa, pb))
    try:
        return Isomorphic(find_isomorphism(A, B, budget, seed, workers, method))
    except SearchFailure as exc:
        return Undecided(exc.restarts, exc.best_residual)


# classification -------------------------------------------------------------

# Members of each family where a characteristic subspace changes dimension;
# the one-parameter search does not reach them, so they are tried as fixed
# targets. R10(-i) is R10(i) up to sign.
_FAMILY_SPECIAL = {
    ClassId.R9: (ONE,),
    ClassId.R10: (ZERO, I),
    ClassId.R16: (ZERO, -ONE),
}
_FAMILY_GENERIC = {ClassId.R9: Scalar(3), ClassId.R10: Scalar(3), ClassId.R16: Scalar(3)}


def family_special_values(cid) -> tuple:
    return _FAMILY_SPECIAL[ClassId(cid)]


def _family_pencil(cid: ClassId, catalog):
    """``(B0, B1, to_alpha)`` with representative table ``B0 + p B1``.

    R16 is searched in its table coefficient ``c``; ``to_alpha`` maps back.
    """
    if cid == ClassId.R16:
        B0 = from_products(4, {(1, 2): {4: 1}, (2, 2): {3: 1}})
        B1 = from_products(4, {(2, 1): {4: 1}})
        return B0, B1, r16_alpha
    A0, A1 = instantiate(cid, 0, catalog), instantiate(cid, 1, catalog)
    B1 = Algebra(4, tuple(tuple(tuple(x - y for x, y in zip(u, v)) for u, v in zip(r1, r0))
                          for r1, r0 in zip(A1.table, A0.table)))
    return A0, B1, lambda p: p


def _iter_consts(A):
    for row in A.table:
        for v in row:
            yield from v


def _check_hypotheses(A: Algebra):
    if A.dim != 4:
        raise PreconditionFailed("dim-4", f"dimension is {A.dim}")
    if not is_leibniz(A):
        raise PreconditionFailed("Leibniz", "Leibniz identity fails")
    if not is_nilpotent(A):
        raise PreconditionFailed("nilpotent")
    if not any(_iter_consts(A)):
        raise PreconditionFailed("non-abelian")
    if is_lie(A):
        raise PreconditionFailed("non-Lie")
    if split_detect(A).split:
        raise PreconditionFailed("non-split", "algebra is a direct sum of proper ideals")


def shortlist(A: Algebra, catalog=None):
    """Candidates ``(cid, alpha, kind)`` in catalog order whose invariants match ``A``.

    ``kind`` is ``"fixed"`` for a single representative and ``"family"`` for
    a one-parameter search over generic members.
    """
    catalog = catalog or CATALOG
    lf = (linear_fingerprint(A), pencil_profile(A))
    out = []
    for cid in ClassId:
        if cid == ClassId.R4:
            members = [(ZERO, "fixed"), (ONE, "fixed")]
        elif cid in FAMILIES:
            members = [(_FAMILY_GENERIC[cid], "family")]
            members += [(a, "fixed") for a in _FAMILY_SPECIAL[cid]]
        else:
            members = [(None, "fixed")]
        for a, kind in members:
            R = instantiate(cid, a, catalog)
            if (linear_fingerprint(R), pencil_profile(R)) == lf:
                out.append((cid, None if kind == "family" else a, kind))
    return out


def _flip():
    return ((ONE, ZERO, ZERO, ZERO), (ZERO, -ONE, ZERO, ZERO),
            (ZERO, ZERO, ONE, ZERO), (ZERO, ZERO, ZERO, ONE))


def _canonical(cid: ClassId, alpha, cert: Certificate, catalog) -> tuple:
    """Move an R10 result to the canonical sign of its parameter."""
    if cid == ClassId.R10 and canonical_r10(alpha) != alpha:
        R = instantiate(cid, -alpha, catalog)
        return -alpha, cert.then(Certificate(cert.target, R, _flip()))
    return alpha, cert


def classify4(A: Algebra, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
              workers: int = 1, method: str = "exact", catalog=None) -> ClassificationResult:
    """Identify the class of a 4-dim nilpotent non-Lie non-split Leibniz algebra.

    Raises :class:`PreconditionFailed` or :class:`Unclassified`.
    """
    catalog = catalog or CATALOG
    _check_hypotheses(A)
    config = SearchConfig(budget, seed, workers, method)
    used, best = 0, float("inf")
    for cid, alpha, kind in shortlist(A, catalog):
        if budget <= 0:
            break
        if kind == "fixed":
            R = instantiate(cid, alpha, catalog)
            cert, n, res = _fixed_target(A, R, config)
        else:
            B0, B1, to_alpha = _family_pencil(cid, catalog)

            def accept(T, p, cid=cid, to_alpha=to_alpha):
                try:
                    R = instantiate(cid, to_alpha(p), catalog)
                except (ValueError, ZeroDivisionError):
                    return None
                return _try(A, R, T)

            cert, n, res = _search(A, B0, B1, accept, config)
            if cert is not None:
                alpha = to_alpha(_pencil_coordinate(cid, cert.target))
        used += n
        best = min(best, res)
        if cert is not None:
            alpha, cert = _canonical(cid, alpha, cert, catalog)
            return ClassificationResult(cid, alpha, cert, fingerprint(cert.target))
    raise Unclassified(f"no catalog certificate (budget {budget}, used {used})", used, best)


def _pencil_coordinate(cid: ClassId, R: Algebra) -> Scalar:
    t = R.table
    if cid == ClassId.R9:
        return -t[1][0][2]
    if cid == ClassId.R10:
        return t[0][1][3]
    if cid == ClassId.R16:
        return t[1][0][3]
    raise ValueError(cid)
