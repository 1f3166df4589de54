"""Normal forms: the seventeen 4-dimensional classes, general-n templates,
the filiform families ``nabla``/``omega`` and their reductions.

Indexing: the 4-dimensional tables use ``e_1..e_4``. The general-n filiform
templates are written on ``e_0..e_n``; they are stored with ``e_0`` at
position 1 of the 1-based file convention (Python index 0), so ``e_m`` of a
template is file index ``m + 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import Algebra, change_basis, from_products, validate
from .invariants import SplitReport, split_detect
from .linalg import identity, matmul
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "ClassId",
    "ParamOutOfDomain",
    "BadDimension",
    "BadCoefficientCount",
    "ClassInfo",
    "CATALOG",
    "FAMILIES",
    "instantiate",
    "r16_coefficient",
    "r16_alpha",
    "canonical_r10",
    "nulfiliform",
    "filiform_mu1",
    "filiform_mu2",
    "nabla",
    "omega",
    "ReductionCertificate",
    "reduce_filiform",
    "sample_instances",
]


class ParamOutOfDomain(ValueError):
    pass


class BadDimension(ValueError):
    pass


class BadCoefficientCount(ValueError):
    pass


class ClassId(str, enum.Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    R7 = "R7"
    R8 = "R8"
    R9 = "R9"
    R10 = "R10"
    R11 = "R11"
    R12 = "R12"
    R13 = "R13"
    R14 = "R14"
    R15 = "R15"
    R16 = "R16"
    R17 = "R17"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClassInfo:
    cid: ClassId
    domain: str | None  # parameter domain, None for a single algebra
    kind: str  # nulfiliform / filiform / associative
    note: str
    build: object = field(repr=False, compare=False)


def r16_coefficient(alpha) -> Scalar:
    """Table coefficient ``(1 + alpha) / (1 - alpha)`` of ``[e_2, e_1]``."""
    alpha = as_scalar(alpha)
    if alpha == ONE:
        raise ParamOutOfDomain("R16 requires alpha != 1")
    return (ONE + alpha) / (ONE - alpha)


def r16_alpha(c) -> Scalar:
    """Inverse of :func:`r16_coefficient`; ``c = -1`` has no preimage."""
    c = as_scalar(c)
    if c == -ONE:
        raise ParamOutOfDomain("coefficient -1 is not attained by (1+a)/(1-a)")
    return (c - ONE) / (c + ONE)


def canonical_r10(alpha) -> Scalar:
    """Representative of ``{alpha, -alpha}`` with Re > 0, or Re = 0 and Im >= 0."""
    alpha = as_scalar(alpha)
    if alpha.re < 0 or (alpha.re == 0 and alpha.im < 0):
        return -alpha
    return alpha


def _r4(alpha):
    alpha = as_scalar(alpha)
    if alpha not in (ZERO, ONE):
        raise ParamOutOfDomain("R4 requires alpha in {0, 1}")
    return {(1, 1): {3: 1}, (1, 2): {4: alpha}, (2, 1): {3: 1}, (2, 2): {4: 1}, (3, 1): {4: 1}}


def _r9(alpha):
    return {(1, 1): {3: 1}, (1, 2): {4: 1}, (2, 1): {3: -alpha}, (2, 2): {4: -1}}


def _r10(alpha):
    return {(1, 1): {4: 1}, (1, 2): {4: alpha}, (2, 1): {4: -alpha}, (2, 2): {4: 1}, (3, 3): {4: 1}}


def _r16(alpha):
    return {(1, 2): {4: 1}, (2, 1): {4: r16_coefficient(alpha)}, (2, 2): {3: 1}}


_TABLES = {
    ClassId.R1: ("nulfiliform", None, "unique non-Lie nulfiliform algebra",
                 {(1, 1): {2: 1}, (2, 1): {3: 1}, (3, 1): {4: 1}}),
    ClassId.R2: ("filiform", None, "nabla(1,0)",
                 {(1, 1): {3: 1}, (1, 2): {4: 1}, (2, 1): {3: 1}, (3, 1): {4: 1}}),
    ClassId.R3: ("filiform", None, "nabla(0,0)",
                 {(1, 1): {3: 1}, (2, 1): {3: 1}, (3, 1): {4: 1}}),
    ClassId.R4: ("filiform", "alpha in {0,1}", "nabla(alpha,1) collapses to alpha in {0,1}", _r4),
    ClassId.R5: ("filiform", None, "omega(1,0)",
                 {(1, 1): {3: 1}, (1, 2): {4: 1}, (3, 1): {4: 1}}),
    ClassId.R6: ("filiform", None, "omega(alpha,1) for every alpha",
                 {(1, 1): {3: 1}, (2, 2): {4: 1}, (3, 1): {4: 1}}),
    ClassId.R7: ("associative", None, "Mazzola N30",
                 {(1, 1): {4: 1}, (1, 2): {3: 1}, (2, 1): {3: -1}, (2, 2): {3: -2, 4: 1}}),
    ClassId.R8: ("associative", None, "Mazzola N31",
                 {(1, 2): {3: 1}, (2, 1): {4: 1}, (2, 2): {3: -1}}),
    ClassId.R9: ("associative", "alpha in C", "Mazzola N32", _r9),
    ClassId.R10: ("associative", "alpha in C", "Mazzola N35 and N51; R10(alpha) = R10(-alpha)", _r10),
    ClassId.R11: ("associative", None, "Mazzola N36",
                  {(1, 2): {4: 1}, (1, 3): {4: 1}, (2, 1): {4: -1}, (2, 2): {4: 1}, (3, 1): {4: 1}}),
    ClassId.R12: ("associative", None, "Mazzola N37",
                  {(1, 1): {4: 1}, (1, 2): {4: 1}, (2, 1): {4: -1}, (3, 3): {4: 1}}),
    ClassId.R13: ("associative", None, "Mazzola N42",
                  {(1, 2): {3: 1}, (2, 1): {4: 1}}),
    ClassId.R14: ("associative", None, "Mazzola N48",
                  {(1, 2): {3: 1}, (2, 1): {3: -1}, (2, 2): {4: 1}}),
    ClassId.R15: ("associative", None, "Mazzola N49 (alpha = 1)",
                  {(2, 1): {4: 1}, (2, 2): {3: 1}}),
    ClassId.R16: ("associative", "alpha in C\\{1}", "Mazzola N49 (alpha != 1)", _r16),
    ClassId.R17: ("associative", None, "Mazzola N50",
                  {(1, 2): {4: 1}, (2, 1): {4: -1}, (3, 3): {4: 1}}),
}

CATALOG: dict[ClassId, ClassInfo] = {
    cid: ClassInfo(cid, dom, kind, note, build) for cid, (kind, dom, note, build) in _TABLES.items()
}
FAMILIES = frozenset(cid for cid, info in CATALOG.items() if info.domain is not None)


def _label(cid: ClassId, alpha) -> str:
    return str(cid) if alpha is None else f"{cid}({alpha})"


def instantiate(cid, alpha=None, catalog: dict | None = None) -> Algebra:
    """Representative ``R_k`` (or ``R_k(alpha)`` for the families)."""
    cid = ClassId(cid)
    info = (catalog or CATALOG)[cid]
    if info.domain is None:
        if alpha is not None:
            raise ParamOutOfDomain(f"{cid} takes no parameter")
        return from_products(4, info.build, _label(cid, None))
    if alpha is None:
        raise ParamOutOfDomain(f"{cid} needs a parameter ({info.domain})")
    alpha = as_scalar(alpha)
    return from_products(4, info.build(alpha), _label(cid, alpha))


# general-n templates -----------------------------------------------------


def nulfiliform(n: int) -> Algebra:
    """``[e_i, e_1] = e_{i+1}`` for ``1 <= i <= n-1``."""
    if not isinstance(n, int) or n < 2:
        raise BadDimension("nulfiliform algebras need n >= 2")
    return validate([(i, 1, i + 1, 1) for i in range(1, n)], n, f"nulfiliform({n})")


def _template_entries(n, lead_range, row01, row11, shifted_range, coeffs):
    """Common skeleton of the two filiform templates on ``e_0..e_n``.

    ``coeffs`` maps template index ``k`` (3..n) to its coefficient.
    """
    prods: dict[tuple[int, int], dict[int, Scalar]] = {}

    def put(i, j, k, c):
        if c:
            prods.setdefault((i + 1, j + 1), {})[k + 1] = c

    put(0, 0, 2, ONE)
    for i in lead_range:
        put(i, 0, i + 1, ONE)
    for k, c in row01.items():
        put(0, 1, k, c)
    for k, c in row11.items():
        put(1, 1, k, c)
    for i in shifted_range:
        for k in range(3, n + 2 - i):
            put(i, 1, k + i - 1, coeffs[k])
    return prods


def filiform_mu1(n: int, alphas, theta) -> Algebra:
    """First filiform template on ``e_0..e_n`` (dimension ``n + 1``).

    ``alphas`` lists ``alpha_3..alpha_n``: the shifted rows
    ``[e_i, e_1] = alpha_3 e_{i+2} + ... + alpha_{n+1-i} e_n`` reach
    ``alpha_n`` at ``i = 1``, while ``[e_0, e_1]`` uses ``theta`` in place of
    ``alpha_n``.
    """
    if not isinstance(n, int) or n < 3:
        raise BadDimension("filiform templates need n >= 3")
    alphas = [as_scalar(a) for a in alphas]
    if len(alphas) != n - 2:
        raise BadCoefficientCount(f"expected {n - 2} coefficients alpha_3..alpha_{n}")
    theta = as_scalar(theta)
    coeffs = {k: alphas[k - 3] for k in range(3, n + 1)}
    row01 = {k: coeffs[k] for k in range(3, n)}
    row01[n] = theta
    prods = _template_entries(n, range(1, n), row01, {}, range(1, n - 1), coeffs)
    return from_products(n + 1, prods, f"mu1(n={n})")


def filiform_mu2(n: int, betas, gamma) -> Algebra:
    """Second filiform template; ``[e_i, e_0] = e_{i+1}`` only from ``i = 2``."""
    if not isinstance(n, int) or n < 3:
        raise BadDimension("filiform templates need n >= 3")
    betas = [as_scalar(b) for b in betas]
    if len(betas) != n - 2:
        raise BadCoefficientCount(f"expected {n - 2} coefficients beta_3..beta_{n}")
    gamma = as_scalar(gamma)
    coeffs = {k: betas[k - 3] for k in range(3, n + 1)}
    row01 = dict(coeffs)
    prods = _template_entries(n, range(2, n), row01, {n: gamma}, range(2, n - 1), coeffs)
    return from_products(n + 1, prods, f"mu2(n={n})")


def nabla(alpha, beta) -> Algebra:
    a, b = as_scalar(alpha), as_scalar(beta)
    return from_products(
        4, {(1, 1): {3: 1}, (1, 2): {4: a}, (2, 1): {3: 1}, (2, 2): {4: b}, (3, 1): {4: 1}},
        f"nabla({a},{b})",
    )


def omega(alpha, beta) -> Algebra:
    a, b = as_scalar(alpha), as_scalar(beta)
    return from_products(
        4, {(1, 1): {3: 1}, (1, 2): {4: a}, (2, 2): {4: b}, (3, 1): {4: 1}},
        f"omega({a},{b})",
    )


# reductions --------------------------------------------------------------


@dataclass(frozen=True)
class ReductionCertificate:
    source: Algebra
    target: ClassId | None  # None means the source splits
    target_alpha: Scalar | None
    basis_change: tuple
    steps: tuple = ()
    split: SplitReport | None = None

    @property
    def target_name(self) -> str:
        if self.target is None:
            return "Split"
        return _label(self.target, self.target_alpha)

    def target_algebra(self) -> Algebra | None:
        if self.target is None:
            return None
        return instantiate(self.target, self.target_alpha)

    def verify(self) -> bool:
        if self.target is None:
            return self.split is not None and self.split.split
        return change_basis(self.source, self.basis_change) == self.target_algebra()


def _diag(*xs):
    n = len(xs)
    return tuple(tuple(as_scalar(xs[i]) if i == j else ZERO for j in range(n)) for i in range(n))


def _scale(beta):
    return _diag(beta, beta, beta ** 2, beta ** 3)


def nabla_collapse(alpha) -> tuple:
    """Basis change taking ``nabla(alpha, 1)`` to ``R4(0)`` (or ``R4(1)`` at alpha = 1)."""
    alpha = as_scalar(alpha)
    if alpha == ONE:
        return identity(4)
    a = ONE - alpha
    b = a * a - a
    return (
        (a, b, ZERO, ZERO),
        (ZERO, a + b, b * (alpha - ONE), ZERO),
        (ZERO, ZERO, a * (a + b), b * (a * alpha + b)),
        (ZERO, ZERO, ZERO, a * a * (a + b)),
    )


def omega_collapse(alpha, t=1) -> tuple:
    """Basis change taking ``omega(alpha, 1)`` to ``R6``.

    Uses ``a = t^2``, ``c = t^3`` so that ``c^2 = a^3`` stays rational,
    ``b = -a alpha`` and the ``e_3`` part of ``e'_2`` equal to ``-c b / a``.
    """
    alpha, t = as_scalar(alpha), as_scalar(t)
    if not t:
        raise ParamOutOfDomain("t must be nonzero")
    a, c = t ** 2, t ** 3
    b = -a * alpha
    d = -c * b / a
    return (
        (a, b, ZERO, ZERO),
        (ZERO, c, d, ZERO),
        (ZERO, ZERO, a * a, b * (a * alpha + b)),
        (ZERO, ZERO, ZERO, a ** 3),
    )


def _cert(source, target, target_alpha, steps, split=None):
    total = identity(4)
    for s in steps:
        total = matmul(s, total)
    cert = ReductionCertificate(source, target, target_alpha, total, tuple(steps), split)
    if not cert.verify():
        raise AssertionError(f"reduction of {source.label} to {cert.target_name} failed to verify")
    return cert


def reduce_filiform(family: str, alpha, beta, t=1) -> ReductionCertificate:
    """Reduce ``nabla(alpha, beta)`` or ``omega(alpha, beta)`` to its class.

    ``steps`` holds the individual basis changes in the order they are
    applied; ``basis_change`` is their composite.
    """
    alpha, beta = as_scalar(alpha), as_scalar(beta)
    if family == "nabla":
        src = nabla(alpha, beta)
        if not beta:
            if alpha:
                return _cert(src, ClassId.R2, None, [_scale(alpha)])
            return _cert(src, ClassId.R3, None, [identity(4)])
        a1 = alpha / beta
        target = ONE if a1 == ONE else ZERO
        return _cert(src, ClassId.R4, target, [_scale(beta), nabla_collapse(a1)])
    if family == "omega":
        src = omega(alpha, beta)
        if not beta:
            if alpha:
                return _cert(src, ClassId.R5, None, [_diag(1, alpha.inverse(), 1, 1)])
            report = split_detect(src)
            return _cert(src, None, None, [identity(4)], split=report)
        return _cert(src, ClassId.R6, None, [_scale(beta), omega_collapse(alpha / beta, t)])
    raise ValueError(f"unknown family {family!r}; expected 'nabla' or 'omega'")


def sample_instances() -> list[tuple[ClassId, Scalar | None]]:
    """Class/parameter pairs used for pairwise and identity checks."""
    grid = {
        ClassId.R4: [ZERO, ONE],
        ClassId.R9: [ZERO, ONE, Scalar(2), Scalar(0, 1)],
        ClassId.R10: [ZERO, ONE, Scalar(2), Scalar(0, 1)],
        ClassId.R16: [ZERO, Scalar(2), -ONE, Scalar(0, 1)],
    }
    out = []
    for cid in ClassId:
        for a in grid.get(cid, [None]):
            out.append((cid, a))
    return out
