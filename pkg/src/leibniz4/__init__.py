"""Exact engine for 4-dimensional nilpotent complex Leibniz algebras."""

from .catalog import CATALOG, ClassId, instantiate
from .core import Algebra, change_basis, from_products, is_leibniz, validate
from .invariants import Fingerprint, fingerprint
from .isomorphism import (
    Certificate,
    ClassificationResult,
    classify4,
    distinguish,
    find_isomorphism,
    verify_isomorphism,
)
from .scalar import Scalar, parse_scalar

__all__ = [
    "Algebra",
    "CATALOG",
    "Certificate",
    "ClassId",
    "ClassificationResult",
    "Fingerprint",
    "Scalar",
    "change_basis",
    "classify4",
    "distinguish",
    "find_isomorphism",
    "fingerprint",
    "from_products",
    "instantiate",
    "is_leibniz",
    "parse_scalar",
    "validate",
    "verify_isomorphism",
]
__version__ = "0.1.0"
