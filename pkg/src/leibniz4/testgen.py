"""Labeled scrambles and random nilpotent Leibniz tables."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from .catalog import ClassId, instantiate
from .core import Algebra, change_basis, is_nilpotent, validate
from .fileformat import algebra_to_json
from .linalg import det, identity
from .scalar import Scalar, as_scalar

__all__ = ["LabeledInstance", "random_invertible", "scramble", "random_leibniz4", "sample_leibniz4",
           "NotFound"]


class NotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class LabeledInstance:
    algebra: Algebra
    class_id: ClassId
    alpha: Scalar | None
    scramble: tuple
    seed: int

    def check(self) -> bool:
        return change_basis(instantiate(self.class_id, self.alpha), self.scramble) == self.algebra

    def to_json(self) -> dict:
        """Algebra file with an extra ``truth`` block."""
        doc = algebra_to_json(self.algebra)
        doc["truth"] = {
            "class": str(self.class_id),
            "alpha": None if self.alpha is None else str(self.alpha),
            "seed": self.seed,
            "scramble": [[str(x) for x in row] for row in self.scramble],
        }
        return doc


def _rand_rational(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_invertible(n: int, seed: int, height: int = 10) -> tuple:
    """Rational matrix with numerators/denominators bounded by ``height``."""
    if height < 1:
        raise ValueError("height must be >= 1")
    rng = random.Random(seed)
    while True:
        T = tuple(tuple(Scalar(_rand_rational(rng, height)) for _ in range(n)) for _ in range(n))
        if det(T):
            return T


def scramble(class_id, alpha=None, seed: int = 0, height: int = 10) -> LabeledInstance:
    """Catalog representative rewritten in a random rational basis.

    ``height=0`` keeps the identity basis.
    """
    cid = ClassId(class_id)
    R = instantiate(cid, alpha)
    T = identity(4) if height == 0 else random_invertible(4, seed, height)
    A = change_basis(R, T).relabel(f"scramble({R.label},seed={seed})")
    inst = LabeledInstance(A, cid, None if alpha is None else as_scalar(alpha), T, seed)
    assert inst.check()
    return inst


_IDX = [(i, j, k) for i, j, k in iproduct(range(4), repeat=3) if k > max(i, j)]


def _int_defect_zero(c: np.ndarray) -> bool:
    """Leibniz identity on an integer structure tensor (exact in int64 here)."""
    # D_ijk = [e_i,[e_j,e_k]] - [[e_i,e_j],e_k] + [[e_i,e_k],e_j]
    t1 = np.einsum("jkm,iml->ijkl", c, c)
    t2 = np.einsum("ijm,mkl->ijkl", c, c)
    t3 = np.einsum("ikm,mjl->ijkl", c, c)
    return not np.any(t1 - t2 + t3)


def random_leibniz4(seed: int, attempts: int = 1000, max_terms: int = 6, height: int = 3) -> Algebra:
    return sample_leibniz4(seed, attempts, max_terms, height)[0]


def sample_leibniz4(seed: int, attempts: int = 1000, max_terms: int = 6, height: int = 3):
    """``(algebra, draws)``: rejection-sample a sparse 4-dim nilpotent Leibniz table.

    Supports are drawn among products ``[e_i, e_j] -> e_k`` with ``k > i, j``
    (nilpotent by construction, and re-checked exactly). Coefficients are
    ``p / D`` with a common denominator, so the quadratic identity can be
    tested on the integer numerators.
    """
    rng = random.Random(seed)
    for draw in range(1, attempts + 1):
        k = rng.randint(1, max_terms)
        support = rng.sample(_IDX, k)
        D = rng.randint(1, height)
        c = np.zeros((4, 4, 4), dtype=np.int64)
        for (i, j, l) in support:
            v = 0
            while v == 0:
                v = rng.randint(-height, height)
            c[i, j, l] = v
        if not _int_defect_zero(c):
            continue
        entries = [(i + 1, j + 1, l + 1, Fraction(int(c[i, j, l]), D)) for (i, j, l) in support]
        A = validate(entries, 4, f"random_leibniz4(seed={seed})")
        if is_nilpotent(A):
            return A, draw
    raise NotFound(f"no Leibniz table within {attempts} attempts (seed={seed})")
