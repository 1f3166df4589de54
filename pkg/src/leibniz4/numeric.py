"""Numeric certificate search with exact rational reconstruction.

A restart proceeds in four steps.

1. The source is rewritten in a basis of generators and product words, so a
   map is determined by the images ``X`` of the generators.
2. ``X`` is parametrized linearly: its part modulo the target's square must
   respect a list of characteristic subspaces, its square part is free.
3. Levenberg-Marquardt finds a complex solution; coordinates that are free on
   the solution set are fixed to small rationals and the rest are polished
   with Newton's method in mpmath, then recovered as exact fractions.
4. The caller verifies the resulting matrix exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.linalg import qr
from scipy.optimize import least_squares

from .core import Algebra
from .invariants import derivation_dim
from .linalg import SingularMatrix
from .scalar import Scalar
from .frames import frame, pencil_member

DEFAULT_BUDGET = 200
DEFAULT_SEED = 20240101
RESIDUAL_TOL = 1e-9
DENOMINATOR_LADDER = tuple(range(1, 65)) + tuple(2 ** k for k in range(7, 17))
MP_DPS = 80
MP_DENOMINATOR = 10 ** 24


@dataclass(frozen=True)
class SearchConfig:
    budget: int = DEFAULT_BUDGET
    seed: int = DEFAULT_SEED
    workers: int = 1
    tol: float = RESIDUAL_TOL
    slices: bool = True


def ctable(A: Algebra) -> np.ndarray:
    n = A.dim
    out = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(A.table[i][j]):
                if c:
                    out[i, j, k] = complex(c)
    return out


# numeric problem ---------------------------------------------------------------


class _Problem:
    """Homomorphism defect in the linear parameters ``u`` of the generator images.

    ``X = reshape(L u)``; row ``r`` of ``T`` is the image of the ``r``-th word.
    Invertibility is imposed as ``s det(X Q) = 1``. Optional random affine
    ``slices`` cut the solution set down to points. The real vector stacks all
    real parts, then all imaginary parts, of ``(u, s[, p])``.
    """

    def __init__(self, cA, B0, B1, g, words, Q, L):
        self.n = cA.shape[0]
        self.cA, self.B0, self.B1 = cA, B0, B1
        self.g, self.words, self.Q, self.L = g, words, Q, L
        self.nu = L.shape[1]
        self.m = self.nu + 1 + (B1 is not None)
        self.scale = max(1.0, np.abs(cA).max(), np.abs(B0).max(),
                         0.0 if B1 is None else np.abs(B1).max())
        self.slices = None

    def unpack(self, z):
        v = z[: self.m] + 1j * z[self.m:]
        X = (self.L @ v[: self.nu]).reshape(self.g, self.n)
        p = v[self.nu + 1] if self.B1 is not None else 0.0
        return X, v[self.nu], p

    def cB(self, p):
        return self.B0 if self.B1 is None else self.B0 + p * self.B1

    def matrix(self, z):
        """``T`` and ``dT[k, l, q]`` with respect to the complex unknowns."""
        n, m, nu = self.n, self.m, self.nu
        X, _, p = self.unpack(z)
        cB = self.cB(p)
        imgs, dimgs = [], []
        for w in self.words:
            if w[0] == "g":
                r = w[1]
                d = np.zeros((n, m), dtype=complex)
                d[:, :nu] = self.L[r * n: (r + 1) * n]
                imgs.append(X[r])
                dimgs.append(d)
                continue
            _, a, b = w
            u, du, v, dv = imgs[a], dimgs[a], imgs[b], dimgs[b]
            imgs.append(np.einsum("a,b,abl->l", u, v, cB))
            d = np.einsum("aq,b,abl->lq", du, v, cB) + np.einsum("a,bq,abl->lq", u, dv, cB)
            if self.B1 is not None:
                d[:, nu + 1] += np.einsum("a,b,abl->l", u, v, self.B1)
            dimgs.append(d)
        return np.array(imgs), np.array(dimgs)

    def complex_residual(self, z):
        X, s, p = self.unpack(z)
        T, _ = self.matrix(z)
        R = np.einsum("ijk,kl->ijl", self.cA, T) - np.einsum("ia,jb,abl->ijl", T, T, self.cB(p))
        parts = [R.ravel(), [s * np.linalg.det(X @ self.Q) - 1.0]]
        if self.slices is not None:
            parts.append(self.slices @ (z[: self.m] + 1j * z[self.m:]) - 1.0)
        return np.concatenate(parts)

    def residual(self, z):
        r = self.complex_residual(z)
        return np.concatenate([r.real, r.imag])

    def complex_jacobian(self, z):
        n, m, nu = self.n, self.m, self.nu
        X, s, p = self.unpack(z)
        T, dT = self.matrix(z)
        cB = self.cB(p)
        JR = np.einsum("ijk,klq->ijlq", self.cA, dT)
        JR -= np.einsum("iaq,jb,abl->ijlq", dT, T, cB)
        JR -= np.einsum("ia,jbq,abl->ijlq", T, dT, cB)
        if self.B1 is not None:
            JR[..., nu + 1] -= np.einsum("ia,jb,abl->ijl", T, T, self.B1)
        rows = [JR.reshape(n ** 3, m)]
        P = X @ self.Q
        d = np.linalg.det(P)
        jd = np.zeros(m, dtype=complex)
        try:
            adj = d * np.linalg.inv(P)  # adj(P) = det(P) P^{-1}
            jd[:nu] = s * ((self.Q @ adj).T.ravel() @ self.L)
        except np.linalg.LinAlgError:
            pass
        jd[nu] = d
        rows.append(jd[None, :])
        if self.slices is not None:
            rows.append(self.slices)
        return np.vstack(rows)

    def jacobian(self, z):
        J = self.complex_jacobian(z)
        return np.block([[J.real, -J.imag], [J.imag, J.real]])

    def max_residual(self, z):
        """Largest defect, slices excluded."""
        return float(np.abs(self.complex_residual(z)[: self.n ** 3 + 1]).max())

    def solve(self, z0, fixed_mask):
        """Least squares over the unfixed coordinates; returns ``(z, max residual)``."""
        free = ~fixed_mask
        if not free.any():
            return z0, self.max_residual(z0)
        base = z0.copy()

        def fun(x):
            base[free] = x
            return self.residual(base)

        def jac(x):
            base[free] = x
            return self.jacobian(base)[:, free]

        try:
            sol = least_squares(fun, z0[free], jac=jac, method="lm", xtol=1e-15, ftol=1e-15,
                                gtol=1e-15, max_nfev=100 * (1 + int(free.sum())))
        except (ValueError, np.linalg.LinAlgError):
            return z0, np.inf
        z = z0.copy()
        z[free] = sol.x
        if not np.all(np.isfinite(z)):
            return z0, np.inf
        return z, self.max_residual(z)


class _Polish:
    """The same equations in mpmath, for Newton refinement of determined unknowns."""

    def __init__(self, AW, B0, B1, g, words, Q, L):
        self.n, self.g, self.words = AW.dim, g, words
        self.nu = len(L[0])
        with mpmath.workdps(MP_DPS):
            self.Q = mpmath.matrix([[_mpc(x) for x in row] for row in Q])
            self.L = [[_mpc(x) for x in row] for row in L]
            self.a = _sparse(AW)
            self.b0 = _sparse(B0)
            self.b1 = None if B1 is None else _sparse(B1)

    def _mul(self, table, u, w):
        out = [mpmath.mpc(0)] * self.n
        for i, j, k, c in table:
            if u[i] and w[j]:
                out[k] += u[i] * w[j] * c
        return out

    def residual(self, v):
        n, nu = self.n, self.nu
        flat = [mpmath.fsum(row[q] * v[q] for q in range(nu) if row[q]) for row in self.L]
        X = [flat[r * n: (r + 1) * n] for r in range(self.g)]
        table = self.b0
        if self.b1 is not None:
            p = v[nu + 1]
            table = self.b0 + [(i, j, k, p * c) for i, j, k, c in self.b1]
        T = []
        for w in self.words:
            T.append(list(X[w[1]]) if w[0] == "g" else self._mul(table, T[w[1]], T[w[2]]))
        lhs = [[[mpmath.mpc(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k, c) in self.a:
            for l in range(n):
                lhs[i][j][l] += c * T[k][l]
        out = []
        for i in range(n):
            for j in range(n):
                rhs = self._mul(table, T[i], T[j])
                out.extend(x - y for x, y in zip(lhs[i][j], rhs))
        out.append(v[nu] * mpmath.det(mpmath.matrix(X) * self.Q) - 1)
        return out

    def newton(self, v, unknown, iters=30) -> bool:
        """Refine ``v[unknown]`` in place by Gauss-Newton."""
        if not unknown:
            return max(abs(f) for f in self.residual(v)) < mpmath.mpf(10) ** (-(MP_DPS - 20))
        h = mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
        eps = mpmath.mpf(10) ** (-(mpmath.mp.dps - 15))
        for _ in range(iters):
            F = self.residual(v)
            J = mpmath.matrix(len(F), len(unknown))
            for col, q in enumerate(unknown):
                old = v[q]
                v[q] = old + h
                Fq = self.residual(v)
                v[q] = old
                for row in range(len(F)):
                    J[row, col] = (Fq[row] - F[row]) / h
            try:
                JH = J.H
                dx = mpmath.lu_solve(JH * J, JH * mpmath.matrix([-f for f in F]))
            except (ZeroDivisionError, ValueError):
                return False
            for col, q in enumerate(unknown):
                v[q] += dx[col]
            if max(abs(x) for x in dx) < eps:
                return max(abs(f) for f in self.residual(v)) < eps * 1e5
        return False


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _mpc(x: Scalar):
    return mpmath.mpc(_mpf(x.re), _mpf(x.im))


def _sparse(A: Algebra):
    return [(i, j, k, _mpc(c)) for i, row in enumerate(A.table)
            for j, vec in enumerate(row) for k, c in enumerate(vec) if c]


def _to_fraction(x) -> Fraction | None:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    f = Fraction((-1) ** sign * man) * (Fraction(2) ** exp)
    r = f.limit_denominator(MP_DENOMINATOR)
    if abs(r - f) > Fraction(1, 10 ** (MP_DPS - 15)):
        return None
    return r


# snapping --------------------------------------------------------------------


def _candidates(x: float, limit: int = 6):
    """Rational guesses for a coordinate, simplest first."""
    fx = Fraction(x)
    seen, out = set(), []
    for q in DENOMINATOR_LADDER:
        if len(out) >= limit:
            break
        r = fx.limit_denominator(q)
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def _free_coordinates(prob: _Problem, z) -> list:
    """Complex unknowns that serve as local parameters of the solution set."""
    J = prob.complex_jacobian(z)[: prob.n ** 3 + 1]
    _, sv, Vh = np.linalg.svd(J)
    r = int(np.sum(sv > 1e-8 * max(1.0, sv[0])))
    N = Vh[r:].conj().T
    if N.shape[1] == 0:
        return []
    N[prob.nu] = 0.0  # the auxiliary s is never a parameter
    _, _, piv = qr(N.T, pivoting=True)
    return sorted(int(c) for c in piv[: N.shape[1]])


def _snap_one(prob, z, fixed, idx, tol):
    for cand in _candidates(z[idx]):
        trial = z.copy()
        trial[idx] = float(cand)
        mask = fixed.copy()
        mask[idx] = True
        z2, res = prob.solve(trial, mask)
        if res < tol:
            return z2, cand
    return None


def _snap(prob: _Problem, polish: _Polish, z, tol):
    """Exact ``(u, p)`` near ``z`` or None."""
    m, nu = prob.m, prob.nu
    free = _free_coordinates(prob, z)
    fixed = np.zeros(2 * m, dtype=bool)
    exact: dict[int, Fraction] = {}
    for c in free:
        for idx in (c, m + c):
            got = _snap_one(prob, z, fixed, idx, tol)
            if got is None:
                return None
            z, exact[idx] = got
            fixed[idx] = True
    with mpmath.workdps(MP_DPS):
        v = [mpmath.mpc(z[q], z[m + q]) for q in range(m)]
        for c in free:
            v[c] = mpmath.mpc(_mpf(exact[c]), _mpf(exact[m + c]))
        if not polish.newton(v, [q for q in range(m) if q not in free]):
            return None
        vals = {}
        for q in range(m):
            if q == nu:
                continue
            if q in free:
                vals[q] = Scalar(exact[q], exact[m + q])
                continue
            re, im = _to_fraction(v[q].real), _to_fraction(v[q].imag)
            if re is None or im is None:
                return None
            vals[q] = Scalar(re, im)
    u = [vals[q] for q in range(nu)]
    p = vals[nu + 1] if prob.B1 is not None else None
    return u, p


# restarts ----------------------------------------------------------------------


@lru_cache(maxsize=64)
def _setup(A: Algebra, B0: Algebra, B1: Algebra | None):
    """Everything a restart needs that does not depend on the seed."""
    fr = frame(A, B0, B1)
    if fr is None:
        return None
    cL = np.array([[complex(x) for x in row] for row in fr.L])
    cQ = np.array([[complex(x) for x in row] for row in fr.Q])
    prob = _Problem(ctable(fr.AW), ctable(B0), None if B1 is None else ctable(B1),
                    fr.g, fr.words, cQ, cL)
    polish = _Polish(fr.AW, B0, B1, fr.g, fr.words, fr.Q, fr.L)
    return fr, prob, polish, derivation_dim(A)


def _initial_point(prob: _Problem, rng: np.random.Generator, restart: int):
    u = rng.normal(size=prob.nu).astype(complex)
    if restart % 2:
        u += 1j * rng.normal(size=prob.nu)
    v = np.concatenate([u, [1.0]])
    if prob.B1 is not None:
        v = np.concatenate([v, [rng.normal() + (1j * rng.normal() if restart % 2 else 0.0)]])
    d = np.linalg.det((prob.L @ u).reshape(prob.g, prob.n) @ prob.Q)
    if abs(d) > 1e-8:
        v[prob.nu] = 1.0 / d
    return np.concatenate([v.real, v.imag])


def run_restart(args):
    """Restart ``r``: ``(r, T, p, residual)`` with ``T`` None on failure."""
    A, B0, B1, seed, r, tol, use_slices = args
    setup = _setup(A, B0, B1)
    if setup is None:
        return r, None, None, np.inf
    fr, prob, polish, d = setup
    prob = _Problem(prob.cA, prob.B0, prob.B1, fr.g, fr.words, prob.Q, prob.L)
    rng = np.random.default_rng([seed, r])
    z0 = _initial_point(prob, rng, r)
    m = prob.m
    if use_slices and d:
        S = (rng.normal(size=(d, m)) + 1j * rng.normal(size=(d, m))) / np.sqrt(m)
        S[:, prob.nu] = 0.0
        prob.slices = S
    z, res = prob.solve(z0, np.zeros(2 * m, dtype=bool))
    prob.slices = None
    if not res < tol * prob.scale:
        return r, None, None, res
    snapped = _snap(prob, polish, z, tol * prob.scale)
    if snapped is None:
        return r, None, None, res
    u, p = snapped
    try:
        T = fr.complete(pencil_member(B0, B1, p), fr.images(u))
    except (SingularMatrix, ZeroDivisionError):
        T = None
    return r, T, p, res


def search(A, B0, B1, accept, config: SearchConfig):
    """Run restarts until ``accept(T, p)`` returns a certificate.

    Returns ``(certificate or None, restarts used, best residual)``. Each
    restart derives its own generator from ``(seed, r)``, and the lowest
    successful index wins, so the outcome does not depend on ``workers``.
    """
    best = np.inf
    jobs = [(A, B0, B1, config.seed, r, config.tol, config.slices) for r in range(config.budget)]
    if config.workers > 1 and config.budget > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = pool.map(run_restart, jobs, chunksize=4)
            for r, T, p, res in results:
                best = min(best, res)
                if T is not None:
                    cert = accept(T, p)
                    if cert is not None:
                        return cert, r + 1, best
        return None, config.budget, best
    for job in jobs:
        r, T, p, res = run_restart(job)
        best = min(best, res)
        if T is not None:
            cert = accept(T, p)
            if cert is not None:
                return cert, r + 1, best
    return None, config.budget, best
