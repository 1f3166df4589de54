"""The acceptance suite behind ``leibniz4 verify-theorem`` and the acceptance tests.

Each criterion is a function returning a :class:`CheckResult`. Statuses are
``pass``, ``fail`` or ``undecided``; a criterion that involves certificate
searches is ``undecided`` when a search runs out of budget and nothing is
contradicted. Runtime limits are part of each criterion.
"""

from __future__ import annotations

import dataclasses
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations

from .catalog import (
    CATALOG,
    ClassId,
    canonical_r10,
    filiform_mu1,
    filiform_mu2,
    instantiate,
    nulfiliform,
    reduce_filiform,
    sample_instances,
)
from .core import (
    Algebra,
    abelian,
    direct_sum,
    from_products,
    is_associative,
    is_idempotent,
    is_lie,
    is_nilpotent,
    leibniz_defect,
    nilindex,
    unitize,
)
from .invariants import chi, fingerprint, left_annihilator, max_abelian_dim, pencil_profile, right_annihilator
from .isomorphism import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    Isomorphic,
    NonIsomorphic,
    PreconditionFailed,
    SearchFailure,
    Unclassified,
    classify4,
    distinguish,
    find_isomorphism,
)
from .scalar import I, ONE, ZERO, Scalar
from .testgen import sample_leibniz4, scramble

__all__ = [
    "CheckResult",
    "Report",
    "CRITERIA",
    "verify_theorem",
    "corrupted_catalog",
    "separation_matrix",
    "load_golden",
]

PASS, FAIL, UNDECIDED = "pass", "fail", "undecided"

# runtime limits in seconds, one per criterion
TIME_LIMITS = {1: 1.0, 2: 30.0, 3: 5.0, 4: 5.0, 5: 10.0, 6: 120.0, 7: 600.0, 8: 10.0, 9: 5.0, 10: 5.0}

ROUND_TRIP_RATE = 0.99
RANDOM_SAMPLES = 10_000
ROUND_TRIP_PER_CLASS = 100
SCRAMBLE_HEIGHT = 10
TEMPLATE_SAMPLES = 20
UNIT_SAMPLES = 200
GRID_MIN = 25

R10_SIGN_VALUES = (ONE, Scalar(2), Scalar(3), I)
FAMILY_GRID = {
    ClassId.R4: (ZERO, ONE),
    ClassId.R9: (ZERO, ONE, Scalar(2), I),
    ClassId.R10: (ZERO, ONE, Scalar(2), I),
    ClassId.R16: (ZERO, Scalar(2), -ONE, I),
}


@dataclass
class CheckResult:
    criterion: int
    name: str
    status: str
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def limit(self) -> float:
        return TIME_LIMITS[self.criterion]

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "status": self.status,
            "seconds": round(self.seconds, 3),
            "limit_seconds": self.limit,
            "detail": self.detail,
        }


@dataclass
class Report:
    checks: list
    budget: int
    seed: int
    quick: bool

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if UNDECIDED in states:
            return UNDECIDED
        return PASS

    def failed(self) -> list:
        return [c.name for c in self.checks if c.status == FAIL]

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "budget": self.budget,
            "seed": self.seed,
            "quick": self.quick,
            "checks": [c.as_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class _Ctx:
    budget: int
    seed: int
    catalog: dict
    quick: bool
    workers: int


def _label(cid, alpha) -> str:
    return str(cid) if alpha is None else f"{cid}({alpha})"


def _instances(ctx: _Ctx):
    return [(cid, a, instantiate(cid, a, ctx.catalog)) for cid, a in sample_instances()]


def _status(ok: bool, undecided: bool = False) -> str:
    if not ok:
        return FAIL
    return UNDECIDED if undecided else PASS


# 1 -------------------------------------------------------------------------


def check_identity(ctx: _Ctx) -> CheckResult:
    bad = {}
    for cid, a, R in _instances(ctx):
        problems = []
        defect = leibniz_defect(R)
        if defect:
            problems.append(f"Leibniz defect at {len(defect)} triples, first {defect[0][0]}")
        if not is_nilpotent(R):
            problems.append("not nilpotent")
        elif nilindex(R) > 5:
            problems.append(f"nilindex {nilindex(R)}")
        if is_lie(R):
            problems.append("is Lie")
        if problems:
            bad[_label(cid, a)] = problems
    return CheckResult(1, "identity", _status(not bad), {"algebras": len(sample_instances()), "violations": bad})


# 2 -------------------------------------------------------------------------

_FORBIDDEN_CHI = {(4, 3, 2, 0), (4, 3, 1, 0), (4, 3, 0, 0)}
_EXPECTED_CHI = {ClassId.R1: {(4, 3, 2, 1)}}
_EXPECTED_CHI.update({c: {(4, 2, 1, 0)} for c in (ClassId.R2, ClassId.R3, ClassId.R4, ClassId.R5, ClassId.R6)})


def check_trichotomy(ctx: _Ctx) -> CheckResult:
    bad = {}
    for cid, a, R in _instances(ctx):
        got = chi(R)
        allowed = _EXPECTED_CHI.get(cid, {(4, 2, 0, 0), (4, 1, 0, 0)})
        if got not in allowed:
            bad[_label(cid, a)] = f"chi {got}"
        elif cid not in _EXPECTED_CHI and not is_associative(R):
            bad[_label(cid, a)] = "not associative"
    n = 500 if ctx.quick else RANDOM_SAMPLES
    seen, draws, hits = {}, 0, []
    for s in range(n):
        A, d = sample_leibniz4(ctx.seed + s)
        draws += d
        c = chi(A)
        seen[c] = seen.get(c, 0) + 1
        if c in _FORBIDDEN_CHI:
            hits.append(ctx.seed + s)
    detail = {
        "catalog_violations": bad,
        "random_samples": n,
        "acceptance_rate": round(n / draws, 4),
        "chi_counts": {str(k): v for k, v in sorted(seen.items())},
        "forbidden_hits": hits[:10],
    }
    return CheckResult(2, "trichotomy", _status(not bad and not hits), detail)


# 3 -------------------------------------------------------------------------

_GRID = [Fraction(x) for x in ("-2", "-1", "-1/2", "0", "1/3", "1", "2")]
_LANDING = {"nabla": {"R2", "R3", "R4(0)", "R4(1)"}, "omega": {"R5", "R6", "Split"}}


def check_reductions(ctx: _Ctx) -> CheckResult:
    counts, bad = {}, []
    for family in ("nabla", "omega"):
        n = 0
        for a in _GRID:
            for b in _GRID:
                try:
                    cert = reduce_filiform(family, a, b)
                except AssertionError as exc:
                    bad.append(f"{family}({a},{b}): {exc}")
                    continue
                n += 1
                if not cert.verify() or cert.target_name not in _LANDING[family]:
                    bad.append(f"{family}({a},{b}) -> {cert.target_name}")
        counts[family] = n
    ok = not bad and all(v >= GRID_MIN for v in counts.values())
    return CheckResult(3, "reductions", _status(ok), {"pairs": counts, "violations": bad})


# 4 -------------------------------------------------------------------------


def check_separations(ctx: _Ctx) -> CheckResult:
    get = lambda c, a=None: instantiate(c, a, ctx.catalog)  # noqa: E731
    R2, R3, R5, R6 = get("R2"), get("R3"), get("R5"), get("R6")
    R4 = {a: get("R4", a) for a in (0, 1)}
    rows = []

    def claim(what, x, y):
        rows.append({"claim": what, "values": [x, y], "holds": x != y})

    rr = lambda A: right_annihilator(A).dim  # noqa: E731
    claim("dim_right_ann R3 vs R2", rr(R3), rr(R2))
    for a in (0, 1):
        claim(f"dim_right_ann R3 vs R4({a})", rr(R3), rr(R4[a]))
    claim("dim_left_ann R5 vs R6", left_annihilator(R5).dim, left_annihilator(R6).dim)
    for a in (0, 1):
        claim(f"max_abelian_dim R2 vs R4({a})", max_abelian_dim(R2), max_abelian_dim(R4[a]))
    ok = all(r["holds"] for r in rows)
    return CheckResult(4, "separations", _status(ok), {"claims": rows})


# 5 -------------------------------------------------------------------------


def check_r10_sign(ctx: _Ctx) -> CheckResult:
    found, missing = [], []
    for a in R10_SIGN_VALUES:
        A, B = instantiate("R10", a, ctx.catalog), instantiate("R10", -a, ctx.catalog)
        try:
            cert = find_isomorphism(A, B, ctx.budget, ctx.seed)
            found.append({"alpha": str(a), "matrix": [[str(x) for x in r] for r in cert.matrix]})
        except SearchFailure:
            missing.append(str(a))
    grid = FAMILY_GRID[ClassId.R10]
    wrong = []
    for a1 in grid:
        for a2 in grid:
            if a2 in (a1, -a1):
                continue
            v = distinguish(instantiate("R10", a1, ctx.catalog), instantiate("R10", a2, ctx.catalog),
                            ctx.budget, ctx.seed)
            if isinstance(v, Isomorphic):
                wrong.append(f"R10({a1}) ~ R10({a2})")
    detail = {"certificates": found, "not_found": missing, "unexpected_isomorphic": wrong}
    return CheckResult(5, "r10-sign", _status(not wrong, bool(missing)), detail)


# 6 -------------------------------------------------------------------------


def separation_matrix(instances) -> dict:
    """``"A|B" -> first separating invariant`` or ``"tie"``, for ``(label, algebra)`` pairs."""
    fps = {lab: (fingerprint(A), pencil_profile(A)) for lab, A in instances}
    out = {}
    for (la, _), (lb, _) in combinations(instances, 2):
        (fa, pa), (fb, pb) = fps[la], fps[lb]
        diff = fa.first_difference(fb)
        if diff is not None:
            out[f"{la}|{lb}"] = diff[0]
        else:
            out[f"{la}|{lb}"] = "pencil_profile" if pa != pb else "tie"
    return out


def load_golden() -> dict:
    text = resources.files("leibniz4").joinpath("data/separation_golden.json").read_text()
    return json.loads(text)


_NAMED_PAIRS = [("R3", "R2"), ("R3", "R4(0)"), ("R3", "R4(1)"), ("R5", "R6"), ("R2", "R4(0)"), ("R2", "R4(1)")]


def _is_r10_pair(a, b) -> bool:
    return a[0] == b[0] == ClassId.R10 and a[1] == -b[1]


def check_pairwise(ctx: _Ctx) -> CheckResult:
    inst = _instances(ctx)
    labelled = [(_label(c, a), R) for c, a, R in inst]
    golden = load_golden()
    current = separation_matrix(labelled)
    drift = {k: {"expected": golden.get(k), "found": v} for k, v in current.items() if golden.get(k) != v}
    detail = {"algebras": len(inst), "pairs": len(current), "golden_mismatches": drift}
    if ctx.quick:
        detail["searches"] = "skipped in quick mode"
        return CheckResult(6, "pairwise", _status(not drift), detail)
    cross_iso, family_iso, undecided, named_bad = [], [], [], []
    verdicts = {}
    for (ca, aa, A), (cb, ab, B) in combinations(inst, 2):
        la, lb = _label(ca, aa), _label(cb, ab)
        v = distinguish(A, B, ctx.budget, ctx.seed)
        verdicts[(la, lb)] = v
        if isinstance(v, Isomorphic):
            entry = {"pair": [la, lb], "matrix": [[str(x) for x in r] for r in v.certificate.matrix]}
            if ca != cb:
                cross_iso.append(entry)
            elif not _is_r10_pair((ca, aa), (cb, ab)):
                family_iso.append(entry)
        elif not isinstance(v, NonIsomorphic):
            undecided.append([la, lb])
    for x, y in _NAMED_PAIRS:
        v = verdicts.get((x, y)) or verdicts.get((y, x))
        if not isinstance(v, NonIsomorphic):
            named_bad.append([x, y])
    detail.update({
        "cross_class_isomorphic": cross_iso,
        "within_family_isomorphic": family_iso,
        "undecided_count": len(undecided),
        "undecided_pairs": undecided,
        "named_pairs_not_separated": named_bad,
    })
    ok = not (drift or cross_iso or family_iso or named_bad)
    return CheckResult(6, "pairwise", _status(ok), detail)


# 7 -------------------------------------------------------------------------


def _round_trip_items(per_class: int, seed: int):
    items = []
    for cid in ClassId:
        grid = FAMILY_GRID.get(cid, (None,))
        for k in range(per_class):
            items.append((cid.value, grid[k % len(grid)], seed + 1000 * list(ClassId).index(cid) + k))
    return items


def _matches(cid: ClassId, alpha, res) -> bool:
    if res.class_id != cid:
        return False
    if cid == ClassId.R10:
        return res.alpha == canonical_r10(alpha)
    return res.alpha == alpha


def _round_trip_one(args):
    cid, alpha, seed, budget, search_seed, catalog = args
    cid = ClassId(cid)
    A = scramble(cid, alpha, seed, SCRAMBLE_HEIGHT).algebra
    try:
        res = classify4(A, budget, search_seed, catalog=catalog)
    except Unclassified:
        return "unclassified", None
    except PreconditionFailed as exc:
        return "precondition", exc.hypothesis
    exact = res.certificate.source == A
    if _matches(cid, alpha, res) and exact:
        return "correct", res.name
    return "misclassified", res.name


def check_round_trip(ctx: _Ctx) -> CheckResult:
    per_class = 3 if ctx.quick else ROUND_TRIP_PER_CLASS
    items = _round_trip_items(per_class, ctx.seed)
    catalog = None if ctx.catalog is CATALOG else ctx.catalog
    jobs = [(c, a, s, ctx.budget, ctx.seed, catalog) for c, a, s in items]
    if ctx.workers > 1:
        with ProcessPoolExecutor(ctx.workers) as pool:
            results = list(pool.map(_round_trip_one, jobs, chunksize=4))
    else:
        results = [_round_trip_one(j) for j in jobs]
    per, wrong = {}, {}
    for (c, a, s), (kind, got) in zip(items, results):
        row = per.setdefault(c, {"correct": 0, "misclassified": 0, "unclassified": 0, "precondition": 0})
        row[kind] += 1
        if kind in ("misclassified", "precondition"):
            key = f"{_label(c, a)} -> {got}"
            wrong[key] = wrong.get(key, 0) + 1
    total = len(items)
    correct = sum(r["correct"] for r in per.values())
    bad = sum(r["misclassified"] + r["precondition"] for r in per.values())
    undecided = total - correct - bad
    detail = {
        "scrambles": total,
        "per_class": per,
        "correct_rate": round(correct / total, 4),
        "misclassified": wrong,
        "unclassified": undecided,
    }
    if bad:
        status = FAIL
    elif correct / total >= ROUND_TRIP_RATE:
        status = PASS
    else:
        status = UNDECIDED
    return CheckResult(7, "round-trip", status, detail)


# 8 -------------------------------------------------------------------------


def _rand_q(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def _filiform_law(A: Algebra) -> bool:
    N = A.dim
    c = chi(A)
    return c[0] == N and all(c[i - 1] == max(N - i, 0) for i in range(2, N + 1))


def check_templates(ctx: _Ctx) -> CheckResult:
    rng = random.Random(ctx.seed)
    bad = []
    count = 0
    for n in (4, 5, 6, 7):
        A = nulfiliform(n)
        if chi(A) != tuple(range(n, 0, -1)) or leibniz_defect(A):
            bad.append(f"nulfiliform({n})")
        for s in range(TEMPLATE_SAMPLES):
            for name, make in (("mu1", filiform_mu1), ("mu2", filiform_mu2)):
                A = make(n, [_rand_q(rng) for _ in range(n - 2)], _rand_q(rng))
                count += 1
                if leibniz_defect(A) or not _filiform_law(A):
                    bad.append(f"{name}(n={n}) sample {s}")
    return CheckResult(8, "templates", _status(not bad), {"template_samples": count, "violations": bad})


# 9 -------------------------------------------------------------------------


def check_unitization(ctx: _Ctx) -> CheckResult:
    rng = random.Random(ctx.seed)
    hits, tested = [], 0
    for cid, a, R in _instances(ctx):
        if list(ClassId).index(cid) < list(ClassId).index(ClassId.R7):
            continue
        U = unitize(R)
        for _ in range(UNIT_SAMPLES):
            vec = [ZERO] * 4
            while not any(vec):
                vec = [Scalar(_rand_q(rng), _rand_q(rng)) if rng.random() < 0.8 else ZERO for _ in range(4)]
            x = (ONE,) + tuple(vec)
            tested += 1
            if is_idempotent(U, x):
                hits.append(f"{_label(cid, a)}: {[str(v) for v in vec]}")
    return CheckResult(9, "unitization", _status(not hits), {"elements": tested, "idempotents": hits})


# 10 ------------------------------------------------------------------------


def corrupted_catalog() -> dict:
    """The catalog with the ``-2`` of R7's ``[e_2, e_2]`` changed to ``-3``."""
    cat = dict(CATALOG)
    info = cat[ClassId.R7]
    build = {k: dict(v) for k, v in info.build.items()}
    build[(2, 2)][3] = -3
    cat[ClassId.R7] = dataclasses.replace(info, build=build)
    return cat


_FAST = (1, 4, 6)


def _bad_inputs():
    lie = from_products(4, {(1, 2): {3: 1}, (2, 1): {3: -1}, (1, 3): {4: 1}, (3, 1): {4: -1}})
    split = direct_sum(from_products(2, {(1, 1): {2: 1}}), from_products(2, {(1, 1): {2: 1}}))
    return [("non-Lie", lie), ("non-split", split), ("non-abelian", abelian(4))]


def check_negative_controls(ctx: _Ctx) -> CheckResult:
    bad_ctx = dataclasses.replace(ctx, catalog=corrupted_catalog(), quick=True)
    sub = [CRITERIA[k](bad_ctx) for k in _FAST]
    named = [c.name for c in sub if c.status == FAIL]
    pre = {}
    for expected, A in _bad_inputs():
        try:
            classify4(A, ctx.budget, ctx.seed)
            got = None
        except PreconditionFailed as exc:
            got = exc.hypothesis
        pre[expected] = got
    ok = bool(named) and all(k == v for k, v in pre.items())
    detail = {"corrupted_catalog_failed_checks": named, "precondition_failures": pre}
    return CheckResult(10, "negative-controls", _status(ok), detail)


CRITERIA = {
    1: check_identity,
    2: check_trichotomy,
    3: check_reductions,
    4: check_separations,
    5: check_r10_sign,
    6: check_pairwise,
    7: check_round_trip,
    8: check_templates,
    9: check_unitization,
    10: check_negative_controls,
}


def run_check(k: int, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED, catalog=None,
              quick: bool = False, workers: int = 1) -> CheckResult:
    ctx = _Ctx(budget, seed, catalog or CATALOG, quick, workers)
    t = time.perf_counter()
    res = CRITERIA[k](ctx)
    res.seconds = time.perf_counter() - t
    if res.status != FAIL and res.seconds > res.limit and not quick:
        res.status = FAIL
        res.detail["time_limit_exceeded"] = True
    return res


def verify_theorem(budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED, catalog=None,
                   quick: bool = False, only=None, workers: int = 1, progress=None) -> Report:
    """Run the criteria in order; ``progress`` is called with each finished check."""
    checks = []
    for k in sorted(only or CRITERIA):
        res = run_check(k, budget, seed, catalog, quick, workers)
        checks.append(res)
        if progress is not None:
            progress(res)
    return Report(checks, budget, seed, quick)
