"""Command line interface: ``leibniz4 <command> ...``.

Every command prints one JSON document. Exit codes: 0 success or verified,
1 negative verdict, 2 undecided, 3 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .catalog import CATALOG, ClassId, ParamOutOfDomain, instantiate
from .core import (
    DimensionMismatch,
    is_associative,
    is_lie,
    is_maltsev,
    is_nilpotent,
    leibniz_defect,
    nilindex,
)
from .fileformat import FileFormatError, algebra_to_json, dumps, load_algebra, matrix_json, scalar_json
from .invariants import fingerprint, pencil_profile
from .isomorphism import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    METHODS,
    Isomorphic,
    NonIsomorphic,
    PreconditionFailed,
    Unclassified,
    classify4,
    distinguish,
)
from .scalar import MalformedScalar, parse_scalar

EXIT_OK, EXIT_NEGATIVE, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3

__all__ = ["main", "build_parser", "cmd_check", "cmd_invariants", "cmd_classify", "cmd_isomorphic",
           "cmd_catalog", "cmd_verify_theorem"]


class InputError(Exception):
    pass


def _load(path):
    try:
        return load_algebra(path)
    except (FileFormatError, MalformedScalar) as exc:
        raise InputError(str(exc)) from None


def _certificate_json(cert) -> dict:
    return {
        "source": cert.source.label,
        "target": cert.target.label,
        "convention": "row i holds the image of e_i",
        "matrix": matrix_json(cert.matrix),
    }


def _fingerprint_json(A) -> dict:
    out = fingerprint(A).as_dict()
    out["pencil_profile"] = pencil_profile(A)
    return out


def cmd_check(path) -> tuple[dict, int]:
    A = _load(path)
    defect = leibniz_defect(A)
    nil = is_nilpotent(A)
    report = {
        "command": "check",
        "label": A.label,
        "dim": A.dim,
        "is_leibniz": not defect,
        "defect_witnesses": [{"i": i, "j": j, "k": k, "value": [str(x) for x in v]}
                             for (i, j, k), v in defect[:10]],
        "is_lie": is_lie(A),
        "is_associative": is_associative(A),
        "is_maltsev": is_maltsev(A),
        "is_nilpotent": nil,
        "nilindex": nilindex(A) if nil else None,
    }
    return report, EXIT_OK if not defect else EXIT_NEGATIVE


def cmd_invariants(path) -> tuple[dict, int]:
    A = _load(path)
    return {"command": "invariants", "label": A.label, "fingerprint": _fingerprint_json(A)}, EXIT_OK


def cmd_classify(path, budget=DEFAULT_BUDGET, seed=DEFAULT_SEED, method="exact") -> tuple[dict, int]:
    A = _load(path)
    report = {"command": "classify", "label": A.label, "budget": budget, "seed": seed}
    try:
        res = classify4(A, budget, seed, method=method)
    except PreconditionFailed as exc:
        report.update({"verdict": "PreconditionFailed", "hypothesis": exc.hypothesis, "message": str(exc)})
        return report, EXIT_NEGATIVE
    except Unclassified as exc:
        report.update({"verdict": "Undecided", "budget_used": exc.restarts, "message": str(exc)})
        return report, EXIT_UNDECIDED
    report.update({
        "verdict": "Classified",
        "class": str(res.class_id),
        "alpha": scalar_json(res.alpha),
        "name": res.name,
        "certificate": _certificate_json(res.certificate),
        "fingerprint": res.fingerprint.as_dict(),
    })
    return report, EXIT_OK


def cmd_isomorphic(path_a, path_b, budget=DEFAULT_BUDGET, seed=DEFAULT_SEED,
                   method="exact") -> tuple[dict, int]:
    A, B = _load(path_a), _load(path_b)
    if A.dim != B.dim:
        raise InputError(f"dimension mismatch: {A.dim} vs {B.dim}")
    report = {"command": "isomorphic", "a": A.label, "b": B.label, "budget": budget, "seed": seed}
    try:
        v = distinguish(A, B, budget, seed, method=method)
    except DimensionMismatch as exc:
        raise InputError(str(exc)) from None
    if isinstance(v, Isomorphic):
        report.update({"verdict": "Isomorphic", "certificate": _certificate_json(v.certificate)})
        return report, EXIT_OK
    if isinstance(v, NonIsomorphic):
        report.update({"verdict": "NonIsomorphic", "invariant": v.component, "values": list(v.values)})
        return report, EXIT_NEGATIVE
    report.update({"verdict": "Undecided", "budget_used": v.restarts,
                   "best_residual": None if v.best_residual == float("inf") else v.best_residual})
    return report, EXIT_UNDECIDED


def _parse_params(params) -> dict:
    out = {}
    for p in params or []:
        key, sep, value = p.partition("=")
        if not sep or key != "alpha":
            raise InputError(f"bad parameter {p!r}; expected alpha=<scalar>")
        try:
            out[key] = parse_scalar(value)
        except MalformedScalar as exc:
            raise InputError(str(exc)) from None
    return out


def cmd_catalog(action, class_id=None, params=None, output=None) -> tuple[dict, int]:
    if action == "list":
        entries = [{"class": str(info.cid), "parameter_domain": info.domain, "kind": info.kind, "note": info.note}
                   for info in CATALOG.values()]
        return {"command": "catalog", "count": len(entries), "classes": entries}, EXIT_OK
    try:
        cid = ClassId(class_id)
    except ValueError:
        raise InputError(f"unknown class {class_id!r}") from None
    alpha = _parse_params(params).get("alpha")
    try:
        A = instantiate(cid, alpha)
    except ParamOutOfDomain as exc:
        raise InputError(str(exc)) from None
    doc = algebra_to_json(A)
    if output is not None:
        Path(output).write_text(dumps(doc) + "\n")
    return doc, EXIT_OK


def cmd_verify_theorem(budget=DEFAULT_BUDGET, seed=DEFAULT_SEED, report_path=None, quick=False, only=None,
                       workers=1, corrupt=False, stream=None) -> tuple[dict, int]:
    from .verify import corrupted_catalog, verify_theorem

    def progress(res):
        if stream is not None:
            print(f"[{res.status.upper():9}] criterion {res.criterion:2} {res.name} ({res.seconds:.1f}s)",
                  file=stream, flush=True)

    catalog = corrupted_catalog() if corrupt else None
    rep = verify_theorem(budget, seed, catalog=catalog, quick=quick, only=only, workers=workers,
                         progress=progress)
    doc = {"command": "verify-theorem", **rep.as_dict()}
    if report_path is not None:
        Path(report_path).write_text(dumps(doc) + "\n")
    code = {"pass": EXIT_OK, "fail": EXIT_NEGATIVE, "undecided": EXIT_UNDECIDED}[rep.status]
    return doc, code


def _search_flags(p):
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search nodes plus restarts")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--method", choices=METHODS, default="exact")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(dumps({"error": message}))
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leibniz4", description="Exact tools for 4-dimensional nilpotent Leibniz algebras.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="identities and nilpotency of an algebra file")
    p.add_argument("path")
    p = sub.add_parser("invariants", help="fingerprint of an algebra file")
    p.add_argument("path")
    p = sub.add_parser("classify", help="identify the class with a certificate")
    p.add_argument("path")
    _search_flags(p)
    p = sub.add_parser("isomorphic", help="decide isomorphism of two algebra files")
    p.add_argument("path_a")
    p.add_argument("path_b")
    _search_flags(p)

    p = sub.add_parser("catalog", help="list classes or emit a representative")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    csub.add_parser("list")
    e = csub.add_parser("emit")
    e.add_argument("class_id")
    e.add_argument("--param", action="append", metavar="alpha=VALUE")
    e.add_argument("-o", "--output")

    p = sub.add_parser("verify-theorem", help="run the acceptance suite")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--report", dest="report_path")
    p.add_argument("--quick", action="store_true", help="reduced sample counts, no pairwise searches")
    p.add_argument("--only", type=int, action="append", choices=range(1, 11), metavar="N")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--corrupt-catalog", dest="corrupt", action="store_true",
                   help="run against the catalog fixture with R7 altered")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "check":
            doc, code = cmd_check(args.path)
        elif args.command == "invariants":
            doc, code = cmd_invariants(args.path)
        elif args.command == "classify":
            doc, code = cmd_classify(args.path, args.budget, args.seed, args.method)
        elif args.command == "isomorphic":
            doc, code = cmd_isomorphic(args.path_a, args.path_b, args.budget, args.seed, args.method)
        elif args.command == "catalog":
            doc, code = cmd_catalog(args.action, getattr(args, "class_id", None),
                                    getattr(args, "param", None), getattr(args, "output", None))
            if getattr(args, "output", None):
                doc = {"command": "catalog", "written": args.output}
        else:
            doc, code = cmd_verify_theorem(args.budget, args.seed, args.report_path, args.quick, args.only,
                                           args.workers, args.corrupt, stream=sys.stderr)
    except InputError as exc:
        doc, code = {"error": str(exc)}, EXIT_INPUT
    print(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
