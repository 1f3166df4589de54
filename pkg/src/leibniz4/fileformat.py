"""JSON algebra files and the JSON shapes of reports.

An algebra file looks like::

    {"dim": 4, "label": "R8",
     "table": [{"i": 1, "j": 2, "k": 3, "c": "1"}, {"i": 2, "j": 2, "k": 3, "c": "-1"}]}

Indices are 1-based, ``c`` is an exact scalar string (``RAT``, ``RAT+RATi`` or
``RAT-RATi``) and omitted products are zero. ``basis`` is an optional list of
names. Templates written on ``e_0..e_n`` store ``e_m`` at index ``m + 1``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import Algebra, validate
from .scalar import MalformedScalar, Scalar, parse_scalar

__all__ = [
    "FileFormatError",
    "algebra_from_json",
    "algebra_to_json",
    "load_algebra",
    "dump_algebra",
    "matrix_json",
    "scalar_json",
    "dumps",
]


class FileFormatError(ValueError):
    pass


def algebra_from_json(doc) -> Algebra:
    if not isinstance(doc, dict):
        raise FileFormatError("algebra file must be a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FileFormatError(f"'dim' must be a positive integer, got {dim!r}")
    table = doc.get("table", [])
    if not isinstance(table, list):
        raise FileFormatError("'table' must be a list")
    basis = doc.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim):
        raise FileFormatError(f"'basis' must list {dim} names")
    entries = []
    for n, e in enumerate(table):
        if not isinstance(e, dict) or set(e) != {"i", "j", "k", "c"}:
            raise FileFormatError(f"table entry {n} must have exactly the keys i, j, k, c")
        if not isinstance(e["c"], str):
            raise FileFormatError(f"table entry {n}: 'c' must be a scalar string")
        for key in "ijk":
            if isinstance(e[key], bool) or not isinstance(e[key], int):
                raise FileFormatError(f"table entry {n}: '{key}' must be an integer")
        entries.append((e["i"], e["j"], e["k"], parse_scalar(e["c"])))
    try:
        return validate(entries, dim, doc.get("label"))
    except MalformedScalar:
        raise
    except ValueError as exc:
        raise FileFormatError(str(exc)) from None


def algebra_to_json(A: Algebra, basis=None) -> dict:
    doc = {"dim": A.dim}
    if basis is not None:
        doc["basis"] = list(basis)
    doc["table"] = [{"i": i, "j": j, "k": k, "c": str(c)} for i, j, k, c in A.entries()]
    if A.label is not None:
        doc["label"] = A.label
    return doc


def load_algebra(path) -> Algebra:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return algebra_from_json(doc)


def dump_algebra(A: Algebra, path=None) -> str:
    text = dumps(algebra_to_json(A))
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def scalar_json(x):
    return None if x is None else str(x)


def matrix_json(T) -> list:
    return [[str(x) for x in row] for row in T]


def _default(obj):
    if isinstance(obj, Scalar):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, default=_default)
