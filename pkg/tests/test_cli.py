import json

import pytest

from leibniz4.catalog import instantiate
from leibniz4.cli import main
from leibniz4.core import from_products
from leibniz4.fileformat import FileFormatError, algebra_from_json, dump_algebra, load_algebra
from leibniz4.scalar import Scalar
from leibniz4.testgen import scramble
from leibniz4.catalog import CATALOG, sample_instances


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def write(tmp_path):
    def _write(A, name="a.json"):
        p = tmp_path / name
        dump_algebra(A, p)
        return p
    return _write


def test_file_round_trip_catalog(tmp_path):
    for n, (cid, alpha) in enumerate(sample_instances()):
        A = instantiate(cid, alpha)
        p = tmp_path / f"{n}.json"
        dump_algebra(A, p)
        assert load_algebra(p) == A


@pytest.mark.parametrize("doc", [
    {"dim": 0, "table": []},
    {"dim": 2, "table": [{"i": 1, "j": 1, "k": 3, "c": "1"}]},
    {"dim": 2, "table": [{"i": 1, "j": 1, "k": 2, "c": 1}]},
    {"dim": 2, "table": [{"i": 1, "j": 1, "k": 2}]},
    {"dim": 2, "table": [{"i": True, "j": 1, "k": 2, "c": "1"}]},
    [],
])
def test_bad_documents(doc):
    with pytest.raises(FileFormatError):
        algebra_from_json(doc)


def test_check(capsys, write):
    code, doc = run(capsys, "check", write(instantiate("R1")))
    assert code == 0 and doc["is_leibniz"] and doc["nilindex"] == 5 and not doc["is_lie"]


def test_check_not_leibniz(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"dim": 1, "table": [{"i": 1, "j": 1, "k": 1, "c": "1"}]}))
    code, doc = run(capsys, "check", p)
    assert code == 1 and not doc["is_leibniz"]
    assert doc["defect_witnesses"][0] == {"i": 1, "j": 1, "k": 1, "value": ["1"]}


def test_malformed_scalar(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"dim": 2, "table": [{"i": 1, "j": 1, "k": 2, "c": "1/0"}]}))
    code, doc = run(capsys, "check", p)
    assert code == 3 and "error" in doc


def test_missing_file(capsys, tmp_path):
    code, doc = run(capsys, "invariants", tmp_path / "nope.json")
    assert code == 3


@pytest.mark.parametrize("name, chi", [("R1", [4, 3, 2, 1]), ("R6", [4, 2, 1, 0]), ("R17", [4, 1, 0, 0])])
def test_invariants(capsys, write, name, chi):
    code, doc = run(capsys, "invariants", write(instantiate(name)))
    assert code == 0 and doc["fingerprint"]["chi"] == chi


def test_classify(capsys, write):
    code, doc = run(capsys, "classify", write(scramble("R8", None, 5).algebra))
    assert code == 0 and doc["class"] == "R8" and doc["verdict"] == "Classified"
    assert len(doc["certificate"]["matrix"]) == 4


def test_classify_lie_input(capsys, write):
    lie = from_products(4, {(1, 2): {3: 1}, (2, 1): {3: -1}})
    code, doc = run(capsys, "classify", write(lie))
    assert code == 1 and doc["verdict"] == "PreconditionFailed" and doc["hypothesis"] == "non-Lie"


def test_classify_budget_exhausted(capsys, write):
    code, doc = run(capsys, "classify", write(scramble("R11", None, 2).algebra), "--budget", "1")
    assert code in (0, 2)
    if code == 2:
        assert doc["verdict"] == "Undecided"


def test_isomorphic(capsys, write):
    a = write(instantiate("R3"), "a.json")
    b = write(instantiate("R2"), "b.json")
    code, doc = run(capsys, "isomorphic", a, b)
    assert code == 1 and doc["verdict"] == "NonIsomorphic"
    a = write(instantiate("R10", 2), "c.json")
    b = write(instantiate("R10", -2), "d.json")
    code, doc = run(capsys, "isomorphic", a, b)
    assert code == 0 and doc["verdict"] == "Isomorphic"
    code, _ = run(capsys, "isomorphic", a, a)
    assert code == 0


def test_isomorphic_dimension_mismatch(capsys, write):
    a = write(instantiate("R3"), "a.json")
    b = write(from_products(3, {(1, 1): {2: 1}}), "b.json")
    code, doc = run(capsys, "isomorphic", a, b)
    assert code == 3


def test_catalog(capsys, tmp_path):
    code, doc = run(capsys, "catalog", "list")
    assert code == 0 and doc["count"] == len(CATALOG) == 17
    code, doc = run(capsys, "catalog", "emit", "R4", "--param", "alpha=1")
    assert code == 0 and algebra_from_json(doc) == instantiate("R4", Scalar(1))
    code, doc = run(capsys, "catalog", "emit", "R16", "--param", "alpha=1")
    assert code == 3
    code, doc = run(capsys, "catalog", "emit", "R99")
    assert code == 3
    out = tmp_path / "r9.json"
    code, doc = run(capsys, "catalog", "emit", "R9", "--param", "alpha=1/2+1i", "-o", out)
    assert code == 0 and load_algebra(out) == instantiate("R9", Scalar(0.5, 1))


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == 3


def test_verify_theorem_quick(capsys, tmp_path):
    rep = tmp_path / "rep.json"
    code, doc = run(capsys, "verify-theorem", "--quick", "--only", "1", "--only", "9", "--report", rep)
    assert code == 0 and doc["status"] == "pass"
    assert [c["criterion"] for c in doc["checks"]] == [1, 9]
    assert json.loads(rep.read_text()) == doc


def test_verify_theorem_corrupted(capsys):
    code, doc = run(capsys, "verify-theorem", "--quick", "--only", "6", "--corrupt-catalog")
    assert doc["checks"][0]["name"] == "pairwise"
    assert code == 1 and doc["status"] == "fail"
