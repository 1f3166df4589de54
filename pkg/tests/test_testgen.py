from leibniz4.catalog import instantiate
from leibniz4.core import is_leibniz, is_lie, is_nilpotent
from leibniz4.invariants import chi, split_detect
from leibniz4.isomorphism import Unclassified, classify4
from leibniz4.linalg import det, identity
from leibniz4.testgen import random_invertible, random_leibniz4, sample_leibniz4, scramble


def test_random_invertible():
    T = random_invertible(4, 1, height=1)
    assert det(T)
    assert all(x.re.denominator == 1 for r in T for x in r)
    assert random_invertible(4, 9) == random_invertible(4, 9)


def test_scramble():
    inst = scramble("R1", None, 7)
    assert chi(inst.algebra) == (4, 3, 2, 1) and inst.check() and is_leibniz(inst.algebra)
    flat = scramble("R8", None, 3, height=0)
    assert flat.scramble == identity(4) and flat.algebra == instantiate("R8")


def test_scramble_json_has_truth():
    doc = scramble("R10", -2, 1).to_json()
    assert doc["truth"]["class"] == "R10" and doc["truth"]["alpha"] == "-2"
    assert len(doc["truth"]["scramble"]) == 4


def test_random_leibniz4():
    A, draws = sample_leibniz4(3)
    assert draws >= 1 and is_leibniz(A) and is_nilpotent(A)
    assert random_leibniz4(3) == A


def test_random_samples_classify_without_errors():
    """Accepted non-Lie non-split samples classify, or stay undecided; never wrongly."""
    done = undecided = 0
    for seed in range(40):
        A = random_leibniz4(seed)
        if is_lie(A) or split_detect(A).split or not any(any(v) for r in A.table for v in r):
            continue
        try:
            res = classify4(A)
        except Unclassified:
            undecided += 1
            continue
        assert res.certificate.source == A
        done += 1
    assert done > 0 and undecided <= done
