"""Acceptance criteria 1-10, one test each, at the default budget and seed.

Every test appends a ``criterion N name: PASS|FAIL ...`` line that is printed
at the end of the session. Tolerances are the module constants of
``leibniz4.verify`` and are pinned below so a silent change shows up here.
Run as a script for the same lines without pytest.
"""

import json
import sys

import pytest

from leibniz4 import verify
from leibniz4.isomorphism import DEFAULT_BUDGET, DEFAULT_SEED


def test_pinned_tolerances():
    assert verify.TIME_LIMITS == {1: 1.0, 2: 30.0, 3: 5.0, 4: 5.0, 5: 10.0, 6: 120.0, 7: 600.0,
                                  8: 10.0, 9: 5.0, 10: 5.0}
    assert verify.ROUND_TRIP_RATE == 0.99
    assert verify.RANDOM_SAMPLES == 10_000
    assert verify.ROUND_TRIP_PER_CLASS == 100
    assert verify.SCRAMBLE_HEIGHT == 10
    assert (DEFAULT_BUDGET, DEFAULT_SEED) == (200, 20240101)


def _line(res) -> str:
    brief = {k: v if not isinstance(v, (list, dict)) or len(v) <= 4 else f"<{len(v)} entries>"
             for k, v in res.detail.items()}
    return (f"criterion {res.criterion:2d} {res.name}: {res.status.upper()} "
            f"({res.seconds:.1f}s / limit {res.limit:.0f}s) {json.dumps(brief, default=str)}")


@pytest.mark.parametrize("k", sorted(verify.CRITERIA))
def test_criterion(k, acceptance_lines):
    res = verify.run_check(k)
    line = _line(res)
    acceptance_lines.append(line)
    print(line)
    assert res.status == "pass", json.dumps(res.detail, default=str)


if __name__ == "__main__":
    failed = 0
    for k in sorted(verify.CRITERIA):
        res = verify.run_check(k)
        print(_line(res), flush=True)
        failed += res.status != "pass"
    sys.exit(1 if failed else 0)
