"""Scramble each class, classify it back and tabulate the outcomes."""

import argparse
import json
import time
from collections import Counter

from leibniz4.catalog import ClassId
from leibniz4.isomorphism import PreconditionFailed, Unclassified, classify4
from leibniz4.testgen import scramble
from leibniz4.verify import FAMILY_GRID, SCRAMBLE_HEIGHT


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--per-class", type=int, default=10)
    ap.add_argument("--height", type=int, default=SCRAMBLE_HEIGHT)
    ap.add_argument("--budget", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--classes", nargs="*", default=[c.value for c in ClassId])
    args = ap.parse_args()

    summary = {}
    for name in args.classes:
        cid = ClassId(name)
        grid = FAMILY_GRID.get(cid, (None,))
        outcomes = Counter()
        t = time.perf_counter()
        for k in range(args.per_class):
            alpha = grid[k % len(grid)]
            A = scramble(cid, alpha, args.seed + k, args.height).algebra
            try:
                outcomes[classify4(A, args.budget).name] += 1
            except Unclassified:
                outcomes["undecided"] += 1
            except PreconditionFailed as exc:
                outcomes[f"precondition {exc.hypothesis}"] += 1
        dt = (time.perf_counter() - t) / args.per_class
        summary[name] = dict(outcomes)
        print(f"{name:4} {dt:6.3f}s/item  {dict(outcomes)}", flush=True)
    print(json.dumps(summary, indent=1))


if __name__ == "__main__":
    main()
