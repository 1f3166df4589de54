"""Census of random nilpotent Leibniz tables: chi counts and classification results."""

import argparse
from collections import Counter

from leibniz4.core import is_lie
from leibniz4.invariants import chi, split_detect
from leibniz4.isomorphism import Unclassified, classify4
from leibniz4.testgen import sample_leibniz4


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=2000)
    ap.add_argument("--classify", type=int, default=0, help="classify this many non-Lie non-split samples")
    ap.add_argument("--budget", type=int, default=200)
    args = ap.parse_args()

    chis, classes = Counter(), Counter()
    draws = 0
    todo = args.classify
    for seed in range(args.n):
        A, d = sample_leibniz4(seed)
        draws += d
        chis[chi(A)] += 1
        if todo and not is_lie(A) and not split_detect(A).split and any(any(v) for r in A.table for v in r):
            todo -= 1
            try:
                classes[classify4(A, args.budget).name] += 1
            except Unclassified:
                classes["undecided"] += 1
    print(f"samples {args.n}, draws {draws}, acceptance rate {args.n / draws:.3f}")
    for c, k in chis.most_common():
        print(f"  chi {c}: {k}")
    for c, k in sorted(classes.items()):
        print(f"  {c}: {k}")


if __name__ == "__main__":
    main()
