"""Write every sampled catalog instance, plus scrambled copies, as algebra files."""

import argparse
from pathlib import Path

from leibniz4.catalog import instantiate, sample_instances
from leibniz4.fileformat import dump_algebra, dumps
from leibniz4.testgen import scramble


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--scrambles", type=int, default=1)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    n = 0
    for cid, alpha in sample_instances():
        stem = str(cid) if alpha is None else f"{cid}_{str(alpha).replace('/', 'o')}"
        dump_algebra(instantiate(cid, alpha), args.outdir / f"{stem}.json")
        for k in range(args.scrambles):
            inst = scramble(cid, alpha, args.seed + k)
            (args.outdir / f"{stem}.scrambled{k}.json").write_text(dumps(inst.to_json()) + "\n")
        n += 1
    print(f"wrote {n} algebras to {args.outdir}")


if __name__ == "__main__":
    main()
