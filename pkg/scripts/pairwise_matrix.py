"""Print the invariant separation table of the sampled catalog instances.

With ``--search`` every tied pair is also sent through ``distinguish``.
``--write-golden`` refreshes the packaged golden table; review the diff first.
"""

import argparse
import json
from collections import Counter
from pathlib import Path

from leibniz4.catalog import instantiate, sample_instances
from leibniz4.isomorphism import Isomorphic, NonIsomorphic, distinguish
from leibniz4.verify import separation_matrix

GOLDEN = Path(__file__).resolve().parents[1] / "src" / "leibniz4" / "data" / "separation_golden.json"


def label(cid, alpha):
    return str(cid) if alpha is None else f"{cid}({alpha})"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--search", action="store_true")
    ap.add_argument("--budget", type=int, default=200)
    ap.add_argument("--write-golden", action="store_true")
    args = ap.parse_args()

    inst = [(label(c, a), instantiate(c, a)) for c, a in sample_instances()]
    table = separation_matrix(inst)
    print(f"{len(inst)} algebras, {len(table)} pairs")
    for comp, n in Counter(table.values()).most_common():
        print(f"  {comp:28} {n}")
    algebras = dict(inst)
    for pair, comp in table.items():
        if comp != "tie":
            continue
        line = f"tie {pair}"
        if args.search:
            a, b = pair.split("|")
            v = distinguish(algebras[a], algebras[b], args.budget)
            if isinstance(v, Isomorphic):
                line += "  isomorphic " + json.dumps([[str(x) for x in r] for r in v.certificate.matrix])
            elif isinstance(v, NonIsomorphic):
                line += f"  separated by {v.component}"
            else:
                line += "  undecided"
        print(line)
    if args.write_golden:
        GOLDEN.write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")
        print(f"wrote {GOLDEN}")


if __name__ == "__main__":
    main()
