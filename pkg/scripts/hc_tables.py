"""HH and HC of the bundled algebras over several rings, as one CSV table.

    python scripts/hc_tables.py --rings Z,F2,F3 --top 3
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from cychom.cyclic_homology import hc, hh
from cychom.hochschild import bundled_algebras, cyclic_nerve
from cychom.rings import RingSpec


@dataclass
class Config:
    rings: tuple = ("Z", "F2", "F3")
    top: int = 3
    normalized: bool = True


def truncation_for(dim, top):
    # the reliable window needs N >= top + 2; big algebras only get that much
    return top + 2 if dim > 2 else top + 3


def run(cfg: Config, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["algebra", "ring", "kind", "degree", "group"])
    for name in cfg.rings:
        ring = RingSpec.parse(name)
        for A in bundled_algebras(ring):
            M = cyclic_nerve(A, truncation_for(A.dim, cfg.top))
            for table in (hh(M, range(cfg.top + 1), cfg.normalized),
                          hc(M, range(cfg.top + 1), cfg.normalized)):
                for n, g in zip(table.degrees, table.groups):
                    w.writerow([A.name, ring.name, table.kind, n, str(g)])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rings", default="Z,F2,F3")
    ap.add_argument("--top", type=int, default=3)
    ap.add_argument("--unnormalized", action="store_true")
    a = ap.parse_args()
    run(Config(tuple(a.rings.split(",")), a.top, not a.unnormalized))


if __name__ == "__main__":
    main()
