"""Print the natural cochain complex Hom(Tot K, k) at [0] and the class of delta.

One scalar per bicomplex entry; the printout shows each coboundary matrix,
H^1, H^2 and the coordinate of delta against the chosen H^2 generator.

    python scripts/delta_cochains.py --N 8 --rings Z,F2,F5
"""

import argparse
from dataclasses import dataclass

from cychom.resolution import check_delta_generator, invariant_cochains
from cychom.rings import RingSpec


@dataclass
class Config:
    N: int = 8
    rings: tuple = ("Z", "F2", "F5")


def run(cfg: Config):
    for name in cfg.rings:
        ring = RingSpec.parse(name)
        C, labels, bad = invariant_cochains(cfg.N, ring)
        print(f"== {ring.name}, N = {cfg.N}")
        for n in sorted(labels):
            if n + 1 in labels:
                print(f"  d: C^{n} -> C^{n + 1}   entries {labels[n]} -> {labels[n + 1]}")
                for row in C.d(-n).to_dense():
                    print("     ", row)
        if bad:
            print("  non-natural blocks:", bad)
        rep = check_delta_generator(cfg.N, ring)
        print(f"  H^1 = {rep.witness['H1']}, H^2 = {rep.witness['H2']}, "
              f"delta = {rep.witness.get('delta_coords')}  [{rep.verdict}]")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=8)
    ap.add_argument("--rings", default="Z,F2,F5")
    a = ap.parse_args()
    run(Config(a.N, tuple(a.rings.split(","))))


if __name__ == "__main__":
    main()
