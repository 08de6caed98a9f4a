"""HN at every column depth P, to watch the stabilization protocol at work.

    python scripts/hn_depths.py --degrees=-4..0 --max-depth 10
"""

import argparse
from dataclasses import dataclass

from cychom.cli import parse_range
from cychom.complexes import homology
from cychom.cyclic_homology import as_mixed, hn_required_truncation, tot_bn
from cychom.cyclic_module import constant_module
from cychom.lambda_cat import representable_module
from cychom.rings import RingSpec


@dataclass
class Config:
    degrees: tuple = (-4, 0)
    max_depth: int = 10
    ring: str = "Z"


def run(cfg: Config):
    ring = RingSpec.parse(cfg.ring)
    lo, hi = cfg.degrees
    N = hn_required_truncation(hi, cfg.max_depth)
    cases = {"ground": constant_module(ring, N), "Lambda(-,0)": representable_module(ring, 0, N)}
    for name, M in cases.items():
        X = as_mixed(M)
        print(f"== {name} over {ring.name}, degrees {lo}..{hi}, N = {N}")
        prev = None
        for P in range((-lo + 1) // 2, cfg.max_depth + 1):
            T = tot_bn(X, P)
            row = [str(homology(T, n)) for n in range(lo, hi + 1)]
            mark = "" if prev is None else ("  same" if row == prev else "  changed")
            print(f"  P = {P:2d}: {row}{mark}")
            prev = row


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degrees", default="-4..0")
    ap.add_argument("--max-depth", type=int, default=10)
    ap.add_argument("--ring", default="Z")
    a = ap.parse_args()
    run(Config(parse_range(a.degrees), a.max_depth, a.ring))


if __name__ == "__main__":
    main()
