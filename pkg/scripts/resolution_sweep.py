"""Run every pointwise resolution check over a grid of (m, N, ring) and time it.

    python scripts/resolution_sweep.py --m 0..3 --N 6,8 --rings Z,F2
"""

import argparse
import time
from dataclasses import dataclass

from cychom.cli import parse_range
from cychom.resolution import verify_all
from cychom.rings import RingSpec


@dataclass
class Config:
    ms: tuple = (0, 1, 2)
    Ns: tuple = (6, 8)
    rings: tuple = ("Z", "F2")


def run(cfg: Config):
    print(f"{'ring':>4} {'m':>2} {'N':>2}  {'verdict':7} {'secs':>7}  failing")
    all_ok = True
    for name in cfg.rings:
        ring = RingSpec.parse(name)
        for N in cfg.Ns:
            for m in cfg.ms:
                t = time.perf_counter()
                reps = verify_all(m, N, ring)
                dt = time.perf_counter() - t
                bad = [r.check for r in reps if not r.ok]
                all_ok &= not bad
                print(f"{ring.name:>4} {m:>2} {N:>2}  {'pass' if not bad else 'FAIL':7} {dt:7.2f}  "
                      f"{','.join(bad)}")
    return all_ok


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", default="0..2", help="range lo..hi of objects [m]")
    ap.add_argument("--N", default="6,8", help="comma separated truncations")
    ap.add_argument("--rings", default="Z,F2")
    a = ap.parse_args()
    lo, hi = parse_range(a.m)
    ok = run(Config(tuple(range(lo, hi + 1)), tuple(int(x) for x in a.N.split(",")),
                    tuple(a.rings.split(","))))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
