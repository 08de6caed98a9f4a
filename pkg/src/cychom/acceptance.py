"""The twelve acceptance checks, shared by ``cychom selftest`` and the test suite."""

from __future__ import annotations

import contextlib
import io
import itertools
import os
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import lambda_cat as lc
from .complexes import homology
from .cyclic_homology import hc, hh, hn, sbi_check
from .cyclic_module import check_identities
from .hochschild import (bundled_algebras, cyclic_nerve, ground_algebra, matrix_algebra,
                         random_associative_algebra)
from .mixed import kassel_iso_check
from .resolution import (check_delta_generator, check_delta_mod_p, check_phi_psi,
                         check_resolution, check_row_exactness)
from .rings import GF, ZZ

RANDOM_SEED = 20240917
N_RANDOM = 25


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str = ""
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} -- {self.detail}"

    def to_json(self):
        # no timings, so reports stay byte-identical between runs
        return {"criterion": self.number, "title": self.title, "ok": self.ok,
                "detail": self.detail, "failures": [str(f) for f in self.failures[:20]]}


# ---------------------------------------------------------------------------
# 1 and 2: operator identities on cyclic nerves


def identity_suite_algebras(n_random=N_RANDOM, seed=RANDOM_SEED):
    """Random integral algebras of rank 1..3 followed by the bundled ones."""
    rng = random.Random(seed)
    dims = [1 + (k % 3) for k in range(n_random)]
    return [random_associative_algebra(ZZ, d, rng) for d in dims]


@lru_cache(maxsize=4)
def _identity_violations(N=6, n_random=N_RANDOM):
    out = []
    randoms = identity_suite_algebras(n_random)
    for ring in (ZZ, GF(2), GF(3)):
        algs = [A.change_ring(ring) for A in randoms] + bundled_algebras(ring)
        for k, A in enumerate(algs):
            M = cyclic_nerve(A, N)
            for v in check_identities(M):
                out.append((ring.name, k, A.name, v))
    return tuple(out), len(randoms), len(bundled_algebras(ZZ))


def criterion_1(quick=False):
    viol, nr, nb = _identity_violations(5 if quick else 6, 8 if quick else N_RANDOM)
    bad = [v for v in viol if v[3][0] in ("b^2", "B^2", "bB+Bb")]
    return not bad, f"b^2 = B^2 = bB+Bb = 0 on {nr} random + {nb} bundled algebras over Z, F2, F3", bad


def criterion_2(quick=False):
    viol, nr, nb = _identity_violations(5 if quick else 6, 8 if quick else N_RANDOM)
    bad = [v for v in viol if v[3][0] == "s b' + b' s = id"]
    return not bad, f"s_-1 b' + b' s_-1 = id on the same {nr + nb} algebras", bad


# ---------------------------------------------------------------------------
# 3: row exactness


def criterion_3(quick=False):
    bad, count = [], 0
    for ring in (ZZ, GF(2), GF(3)):
        for n in range(0, 5 if quick else 7):
            rep = check_row_exactness(n, 1, ring)
            count += rep.witness.get("preimages_checked", 0)
            if not rep.ok:
                bad.append((ring.name, n, rep.violations[:2]))
    return not bad, f"kernels = images for n <= 6 over Z, F2, F3; {count} constructed preimages verified", bad


# ---------------------------------------------------------------------------
# 4: the cyclic category


def criterion_4(quick=False):
    from math import comb

    bad = []
    for n in range(5):
        for m in range(5):
            homs = lc.hom_set(n, m)
            if len(homs) != (n + 1) * comb(n + m + 1, n + 1) or len(set(homs)) != len(homs):
                bad.append(("count", n, m, len(homs)))
    for n in range(3):
        for m in range(3):
            graphs = {lc.to_graph(f) for f in lc.hom_set(n, m)}
            if graphs != set(lc.gph_enumerate(n, m)):
                bad.append(("graph oracle", n, m))
            for l in range(3):
                for f in lc.hom_set(n, m):
                    for g in lc.hom_set(m, l):
                        if lc.to_graph(lc.compose(g, f)) != lc.gph_compose(lc.to_graph(g), lc.to_graph(f)):
                            bad.append(("graph composition", f, g))
    top = 2 if quick else 3
    triples = _check_category_laws(top, bad)
    return not bad, f"counts for n,m <= 4, graph oracle for n,m <= 2, {triples} composable triples (degrees <= {top})", bad


def _check_category_laws(top, bad):
    homs = {(a, b): lc.hom_set(a, b) for a in range(top + 1) for b in range(top + 1)}
    idx = {k: {f: i for i, f in enumerate(v)} for k, v in homs.items()}
    # comp[(a, b, c)][j][i] = index of homs[b,c][j] . homs[a,b][i] in homs[a,c]
    comp = {}
    for a, b, c in itertools.product(range(top + 1), repeat=3):
        tgt = idx[(a, c)]
        comp[(a, b, c)] = [[tgt[lc.compose(g, f)] for f in homs[(a, b)]] for g in homs[(b, c)]]
    for a, b in homs:
        ida, idb = idx[(a, a)][lc.identity(a)], idx[(b, b)][lc.identity(b)]
        n_ab = len(homs[(a, b)])
        if any(comp[(a, a, b)][i][ida] != i for i in range(n_ab)):
            bad.append(("right identity", a, b))
        if any(comp[(a, b, b)][idb][i] != i for i in range(n_ab)):
            bad.append(("left identity", a, b))
    count = 0
    for a, b, c, d in itertools.product(range(top + 1), repeat=4):
        abc, bcd, acd, abd = comp[(a, b, c)], comp[(b, c, d)], comp[(a, c, d)], comp[(a, b, d)]
        nf = len(homs[(a, b)])
        for k, row_bcd in enumerate(bcd):
            # (h . g) . f  vs  h . (g . f)
            acd_k = acd[k]
            for j, hg in enumerate(row_bcd):
                left = abd[hg]
                right = abc[j]
                if any(left[i] != acd_k[right[i]] for i in range(nf)):
                    bad.append(("associativity", a, b, c, d, j, k))
                count += nf
    return count


# ---------------------------------------------------------------------------
# 5 and 6: the resolution lemma and the delta class


def criterion_5(quick=False):
    bad = []
    N = 6 if quick else 8
    ms = range(3 if quick else 4)
    for ring in (ZZ, GF(2)):
        for m in ms:
            for rep in (check_resolution(m, N, ring), check_phi_psi(m, N, ring)):
                if not rep.ok:
                    bad.append((ring.name, m, rep.check, rep.violations[:2]))
    return not bad, f"Tot K, Tot L resolve k and Tot M is acyclic in degrees <= {N - 2}; phi, psi exact; m <= {max(ms)}, N = {N}, Z and F2", bad


def criterion_6(quick=False):
    bad = []
    rep = check_delta_generator(8, ZZ)
    if not rep.ok:
        bad.append(rep.violations)
    coords = rep.witness.get("delta_coords")
    for p in (2, 5):
        r = check_delta_mod_p(8, p)
        if not r.ok:
            bad.append((p, r.violations))
    return not bad, f"H^2 = {rep.witness.get('H2')}, delta class coordinate {coords}; reductions mod 2 and 5 agree", bad


# ---------------------------------------------------------------------------
# 7: Kassel's isomorphisms


def criterion_7(quick=False):
    bad = []
    N, P = (5, 4) if quick else (6, 6)
    cases = [(f"representable m={m}", lc.representable_module(ZZ, m, N)) for m in range(3)]
    for A in bundled_algebras(ZZ):
        cases.append((A.name, cyclic_nerve(A, N)))
    for name, M in cases:
        rep = kassel_iso_check(M, P)
        if not rep.ok:
            bad.append((name, rep.violations[:2]))
    return not bad, f"tensor and Hom sides match entrywise for {len(cases)} cyclic modules (N = {N}, P = {P})", bad


# ---------------------------------------------------------------------------
# 8, 9, 10, 11: homology tables


def criterion_8(quick=False):
    bad = []
    A = ground_algebra(ZZ)
    t_hh = hh(cyclic_nerve(A, 7), range(6)).as_strings()
    t_hc = hc(cyclic_nerve(A, 7), range(6)).as_strings()
    t_hn = hn(cyclic_nerve(A, 18), range(-4, 1))
    if t_hh != ["Z", "0", "0", "0", "0", "0"]:
        bad.append(("HH", t_hh))
    if t_hc != ["Z", "0", "Z", "0", "Z", "0"]:
        bad.append(("HC", t_hc))
    if t_hn.as_strings() != ["Z", "0", "Z", "0", "Z"] or not all(t_hn.stabilized) or t_hn.depth > 6:
        bad.append(("HN", t_hn.as_strings(), t_hn.depth, t_hn.stabilized))
    return not bad, f"HH = {t_hh}, HC = {t_hc}, HN(-4..0) = {t_hn.as_strings()} stable at depth {t_hn.depth}", bad


def criterion_9(quick=False):
    F2 = GF(2)
    top = 2 if quick else 3
    a = hh(cyclic_nerve(matrix_algebra(F2), top + 2), range(top + 1)).groups
    b = hh(cyclic_nerve(ground_algebra(F2), top + 2), range(top + 1)).groups
    bad = [] if a == b else [([str(g) for g in a], [str(g) for g in b])]
    return not bad, f"HH_n(M2(F2)) = {[str(g) for g in a]} and HH_n(F2) = {[str(g) for g in b]} for n <= {top}", bad


def criterion_10(quick=False):
    bad, spots = [], 0
    hi = 3 if quick else 4
    for ring in (GF(2), GF(5)):
        for A in bundled_algebras(ring):
            rep = sbi_check(cyclic_nerve(A, hi + 2), range(hi + 1))
            spots += rep.witness.get("spots", 0)
            if not rep.ok:
                bad.append((ring.name, A.name, rep.violations[:2]))
    return not bad, f"SBI exact at {spots} spots (bundled algebras over F2, F5, degrees <= {hi})", bad


def criterion_11(quick=False):
    bad = []
    res = {}
    for normalized in (True, False):
        C = lc.circle_complex(ZZ, normalized=normalized, N=6)
        groups = [str(homology(C, n)) for n in range(5)]
        res[normalized] = groups
        if groups != ["Z", "Z", "0", "0", "0"]:
            bad.append((normalized, groups))
    return not bad, f"chains on Lambda(-, 0): normalized {res[True]}, unnormalized {res[False]}", bad


# ---------------------------------------------------------------------------
# 12: determinism


DETERMINISM_COMMANDS = [
    ["hc", "ground.alg", "--ring", "Z", "--degrees", "0..5", "--trunc", "8"],
    ["hn", "dual_numbers.alg", "--ring", "F2", "--degrees=-2..0", "--trunc", "12"],
    ["hh", "matrix2.alg", "--ring", "F3", "--degrees", "0..2", "--trunc", "4", "--format", "csv"],
    ["verify", "--m", "1", "--N", "5", "--ring", "Z"],
    ["lambda", "--hom", "1", "1"],
]


def _run_cli(argv, threads):
    from .cli import main

    old = os.environ.get("CYCHOM_THREADS")
    os.environ["CYCHOM_THREADS"] = str(threads)
    buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(buf):
            try:
                code = main(argv)
            except SystemExit as e:  # argparse rejects the command line
                code = e.code
    finally:
        if old is None:
            os.environ.pop("CYCHOM_THREADS", None)
        else:
            os.environ["CYCHOM_THREADS"] = old
    return code, buf.getvalue().encode()


def criterion_12(quick=False):
    bad = []
    for argv in DETERMINISM_COMMANDS:
        outs = [_run_cli(argv, t) for t in (1, 1, 4)]
        if outs[0][0] != 0:
            bad.append(("exit code", argv, outs[0][0]))
        if len({o for o in outs}) != 1:
            bad.append(("output differs", argv))
    return not bad, f"{len(DETERMINISM_COMMANDS)} commands byte-identical over 2 runs and CYCHOM_THREADS in {{1, 4}}", bad


CRITERIA = {
    1: ("operator identities b^2, B^2, bB+Bb", criterion_1),
    2: ("contraction identity s_-1 b' + b' s_-1 = id", criterion_2),
    3: ("row exactness of (id - t, N) with constructive preimages", criterion_3),
    4: ("structure of the cyclic category", criterion_4),
    5: ("resolution lemma", criterion_5),
    6: ("delta generates H^2", criterion_6),
    7: ("Kassel isomorphisms", criterion_7),
    8: ("ground ring HH, HC, HN", criterion_8),
    9: ("Morita consistency", criterion_9),
    10: ("SBI exactness", criterion_10),
    11: ("circle check", criterion_11),
    12: ("determinism", criterion_12),
}


def run_criterion(number, quick=False) -> CriterionResult:
    title, fn = CRITERIA[number]
    t = time.perf_counter()
    try:
        ok, detail, bad = fn(quick)
    except Exception as e:  # a crash is a failure with a message, not an abort
        ok, detail, bad = False, f"raised {type(e).__name__}: {e}", [repr(e)]
    return CriterionResult(number, title, ok, detail, list(bad), time.perf_counter() - t)


def run_acceptance(only=None, pool=None, quick=False) -> list:
    numbers = sorted(CRITERIA) if not only else sorted(set(only))
    for n in numbers:
        if n not in CRITERIA:
            raise ValueError(f"no acceptance criterion {n}")
    # criterion 12 drives the CLI itself, so it always runs in this thread
    inner = [n for n in numbers if n != 12]
    if pool is None:
        results = [run_criterion(n, quick) for n in inner]
    else:
        results = list(pool.map(lambda n: run_criterion(n, quick), inner))
    if 12 in numbers:
        results.append(run_criterion(12, quick))
    return results
