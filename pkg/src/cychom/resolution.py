"""The staircase resolution of the constant cocyclic module, checked pointwise.

Everything is evaluated at an object ``[m]`` of the cyclic category, so the
entries are the free modules ``k[Lambda(q, m)]`` of the representable cyclic
module ``R = k[Lambda(-, m)]``:

* ``K`` is the cyclic bicomplex of ``R``: entry ``(p, q)`` is ``R_{q-p}``,
  vertical ``b``, horizontal ``B``; ``delta`` is the identity of bidegree
  ``(-1, -1)`` and the augmentation sends every basis element of ``R_0`` at
  ``(0, 0)`` to 1.
* ``L`` has ``R_q`` at every ``(p, q)`` with ``p, q >= 0``; vertical maps are
  ``b`` on even columns and ``-b'`` on odd ones, horizontal maps ``id - t``
  out of odd columns and ``N`` out of even columns ``p >= 2``.
* ``M`` keeps the odd columns of ``L`` with zero horizontal maps.

``phi: Tot K -> Tot L`` sends ``x`` at ``K(p, ·)`` level ``n`` to ``x`` at
``L(2p, n)`` plus ``s_{-1} N x`` at ``L(2p-1, n+1)``; ``psi: Tot L -> Tot M``
sends ``(x, y)`` at ``(L(2p, n), L(2p-1, n+1))`` to ``y - s_{-1} N x``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from . import lambda_cat as lc
from .complexes import (Bicomplex, ChainComplex, TruncationWindow, check_bicomplex,
                        check_chain_map, homology, totalize)
from .cyclic_homology import HomologyBasis, bc_bicomplex
from .cyclic_module import derived_operators
from .linalg import invariant_factors, rank_kernel_image, same_span
from .matrix import SparseMatrix
from .reports import VerificationReport


@lru_cache(maxsize=32)
def _rep(ring, m, N):
    return lc.representable_module(ring, m, N)


def build_K(m: int, N: int, ring) -> Bicomplex:
    return bc_bicomplex(_rep(ring, m, N))


def delta_map(Kb: Bicomplex) -> dict:
    """``delta: (p, q) -> (p-1, q-1)`` as identity blocks keyed by source entry."""
    return {(p, q): SparseMatrix.identity(r, Kb.ring)
            for (p, q), r in Kb.ranks.items() if p >= 1 and (p - 1, q - 1) in Kb.ranks}


def check_delta_commutes(Kb: Bicomplex) -> list:
    """Entries where ``delta`` fails to commute with ``h`` or ``v``."""
    bad = []
    for (p, q) in Kb.ranks:
        if p < 1:
            continue
        # v delta = delta v and h delta = delta h, wherever both sides land in the window
        if (p - 1, q - 2) in Kb.ranks and (p, q - 1) in Kb.ranks:
            if Kb.vmap(p - 1, q - 1) != Kb.vmap(p, q):
                bad.append(("v", (p, q)))
        if p >= 2 and (p - 2, q - 1) in Kb.ranks and (p - 1, q) in Kb.ranks:
            if Kb.hmap(p - 1, q - 1) != Kb.hmap(p, q):
                bad.append(("h", (p, q)))
    return bad


def build_L(m: int, N: int, ring, odd_only: bool = False) -> Bicomplex:
    R = _rep(ring, m, N)
    ranks, h, v = {}, {}, {}
    for p in range(N + 1):
        if odd_only and p % 2 == 0:
            continue
        for q in range(N - p + 1):
            ranks[(p, q)] = R.ranks[q]
            ops = derived_operators(R, q)
            if q >= 1:
                v[(p, q)] = ops.b if p % 2 == 0 else -ops.bprime
            if odd_only or p == 0:
                continue
            I = SparseMatrix.identity(R.ranks[q], ring)
            h[(p, q)] = (I - ops.t) if p % 2 else ops.norm
    return Bicomplex(ring, ranks, h, v)


def build_M(m: int, N: int, ring) -> Bicomplex:
    return build_L(m, N, ring, odd_only=True)


def tot(B: Bicomplex, N: int) -> ChainComplex:
    return totalize(B, "direct_sum", TruncationWindow(N))


def augmentation(T: ChainComplex) -> SparseMatrix:
    """``Tot_0 -> k``: 1 on every basis element of the ``(0, 0)`` entry."""
    off, size = T.block_of(0, (0, 0))
    return SparseMatrix(1, T.rank(0), T.ring, {off + k: {0: T.ring.one} for k in range(size)},
                        check=False)


def _block_map(T_src, T_tgt, n, pieces, ring):
    """Assemble ``T_src_n -> T_tgt_n`` from ``{(src_label, tgt_label): matrix}``."""
    cols = {}
    norm = ring.norm
    for (sl, tl), mat in pieces.items():
        sb, tb = T_src.block_of(n, sl), T_tgt.block_of(n, tl)
        if sb is None or tb is None:
            continue
        so, to = sb[0], tb[0]
        for j, col in enumerate(mat.columns()):
            if not col:
                continue
            tgt = cols.setdefault(so + j, {})
            for i, x in col.items():
                w = norm(tgt.get(to + i, 0) + x)
                if w:
                    tgt[to + i] = w
                else:
                    tgt.pop(to + i, None)
    cols = {j: c for j, c in cols.items() if c}
    return SparseMatrix(T_tgt.rank(n), T_src.rank(n), ring, cols, check=False)


def phi_psi(m: int, N: int, ring, psi_sign: int = 1):
    """``(TK, TL, TM, phi, psi)`` with ``phi[n]``, ``psi[n]`` the level-``n`` matrices.

    ``psi_sign = -1`` flips the ``s_{-1} N`` part of ``psi`` (a negative control).
    """
    R = _rep(ring, m, N)
    TK, TL, TM = tot(build_K(m, N, ring), N), tot(build_L(m, N, ring), N), tot(build_M(m, N, ring), N)
    sN = {}
    for n in range(N):
        ops = derived_operators(R, n)
        sN[n] = ops.s_minus @ ops.norm
    phi, psi = {}, {}
    for T in range(N + 1):
        pk, pm = {}, {}
        for p in range(T // 2 + 1):
            n = T - 2 * p
            I = SparseMatrix.identity(R.ranks[n], ring)
            pk[((p, p + n), (2 * p, n))] = I
            if p >= 1:
                pk[((p, p + n), (2 * p - 1, n + 1))] = sN[n]
                pm[((2 * p, n), (2 * p - 1, n + 1))] = sN[n].scale(-psi_sign)
        for p in range(1, T + 1, 2):
            q = T - p
            pm[((p, q), (p, q))] = SparseMatrix.identity(R.ranks[q], ring)
        phi[T] = _block_map(TK, TL, T, pk, ring)
        psi[T] = _block_map(TL, TM, T, pm, ring)
    return TK, TL, TM, phi, psi


def check_bicomplexes(m: int, N: int, ring) -> VerificationReport:
    rep = VerificationReport("bicomplexes", {"m": m, "N": N, "ring": ring.name})
    Kb, Lb, Mb = build_K(m, N, ring), build_L(m, N, ring), build_M(m, N, ring)
    for name, B in (("K", Kb), ("L", Lb), ("M", Mb)):
        for v in check_bicomplex(B):
            rep.fail(name, *v)
    for v in check_delta_commutes(Kb):
        rep.fail("delta", *v)
    R = _rep(ring, m, N)
    for n in range(N + 1):
        ops = derived_operators(R, n)
        I = SparseMatrix.identity(R.ranks[n], ring)
        if not ((I - ops.t) @ ops.norm).is_zero() or not (ops.norm @ (I - ops.t)).is_zero():
            rep.fail("(id-t)N", n)
    return rep


def check_phi_psi(m: int, N: int, ring, psi_sign: int = 1) -> VerificationReport:
    """``phi`` and ``psi`` are chain maps and ``0 -> Tot K -> Tot L -> Tot M -> 0`` is exact."""
    rep = VerificationReport("phi_psi", {"m": m, "N": N, "ring": ring.name})
    TK, TL, TM, phi, psi = phi_psi(m, N, ring, psi_sign)
    for n in check_chain_map(TK, TL, phi):
        if n <= N:
            rep.fail("phi not a chain map", n)
    for n in check_chain_map(TL, TM, psi):
        if n <= N:
            rep.fail("psi not a chain map", n)
    for n in range(N + 1):
        if TL.rank(n) != TK.rank(n) + TM.rank(n):
            rep.fail("rank", n)
        if not (psi[n] @ phi[n]).is_zero():
            rep.fail("psi phi != 0", n)
        f = invariant_factors(phi[n])
        if len(f) != TK.rank(n) or any(d != 1 for d in f):
            rep.fail("phi not split injective", n)
        g = invariant_factors(psi[n])
        if len(g) != TM.rank(n) or any(d != 1 for d in g):
            rep.fail("psi not surjective", n)
    if augmentation(TL) @ phi[0] != augmentation(TK):
        rep.fail("augmentation")
    if TM.rank(0) != 0:
        rep.fail("M has a degree 0 part")
    return rep


def _regular_operators(n, ring):
    """``c`` and ``t = (-1)^n c`` on ``k[C_{n+1}]`` with basis ``c^0..c^n``, acting on the right."""
    c = SparseMatrix.permutation([(i + 1) % (n + 1) for i in range(n + 1)], ring)
    t = c if n % 2 == 0 else -c
    norm = SparseMatrix.zero(n + 1, n + 1, ring)
    tp = SparseMatrix.identity(n + 1, ring)
    for _ in range(n + 1):
        norm = norm + tp
        tp = tp @ t
    return c, t, norm


def preimage_under_norm(x: dict, n: int, ring) -> dict:
    """For ``x`` with ``x (id - t) = 0``: ``x = x_0 N``, so ``x_0`` is a preimage."""
    x0 = x.get(0, 0)
    return {0: x0} if x0 else {}


def preimage_under_id_minus_t(x: dict, n: int, ring) -> dict:
    """For ``x`` with ``x N = 0``: ``y_0 = x_0``, ``y_i = x_i + (-1)^n y_{i-1}`` gives ``y (id - t) = x``."""
    norm = ring.norm
    s = -1 if n % 2 else 1
    y = [ring(x.get(0, 0))]
    for i in range(1, n + 1):
        y.append(norm(x.get(i, 0) + s * y[-1]))
    return {i: v for i, v in enumerate(y) if v}


def row_augmentation(n: int, ring) -> SparseMatrix:
    """``x -> sum_i (-1)^{ni} x_{n-i}`` on ``k[C_{n+1}]``."""
    cols = {}
    for i in range(n + 1):
        cols[n - i] = {0: ring(-1 if (n * i) % 2 else 1)}
    return SparseMatrix(1, n + 1, ring, cols)


def check_row_exactness(n: int, m: int, ring) -> VerificationReport:
    """Exactness of ``... -> k[C] -(id-t)-> k[C] -N-> k[C] -(id-t)-> ...`` with ``C = C_{n+1}``.

    Also run on the row ``k[Lambda(n, m)]`` of ``L``, whose ``H_0`` must be free of
    rank ``|Delta(n, m)|``, and check the explicit preimage constructors.
    """
    rep = VerificationReport("row_exactness", {"n": n, "m": m, "ring": ring.name})
    c, t, N_op = _regular_operators(n, ring)
    I = SparseMatrix.identity(n + 1, ring)
    one_minus_t = I - t
    R = _rep(ring, m, n)
    ops = derived_operators(R, n)
    IR = SparseMatrix.identity(R.ranks[n], ring)
    for label, a, b in (("regular", one_minus_t, N_op), ("row", IR - ops.t, ops.norm)):
        # ker(a) = im(b) and ker(b) = im(a)
        for x, y, name in ((a, b, "ker(id-t) = im N"), (b, a, "ker N = im(id-t)")):
            if not (x @ y).is_zero():
                rep.fail(label, name, "composite nonzero")
                continue
            ker = rank_kernel_image(x)[1]
            if not same_span(ker, y):
                rep.fail(label, name)
    # witnesses on lattice bases of both kernels
    witnesses = 0
    for z in rank_kernel_image(one_minus_t)[1].columns():
        w = preimage_under_norm(z, n, ring)
        if N_op.apply(w) != z:
            rep.fail("x = x_0 N fails", z)
        witnesses += 1
    for z in rank_kernel_image(N_op)[1].columns():
        w = preimage_under_id_minus_t(z, n, ring)
        if one_minus_t.apply(w) != z:
            rep.fail("y_i = x_i + (-1)^n y_{i-1} fails", z)
        witnesses += 1
    rep.witness["preimages_checked"] = witnesses
    # H_0 of the row
    aug = row_augmentation(n, ring)
    if not (aug @ one_minus_t).is_zero():
        rep.fail("augmentation does not kill im(id-t)")
    if not same_span(rank_kernel_image(aug)[1], one_minus_t):
        rep.fail("ker(augmentation) != im(id-t)")
    if invariant_factors(aug) != [ring.one]:
        rep.fail("augmentation not surjective")
    f = invariant_factors(IR - ops.t)
    h0_rank = R.ranks[n] - len(f)
    if any(d != 1 for d in f) or h0_rank != comb(n + m + 1, n + 1):
        rep.fail("H_0 of the row is not k[Delta(n, m)]", h0_rank)
    rep.witness["row_H0_rank"] = h0_rank
    return rep


def _check_quasi_iso(rep, name, T: ChainComplex, top: int):
    ring = T.ring
    h0 = homology(T, 0)
    if h0.rank != 1 or h0.torsion:
        rep.fail(name, "H_0", str(h0))
    aug = augmentation(T)
    if T.rank(1) and not (aug @ T.d(1)).is_zero():
        rep.fail(name, "augmentation is not a chain map")
    if invariant_factors(aug) != [ring.one]:
        rep.fail(name, "augmentation not surjective")
    for i in range(1, top + 1):
        g = homology(T, i)
        if not g.is_zero():
            rep.fail(name, f"H_{i}", str(g))
    rep.witness[name] = [str(homology(T, i)) for i in range(top + 1)]


def check_resolution(m: int, N: int, ring, include_L: bool = True,
                     include_M: bool = True) -> VerificationReport:
    """``Tot K -> k`` (and ``Tot L -> k``) are quasi-isomorphisms in degrees ``0..N-2``; ``Tot M`` is acyclic there."""
    rep = VerificationReport("resolution", {"m": m, "N": N, "ring": ring.name})
    _check_quasi_iso(rep, "K", tot(build_K(m, N, ring), N), N - 2)
    if include_L:
        _check_quasi_iso(rep, "L", tot(build_L(m, N, ring), N), N - 2)
    if include_M:
        TM = tot(build_M(m, N, ring), N)
        for i in range(0, N - 1):
            g = homology(TM, i)
            if not g.is_zero():
                rep.fail("M", f"H_{i}", str(g))
    return rep


# ---------------------------------------------------------------------------
# the delta class


def invariant_cochains(N: int, ring, m: int = 0):
    """Natural cochains ``Hom_Lambda(Tot K, k)`` computed at ``[m]``.

    By Yoneda a natural map ``k[Lambda(q, -)] -> k`` is one scalar, the
    functional sending every basis element to it; so degree ``n`` has one
    basis vector per entry of total degree ``n``.  The coboundary of an entry
    functional is read off the column sums of the differential blocks, which
    must be constant on each target entry (naturality).  Returns
    ``(cochain complex as homological complex in degrees -n, labels, violations)``.
    """
    Kb = build_K(m, N, ring)
    T = tot(Kb, N)
    labels = {n: [lab for lab, _, _ in T.blocks.get(n, [])] for n in T.degrees()}
    bad = []
    ranks = {-n: len(labels[n]) for n in labels}
    diffs = {}
    for n in T.degrees():
        if n + 1 not in labels:
            continue
        # coboundary Hom(Tot_n) -> Hom(Tot_{n+1}): f -> f . d
        cols = {}
        D = T.d(n + 1)
        for a, src_lab in enumerate(labels[n]):
            so, ss = T.block_of(n, src_lab)
            for b, tgt_lab in enumerate(labels[n + 1]):
                to, ts = T.block_of(n + 1, tgt_lab)
                sums = set()
                for j in range(to, to + ts):
                    col = D.column(j)
                    sums.add(ring.norm(sum(v for i, v in col.items() if so <= i < so + ss)))
                if len(sums) > 1:
                    bad.append((src_lab, tgt_lab))
                    continue
                val = sums.pop() if sums else 0
                if val:
                    cols.setdefault(a, {})[b] = val
        # as a homological complex: degree -n -> -n-1
        diffs[-n] = SparseMatrix(len(labels[n + 1]), len(labels[n]), ring, cols)
    return ChainComplex(ring, ranks, diffs), labels, bad


def delta_cochain(labels: dict, ring) -> dict:
    """``augmentation . delta`` in degree 2: the entry functional of ``(1, 1)``."""
    return {labels[2].index((1, 1)): ring.one}


def check_delta_generator(N: int, ring, m: int = 0) -> VerificationReport:
    """``H^2`` of the natural cochains is ``k`` and the delta class generates it."""
    rep = VerificationReport("delta_generator", {"N": N, "ring": ring.name, "m": m})
    if N < 4:
        rep.fail("need N >= 4")
        return rep
    C, labels, bad = invariant_cochains(N, ring, m)
    for v in bad:
        rep.fail("coboundary not natural", v)
    H2 = HomologyBasis(C, -2)
    g = H2.group
    rep.witness["H2"] = str(g)
    rep.witness["H1"] = str(homology(C, -1))
    rep.witness["coboundaries"] = {str(-n): d.to_dense() for n, d in sorted(C.diffs.items())}
    if g.rank != 1 or g.torsion:
        rep.fail("H^2 is not free of rank 1", str(g))
    if not homology(C, -1).is_zero():
        rep.fail("H^1 nonzero", str(homology(C, -1)))
    z = delta_cochain(labels, ring)
    if not H2.is_cycle(z):
        rep.fail("delta is not a cocycle")
        return rep
    coords = H2.coords(z)
    rep.witness["delta_coords"] = coords
    if len(coords) == 1 and not ring.is_unit(coords[0]):
        rep.fail("delta class is not a generator", coords)
    return rep


def check_delta_mod_p(N: int, p: int, m: int = 0) -> VerificationReport:
    """Naturality in k: the Z computation reduced mod ``p`` equals the F_p computation."""
    from .rings import GF, ZZ

    Fp = GF(p)
    rep = VerificationReport("delta_mod_p", {"N": N, "p": p, "m": m})
    Cz, lz, _ = invariant_cochains(N, ZZ, m)
    Cp, lp, _ = invariant_cochains(N, Fp, m)
    if lz != lp:
        rep.fail("entry labels differ")
    for n in Cz.diffs:
        if Cz.d(n).change_ring(Fp) != Cp.d(n):
            rep.fail("coboundary differs mod p", n)
    TKz, TKp = tot(build_K(m, N, ZZ), N), tot(build_K(m, N, Fp), N)
    for n in TKz.diffs:
        if TKz.d(n).change_ring(Fp) != TKp.d(n):
            rep.fail("Tot K differs mod p", n)
    sub = check_delta_generator(N, Fp, m)
    rep.witness["F_p"] = sub.witness.get("H2")
    coords = sub.witness.get("delta_coords", [])
    if not any(coords):
        rep.fail("delta class vanishes mod p")
    return rep


def check_naturality(m: int, m2: int, N: int, ring) -> VerificationReport:
    """Postcomposition with generators ``[m] -> [m2]`` commutes with ``b, B, delta``, ``phi`` and ``psi``."""
    rep = VerificationReport("naturality", {"m": m, "m2": m2, "N": N, "ring": ring.name})
    if m2 == m + 1:
        gens = [lc.coface(m2, i) for i in range(m2 + 1)]
    elif m2 == m - 1:
        gens = [lc.codegeneracy(m2, i) for i in range(m2 + 1)]
    elif m2 == m:
        gens = [lc.cyclic_rotation(m)]
    else:
        raise ValueError("generators only join [m] to [m-1], [m] or [m+1]")
    Kb, Kb2 = build_K(m, N, ring), build_K(m2, N, ring)
    TK, TL, TM, phi, psi = phi_psi(m, N, ring)
    TK2, TL2, TM2, phi2, psi2 = phi_psi(m2, N, ring)
    for u in gens:
        post = {q: lc.postcompose_matrix(ring, u, q) for q in range(N + 1)}
        for (p, q) in Kb.ranks:
            n = q - p
            if (p, q - 1) in Kb.ranks and Kb2.vmap(p, q) @ post[n] != post[n - 1] @ Kb.vmap(p, q):
                rep.fail(u, "b", (p, q))
            if p >= 1 and Kb2.hmap(p, q) @ post[n] != post[n + 1] @ Kb.hmap(p, q):
                rep.fail(u, "B", (p, q))
        for T in range(N + 1):
            fK = _total_post(TK, TK2, T, post, lambda lab: lab[1] - lab[0], ring)
            fL = _total_post(TL, TL2, T, post, lambda lab: lab[1], ring)
            fM = _total_post(TM, TM2, T, post, lambda lab: lab[1], ring)
            if phi2[T] @ fK != fL @ phi[T]:
                rep.fail(u, "phi", T)
            if psi2[T] @ fL != fM @ psi[T]:
                rep.fail(u, "psi", T)
        rep.witness.setdefault("generators", []).append(str(u))
    return rep


def _total_post(T, T2, n, post, level, ring):
    pieces = {(lab, lab): post[level(lab)] for lab, _, _ in T.blocks.get(n, [])}
    return _block_map(T, T2, n, pieces, ring)


def verify_all(m: int, N: int, ring) -> list:
    """Every pointwise check at ``[m]`` with truncation ``N``."""
    reps = [check_bicomplexes(m, N, ring), check_phi_psi(m, N, ring),
            check_resolution(m, N, ring)]
    reps.extend(check_row_exactness(n, m, ring) for n in range(0, min(N, 6) + 1))
    return reps
