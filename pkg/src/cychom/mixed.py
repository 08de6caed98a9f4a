"""Mixed complexes (dg modules over k[eps]) and the functor K from cyclic modules."""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ChainComplex
from .cyclic_module import (CyclicModule, _Quotient, degenerate_image, derived_operators,
                            hochschild_chain_complex)
from .matrix import SparseMatrix


@dataclass
class MixedComplex:
    """A chain complex ``(C, b)`` in degrees ``0..N`` with ``B(n): C_n -> C_{n+1}`` for ``n < N``."""

    complex: ChainComplex
    B: dict

    def __post_init__(self):
        C = self.complex
        for n, m in self.B.items():
            if m.shape != (C.rank(n + 1), C.rank(n)):
                raise ValueError(f"B({n}) has shape {m.shape}")

    @property
    def ring(self):
        return self.complex.ring

    @property
    def top(self):
        return self.complex.hi

    def rank(self, n):
        return self.complex.rank(n)

    def b(self, n) -> SparseMatrix:
        return self.complex.d(n)

    def Bop(self, n) -> SparseMatrix:
        m = self.B.get(n)
        if m is None:
            if n >= self.top:
                raise ValueError(f"B out of degree {n} is past the truncation {self.top}")
            return SparseMatrix.zero(self.rank(n + 1), self.rank(n), self.ring)
        return m

    def change_ring(self, ring):
        return MixedComplex(self.complex.change_ring(ring),
                            {n: m.change_ring(ring) for n, m in self.B.items()})


def check_mixed(X: MixedComplex) -> list:
    """Violations of ``b^2 = 0``, ``B^2 = 0`` and ``bB + Bb = 0``."""
    bad = []
    top = X.top
    for n in range(top + 1):
        if n >= 2 and not (X.b(n - 1) @ X.b(n)).is_zero():
            bad.append(("b^2", n))
        if n + 2 <= top and not (X.Bop(n + 1) @ X.Bop(n)).is_zero():
            bad.append(("B^2", n))
        if n + 1 <= top:
            s = X.b(n + 1) @ X.Bop(n)
            if n >= 1:
                s = s + X.Bop(n - 1) @ X.b(n)
            if not s.is_zero():
                bad.append(("bB+Bb", n))
    return bad


def K(M: CyclicModule, normalized: bool = False) -> MixedComplex:
    """``(C_*(M), b, B)``; the normalized variant divides out degeneracies.

    ``B`` maps degenerate chains to degenerate chains, so it descends to the
    normalized complex; this is checked while projecting.
    """
    if not normalized:
        C = hochschild_chain_complex(M)
        return MixedComplex(C, {n: derived_operators(M, n).B for n in range(M.N)})
    quots = [_Quotient(degenerate_image(M, n)) for n in range(M.N + 1)]
    ranks = {n: q.rank for n, q in enumerate(quots)}
    diffs, Bs = {}, {}
    for n in range(M.N + 1):
        ops = derived_operators(M, n)
        if n >= 1:
            diffs[n] = quots[n - 1].project(ops.b @ quots[n].lift)
        if n < M.N:
            if n >= 1:
                D = degenerate_image(M, n)
                if not quots[n + 1].project(ops.B @ D).is_zero():
                    raise AssertionError(f"B does not preserve degeneracies at level {n}")
            Bs[n] = quots[n + 1].project(ops.B @ quots[n].lift)
    return MixedComplex(ChainComplex(M.ring, ranks, diffs), Bs)


def direct_sum(X: MixedComplex, Y: MixedComplex) -> MixedComplex:
    ring = X.ring
    ds = lambda a, b: SparseMatrix.direct_sum([a, b], ring)
    degs = sorted(set(X.complex.ranks) | set(Y.complex.ranks))
    C = ChainComplex(ring, {n: X.rank(n) + Y.rank(n) for n in degs},
                     {n: ds(X.b(n), Y.b(n)) for n in degs if n - 1 in degs})
    Bs = {n: ds(X.Bop(n), Y.Bop(n)) for n in degs if n + 1 in degs}
    return MixedComplex(C, Bs)


# ---------------------------------------------------------------------------
# the resolution Qk of k by free k[eps]-modules


@dataclass(frozen=True)
class QkResolution:
    """``Qk`` truncated to the free generators ``x_0, x_2, ..., x_{2 depth}``.

    As a k-complex it has ``x_{2i}`` in degree ``2i`` and ``x_{2i+1} = eps x_{2i}``
    in degree ``2i + 1``; the zig-zag is ``d x_{2i} = eps x_{2i-2}`` and
    ``d x_{2i+1} = 0``.
    """

    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    @property
    def generator_degrees(self):
        return [2 * i for i in range(self.depth + 1)]

    def d_generator(self, i):
        """``d x_{2i}`` as ``[(j, alpha, beta)]`` meaning ``sum alpha x_{2j} + beta eps x_{2j}``."""
        return [(i - 1, 0, 1)] if i >= 1 else []

    def as_complex(self, ring) -> ChainComplex:
        """Underlying k-complex in degrees ``0..2 depth + 1`` (one basis vector per degree)."""
        top = 2 * self.depth + 1
        ranks = {n: 1 for n in range(top + 1)}
        diffs = {n: SparseMatrix.identity(1, ring) if n % 2 == 0 else SparseMatrix.zero(1, 1, ring)
                 for n in range(1, top + 1)}
        return ChainComplex(ring, ranks, diffs)

    def eps(self, ring, n) -> SparseMatrix:
        """Action of eps from degree ``n`` to ``n + 1``."""
        return SparseMatrix.identity(1, ring) if n % 2 == 0 else SparseMatrix.zero(1, 1, ring)

    def as_mixed(self, ring) -> MixedComplex:
        C = self.as_complex(ring)
        return MixedComplex(C, {n: self.eps(ring, n) for n in range(C.hi)})

    def augmentation(self, ring) -> dict:
        """``Qk -> k``: ``x_0 -> 1``, as a chain map into ``k`` placed in degree 0."""
        return {0: SparseMatrix.identity(1, ring)}


def qk_selfmap(depth: int, ring) -> dict:
    """``x_j -> x_{j-2}`` as a degree -2 chain map on the k-complex of ``Qk``."""
    Q = QkResolution(depth)
    C = Q.as_complex(ring)
    return {n: (SparseMatrix.identity(1, ring) if n >= 2 else SparseMatrix.zero(0, 1, ring))
            for n in C.degrees()}


def tensor_qk(X: MixedComplex, depth: int | None = None) -> ChainComplex:
    """``Qk (x)_{k[eps]} X``: degree ``n`` is ``sum_i x_{2i} (x) X_{n-2i}``, in increasing ``i``.

    Built from the generator differentials of ``Qk`` with the Koszul rule
    ``eps x_{2j} (x) a = x_{2j} (x) eps a`` (generators are even) and
    ``d(x (x) a) = dx (x) a + (-1)^{|x|} x (x) ba``.
    """
    top = X.top
    Q = QkResolution(top // 2 if depth is None else depth)
    ring = X.ring
    gens = Q.generator_degrees
    ranks, blocks, pos = {}, {}, {}
    for n in range(top + 1):
        off, bl = 0, []
        for i, g in enumerate(gens):
            if 0 <= n - g:
                r = X.rank(n - g)
                bl.append((i, off, r))
                pos[(n, i)] = len(bl) - 1
                off += r
        ranks[n] = off
        blocks[n] = bl
    diffs = {}
    for n in range(1, top + 1):
        parts = {}
        for bj, (i, off, r) in enumerate(blocks[n]):
            a_deg = n - gens[i]
            sign = -1 if gens[i] % 2 else 1
            if a_deg >= 1:
                parts[(pos[(n - 1, i)], bj)] = X.b(a_deg) if sign == 1 else -X.b(a_deg)
            for j, alpha, beta in Q.d_generator(i):
                if alpha and (n - 1, j) in pos:
                    parts[(pos[(n - 1, j)], bj)] = _acc(parts.get((pos[(n - 1, j)], bj)),
                                                        SparseMatrix.identity(r, ring).scale(alpha))
                if beta and (n - 1, j) in pos:
                    m = X.Bop(a_deg).scale(beta)
                    parts[(pos[(n - 1, j)], bj)] = _acc(parts.get((pos[(n - 1, j)], bj)), m)
        diffs[n] = SparseMatrix.block(parts, [b[2] for b in blocks[n - 1]],
                                      [b[2] for b in blocks[n]], ring)
    return ChainComplex(ring, ranks, diffs, blocks)


def hom_qk(X: MixedComplex, depth: int) -> ChainComplex:
    """``Hom_{k[eps]}(Qk, X)`` with ``Qk`` cut to ``x_0..x_{2 depth}``.

    A degree ``n`` map is its values ``f_i = f(x_{2i})`` in ``X_{n+2i}``,
    stored in increasing ``i``; ``df = b f - (-1)^n f d`` with
    ``f(eps y) = (-1)^n eps f(y)``.  Degrees run from ``-2 depth`` to
    ``top - 2 depth`` so that every component is available.
    """
    top = X.top
    Q = QkResolution(depth)
    ring = X.ring
    gens = Q.generator_degrees
    hi = top - 2 * depth
    if hi < -2 * depth:
        raise ValueError(f"truncation {top} too small for depth {depth}")
    ranks, blocks, pos = {}, {}, {}
    for n in range(-2 * depth, hi + 1):
        off, bl = 0, []
        for i, g in enumerate(gens):
            if n + g >= 0:
                r = X.rank(n + g)
                bl.append((i, off, r))
                pos[(n, i)] = len(bl) - 1
                off += r
        ranks[n] = off
        blocks[n] = bl
    diffs = {}
    for n in range(-2 * depth + 1, hi + 1):
        sn = -1 if n % 2 else 1
        parts = {}
        for bj, (j, off, r) in enumerate(blocks[n]):
            deg = n + gens[j]
            # contribution of f_j to (df)_j through b
            if (n - 1, j) in pos and deg >= 1:
                parts[(pos[(n - 1, j)], bj)] = X.b(deg)
            # contribution of f_j to (df)_i through f(d x_{2i})
            for i in range(len(gens)):
                if (n - 1, i) not in pos:
                    continue
                for jj, alpha, beta in Q.d_generator(i):
                    if jj != j:
                        continue
                    m = None
                    if alpha:
                        m = SparseMatrix.identity(r, ring).scale(-sn * alpha)
                    if beta:
                        # -(-1)^n f(beta eps x_{2j}) = -(-1)^n (-1)^n beta eps f_j
                        m = _acc(m, X.Bop(deg).scale(-beta))
                    key = (pos[(n - 1, i)], bj)
                    parts[key] = _acc(parts.get(key), m)
        diffs[n] = SparseMatrix.block(parts, [b[2] for b in blocks[n - 1]],
                                      [b[2] for b in blocks[n]], ring)
    return ChainComplex(ring, ranks, diffs, blocks)


def _acc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def tensor_selfmap(T: ChainComplex, n: int, steps: int = 1) -> SparseMatrix:
    """``x_{2i} (x) a -> x_{2i-2 steps} (x) a`` from degree ``n`` to ``n - 2 steps``."""
    ring = T.ring
    tgt = {i: (off, r) for i, off, r in T.blocks.get(n - 2 * steps, [])}
    cols = {}
    for i, off, r in T.blocks.get(n, []):
        if i - steps < 0:
            continue
        toff, tr = tgt[i - steps]
        for k in range(r):
            cols[off + k] = {toff + k: ring.one}
    return SparseMatrix(T.rank(n - 2 * steps), T.rank(n), ring, cols, check=False)


def induced_comodule_map(M, normalized=False) -> tuple:
    """The chain map ``id (x) sigma`` on ``Qk (x) K(M)`` and the complex it lives on.

    Returns ``(T, maps)`` with ``maps[n]: T_n -> T_{n-2}``.
    """
    X = M if isinstance(M, MixedComplex) else K(M, normalized)
    T = tensor_qk(X)
    return T, {n: tensor_selfmap(T, n) for n in T.degrees()}


# ---------------------------------------------------------------------------
# the comparison isomorphisms


def kassel_iso_check(M, depth: int, X: MixedComplex | None = None, normalized=False):
    """Compare ``Tot BC(M)`` with ``Qk (x) K(M)`` and ``Tot BN(M)`` with ``Hom(Qk, K(M))``.

    The bicomplexes are built from ``M``'s own operators; the ``Qk`` side from
    ``X`` (default ``K(M)``), so a corrupted ``X`` shows up as a mismatch.
    The tensor side matches column ``p`` with ``x_{2p}`` unsigned; the Hom
    side matches column ``-i`` with ``(-1)^i f(x_{2i})``.
    """
    from .cyclic_homology import tot_bc, tot_bn
    from .reports import VerificationReport

    own = K(M, normalized) if isinstance(M, CyclicModule) else M
    X = own if X is None else X
    ring = own.ring
    rep = VerificationReport("kassel_iso", {"ring": ring.name, "truncation": own.top,
                                            "depth": depth})
    T_bc, T_q = tot_bc(own), tensor_qk(X)
    for n in T_bc.degrees():
        phi = _relabel(T_bc, T_q, n, lambda lab: lab[0], lambda lab: 1, ring)
        if phi is None:
            rep.fail("tensor", n, "entry mismatch")
            continue
        if n >= 1:
            phi_lo = _relabel(T_bc, T_q, n - 1, lambda lab: lab[0], lambda lab: 1, ring)
            if phi_lo @ T_bc.d(n) != T_q.d(n) @ phi:
                rep.fail("tensor", n, "differential mismatch")
    T_bn, T_h = tot_bn(own, depth), hom_qk(X, depth)
    for n in sorted(set(T_bn.degrees()) | set(T_h.degrees())):
        sgn = lambda lab: -1 if lab[0] % 2 else 1
        phi = _relabel(T_bn, T_h, n, lambda lab: -lab[0], sgn, ring)
        if phi is None:
            rep.fail("hom", n, "entry mismatch")
            continue
        if n - 1 in T_bn.ranks and n - 1 in T_h.ranks:
            phi_lo = _relabel(T_bn, T_h, n - 1, lambda lab: -lab[0], sgn, ring)
            if phi_lo @ T_bn.d(n) != T_h.d(n) @ phi:
                rep.fail("hom", n, "differential mismatch")
    return rep


def _relabel(src: ChainComplex, tgt: ChainComplex, n, key, sign, ring):
    """Block bijection ``src_n -> tgt_n`` sending bicomplex block ``lab`` to generator ``key(lab)``."""
    if src.rank(n) != tgt.rank(n):
        return None
    tblocks = {i: (off, r) for i, off, r in tgt.blocks.get(n, [])}
    cols = {}
    for lab, off, r in src.blocks.get(n, []):
        t = tblocks.get(key(lab))
        if t is None or t[1] != r:
            return None
        s = ring(sign(lab))
        for k in range(r):
            cols[off + k] = {t[0] + k: s}
    return SparseMatrix(tgt.rank(n), src.rank(n), ring, cols, check=False)
