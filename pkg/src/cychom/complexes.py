"""Chain complexes and bicomplexes of free modules, totalization and homology."""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import HomologyGroup, homology_group
from .matrix import SparseMatrix
from .rings import RingSpec


@dataclass
class ChainComplex:
    """Free chain complex supported in degrees ``lo..hi``.

    ``diffs[n]`` is the matrix of ``d: C_n -> C_{n-1}``; absent entries are
    zero maps.  ``blocks[n]`` optionally records how ``C_n`` is assembled
    from labelled summands as ``[(label, offset, size), ...]``.
    """

    ring: RingSpec
    ranks: dict
    diffs: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ranks = {n: r for n, r in self.ranks.items()}
        for n, d in self.diffs.items():
            if d.shape != (self.rank(n - 1), self.rank(n)):
                raise ValueError(
                    f"d({n}) has shape {d.shape}, expected {(self.rank(n - 1), self.rank(n))}")
            if d.ring != self.ring:
                raise ValueError(f"d({n}) is over {d.ring}, complex over {self.ring}")

    @property
    def lo(self):
        return min(self.ranks) if self.ranks else 0

    @property
    def hi(self):
        return max(self.ranks) if self.ranks else -1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, n) -> int:
        return self.ranks.get(n, 0)

    def d(self, n) -> SparseMatrix:
        m = self.diffs.get(n)
        if m is None:
            return SparseMatrix.zero(self.rank(n - 1), self.rank(n), self.ring)
        return m

    def change_ring(self, ring):
        return ChainComplex(ring, dict(self.ranks),
                            {n: d.change_ring(ring) for n, d in self.diffs.items()},
                            dict(self.blocks))

    def block_of(self, n, label):
        for lab, off, size in self.blocks.get(n, ()):
            if lab == label:
                return off, size
        return None


def check_complex(C: ChainComplex) -> list:
    """Degrees ``n`` where ``d(n-1) d(n) != 0``; empty means valid."""
    bad = []
    for n in C.degrees():
        if C.rank(n - 2) == 0 or C.rank(n) == 0:
            continue
        if not (C.d(n - 1) @ C.d(n)).is_zero():
            bad.append(n)
    return bad


def homology(C: ChainComplex, n: int) -> HomologyGroup:
    """``H_n = ker d(n) / im d(n+1)``; degrees outside the support count as 0."""
    dim = C.rank(n)
    if dim == 0:
        return HomologyGroup(C.ring, 0)
    d_out = C.d(n) if C.rank(n - 1) else None
    d_in = C.d(n + 1) if C.rank(n + 1) else None
    return homology_group(C.ring, dim, d_out, d_in)


def homology_table(C: ChainComplex, degrees) -> dict:
    return {n: homology(C, n) for n in degrees}


def shift(C: ChainComplex, s: int) -> ChainComplex:
    """``C[s]_n = C_{n-s}`` with differential ``(-1)^s d``."""
    sign = -1 if s % 2 else 1
    return ChainComplex(
        C.ring,
        {n + s: r for n, r in C.ranks.items()},
        {n + s: (d if sign == 1 else -d) for n, d in C.diffs.items()},
        {n + s: b for n, b in C.blocks.items()},
    )


def hom_to_ground(C: ChainComplex) -> ChainComplex:
    """``Hom(C, k)`` as a homological complex: degree ``-n`` holds ``Hom(C_n, k)``.

    The differential out of degree ``-n`` is the transpose of ``d(n+1)``, so
    ``H^n(Hom(C, k)) = H_{-n}`` of the result.
    """
    ranks = {-n: r for n, r in C.ranks.items()}
    diffs = {}
    for n in C.degrees():
        if C.rank(n + 1) and C.rank(n):
            diffs[-n] = C.d(n + 1).T
    return ChainComplex(C.ring, ranks, diffs,
                        {-n: b for n, b in C.blocks.items()})


def cohomology(C: ChainComplex, n: int) -> HomologyGroup:
    return homology(hom_to_ground(C), -n)


def check_chain_map(C: ChainComplex, D: ChainComplex, f: dict, degree: int = 0) -> list:
    """Degrees ``n`` where ``d f_n != f_{n-1} d`` for ``f_n: C_n -> D_{n+degree}``.

    ``f`` maps degrees to matrices; missing degrees are zero maps.
    """
    bad = []
    ring = C.ring

    def fm(n):
        m = f.get(n)
        if m is None:
            return SparseMatrix.zero(D.rank(n + degree), C.rank(n), ring)
        return m

    for n in sorted(set(C.ranks) | {k + 1 for k in C.ranks}):
        lhs = D.d(n + degree) @ fm(n)
        rhs = fm(n - 1) @ C.d(n)
        if lhs != rhs:
            bad.append(n)
    return bad


# ---------------------------------------------------------------------------
# bicomplexes


@dataclass(frozen=True)
class TruncationWindow:
    max_total_degree: int
    column_depth: int = 0

    def __post_init__(self):
        if self.max_total_degree < 0 or self.column_depth < 0:
            raise ValueError("truncation window bounds must be nonnegative")


@dataclass
class Bicomplex:
    """Finite bicomplex of free modules.

    ``ranks[(p, q)]`` gives the entries; ``h[(p, q)]`` is the horizontal map
    to ``(p-1, q)`` and ``v[(p, q)]`` the vertical map to ``(p, q-1)``.
    Missing maps are zero.  ``mode`` is ``"anticommuting"`` (hv + vh = 0) or
    ``"commuting"`` (hv = vh).
    """

    ring: RingSpec
    ranks: dict
    h: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    mode: str = "anticommuting"

    def __post_init__(self):
        if self.mode not in ("anticommuting", "commuting"):
            raise ValueError(f"unknown commutation mode {self.mode!r}")
        for (p, q), m in self.h.items():
            want = (self.rank(p - 1, q), self.rank(p, q))
            if m.shape != want:
                raise ValueError(f"h{(p, q)} has shape {m.shape}, expected {want}")
        for (p, q), m in self.v.items():
            want = (self.rank(p, q - 1), self.rank(p, q))
            if m.shape != want:
                raise ValueError(f"v{(p, q)} has shape {m.shape}, expected {want}")

    def rank(self, p, q) -> int:
        return self.ranks.get((p, q), 0)

    def hmap(self, p, q) -> SparseMatrix:
        m = self.h.get((p, q))
        return m if m is not None else SparseMatrix.zero(self.rank(p - 1, q), self.rank(p, q), self.ring)

    def vmap(self, p, q) -> SparseMatrix:
        m = self.v.get((p, q))
        return m if m is not None else SparseMatrix.zero(self.rank(p, q - 1), self.rank(p, q), self.ring)

    def columns(self):
        return sorted({p for p, _ in self.ranks})

    def column(self, p) -> ChainComplex:
        """Column ``p`` as a chain complex indexed by ``q``."""
        ranks = {q: r for (pp, q), r in self.ranks.items() if pp == p}
        diffs = {q: self.vmap(p, q) for q in ranks if (p, q - 1) in self.ranks}
        return ChainComplex(self.ring, ranks, diffs)

    def row(self, q) -> ChainComplex:
        """Row ``q`` as a chain complex indexed by ``p``."""
        ranks = {p: r for (p, qq), r in self.ranks.items() if qq == q}
        diffs = {p: self.hmap(p, q) for p in ranks if (p - 1, q) in self.ranks}
        return ChainComplex(self.ring, ranks, diffs)

    def change_ring(self, ring):
        return Bicomplex(ring, dict(self.ranks),
                         {k: m.change_ring(ring) for k, m in self.h.items()},
                         {k: m.change_ring(ring) for k, m in self.v.items()},
                         self.mode)


def check_bicomplex(B: Bicomplex) -> list:
    """List of violated identities as ``(name, (p, q))``; empty means valid."""
    bad = []
    for (p, q) in sorted(B.ranks):
        if B.rank(p - 2, q) and B.rank(p, q):
            if not (B.hmap(p - 1, q) @ B.hmap(p, q)).is_zero():
                bad.append(("h^2", (p, q)))
        if B.rank(p, q - 2) and B.rank(p, q):
            if not (B.vmap(p, q - 1) @ B.vmap(p, q)).is_zero():
                bad.append(("v^2", (p, q)))
        if B.rank(p - 1, q - 1) and B.rank(p, q):
            hv = B.hmap(p, q - 1) @ B.vmap(p, q)
            vh = B.vmap(p - 1, q) @ B.hmap(p, q)
            ok = (hv + vh).is_zero() if B.mode == "anticommuting" else hv == vh
            if not ok:
                bad.append(("hv", (p, q)))
    return bad


def totalize(B: Bicomplex, mode: str = "direct_sum",
             window: TruncationWindow | None = None) -> ChainComplex:
    """Total complex of ``B`` restricted to a finite window.

    ``direct_sum`` keeps every entry of total degree ``<= max_total_degree``;
    ``product`` additionally keeps only columns with ``|p| <= column_depth``
    (a finite stand-in for the product totalization).  The differential is
    ``h + v`` for anticommuting bicomplexes and ``h + (-1)^p v`` for
    commuting ones.
    """
    if mode not in ("direct_sum", "product"):
        raise ValueError(f"unknown totalization mode {mode!r}")
    keys = list(B.ranks)
    if window is not None:
        keys = [k for k in keys if k[0] + k[1] <= window.max_total_degree]
        if mode == "product":
            keys = [k for k in keys if abs(k[0]) <= window.column_depth]
    if not keys and B.ranks:
        raise ValueError("truncation window excludes every entry of the bicomplex")
    by_degree: dict = {}
    for k in sorted(keys):
        by_degree.setdefault(k[0] + k[1], []).append(k)
    ranks, blocks = {}, {}
    for n, ks in by_degree.items():
        off = 0
        bl = []
        for k in ks:
            r = B.ranks[k]
            bl.append((k, off, r))
            off += r
        ranks[n] = off
        blocks[n] = bl
    ring = B.ring
    diffs = {}
    for n in sorted(by_degree):
        if n - 1 not in by_degree:
            continue
        tgt = {k: i for i, k in enumerate(by_degree[n - 1])}
        src = by_degree[n]
        parts = {}
        for j, (p, q) in enumerate(src):
            if (p, q - 1) in tgt:
                m = B.vmap(p, q)
                if B.mode == "commuting" and p % 2:
                    m = -m
                parts[(tgt[(p, q - 1)], j)] = m
            if (p - 1, q) in tgt:
                parts[(tgt[(p - 1, q)], j)] = B.hmap(p, q)
        diffs[n] = SparseMatrix.block(
            parts, [B.ranks[k] for k in by_degree[n - 1]], [B.ranks[k] for k in src], ring)
    return ChainComplex(ring, ranks, diffs, blocks)
