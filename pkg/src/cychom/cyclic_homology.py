"""Cyclic and negative cyclic bicomplexes, HH/HC/HN tables, periodicity and SBI.

Coordinates: the entry at ``(p, q)`` of either bicomplex is the Hochschild
chain module ``C_{q-p}``, so column ``p`` is a copy of ``(C_*, b)`` moved up
by ``p`` and the horizontal map ``(p, q) -> (p-1, q)`` is ``B``.  Total degree
``n`` of the cyclic bicomplex is ``sum_{p >= 0} C_{n-2p}``; the negative one
uses columns ``p = 0, -1, ..., -P``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .complexes import Bicomplex, ChainComplex, TruncationWindow, homology, totalize
from .cyclic_module import CyclicModule
from .linalg import Echelon, HomologyGroup, SpanSolver, _field_kernel, rank, rank_kernel_image, smith_form_full
from .matrix import SparseMatrix
from .mixed import K, MixedComplex
from .reports import VerificationReport


class WindowError(ValueError):
    pass


def as_mixed(M, normalized=False) -> MixedComplex:
    if isinstance(M, MixedComplex):
        return M
    if isinstance(M, CyclicModule):
        return K(M, normalized)
    raise TypeError(f"expected a cyclic module or mixed complex, got {type(M).__name__}")


def bc_bicomplex(M, normalized=False) -> Bicomplex:
    """First-quadrant cyclic bicomplex, cut at total degree ``N``."""
    X = as_mixed(M, normalized)
    N = X.top
    ranks, h, v = {}, {}, {}
    for p in range(N // 2 + 1):
        for n in range(N - 2 * p + 1):
            q = n + p
            ranks[(p, q)] = X.rank(n)
            if n >= 1:
                v[(p, q)] = X.b(n)
            if p >= 1:
                h[(p, q)] = X.Bop(n)
    return Bicomplex(X.ring, ranks, h, v)


def bn_bicomplex(M, depth: int, normalized=False) -> Bicomplex:
    """Negative cyclic bicomplex on columns ``0, -1, ..., -depth``, cut at total degree ``N - 2 depth``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    X = as_mixed(M, normalized)
    N = X.top
    top = N - 2 * depth
    if top < -2 * depth:
        raise WindowError(f"truncation {N} too small for depth {depth}")
    ranks, h, v = {}, {}, {}
    for j in range(depth + 1):
        p = -j
        for n in range(top + 2 * j + 1):
            q = n + p
            ranks[(p, q)] = X.rank(n)
            if n >= 1:
                v[(p, q)] = X.b(n)
            if j < depth:
                h[(p, q)] = X.Bop(n)
    return Bicomplex(X.ring, ranks, h, v)


def tot_bc(M, normalized=False) -> ChainComplex:
    X = as_mixed(M, normalized)
    return totalize(bc_bicomplex(X), "direct_sum", TruncationWindow(X.top))


def tot_bn(M, depth, normalized=False) -> ChainComplex:
    X = as_mixed(M, normalized)
    return totalize(bn_bicomplex(X, depth), "product",
                    TruncationWindow(max(X.top - 2 * depth, 0), depth))


# ---------------------------------------------------------------------------
# tables


@dataclass
class HomologyTable:
    kind: str
    ring: object
    degrees: list
    groups: list
    truncation: int
    depth: int | None = None
    stabilized: list | None = None
    normalized: bool = False

    def __post_init__(self):
        if self.kind not in ("HH", "HC", "HN"):
            raise ValueError(f"unknown table kind {self.kind}")
        if list(self.degrees) != list(range(self.degrees[0], self.degrees[0] + len(self.degrees))):
            raise ValueError("degrees must be contiguous")
        if self.kind == "HN" and self.stabilized is None:
            raise ValueError("HN tables carry stabilization flags")

    def __getitem__(self, n) -> HomologyGroup:
        return self.groups[self.degrees.index(n)]

    def as_strings(self):
        return [str(g) for g in self.groups]

    def rows(self):
        out = []
        for i, (n, g) in enumerate(zip(self.degrees, self.groups)):
            row = {"degree": n, "free_rank": g.rank, "torsion": list(g.torsion)}
            if self.stabilized is not None:
                row["stabilized"] = self.stabilized[i]
            out.append(row)
        return out

    def to_json(self):
        doc = {"schema": 1, "kind": self.kind, "ring": self.ring.name,
               "truncation": self.truncation, "normalized": self.normalized,
               "rows": self.rows()}
        if self.depth is not None:
            doc["depth"] = self.depth
        return doc

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["degree", "free_rank", "torsion"]
        if self.stabilized is not None:
            head.append("stabilized")
        w.writerow(head)
        for r in self.rows():
            line = [r["degree"], r["free_rank"], ";".join(map(str, r["torsion"]))]
            if self.stabilized is not None:
                line.append(str(r["stabilized"]).lower())
            w.writerow(line)
        return buf.getvalue()


def _check_window(degrees, N, label):
    degrees = list(degrees)
    if not degrees:
        raise WindowError("empty degree range")
    if max(degrees) + 1 >= N:
        raise WindowError(f"{label} degree {max(degrees)} needs truncation > {max(degrees) + 1}, have {N}")
    return degrees


def hh(M, degrees, normalized=False, pool=None) -> HomologyTable:
    X = as_mixed(M, normalized)
    degrees = _check_window(degrees, X.top, "HH")
    C = X.complex
    groups = _map(pool, lambda n: homology(C, n), degrees)
    return HomologyTable("HH", X.ring, degrees, groups, X.top, normalized=normalized)


def hc(M, degrees, normalized=False, pool=None) -> HomologyTable:
    X = as_mixed(M, normalized)
    degrees = _check_window(degrees, X.top, "HC")
    T = tot_bc(X)
    groups = _map(pool, lambda n: homology(T, n), degrees)
    return HomologyTable("HC", X.ring, degrees, groups, X.top, normalized=normalized)


def hn_required_truncation(hi: int, depth: int) -> int:
    """Smallest ``N`` for which depth ``depth`` computes HN reliably up to degree ``hi``."""
    return hi + 2 + 2 * depth


def hn(M, degrees, normalized=False, start=None, cap=None, pool=None) -> HomologyTable:
    """Negative cyclic homology with the depth stabilization protocol.

    Depth ``P`` starts at ``width + 2`` and grows by 2 until depths ``P`` and
    ``P + 2`` agree in every requested degree or ``P`` reaches the cap
    ``2 width + 8``; degrees still changing are flagged unstable.  Depths whose
    window the truncation cannot supply end the search early (also flagged).
    """
    X = as_mixed(M, normalized)
    degrees = list(degrees)
    if not degrees:
        raise WindowError("empty degree range")
    lo, hi = min(degrees), max(degrees)
    width = hi - lo
    P = width + 2 if start is None else start
    cap = 2 * width + 8 if cap is None else cap
    if lo < -2 * P:
        P = (-lo + 1) // 2
    if hn_required_truncation(hi, P) > X.top:
        raise WindowError(f"HN up to degree {hi} at depth {P} needs truncation "
                          f">= {hn_required_truncation(hi, P)}, have {X.top}")

    def at_depth(P):
        T = tot_bn(X, P)
        return _map(pool, lambda n: homology(T, n), degrees)

    cur = at_depth(P)
    stable = [False] * len(degrees)
    while True:
        if P + 2 > cap or hn_required_truncation(hi, P + 2) > X.top:
            break
        nxt = at_depth(P + 2)
        stable = [a == b for a, b in zip(cur, nxt)]
        if all(stable):
            break
        P, cur = P + 2, nxt
    return HomologyTable("HN", X.ring, degrees, cur, X.top, depth=P, stabilized=stable,
                         normalized=normalized)


def _map(pool, fn, items):
    if pool is None:
        return [fn(x) for x in items]
    return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# explicit homology bases


class HomologyBasis:
    """Generators of ``H_n(C)`` and coordinates of cycles against them.

    ``orders[i]`` is 0 for a free generator and ``d`` for a ``Z/d`` summand;
    coordinates of torsion generators are reduced mod ``d``.
    """

    def __init__(self, C: ChainComplex, n: int):
        self.ring = ring = C.ring
        self.n = n
        dim = C.rank(n)
        d_out = C.d(n) if C.rank(n - 1) else SparseMatrix.zero(0, dim, ring)
        d_in = C.d(n + 1) if C.rank(n + 1) else SparseMatrix.zero(dim, 0, ring)
        self.d_out = d_out
        if ring.is_field:
            self._field_init(d_out, d_in)
        else:
            self._lattice_init(d_out, d_in)

    def _field_init(self, d_out, d_in):
        ring = self.ring
        img = Echelon(ring)
        for col in d_in.columns():
            if col:
                img.add(col)
        self._img = img
        cyc = Echelon(ring)
        for z in _field_kernel(d_out).columns():
            w = img.reduce(z)
            if w:
                cyc.add(w)
        self._cyc = cyc
        self._pivots = cyc.pivots()
        self.generators = SparseMatrix.from_columns(
            d_out.ncols, [cyc.basis[p] for p in self._pivots], ring, check=False)
        self.orders = [0] * len(self._pivots)

    def _lattice_init(self, d_out, d_in):
        ring = self.ring
        dim = d_out.ncols
        if d_out.nrows:
            Kb = rank_kernel_image(d_out)[1]
        else:
            Kb = SparseMatrix.identity(dim, ring)
        self._ksolve = SpanSolver(Kb)
        k = Kb.ncols
        cols = []
        for col in d_in.columns():
            x = self._ksolve.solve(col)
            if x is None:
                raise AssertionError("boundary is not a cycle")
            cols.append(x)
        Bk = SparseMatrix.from_columns(k, cols, ring, check=False)
        U, Uinv, D, V, Vinv, r = smith_form_full(Bk)
        diag = [abs(D[i, i]) for i in range(r)]
        keep, orders = [], []
        for i in range(k):
            if i < r:
                if diag[i] != 1:
                    keep.append(i)
                    orders.append(diag[i])
            else:
                keep.append(i)
                orders.append(0)
        self._U = U
        self._keep = keep
        self.orders = orders
        self.generators = (Kb @ Uinv).select(cols=keep)

    @property
    def group(self) -> HomologyGroup:
        tors = tuple(sorted(o for o in self.orders if o))
        return HomologyGroup(self.ring, sum(1 for o in self.orders if o == 0), tors)

    def __len__(self):
        return len(self.orders)

    def is_cycle(self, z: dict) -> bool:
        return not self.d_out.apply(z)

    def coords(self, z: dict) -> list:
        """Coordinates of the class of the cycle ``z``."""
        if self.ring.is_field:
            w = self._img.reduce(z)
            out = [w.get(p, 0) for p in self._pivots]
            if self._cyc.reduce(w):
                raise ValueError("vector is not a cycle")
            return out
        x = self._ksolve.solve(z)
        if x is None:
            raise ValueError("vector is not a cycle")
        y = self._U.apply(x)
        out = []
        for i, o in zip(self._keep, self.orders):
            c = y.get(i, 0)
            out.append(c % o if o else c)
        return out

    def induced(self, f: SparseMatrix, target: "HomologyBasis") -> SparseMatrix:
        """Matrix of ``H(f)`` from these generators to ``target``'s coordinates."""
        cols = []
        for g in self.generators.columns():
            img = f.apply(g)
            cols.append({i: c for i, c in enumerate(target.coords(img)) if c})
        return SparseMatrix.from_columns(len(target), cols, self.ring)


# ---------------------------------------------------------------------------
# periodicity and the SBI sequence


def periodicity_chain_map(T: ChainComplex, n: int) -> SparseMatrix:
    """``S: Tot_n -> Tot_{n-2}``: drop column 0 and move column ``p`` to ``p - 1``."""
    ring = T.ring
    src = T.blocks.get(n, [])
    tgt = {lab: (off, size) for lab, off, size in T.blocks.get(n - 2, [])}
    cols = {}
    for (p, q), off, size in src:
        if p == 0:
            continue
        toff, tsize = tgt[(p - 1, q - 1)]
        for k in range(size):
            cols[off + k] = {toff + k: ring.one}
    return SparseMatrix(T.rank(n - 2), T.rank(n), ring, cols, check=False)


def column_inclusion(T: ChainComplex, X: MixedComplex, n: int) -> SparseMatrix:
    """``I: C_n -> Tot_n`` onto column 0."""
    block = T.block_of(n, (0, n))
    off = block[0] if block else 0
    return SparseMatrix.permutation([off + k for k in range(X.rank(n))], X.ring, nrows=T.rank(n))


def column_zero_part(T: ChainComplex, n: int) -> SparseMatrix:
    """Projection ``Tot_n -> C_n`` onto column 0."""
    block = T.block_of(n, (0, n))
    if block is None:
        return SparseMatrix.zero(0, T.rank(n), T.ring)
    off, size = block
    return SparseMatrix.identity(T.rank(n), T.ring).select(rows=range(off, off + size))


def connecting_chain_map(T: ChainComplex, X: MixedComplex, n: int) -> SparseMatrix:
    """Chain-level boundary ``Tot_n -> C_{n+1}``, ``z -> B z_0``."""
    return X.Bop(n) @ column_zero_part(T, n)


def periodicity_map(M, n: int, normalized=False) -> SparseMatrix:
    """Matrix of ``S: HC_n -> HC_{n-2}`` between deterministic homology bases."""
    X = as_mixed(M, normalized)
    if n < 2:
        raise WindowError("periodicity needs n >= 2")
    _check_window([n], X.top, "HC")
    T = tot_bc(X)
    return HomologyBasis(T, n).induced(periodicity_chain_map(T, n), HomologyBasis(T, n - 2))


def sbi_check(M, degrees, normalized=False) -> VerificationReport:
    """Levelwise exactness of ``0 -> C -> Tot BC -> Tot BC[2] -> 0`` and exactness of

    ``HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1} -> ...`` at every spot whose
    groups lie in ``degrees``.
    """
    X = as_mixed(M, normalized)
    degrees = _check_window(degrees, X.top, "SBI")
    hi = max(degrees)
    T = tot_bc(X)
    C = X.complex
    ring = X.ring
    rep = VerificationReport("sbi", {"ring": ring.name, "degrees": degrees,
                                      "normalized": normalized})
    spots = 0

    # chain level
    for n in range(0, hi + 2):
        if T.rank(n) != C.rank(n) + T.rank(n - 2):
            rep.violations.append(("levelwise rank", n))
        I, S = column_inclusion(T, X, n), periodicity_chain_map(T, n)
        if not (S @ I).is_zero():
            rep.violations.append(("S I != 0", n))
        if n >= 1:
            if T.d(n) @ I != column_inclusion(T, X, n - 1) @ C.d(n):
                rep.violations.append(("I chain map", n))
            if T.d(n - 2) @ S != periodicity_chain_map(T, n - 1) @ T.d(n):
                rep.violations.append(("S chain map", n))

    # homology level: nodes HH_n, HC_n, with HC_m = 0 for m < 0
    hh_b = {n: HomologyBasis(C, n) for n in range(0, hi + 1)}
    hc_b = {n: HomologyBasis(T, n) for n in range(0, hi + 1)}

    def mat(kind, n):
        # I_n: HH_n -> HC_n ; S_n: HC_n -> HC_{n-2} ; D_n: HC_n -> HH_{n+1}
        if kind == "I":
            return hh_b[n].induced(column_inclusion(T, X, n), hc_b[n])
        if kind == "S":
            if n < 2:
                return SparseMatrix.zero(0, len(hc_b[n]), ring)
            return hc_b[n].induced(periodicity_chain_map(T, n), hc_b[n - 2])
        return hc_b[n].induced(connecting_chain_map(T, X, n), hh_b[n + 1])

    for n in range(0, hi + 1):
        # at HC_n: I_n in, S_n out
        spots += 1
        _exact_at(rep, ("HC", n), hc_b[n], mat("I", n), mat("S", n), hh_b[n],
                  hc_b.get(n - 2))
        # at HH_n: D_{n-1} in (from HC_{n-1}), I_n out
        spots += 1
        din = mat("D", n - 1) if n >= 1 else SparseMatrix.zero(len(hh_b[0]), 0, ring)
        _exact_at(rep, ("HH", n), hh_b[n], din, mat("I", n), hc_b.get(n - 1), hc_b[n])
        # at HC_{n-2}: S_n in, D_{n-2} out to HH_{n-1}
        if n >= 2:
            spots += 1
            _exact_at(rep, ("HC", n - 2, "via S"), hc_b[n - 2], mat("S", n), mat("D", n - 2),
                      hc_b[n], hh_b[n - 1])
    rep.witness["spots"] = spots
    return rep


def _exact_at(rep, where, mid: HomologyBasis, f_in: SparseMatrix, f_out: SparseMatrix,
              src: HomologyBasis | None, tgt: HomologyBasis | None):
    """Check ``im f_in = ker f_out`` inside the group described by ``mid``."""
    if f_in.nrows != len(mid) or f_out.ncols != len(mid):
        rep.violations.append((where, "shape"))
        return
    if not (f_out @ f_in).is_zero() and mid.ring.is_field:
        rep.violations.append((where, "composite nonzero"))
        return
    if mid.ring.is_field:
        if rank(f_in) + rank(f_out) != len(mid):
            rep.violations.append((where, "rank defect"))
        return
    if not _lattice_exact(mid, f_in, f_out, src, tgt):
        rep.violations.append((where, "not exact"))


def _torsion_relations(orders):
    """Columns ``o_i e_i`` generating the relations of ``Z^k -> group``."""
    return {i: {i: o} for i, o in enumerate(orders) if o}


def _lattice_exact(mid, f_in, f_out, src, tgt) -> bool:
    """Exactness over Z in coordinates ``Z^k / (relations)``.

    ``ker f_out`` is the set of ``x`` with ``f_out x`` in the target relations;
    it is compared with ``im f_in + relations of mid``.
    """
    from .linalg import same_span

    ring = mid.ring
    k = len(mid)
    tgt_orders = tgt.orders if tgt is not None else []
    m = f_out.nrows
    # kernel of [f_out | rel_tgt] projected to the first k coordinates
    rel_t = SparseMatrix(m, len(tgt_orders), ring, _torsion_relations(tgt_orders))
    big = SparseMatrix.hstack([f_out, rel_t], ring, nrows=m) if m else SparseMatrix.zero(0, k + len(tgt_orders), ring)
    if big.nrows:
        ker = rank_kernel_image(big)[1].select(rows=range(k))
    else:
        ker = SparseMatrix.identity(k, ring)
    rel_m = SparseMatrix(k, k, ring, _torsion_relations(mid.orders))
    # composite must land in the relations
    img = SparseMatrix.hstack([f_in, rel_m], ring, nrows=k)
    ker_full = SparseMatrix.hstack([ker, rel_m], ring, nrows=k)
    return same_span(img, ker_full)
