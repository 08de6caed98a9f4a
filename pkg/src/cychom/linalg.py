"""Smith normal form, ranks, kernels and homology groups over Z, Q and F_p.

Two elimination engines live here:

* a dense engine with full transform tracking (:func:`smith_normal_form`),
  used where explicit bases are needed and matrices are small;
* a sparse unit-pivot engine (:func:`invariant_factors`, :func:`rank`) for the
  large, very sparse differentials coming out of cyclic modules.  Pivots on
  units never change the invariant factors, so whatever survives is handed to
  the dense engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .matrix import SparseMatrix
from .rings import RingSpec


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated module ``R^rank + sum Z/d_i`` (torsion only over Z)."""

    ring: RingSpec
    rank: int
    torsion: tuple = field(default=())

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        if self.torsion and self.ring.is_field:
            raise ValueError("torsion over a field")
        t = tuple(self.torsion)
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError(f"torsion {t} violates the divisibility chain")
        if any(d < 2 for d in t):
            raise ValueError("invariant factors must be >= 2")
        object.__setattr__(self, "torsion", t)

    @property
    def free_rank(self) -> int:
        return self.rank

    @property
    def dimension(self) -> int:
        if not self.ring.is_field:
            raise AttributeError("dimension is only defined over a field")
        return self.rank

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append(self.ring.name if self.rank == 1 else f"{self.ring.name}^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        if self.ring.is_field:
            return {"dimension": self.rank}
        return {"free_rank": self.rank, "torsion": list(self.torsion)}


# ---------------------------------------------------------------------------
# dense engine


def _identity(n, one):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


class _DenseSNF:
    """In-place diagonalization of a dense matrix with optional transforms.

    Over Z this produces the Smith normal form; over a field the diagonal is
    ``(1, ..., 1, 0, ...)``.  Pivots are chosen by minimal absolute value,
    ties broken by (row, col).
    """

    def __init__(self, rows, ncols, ring: RingSpec, track=True):
        self.ring = ring
        self.m = len(rows)
        self.n = ncols
        self.D = [list(r) for r in rows]
        self.track = track
        one = ring.one
        if track:
            self.U = _identity(self.m, one)
            self.Uinv = _identity(self.m, one)
            self.V = _identity(self.n, one)
            self.Vinv = _identity(self.n, one)
        self.rank = 0
        self._run()

    # elementary operations, each mirrored on the transforms
    def _row_add(self, i, k, q, start):
        # row_i += q * row_k
        norm = self.ring.norm
        Di, Dk = self.D[i], self.D[k]
        for c in range(start, self.n):
            if Dk[c]:
                Di[c] = norm(Di[c] + q * Dk[c])
        if self.track:
            Ui, Uk = self.U[i], self.U[k]
            for c in range(self.m):
                if Uk[c]:
                    Ui[c] = norm(Ui[c] + q * Uk[c])
            for row in self.Uinv:
                if row[i]:
                    row[k] = norm(row[k] - q * row[i])

    def _col_add(self, j, k, q, start):
        # col_j += q * col_k
        norm = self.ring.norm
        for r in range(start, self.m):
            row = self.D[r]
            if row[k]:
                row[j] = norm(row[j] + q * row[k])
        if self.track:
            for row in self.V:
                if row[k]:
                    row[j] = norm(row[j] + q * row[k])
            Vj, Vk = self.Vinv[j], self.Vinv[k]
            for c in range(self.n):
                if Vj[c]:
                    Vk[c] = norm(Vk[c] - q * Vj[c])

    def _row_swap(self, i, k):
        if i == k:
            return
        D = self.D
        D[i], D[k] = D[k], D[i]
        if self.track:
            self.U[i], self.U[k] = self.U[k], self.U[i]
            for row in self.Uinv:
                row[i], row[k] = row[k], row[i]

    def _col_swap(self, j, k):
        if j == k:
            return
        for row in self.D:
            row[j], row[k] = row[k], row[j]
        if self.track:
            for row in self.V:
                row[j], row[k] = row[k], row[j]
            self.Vinv[j], self.Vinv[k] = self.Vinv[k], self.Vinv[j]

    def _row_scale(self, i, c):
        # row_i *= c, c a unit
        norm = self.ring.norm
        self.D[i] = [norm(x * c) for x in self.D[i]]
        if self.track:
            self.U[i] = [norm(x * c) for x in self.U[i]]
            ci = self.ring.inv(c)
            for row in self.Uinv:
                row[i] = norm(row[i] * ci)

    def _key(self, v):
        return abs(v) if self.ring.kind in ("Z", "Q") else 0

    def _min_entry(self, t):
        best = None
        for i in range(t, self.m):
            row = self.D[i]
            for j in range(t, self.n):
                v = row[j]
                if v:
                    k = (self._key(v), i, j)
                    if best is None or k < best:
                        best = k
        return best

    def _run(self):
        ring = self.ring
        D = self.D
        t = 0
        while t < min(self.m, self.n):
            best = self._min_entry(t)
            if best is None:
                break
            _, i, j = best
            self._row_swap(t, i)
            self._col_swap(t, j)
            while True:
                p = D[t][t]
                if ring.is_field:
                    pinv = ring.inv(p)
                for i in range(t + 1, self.m):
                    v = D[i][t]
                    if v:
                        q = v * pinv if ring.is_field else v // p
                        self._row_add(i, t, ring.norm(-q), t)
                for j in range(t + 1, self.n):
                    v = D[t][j]
                    if v:
                        q = v * pinv if ring.is_field else v // p
                        self._col_add(j, t, ring.norm(-q), t)
                rest = None
                for i in range(t + 1, self.m):
                    if D[i][t]:
                        k = (self._key(D[i][t]), i, t)
                        rest = k if rest is None or k < rest else rest
                for j in range(t + 1, self.n):
                    if D[t][j]:
                        k = (self._key(D[t][j]), t, j)
                        rest = k if rest is None or k < rest else rest
                if rest is not None:
                    _, i, j = rest
                    self._row_swap(t, i)
                    self._col_swap(t, j)
                    continue
                if not ring.is_field:
                    bad = None
                    for i in range(t + 1, self.m):
                        row = D[i]
                        for j in range(t + 1, self.n):
                            if row[j] % p:
                                bad = i
                                break
                        if bad is not None:
                            break
                    if bad is not None:
                        self._row_add(t, bad, 1, t)
                        continue
                break
            p = D[t][t]
            if ring.is_field:
                if p != ring.one:
                    self._row_scale(t, ring.inv(p))
            elif p < 0:
                self._row_scale(t, -1)
            t += 1
        self.rank = t

    def diagonal(self):
        return [self.D[i][i] for i in range(self.rank)]


def _as_dense(A: SparseMatrix):
    return A.to_dense()


def _from_dense(rows, ncols, ring):
    return SparseMatrix.from_dense(rows, ring, ncols=ncols)


def smith_normal_form(A: SparseMatrix):
    """Return ``(U, D, V)`` with ``D = U @ A @ V`` in Smith normal form.

    ``U`` and ``V`` are unimodular and the diagonal of ``D`` is a divisibility
    chain of nonnegative integers.
    """
    if A.ring.kind != "Z":
        raise RingMismatch(f"smith_normal_form needs an integer matrix, got {A.ring}")
    s = _DenseSNF(_as_dense(A), A.ncols, A.ring, track=True)
    ring = A.ring
    return (_from_dense(s.U, A.nrows, ring), _from_dense(s.D, A.ncols, ring),
            _from_dense(s.V, A.ncols, ring))


def smith_form_full(A: SparseMatrix):
    """Diagonalization with inverses: ``(U, Uinv, D, V, Vinv, rank)``.

    Works over Z (Smith form) and over fields (``D = diag(1..1, 0..)``).
    """
    s = _DenseSNF(_as_dense(A), A.ncols, A.ring, track=True)
    ring = A.ring
    m, n = A.nrows, A.ncols
    return (_from_dense(s.U, m, ring), _from_dense(s.Uinv, m, ring),
            _from_dense(s.D, n, ring), _from_dense(s.V, n, ring),
            _from_dense(s.Vinv, n, ring), s.rank)


# ---------------------------------------------------------------------------
# sparse engine


def _sparse_unit_elimination(A: SparseMatrix):
    """Eliminate unit pivots; return (pivot count, residual row dicts).

    Each unit pivot contributes an invariant factor 1 and removes one row and
    one column.  Over a field the residual is always empty.
    """
    ring = A.ring
    norm = ring.norm
    is_unit = ring.is_unit
    rows = {i: r for i, r in enumerate(A.rows()) if r}
    colrows: dict = {}
    for i, r in rows.items():
        for c in r:
            colrows.setdefault(c, set()).add(i)
    npiv = 0
    changed = True
    while changed and rows:
        changed = False
        for r in sorted(rows, key=lambda i: (len(rows[i]), i)):
            row = rows.get(r)
            if row is None:
                continue
            best = None
            for c, v in row.items():
                if is_unit(v):
                    k = (len(colrows[c]), c)
                    if best is None or k < best:
                        best = k
            if best is None:
                continue
            c = best[1]
            pinv = ring.inv(row[c])
            for r2 in sorted(colrows[c]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = norm(row2[c] * pinv)
                for cc, vv in row.items():
                    nv = norm(row2.get(cc, 0) - f * vv)
                    if nv:
                        if cc not in row2:
                            colrows[cc].add(r2)
                        row2[cc] = nv
                    elif cc in row2:
                        del row2[cc]
                        colrows[cc].discard(r2)
                if not row2:
                    del rows[r2]
            for cc in row:
                s = colrows[cc]
                s.discard(r)
                if not s:
                    del colrows[cc]
            del rows[r]
            npiv += 1
            changed = True
    return npiv, rows


def invariant_factors(A: SparseMatrix) -> list:
    """Nonzero diagonal entries of the Smith form (over a field: all ones)."""
    npiv, rest = _sparse_unit_elimination(A)
    factors = [A.ring.one] * npiv
    if rest:
        cols = sorted({c for r in rest.values() for c in r})
        cpos = {c: k for k, c in enumerate(cols)}
        dense = []
        for i in sorted(rest):
            row = [A.ring.zero] * len(cols)
            for c, v in rest[i].items():
                row[cpos[c]] = v
            dense.append(row)
        s = _DenseSNF(dense, len(cols), A.ring, track=False)
        factors.extend(s.diagonal())
    return factors


def rank(A: SparseMatrix) -> int:
    """Rank over the fraction field (the Q-rank for integer matrices)."""
    return len(invariant_factors(A))


class NoUnitPivot(ValueError):
    pass


class Echelon:
    """Reduced row echelon basis of a subspace of ``F^n``, grown one vector at a time.

    Vectors are dicts index -> nonzero scalar.  Every basis vector has a 1 at
    its pivot and 0 at all other pivots.

    With ``unit_pivots`` the ring may be Z: only entries equal to +-1 are
    used as pivots, so the span found is a direct summand with the
    non-pivot coordinates as complement.  ``add`` raises ``NoUnitPivot``
    when a vector has no such entry.
    """

    def __init__(self, ring: RingSpec, unit_pivots: bool = False):
        if not ring.is_field and not unit_pivots:
            raise RingMismatch(f"Echelon needs a field, got {ring}")
        self.ring = ring
        self.unit_pivots = unit_pivots
        self.basis: dict = {}
        self.occ: dict = {}

    def __len__(self):
        return len(self.basis)

    def reduce(self, v: dict) -> dict:
        norm = self.ring.norm
        w = dict(v)
        for p in [k for k in w if k in self.basis]:
            f = w.get(p)
            if not f:
                continue
            for k, x in self.basis[p].items():
                nv = norm(w.get(k, 0) - f * x)
                if nv:
                    w[k] = nv
                else:
                    w.pop(k, None)
        return w

    def add(self, v: dict) -> bool:
        """Add ``v``; return True if it enlarged the span."""
        w = self.reduce(v)
        if not w:
            return False
        ring = self.ring
        norm = ring.norm
        if self.unit_pivots:
            units = [k for k, x in w.items() if x == 1 or x == -1]
            if not units:
                raise NoUnitPivot("vector has no unit entry to pivot on")
            p = min(units)
            inv = w[p] if not ring.is_field else ring.inv(w[p])
        else:
            p = min(w)
            inv = ring.inv(w[p])
        w = {k: norm(x * inv) for k, x in w.items()}
        for q in sorted(self.occ.get(p, ())):
            b = self.basis[q]
            f = b[p]
            for k, x in w.items():
                nv = norm(b.get(k, 0) - f * x)
                if nv:
                    if k not in b:
                        self.occ.setdefault(k, set()).add(q)
                    b[k] = nv
                elif k in b:
                    del b[k]
                    self.occ[k].discard(q)
        self.basis[p] = w
        for k in w:
            if k != p:
                self.occ.setdefault(k, set()).add(p)
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def pivots(self):
        return sorted(self.basis)


def _field_rref(A: SparseMatrix) -> Echelon:
    e = Echelon(A.ring)
    for r in A.rows():
        if r:
            e.add(r)
    return e


def _field_kernel(A: SparseMatrix) -> SparseMatrix:
    e = _field_rref(A)
    ring = A.ring
    norm = ring.norm
    one = ring.one
    cols = []
    for f in range(A.ncols):
        if f in e.basis:
            continue
        v = {f: one}
        for p in e.occ.get(f, ()):
            x = norm(-e.basis[p][f])
            if x:
                v[p] = x
        cols.append(v)
    return SparseMatrix.from_columns(A.ncols, cols, ring, check=False)


def rank_kernel_image(A: SparseMatrix):
    """Return ``(rank, kernel_basis, image_basis)``; bases are matrix columns.

    Over Z the bases are lattice bases of the kernel and image lattices and
    the rank is the Q-rank.
    """
    ring = A.ring
    if ring.is_field:
        e = _field_rref(A)
        r = len(e)
        ker = _field_kernel(A)
        img = A.select(cols=e.pivots())
        return r, ker, img
    U, Uinv, D, V, Vinv, r = smith_form_full(A)
    ker = V.select(cols=range(r, A.ncols))
    img = (A @ V).select(cols=range(r))
    return r, ker, img


def quotient_group(image: SparseMatrix, ambient_rank: int) -> HomologyGroup:
    """The module ``R^ambient_rank / span(columns of image)``."""
    if image.nrows != ambient_rank:
        raise ValueError(f"image has {image.nrows} rows, ambient rank is {ambient_rank}")
    f = invariant_factors(image)
    torsion = () if image.ring.is_field else tuple(sorted(int(d) for d in f if d != 1))
    return HomologyGroup(image.ring, ambient_rank - len(f), torsion)


def homology_group(ring: RingSpec, dim: int, d_out: SparseMatrix | None = None,
                   d_in: SparseMatrix | None = None) -> HomologyGroup:
    """``ker(d_out) / im(d_in)`` for a free module of rank ``dim``.

    ``d_out`` leaves the degree and ``d_in`` enters it; ``None`` is the zero
    map.  Kernels of maps between free modules are saturated, so torsion is
    read off the invariant factors of ``d_in`` alone.
    """
    r_out = rank(d_out) if d_out is not None else 0
    f = invariant_factors(d_in) if d_in is not None else []
    torsion = () if ring.is_field else tuple(sorted(int(d) for d in f if d != 1))
    return HomologyGroup(ring, dim - r_out - len(f), torsion)


def determinant(A: SparseMatrix):
    """Exact determinant of a square matrix (fraction-free Bareiss over Z)."""
    if A.nrows != A.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = A.nrows
    if n == 0:
        return A.ring.one
    ring = A.ring
    M = A.to_dense()
    if ring.is_field:
        det = ring.one
        norm = ring.norm
        for c in range(n):
            piv = next((r for r in range(c, n) if M[r][c]), None)
            if piv is None:
                return ring.zero
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = norm(-det)
            det = norm(det * M[c][c])
            inv = ring.inv(M[c][c])
            for r in range(c + 1, n):
                if M[r][c]:
                    f = norm(M[r][c] * inv)
                    M[r] = [norm(a - f * b) for a, b in zip(M[r], M[c])]
        return det
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if M[r][k]), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# lattices / subspaces


class SpanSolver:
    """Membership and coordinates in the span of a fixed set of columns.

    Over Z this is the lattice spanned by the columns; over a field, the
    subspace.  ``solve(v)`` returns integer/field coefficients ``x`` with
    ``G x = v`` or ``None`` when ``v`` is not in the span.
    """

    def __init__(self, G: SparseMatrix):
        self.G = G
        self.ring = G.ring
        self.U, self.Uinv, self.D, self.V, self.Vinv, self.rank = smith_form_full(G)
        self.diag = [self.D[i, i] for i in range(self.rank)]

    def solve(self, v: dict):
        ring = self.ring
        norm = ring.norm
        y = self.U.apply(v)
        for i, x in y.items():
            if i >= self.rank:
                return None
        z = {}
        for i, x in y.items():
            d = self.diag[i]
            if ring.is_field:
                z[i] = norm(x * ring.inv(d))
            else:
                if x % d:
                    return None
                z[i] = x // d
        return self.V.apply(z)

    def contains(self, v: dict) -> bool:
        return self.solve(v) is not None


def same_span(A: SparseMatrix, B: SparseMatrix) -> bool:
    """True when the columns of A and B span the same lattice/subspace."""
    if A.nrows != B.nrows:
        raise ValueError("ambient dimension mismatch")
    sa, sb = SpanSolver(A), SpanSolver(B)
    return (all(sb.contains(c) for c in A.columns())
            and all(sa.contains(c) for c in B.columns()))
