"""Sparse exact matrices.

Storage is column-major: ``cols[j]`` maps row index to a nonzero scalar.
Matrices act on column vectors, so the matrix of a composite ``g . f`` is
``G @ F``.
"""

from __future__ import annotations

from typing import Iterable

from .rings import RingSpec


class SparseMatrix:
    __slots__ = ("nrows", "ncols", "ring", "_cols")

    def __init__(self, nrows: int, ncols: int, ring: RingSpec, cols=None, *, check=True):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        self.ring = ring
        if cols is None:
            cols = {}
        if check:
            clean = {}
            for j, col in cols.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} out of range for {nrows}x{ncols}")
                c = {}
                for i, v in col.items():
                    if not 0 <= i < nrows:
                        raise IndexError(f"row {i} out of range for {nrows}x{ncols}")
                    v = ring(v)
                    if v:
                        c[i] = v
                if c:
                    clean[j] = c
            cols = clean
        self._cols = cols

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, nrows, ncols, ring):
        return cls(nrows, ncols, ring, {}, check=False)

    @classmethod
    def identity(cls, n, ring):
        one = ring.one
        return cls(n, n, ring, {i: {i: one} for i in range(n)}, check=False)

    @classmethod
    def from_entries(cls, nrows, ncols, ring, entries):
        cols: dict = {}
        for (i, j), v in entries.items():
            cols.setdefault(j, {})[i] = v
        return cls(nrows, ncols, ring, cols)

    @classmethod
    def from_dense(cls, rows, ring, ncols=None):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: dict = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(r):
                if v:
                    cols.setdefault(j, {})[i] = v
        return cls(nrows, ncols, ring, cols)

    @classmethod
    def from_columns(cls, nrows, columns, ring, *, check=True):
        """Build from a list of column dicts (row -> value)."""
        cols = {j: c for j, c in enumerate(columns) if c}
        return cls(nrows, len(columns), ring, cols, check=check)

    @classmethod
    def diagonal(cls, values, ring, nrows=None, ncols=None):
        n = len(values)
        nrows = n if nrows is None else nrows
        ncols = n if ncols is None else ncols
        return cls(nrows, ncols, ring, {i: {i: v} for i, v in enumerate(values) if v})

    @classmethod
    def permutation(cls, images, ring, nrows=None):
        """Matrix sending basis vector j to basis vector ``images[j]``."""
        one = ring.one
        nrows = len(images) if nrows is None else nrows
        return cls(nrows, len(images), ring, {j: {i: one} for j, i in enumerate(images)}, check=False)

    # -- access -------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        i, j = key
        return self._cols.get(j, {}).get(i, self.ring.zero)

    def column(self, j) -> dict:
        """Column ``j`` as a (read-only by convention) dict row -> value."""
        return self._cols.get(j, {})

    def columns(self):
        return [self._cols.get(j, {}) for j in range(self.ncols)]

    def entries(self) -> dict:
        return {(i, j): v for j, col in self._cols.items() for i, v in col.items()}

    def rows(self) -> list:
        out: list = [dict() for _ in range(self.nrows)]
        for j in sorted(self._cols):
            for i, v in self._cols[j].items():
                out[i][j] = v
        return out

    @property
    def nnz(self):
        return sum(len(c) for c in self._cols.values())

    def is_zero(self):
        return not self._cols

    def to_dense(self):
        out = [[self.ring.zero] * self.ncols for _ in range(self.nrows)]
        for j, col in self._cols.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.ring == other.ring
                and self._cols == other._cols)

    def __hash__(self):
        return hash((self.shape, self.ring, tuple(sorted(self.entries().items()))))

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols} over {self.ring}, nnz={self.nnz})"

    # -- arithmetic ---------------------------------------------------

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check_same(other)
        norm = self.ring.norm
        cols = {j: dict(c) for j, c in self._cols.items()}
        for j, col in other._cols.items():
            tgt = cols.setdefault(j, {})
            for i, v in col.items():
                w = norm(tgt.get(i, 0) + v)
                if w:
                    tgt[i] = w
                else:
                    tgt.pop(i, None)
            if not tgt:
                del cols[j]
        return SparseMatrix(self.nrows, self.ncols, self.ring, cols, check=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        k = self.ring(k)
        if not k:
            return SparseMatrix.zero(self.nrows, self.ncols, self.ring)
        norm = self.ring.norm
        cols = {}
        for j, col in self._cols.items():
            c = {i: norm(v * k) for i, v in col.items()}
            c = {i: v for i, v in c.items() if v}
            if c:
                cols[j] = c
        return SparseMatrix(self.nrows, self.ncols, self.ring, cols, check=False)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch {self.ring} vs {other.ring}")
        norm = self.ring.norm
        mine = self._cols
        cols = {}
        for j, bcol in other._cols.items():
            acc: dict = {}
            for k, bv in bcol.items():
                acol = mine.get(k)
                if acol is None:
                    continue
                for i, av in acol.items():
                    acc[i] = acc.get(i, 0) + av * bv
            c = {}
            for i, v in acc.items():
                v = norm(v)
                if v:
                    c[i] = v
            if c:
                cols[j] = c
        return SparseMatrix(self.nrows, other.ncols, self.ring, cols, check=False)

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector given as a dict index -> value."""
        norm = self.ring.norm
        acc: dict = {}
        for k, x in vec.items():
            acol = self._cols.get(k)
            if acol is None:
                continue
            for i, av in acol.items():
                acc[i] = acc.get(i, 0) + av * x
        return {i: w for i, v in acc.items() if (w := norm(v))}

    def __pow__(self, e: int):
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if e < 0:
            raise ValueError("negative matrix power")
        result = SparseMatrix.identity(self.nrows, self.ring)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    @property
    def T(self):
        cols: dict = {}
        for j, col in self._cols.items():
            for i, v in col.items():
                cols.setdefault(i, {})[j] = v
        return SparseMatrix(self.ncols, self.nrows, self.ring, cols, check=False)

    def change_ring(self, ring: RingSpec):
        """Reinterpret entries in another ring (e.g. reduce Z mod p)."""
        return SparseMatrix(self.nrows, self.ncols, ring, self._cols)

    def select(self, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None):
        """Submatrix on the given row and column index lists (in that order)."""
        rows = list(range(self.nrows)) if rows is None else list(rows)
        cols = list(range(self.ncols)) if cols is None else list(cols)
        rpos = {r: a for a, r in enumerate(rows)}
        out = {}
        for b, j in enumerate(cols):
            col = self._cols.get(j)
            if not col:
                continue
            c = {rpos[i]: v for i, v in col.items() if i in rpos}
            if c:
                out[b] = c
        return SparseMatrix(len(rows), len(cols), self.ring, out, check=False)

    # -- block assembly -----------------------------------------------

    @staticmethod
    def block(blocks, row_sizes, col_sizes, ring):
        """Assemble from a dict ``(bi, bj) -> SparseMatrix`` of blocks.

        Missing blocks are zero.  Each block must have shape
        ``(row_sizes[bi], col_sizes[bj])``.
        """
        roff = [0]
        for r in row_sizes:
            roff.append(roff[-1] + r)
        coff = [0]
        for c in col_sizes:
            coff.append(coff[-1] + c)
        cols: dict = {}
        norm = ring.norm
        for (bi, bj), m in blocks.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(
                    f"block ({bi},{bj}) has shape {m.shape}, expected "
                    f"{(row_sizes[bi], col_sizes[bj])}")
            if m.ring != ring:
                raise ValueError("ring mismatch in block assembly")
            r0, c0 = roff[bi], coff[bj]
            for j, col in m._cols.items():
                tgt = cols.setdefault(c0 + j, {})
                for i, v in col.items():
                    w = norm(tgt.get(r0 + i, 0) + v)
                    if w:
                        tgt[r0 + i] = w
                    else:
                        tgt.pop(r0 + i, None)
        cols = {j: c for j, c in cols.items() if c}
        return SparseMatrix(roff[-1], coff[-1], ring, cols, check=False)

    @staticmethod
    def hstack(mats, ring=None, nrows=None):
        mats = list(mats)
        ring = ring or mats[0].ring
        nrows = mats[0].nrows if nrows is None else nrows
        return SparseMatrix.block({(0, k): m for k, m in enumerate(mats)},
                                  [nrows], [m.ncols for m in mats], ring)

    @staticmethod
    def vstack(mats, ring=None, ncols=None):
        mats = list(mats)
        ring = ring or mats[0].ring
        ncols = mats[0].ncols if ncols is None else ncols
        return SparseMatrix.block({(k, 0): m for k, m in enumerate(mats)},
                                  [m.nrows for m in mats], [ncols], ring)

    @staticmethod
    def direct_sum(mats, ring=None):
        mats = list(mats)
        ring = ring or mats[0].ring
        return SparseMatrix.block({(k, k): m for k, m in enumerate(mats)},
                                  [m.nrows for m in mats], [m.ncols for m in mats], ring)

    # -- serialization ------------------------------------------------

    def to_triples(self):
        """Sorted ``[row, col, value]`` triples (JSON-safe)."""
        return [[i, j, self.ring.to_json(v)]
                for j in sorted(self._cols) for i, v in sorted(self._cols[j].items())]

    @classmethod
    def from_triples(cls, nrows, ncols, ring, triples):
        return cls.from_entries(nrows, ncols, ring, {(i, j): v for i, j, v in triples})
