"""Cyclic modules stored as operator matrices, and their Hochschild complexes.

A cyclic module is a contravariant functor on the cyclic category.  Level
``n`` is a free module of rank ``ranks[n]`` and the structure maps are

* faces ``d_i = M(delta_i): M_n -> M_{n-1}``,
* degeneracies ``s_i = M(sigma_i): M_n -> M_{n+1}``,
* the cyclic operator ``c = M(rho_n): M_n -> M_n`` of order ``n + 1``.

Everything is truncated at level ``N``: degeneracies out of ``M_N`` are not
stored, so operators needing them stop one level earlier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import lambda_cat as lc
from .complexes import ChainComplex
from .linalg import Echelon, NoUnitPivot, smith_form_full
from .matrix import SparseMatrix
from .rings import RingSpec


class TruncationError(ValueError):
    pass


@dataclass(eq=False)
class CyclicModule:
    ring: RingSpec
    N: int
    ranks: list
    faces: list
    degens: list
    cyc: list
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        N = self.N
        if len(self.ranks) != N + 1 or len(self.cyc) != N + 1:
            raise ValueError("ranks and cyclic operators must cover levels 0..N")
        if len(self.faces) != N + 1 or self.faces[0]:
            raise ValueError("faces[n] must list d_0..d_n for n >= 1 (faces[0] empty)")
        if len(self.degens) != N:
            raise ValueError("degens[n] must list s_0..s_n for n < N")
        r = self.ranks
        for n in range(N + 1):
            if self.cyc[n].shape != (r[n], r[n]):
                raise ValueError(f"c({n}) has shape {self.cyc[n].shape}")
            if n >= 1:
                if len(self.faces[n]) != n + 1:
                    raise ValueError(f"level {n} needs {n + 1} faces")
                for i, d in enumerate(self.faces[n]):
                    if d.shape != (r[n - 1], r[n]):
                        raise ValueError(f"d_{i}({n}) has shape {d.shape}")
            if n < N:
                if len(self.degens[n]) != n + 1:
                    raise ValueError(f"level {n} needs {n + 1} degeneracies")
                for i, s in enumerate(self.degens[n]):
                    if s.shape != (r[n + 1], r[n]):
                        raise ValueError(f"s_{i}({n}) has shape {s.shape}")
        for mats in [self.cyc] + self.faces + self.degens:
            for mat in mats:
                if mat.ring != self.ring:
                    raise ValueError("operator over the wrong ring")

    def rank(self, n):
        return self.ranks[n] if 0 <= n <= self.N else 0

    def face(self, n, i) -> SparseMatrix:
        return self.faces[n][i]

    def degen(self, n, i) -> SparseMatrix:
        if n >= self.N:
            raise TruncationError(f"s_{i} out of level {n} needs level {n + 1} > N = {self.N}")
        return self.degens[n][i]

    def c(self, n) -> SparseMatrix:
        return self.cyc[n]

    def c_power(self, n, r) -> SparseMatrix:
        key = ("c^", n, r % (n + 1))
        if key not in self._cache:
            self._cache[key] = self.cyc[n] ** (r % (n + 1))
        return self._cache[key]

    def operator(self, f: lc.LambdaMorphism) -> SparseMatrix:
        """``M(f): M_{f.target} -> M_{f.source}`` via the canonical word of ``f``."""
        if f.source > self.N or f.target > self.N:
            raise TruncationError(f"{f} leaves the truncation N = {self.N}")
        mat = SparseMatrix.identity(self.rank(f.target), self.ring)
        # f = g_k ... g_1, so M(f) = M(g_1) ... M(g_k); build from the left end
        for g in reversed(lc.canonical_word(f)):
            mat = self.generator_matrix(g) @ mat
        return mat

    def generator_matrix(self, g: lc.LambdaMorphism) -> SparseMatrix:
        n, m = g.source, g.target
        if n == m:
            if g.monotone != tuple(range(n + 1)):
                raise ValueError(f"{g} is not a generator")
            return self.c_power(n, g.rotation)
        if g.rotation:
            raise ValueError(f"{g} is not a generator")
        if n == m - 1:
            i = next(k for k in range(m + 1) if k not in g.monotone)
            return self.face(m, i)
        if n == m + 1:
            i = next(k for k in range(n) if g.monotone[k] == g.monotone[k + 1])
            return self.degen(m, i)
        raise ValueError(f"{g} is not a generator")

    def change_ring(self, ring):
        conv = lambda mats: [m.change_ring(ring) for m in mats]
        return CyclicModule(ring, self.N, list(self.ranks), [conv(f) for f in self.faces],
                            [conv(s) for s in self.degens], conv(self.cyc))

    def truncate(self, N):
        if N > self.N:
            raise TruncationError(f"cannot extend a module truncated at {self.N} to {N}")
        return CyclicModule(self.ring, N, self.ranks[:N + 1], self.faces[:N + 1],
                            self.degens[:N], self.cyc[:N + 1])

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "cyclic_module",
            "ring": self.ring.name,
            "truncation": self.N,
            "ranks": list(self.ranks),
            "faces": [[d.to_triples() for d in fs] for fs in self.faces],
            "degeneracies": [[s.to_triples() for s in ss] for ss in self.degens],
            "cyclic": [c.to_triples() for c in self.cyc],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, doc: dict) -> "CyclicModule":
        if doc.get("schema") != 1 or doc.get("kind") != "cyclic_module":
            raise ValueError("not a schema-1 cyclic module document")
        ring = RingSpec.parse(doc["ring"])
        N = doc["truncation"]
        r = doc["ranks"]
        mk = lambda rows, cols, t: SparseMatrix.from_triples(rows, cols, ring, t)
        faces = [[]] + [[mk(r[n - 1], r[n], t) for t in doc["faces"][n]] for n in range(1, N + 1)]
        degens = [[mk(r[n + 1], r[n], t) for t in doc["degeneracies"][n]] for n in range(N)]
        cyc = [mk(r[n], r[n], t) for n, t in enumerate(doc["cyclic"])]
        return cls(ring, N, list(r), faces, degens, cyc)

    @classmethod
    def loads(cls, text: str) -> "CyclicModule":
        return cls.from_json(json.loads(text))


def constant_module(ring: RingSpec, N: int) -> CyclicModule:
    """The constant cyclic module: rank 1 everywhere, every operator the identity."""
    one = lambda: SparseMatrix.identity(1, ring)
    return CyclicModule(ring, N, [1] * (N + 1),
                        [[]] + [[one() for _ in range(n + 1)] for n in range(1, N + 1)],
                        [[one() for _ in range(n + 1)] for n in range(N)],
                        [one() for _ in range(N + 1)])


def direct_sum(M: CyclicModule, M2: CyclicModule) -> CyclicModule:
    if M.ring != M2.ring or M.N != M2.N:
        raise ValueError("direct sum needs equal rings and truncations")
    ds = lambda a, b: SparseMatrix.direct_sum([a, b], M.ring)
    N = M.N
    return CyclicModule(
        M.ring, N, [a + b for a, b in zip(M.ranks, M2.ranks)],
        [[]] + [[ds(a, b) for a, b in zip(M.faces[n], M2.faces[n])] for n in range(1, N + 1)],
        [[ds(a, b) for a, b in zip(M.degens[n], M2.degens[n])] for n in range(N)],
        [ds(a, b) for a, b in zip(M.cyc, M2.cyc)])


# ---------------------------------------------------------------------------
# derived operators


@dataclass(frozen=True)
class OperatorBundle:
    """The operators ``b, b', t, N, s_{-1}, B`` at one level ``n``.

    ``s_minus`` and ``B`` go up a level and are ``None`` at the truncation.
    """

    n: int
    b: SparseMatrix
    bprime: SparseMatrix
    t: SparseMatrix
    norm: SparseMatrix
    s_minus: SparseMatrix | None
    B: SparseMatrix | None


def _alt_sum(mats, ring, shape):
    out = SparseMatrix.zero(*shape, ring)
    for i, m in enumerate(mats):
        out = out + (m if i % 2 == 0 else -m)
    return out


def derived_operators(M: CyclicModule, n: int) -> OperatorBundle:
    if not 0 <= n <= M.N:
        raise TruncationError(f"level {n} is outside 0..{M.N}")
    key = ("ops", n)
    if key in M._cache:
        return M._cache[key]
    ring = M.ring
    r = M.ranks
    shape_down = (M.rank(n - 1), r[n])
    if n >= 1:
        b = _alt_sum(M.faces[n], ring, shape_down)
        bprime = _alt_sum(M.faces[n][:n], ring, shape_down)
    else:
        b = bprime = SparseMatrix.zero(0, r[0], ring)
    t = M.c(n) if n % 2 == 0 else -M.c(n)
    norm = SparseMatrix.identity(r[n], ring)
    tp = norm
    for _ in range(n):
        tp = t @ tp
        norm = norm + tp
    if n < M.N:
        s_minus = M.c(n + 1) @ M.degen(n, n)
        t_up = M.c(n + 1) if (n + 1) % 2 == 0 else -M.c(n + 1)
        B = (SparseMatrix.identity(r[n + 1], ring) - t_up) @ s_minus @ norm
    else:
        s_minus = B = None
    ops = OperatorBundle(n, b, bprime, t, norm, s_minus, B)
    M._cache[key] = ops
    return ops


def check_identities(M: CyclicModule, top: int | None = None) -> list:
    """Violations of the operator identities on levels whose modules all lie in ``0..top``.

    Checked: ``b^2 = 0``, ``B^2 = 0``, ``bB + Bb = 0``, ``s_{-1} b' + b' s_{-1} = id``,
    ``c^{n+1} = id`` and ``t^{n+1} = (-1)^{n(n+1)} id``.
    """
    top = M.N if top is None else min(top, M.N)
    bad = []
    ring = M.ring
    ops = [derived_operators(M, n) for n in range(top + 1)]
    for n in range(top + 1):
        I = SparseMatrix.identity(M.ranks[n], ring)
        if n >= 2 and not (ops[n - 1].b @ ops[n].b).is_zero():
            bad.append(("b^2", n))
        if M.c_power(n, 0) != I or (M.c(n) ** (n + 1)) != I:
            bad.append(("c^(n+1)", n))
        if (ops[n].t ** (n + 1)) != (I if (n * (n + 1)) % 2 == 0 else -I):
            bad.append(("t^(n+1)", n))
        if n + 2 <= top and not (ops[n + 1].B @ ops[n].B).is_zero():
            bad.append(("B^2", n))
        if n + 1 <= top:
            bB = ops[n + 1].b @ ops[n].B
            Bb = ops[n - 1].B @ ops[n].b if n >= 1 else SparseMatrix.zero(M.ranks[n], M.ranks[n], ring)
            if not (bB + Bb).is_zero():
                bad.append(("bB+Bb", n))
            # s_{-1} b' + b' s_{-1} = id on M_n
            lhs = ops[n + 1].bprime @ ops[n].s_minus
            if n >= 1:
                lhs = lhs + ops[n - 1].s_minus @ ops[n].bprime
            if lhs != I:
                bad.append(("s b' + b' s = id", n))
    return bad


def check_functoriality(M: CyclicModule, top: int | None = None) -> list:
    """Pairs of composable generators ``(f, g)`` with ``M(g.f) != M(f) M(g)``.

    Generators are cofaces, codegeneracies and the rotation powers; the left
    side is evaluated through the canonical word of ``g . f``.  Together with
    the rotation-power pairs this covers the cyclic relation ``c^{n+1} = 1``.
    """
    top = M.N if top is None else min(top, M.N)
    gens = []
    for n in range(top + 1):
        if n >= 1:
            gens.extend(lc.coface(n, i) for i in range(n + 1))
        if n + 1 <= top:
            gens.extend(lc.codegeneracy(n, i) for i in range(n + 1))
        gens.extend(lc.LambdaMorphism(n, n, r, tuple(range(n + 1))) for r in range(1, n + 1))
    by_source: dict = {}
    for g in gens:
        by_source.setdefault(g.source, []).append(g)
    bad = []
    for f in gens:
        Mf = M.generator_matrix(f)
        for g in by_source.get(f.target, ()):
            lhs = M.operator(lc.compose(g, f))
            rhs = Mf @ M.generator_matrix(g)
            if lhs != rhs:
                bad.append((f, g))
    return bad


# ---------------------------------------------------------------------------
# Hochschild complexes


def hochschild_chain_complex(M: CyclicModule, normalized: bool = False) -> ChainComplex:
    """``(M_*, b)`` in degrees ``0..N``, optionally divided by degeneracies."""
    ranks = {n: M.ranks[n] for n in range(M.N + 1)}
    diffs = {n: derived_operators(M, n).b for n in range(1, M.N + 1)}
    C = ChainComplex(M.ring, ranks, diffs)
    if not normalized:
        return C
    return _normalize(M, C)


def degenerate_image(M: CyclicModule, n: int) -> SparseMatrix:
    """Columns spanning ``D_n``, the sum of the images of ``s_0..s_{n-1}`` from level ``n-1``."""
    if n == 0:
        return SparseMatrix.zero(M.ranks[0], 0, M.ring)
    return SparseMatrix.hstack(M.degens[n - 1], M.ring, nrows=M.ranks[n])


class _Quotient:
    """Projection onto ``R^r / D`` and a section of it, for a saturated ``D``."""

    def __init__(self, D: SparseMatrix):
        ring = D.ring
        self.dim = D.nrows
        e = self._unit_echelon(D)
        if e is not None:
            self.echelon = e
            self.keep = [i for i in range(D.nrows) if i not in e.basis]
            self.pos = {i: k for k, i in enumerate(self.keep)}
            self.lift = SparseMatrix.permutation(self.keep, ring, nrows=D.nrows)
        else:
            U, Uinv, Dg, V, Vinv, r = smith_form_full(D)
            if any(Dg[i, i] != 1 for i in range(r)):
                raise ValueError("degenerate submodule is not a direct summand")
            self.echelon = None
            self.proj = U.select(rows=range(r, D.nrows))
            self.lift = Uinv.select(cols=range(r, D.nrows))
        self.rank = self.lift.ncols

    @staticmethod
    def _unit_echelon(D):
        # over Z try elimination with unit pivots first; it succeeds for the
        # usual nerves and avoids a dense Smith form of a large matrix
        e = Echelon(D.ring, unit_pivots=not D.ring.is_field)
        try:
            for col in D.columns():
                if col:
                    e.add(col)
        except NoUnitPivot:
            return None
        return e

    def project(self, A: SparseMatrix) -> SparseMatrix:
        if self.echelon is None:
            return self.proj @ A
        cols = []
        for col in A.columns():
            w = self.echelon.reduce(col)
            cols.append({self.pos[i]: v for i, v in w.items()})
        return SparseMatrix.from_columns(self.rank, cols, A.ring, check=False)


def _normalize(M: CyclicModule, C: ChainComplex) -> ChainComplex:
    quots = {n: _Quotient(degenerate_image(M, n)) for n in range(M.N + 1)}
    ranks = {n: q.rank for n, q in quots.items()}
    diffs = {}
    for n in range(1, M.N + 1):
        diffs[n] = quots[n - 1].project(C.d(n) @ quots[n].lift)
    return ChainComplex(M.ring, ranks, diffs)


def moore_complex(M: CyclicModule) -> ChainComplex:
    """``N_n = ker d_1 cap ... cap ker d_n`` with differential ``d_0`` (small inputs only)."""
    from .linalg import SpanSolver, rank_kernel_image

    ring = M.ring
    kers = {}
    for n in range(M.N + 1):
        if n == 0:
            kers[0] = SparseMatrix.identity(M.ranks[0], ring)
        else:
            stacked = SparseMatrix.vstack(M.faces[n][1:], ring, ncols=M.ranks[n])
            kers[n] = rank_kernel_image(stacked)[1]
    ranks = {n: k.ncols for n, k in kers.items()}
    diffs = {}
    for n in range(1, M.N + 1):
        solver = SpanSolver(kers[n - 1])
        img = M.faces[n][0] @ kers[n]
        cols = []
        for col in img.columns():
            x = solver.solve(col)
            if x is None:
                raise AssertionError("d_0 does not preserve the Moore complex")
            cols.append(x)
        diffs[n] = SparseMatrix.from_columns(ranks[n - 1], cols, ring, check=False)
    return ChainComplex(ring, ranks, diffs)
