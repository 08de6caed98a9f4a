"""Finite free algebras given by structure constants, and their cyclic nerves."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .cyclic_module import CyclicModule
from .matrix import SparseMatrix
from .rings import RingSpec

DEFAULT_SIZE_CAP = 20000


class AlgebraError(ValueError):
    pass


@dataclass
class AlgebraPresentation:
    """Unital algebra free of rank ``dim`` with basis ``e_0..e_{dim-1}``.

    ``mul[i][j]`` is a dict ``k -> coefficient`` giving ``e_i e_j``; ``unit``
    is the coordinate vector of the identity.
    """

    ring: RingSpec
    dim: int
    labels: list
    unit: list
    mul: list
    name: str = ""
    _prod: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("algebra must have dimension at least 1")
        if len(self.labels) != self.dim or len(set(self.labels)) != self.dim:
            raise AlgebraError("need one distinct label per basis element")
        if len(self.unit) != self.dim:
            raise AlgebraError("unit vector has the wrong length")
        norm = self.ring
        self.unit = [norm(u) for u in self.unit]
        if len(self.mul) != self.dim or any(len(row) != self.dim for row in self.mul):
            raise AlgebraError("structure constants must form a dim x dim table")
        self.mul = [[{k: c for k, c in ((k, norm(c)) for k, c in prod.items()) if c}
                     for prod in row] for row in self.mul]
        for row in self.mul:
            for prod in row:
                if any(not 0 <= k < self.dim for k in prod):
                    raise AlgebraError("structure constant index out of range")

    def multiply(self, x: dict, y: dict) -> dict:
        """Product of two elements given as sparse coordinate dicts."""
        norm = self.ring.norm
        acc: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mul[i][j].items():
                    acc[k] = acc.get(k, 0) + a * b * c
        return {k: w for k, v in acc.items() if (w := norm(v))}

    def unit_dict(self):
        return {i: u for i, u in enumerate(self.unit) if u}

    def change_ring(self, ring: RingSpec):
        return AlgebraPresentation(ring, self.dim, list(self.labels), list(self.unit),
                                   [[dict(p) for p in row] for row in self.mul], self.name)

    def to_json(self):
        r = self.ring.to_json
        return {
            "ring": self.ring.name,
            "dim": self.dim,
            "basis": list(self.labels),
            "unit": [r(u) for u in self.unit],
            "mul": [[i, j, {str(k): r(c) for k, c in sorted(self.mul[i][j].items())}]
                    for i in range(self.dim) for j in range(self.dim) if self.mul[i][j]],
        }


def validate_algebra(A: AlgebraPresentation) -> list:
    """Violations as tuples ``("assoc", i, j, k)``, ``("left_unit", i)``, ``("right_unit", i)``."""
    bad = []
    e = lambda i: {i: 1}
    one = A.unit_dict()
    for i in range(A.dim):
        if A.multiply(one, e(i)) != e(i):
            bad.append(("left_unit", i))
        if A.multiply(e(i), one) != e(i):
            bad.append(("right_unit", i))
    for i, j, k in itertools.product(range(A.dim), repeat=3):
        left = A.multiply(A.mul[i][j], e(k))
        right = A.multiply(e(i), A.mul[j][k])
        if left != right:
            bad.append(("assoc", i, j, k))
    return bad


def is_commutative(A: AlgebraPresentation) -> bool:
    return all(A.mul[i][j] == A.mul[j][i] for i in range(A.dim) for j in range(i))


# ---------------------------------------------------------------------------
# examples


def ground_algebra(ring: RingSpec) -> AlgebraPresentation:
    return AlgebraPresentation(ring, 1, ["1"], [1], [[{0: 1}]], "ground")


def truncated_polynomial(ring: RingSpec, n: int = 2) -> AlgebraPresentation:
    """``k[x]/(x^n)`` with basis ``1, x, ..., x^{n-1}``."""
    labels = ["1", "x"] + [f"x{i}" for i in range(2, n)]
    mul = [[({i + j: 1} if i + j < n else {}) for j in range(n)] for i in range(n)]
    return AlgebraPresentation(ring, n, labels[:n], [1] + [0] * (n - 1), mul,
                               "dual_numbers" if n == 2 else f"truncated_poly{n}")


def dual_numbers(ring: RingSpec) -> AlgebraPresentation:
    return truncated_polynomial(ring, 2)


def group_algebra_cyclic(ring: RingSpec, m: int) -> AlgebraPresentation:
    """``k[C_m]`` with basis ``g^0..g^{m-1}``."""
    labels = [f"g{i}" for i in range(m)]
    mul = [[{(i + j) % m: 1} for j in range(m)] for i in range(m)]
    return AlgebraPresentation(ring, m, labels, [1] + [0] * (m - 1), mul, f"group_c{m}")


def matrix_algebra(ring: RingSpec, n: int = 2) -> AlgebraPresentation:
    """``M_n(k)`` with matrix units ``E_ij`` ordered row-major."""
    idx = [(i, j) for i in range(n) for j in range(n)]
    pos = {ij: k for k, ij in enumerate(idx)}
    mul = [[({pos[(a, d)]: 1} if b == c else {}) for (c, d) in idx] for (a, b) in idx]
    unit = [1 if i == j else 0 for i, j in idx]
    return AlgebraPresentation(ring, n * n, [f"E{i}{j}" for i, j in idx], unit, mul, f"matrix{n}")


def upper_triangular(ring: RingSpec) -> AlgebraPresentation:
    """Upper triangular 2x2 matrices, basis ``E11, E12, E22``."""
    idx = [(0, 0), (0, 1), (1, 1)]
    pos = {ij: k for k, ij in enumerate(idx)}
    mul = [[({pos[(a, d)]: 1} if b == c else {}) for (c, d) in idx] for (a, b) in idx]
    return AlgebraPresentation(ring, 3, ["E11", "E12", "E22"], [1, 0, 1], mul,
                               "upper_triangular2")


def product_algebra(A: AlgebraPresentation, B: AlgebraPresentation) -> AlgebraPresentation:
    """``A x B`` with the basis of ``A`` first."""
    if A.ring != B.ring:
        raise AlgebraError("product of algebras over different rings")
    d = A.dim
    mul = [[{} for _ in range(d + B.dim)] for _ in range(d + B.dim)]
    for i in range(d):
        for j in range(d):
            mul[i][j] = dict(A.mul[i][j])
    for i in range(B.dim):
        for j in range(B.dim):
            mul[d + i][d + j] = {d + k: c for k, c in B.mul[i][j].items()}
    labels = [f"a.{x}" for x in A.labels] + [f"b.{x}" for x in B.labels]
    return AlgebraPresentation(A.ring, d + B.dim, labels, list(A.unit) + list(B.unit), mul,
                               f"{A.name}x{B.name}")


def change_basis(A: AlgebraPresentation, P) -> AlgebraPresentation:
    """Re-express ``A`` in the basis ``f_j = sum_i P[i][j] e_i``; ``P`` must be invertible over the ring."""
    from .linalg import SpanSolver

    ring = A.ring
    Pm = SparseMatrix.from_dense(P, ring)
    solver = SpanSolver(Pm)
    d = A.dim

    def coords(vec):
        x = solver.solve(vec)
        if x is None:
            raise AlgebraError("basis change is not invertible over the ring")
        return x

    cols = Pm.columns()
    for i in range(d):
        coords({i: 1})
    mul = [[coords(A.multiply(cols[i], cols[j])) for j in range(d)] for i in range(d)]
    u = coords(A.unit_dict())
    return AlgebraPresentation(ring, d, [f"f{i}" for i in range(d)],
                               [u.get(i, 0) for i in range(d)], mul, A.name + "'")


def random_unimodular(d: int, rng: random.Random, steps: int = 6):
    """Product of random elementary integer matrices."""
    M = [[int(i == j) for j in range(d)] for i in range(d)]
    if d < 2:
        return M
    for _ in range(steps):
        i, j = rng.sample(range(d), 2)
        c = rng.choice([-1, 1])
        for r in range(d):
            M[r][j] += c * M[r][i]
    return M


def random_associative_algebra(ring: RingSpec, dim: int, rng: random.Random,
                               max_tries: int = 2000) -> AlgebraPresentation:
    """A random unital associative algebra of rank ``dim``.

    Constants in ``{-1, 0, 1}`` with ``e_0`` the unit are sampled until the
    table is associative; the result is then disguised by a random unimodular
    base change so the unit is not a basis vector.
    """
    for _ in range(max_tries):
        mul = [[{} for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            mul[0][i] = {i: 1}
            mul[i][0] = {i: 1}
        for i in range(1, dim):
            for j in range(1, dim):
                mul[i][j] = {k: c for k in range(dim) if (c := rng.choice((-1, 0, 0, 1)))}
        A = AlgebraPresentation(ring, dim, [f"e{i}" for i in range(dim)],
                                [1] + [0] * (dim - 1), mul, "random")
        if not validate_algebra(A):
            return change_basis(A, random_unimodular(dim, rng))
    raise AlgebraError(f"no associative sample of dimension {dim} in {max_tries} tries")


# ---------------------------------------------------------------------------
# the cyclic nerve


def _index(word, d):
    x = 0
    for a in word:
        x = x * d + a
    return x


def cyclic_nerve(A: AlgebraPresentation, N: int, size_cap: int = DEFAULT_SIZE_CAP,
                 check: bool = True) -> CyclicModule:
    """The cyclic module ``n -> A^{(n+1)}`` truncated at level ``N``.

    Basis words ``(a_0, ..., a_n)`` are ordered lexicographically.  Faces
    multiply neighbours (``d_n`` puts ``a_n a_0`` in front), ``s_i`` puts the
    unit after slot ``i`` and ``c(a_0..a_n) = (a_n, a_0, ..., a_{n-1})``.
    """
    if check:
        bad = validate_algebra(A)
        if bad:
            raise AlgebraError(f"not a unital associative algebra: {bad[0]}")
    d = A.dim
    if d ** (N + 1) > size_cap:
        raise AlgebraError(f"level {N} has rank {d ** (N + 1)} > size cap {size_cap}")
    ring = A.ring
    ranks = [d ** (n + 1) for n in range(N + 1)]
    unit = A.unit_dict()
    words = [list(itertools.product(range(d), repeat=n + 1)) for n in range(N + 1)]

    def face(n, i):
        cols = []
        for w in words[n]:
            if i < n:
                prod = A.mul[w[i]][w[i + 1]]
                pre, post = w[:i], w[i + 2:]
            else:
                prod = A.mul[w[n]][w[0]]
                pre, post = (), w[1:n]
            cols.append({_index(pre + (k,) + post, d): c for k, c in prod.items()})
        return SparseMatrix.from_columns(ranks[n - 1], cols, ring, check=False)

    def degen(n, i):
        cols = []
        for w in words[n]:
            cols.append({_index(w[:i + 1] + (k,) + w[i + 1:], d): c for k, c in unit.items()})
        return SparseMatrix.from_columns(ranks[n + 1], cols, ring, check=False)

    def cyc(n):
        return SparseMatrix.permutation([_index((w[-1],) + w[:-1], d) for w in words[n]], ring)

    faces = [[]] + [[face(n, i) for i in range(n + 1)] for n in range(1, N + 1)]
    degens = [[degen(n, i) for i in range(n + 1)] for n in range(N)]
    return CyclicModule(ring, N, ranks, faces, degens, [cyc(n) for n in range(N + 1)])


def bundled_algebras(ring: RingSpec) -> list:
    """The example algebras shipped with the package, over ``ring``."""
    return [ground_algebra(ring), dual_numbers(ring), group_algebra_cyclic(ring, 2),
            group_algebra_cyclic(ring, 3), matrix_algebra(ring, 2), upper_triangular(ring)]
