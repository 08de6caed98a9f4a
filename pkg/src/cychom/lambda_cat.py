"""Connes' cyclic category as cyclic graphs.

The object ``[n]`` is the oriented cycle with vertices ``0..n`` and edges
``e_i: i -> i+1 (mod n+1)``.  A morphism ``[n] -> [m]`` sends every edge to a
path in the free category on ``[m]`` so that each edge of ``[m]`` is traversed
exactly once.  Such a morphism is a single walk once around ``[m]``, recorded
compactly as a start vertex and the path length assigned to each source edge.

Normal form: every morphism is uniquely ``phi . rho^r`` with ``phi`` weakly
monotone and ``rho`` the rotation of ``[n]`` sending vertex ``i`` to
``i - 1``.  ``rho`` is the morphism whose induced operator is the cyclic
operator ``c`` of a cyclic module; faces and degeneracies are the usual
cofaces and codegeneracies of the simplex category.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb

from .rings import RingSpec

GPH_ENUMERATION_BOUND = 4


@dataclass(frozen=True, order=True)
class LambdaMorphism:
    """The morphism ``monotone . rho^rotation: [source] -> [target]``."""

    source: int
    target: int
    rotation: int
    monotone: tuple

    def __post_init__(self):
        n, m = self.source, self.target
        if n < 0 or m < 0:
            raise ValueError("objects of the cyclic category are [n] with n >= 0")
        mono = tuple(self.monotone)
        if len(mono) != n + 1:
            raise ValueError(f"monotone part needs {n + 1} values, got {len(mono)}")
        if any(not 0 <= x <= m for x in mono) or any(a > b for a, b in zip(mono, mono[1:])):
            raise ValueError(f"{mono} is not a weakly increasing map [{n}] -> [{m}]")
        object.__setattr__(self, "monotone", mono)
        object.__setattr__(self, "rotation", self.rotation % (n + 1))

    def __matmul__(self, other: "LambdaMorphism") -> "LambdaMorphism":
        return compose(self, other)

    def is_identity(self):
        return (self.source == self.target and self.rotation == 0
                and self.monotone == tuple(range(self.source + 1)))

    def walk(self):
        return to_walk(self)

    def to_json(self):
        return {"source": self.source, "target": self.target,
                "rotation": self.rotation, "monotone": list(self.monotone)}


def identity(n: int) -> LambdaMorphism:
    return LambdaMorphism(n, n, 0, tuple(range(n + 1)))


def cyclic_rotation(n: int) -> LambdaMorphism:
    """The automorphism of ``[n]`` inducing the cyclic operator ``c``; order n+1."""
    return LambdaMorphism(n, n, 1, tuple(range(n + 1)))


def coface(n: int, i: int) -> LambdaMorphism:
    """``delta_i: [n-1] -> [n]``, the monotone injection missing ``i``."""
    if not 0 <= i <= n or n < 1:
        raise ValueError(f"no coface delta_{i} into [{n}]")
    return LambdaMorphism(n - 1, n, 0, tuple(j if j < i else j + 1 for j in range(n)))


def codegeneracy(n: int, i: int) -> LambdaMorphism:
    """``sigma_i: [n+1] -> [n]``, the monotone surjection hitting ``i`` twice."""
    if not 0 <= i <= n:
        raise ValueError(f"no codegeneracy sigma_{i} onto [{n}]")
    return LambdaMorphism(n + 1, n, 0, tuple(j if j <= i else j - 1 for j in range(n + 2)))


def generators(n: int):
    """Faces into ``[n]``, degeneracies onto ``[n]`` and the rotation of ``[n]``."""
    faces = [coface(n, i) for i in range(n + 1)] if n >= 1 else []
    degens = [codegeneracy(n, i) for i in range(n + 1)]
    return {"faces": faces, "degeneracies": degens, "rotation": cyclic_rotation(n)}


# ---------------------------------------------------------------------------
# walks: (start vertex, path length of each source edge)


def _prefix(lengths):
    out = [0]
    for L in lengths:
        out.append(out[-1] + L)
    return out


def to_walk(f: LambdaMorphism):
    n, m = f.source, f.target
    phi = f.monotone
    lam = [phi[i + 1] - phi[i] for i in range(n)] + [m + 1 - phi[n] + phi[0]]
    r = f.rotation
    start = phi[(-r) % (n + 1)]
    return start, tuple(lam[(i - r) % (n + 1)] for i in range(n + 1))


def from_walk(n: int, m: int, start: int, lengths) -> LambdaMorphism:
    """Normal form of the walk ``(start, lengths)`` from ``[n]`` to ``[m]``."""
    lengths = tuple(lengths)
    if len(lengths) != n + 1 or sum(lengths) != m + 1 or min(lengths) < 0:
        raise ValueError(f"lengths {lengths} do not describe a walk once around [{m}]")
    if not 0 <= start <= m:
        raise ValueError(f"start vertex {start} not in [{m}]")
    pos = _prefix(lengths)
    t_last = (m - start) % (m + 1)
    j = next(i for i in range(n + 1) if pos[i] <= t_last < pos[i + 1])
    r = (j + 1) % (n + 1)
    lam = [lengths[(k + r) % (n + 1)] for k in range(n + 1)]
    phi0 = (start + pos[r]) % (m + 1)
    phi = [phi0]
    for k in range(n):
        phi.append(phi[-1] + lam[k])
    if phi[-1] > m:
        raise AssertionError("normal form left the target; walk bookkeeping is broken")
    return LambdaMorphism(n, m, r, tuple(phi))


def compose(g: LambdaMorphism, f: LambdaMorphism) -> LambdaMorphism:
    """``g . f`` for ``f: [n] -> [m]`` and ``g: [m] -> [l]``, via path substitution."""
    if f.target != g.source:
        raise ValueError(f"cannot compose [{g.source}]->[{g.target}] after [{f.source}]->[{f.target}]")
    n, m, l = f.source, f.target, g.target
    s, L = to_walk(f)
    s2, L2 = to_walk(g)
    pos2 = _prefix(L2)
    start = (s2 + pos2[s]) % (l + 1)
    out = []
    t = 0
    for Li in L:
        out.append(sum(L2[(s + t + u) % (m + 1)] for u in range(Li)))
        t += Li
    return from_walk(n, l, start, out)


def hom_set(n: int, m: int) -> list:
    """All morphisms ``[n] -> [m]``, ordered by (rotation, monotone part)."""
    if n < 0 or m < 0:
        raise ValueError("negative object")
    monos = list(combinations_with_replacement(range(m + 1), n + 1))
    return [LambdaMorphism(n, m, r, phi) for r in range(n + 1) for phi in monos]


def hom_count(n: int, m: int) -> int:
    return (n + 1) * comb(n + m + 1, n + 1)


def factor(f: LambdaMorphism):
    """Split ``f`` as ``(monotone part, rotation part)`` with ``f = mono . rot``."""
    n = f.source
    mono = LambdaMorphism(n, f.target, 0, f.monotone)
    rot = LambdaMorphism(n, n, f.rotation, tuple(range(n + 1)))
    return mono, rot


def canonical_word(f: LambdaMorphism) -> list:
    """Generators ``[g_1, ..., g_k]`` with ``f = g_k . ... . g_1``.

    ``g_1`` is a rotation power (omitted when trivial), followed by
    codegeneracies and then cofaces, i.e. the epi-mono factorization of the
    monotone part.
    """
    n, m = f.source, f.target
    word = []
    if f.rotation:
        word.append(LambdaMorphism(n, n, f.rotation, tuple(range(n + 1))))
    phi = f.monotone
    repeats = [j for j in range(n) if phi[j] == phi[j + 1]]
    k = n
    for j in reversed(repeats):
        word.append(codegeneracy(k - 1, j))
        k -= 1
    image = sorted(set(phi))
    missing = [c for c in range(m + 1) if c not in image]
    for c in missing:
        word.append(coface(k + 1, c))
        k += 1
    return word


# ---------------------------------------------------------------------------
# explicit cyclic-graph morphisms (the enumeration oracle)


@dataclass(frozen=True, order=True)
class CyclicGraphMorphism:
    """Vertex map plus, for each source edge, the list of target edges it traverses."""

    source: int
    target: int
    vertex_map: tuple
    edge_paths: tuple

    def __post_init__(self):
        n, m = self.source, self.target
        if len(self.vertex_map) != n + 1 or len(self.edge_paths) != n + 1:
            raise ValueError("cyclic graph morphism has the wrong number of vertices/edges")
        used = []
        for i, path in enumerate(self.edge_paths):
            a = self.vertex_map[i]
            for e in path:
                if e != a:
                    raise ValueError(f"path of edge {i} is not a path starting at {self.vertex_map[i]}")
                a = (a + 1) % (m + 1)
            if a != self.vertex_map[(i + 1) % (n + 1)]:
                raise ValueError(f"path of edge {i} ends at the wrong vertex")
            used.extend(path)
        if sorted(used) != list(range(m + 1)):
            raise ValueError("every target edge must be traversed exactly once")


def gph_compose(g: CyclicGraphMorphism, f: CyclicGraphMorphism) -> CyclicGraphMorphism:
    if f.target != g.source:
        raise ValueError("non-composable cyclic graph morphisms")
    vmap = tuple(g.vertex_map[v] for v in f.vertex_map)
    paths = tuple(tuple(e2 for e in path for e2 in g.edge_paths[e]) for path in f.edge_paths)
    return CyclicGraphMorphism(f.source, g.target, vmap, paths)


def gph_enumerate(n: int, m: int, bound: int = GPH_ENUMERATION_BOUND) -> list:
    """Every cyclic graph morphism ``[n] -> [m]``, found by exhaustive search."""
    if max(n, m) > bound:
        raise ValueError(f"exhaustive enumeration is limited to n, m <= {bound}")
    size = m + 1
    # a path in the free category on the cycle is determined by its start and
    # its length; longer than m+1 would repeat an edge
    out = []
    for vmap in product(range(size), repeat=n + 1):
        choices = []
        for i in range(n + 1):
            a, b = vmap[i], vmap[(i + 1) % (n + 1)]
            choices.append([L for L in range(size + 1) if (a + L) % size == b])
        for lengths in product(*choices):
            paths = tuple(tuple((vmap[i] + t) % size for t in range(L))
                          for i, L in enumerate(lengths))
            used = sorted(e for p in paths for e in p)
            if used == list(range(size)):
                out.append(CyclicGraphMorphism(n, m, vmap, paths))
    return sorted(out)


def to_graph(f: LambdaMorphism) -> CyclicGraphMorphism:
    n, m = f.source, f.target
    s, L = to_walk(f)
    pos = _prefix(L)
    vmap = tuple((s + pos[i]) % (m + 1) for i in range(n + 1))
    paths = tuple(tuple((s + pos[i] + t) % (m + 1) for t in range(L[i])) for i in range(n + 1))
    return CyclicGraphMorphism(n, m, vmap, paths)


def from_graph(G: CyclicGraphMorphism) -> LambdaMorphism:
    return from_walk(G.source, G.target, G.vertex_map[0], [len(p) for p in G.edge_paths])


# ---------------------------------------------------------------------------
# modules built from the category


def _hom_index(n, m):
    hs = hom_set(n, m)
    return hs, {f: k for k, f in enumerate(hs)}


def precompose_matrix(ring: RingSpec, f: LambdaMorphism, m: int):
    """Matrix of ``g -> g . f`` from ``k[Lambda(f.target, m)]`` to ``k[Lambda(f.source, m)]``."""
    from .matrix import SparseMatrix

    src, _ = _hom_index(f.target, m)
    _, tgt_idx = _hom_index(f.source, m)
    return SparseMatrix.permutation([tgt_idx[compose(g, f)] for g in src], ring, nrows=len(tgt_idx))


def postcompose_matrix(ring: RingSpec, u: LambdaMorphism, n: int):
    """Matrix of ``g -> u . g`` from ``k[Lambda(n, u.source)]`` to ``k[Lambda(n, u.target)]``."""
    from .matrix import SparseMatrix

    src, _ = _hom_index(n, u.source)
    _, tgt_idx = _hom_index(n, u.target)
    return SparseMatrix.permutation([tgt_idx[compose(u, g)] for g in src], ring, nrows=len(tgt_idx))


def representable_module(ring: RingSpec, m: int, N: int):
    """The cyclic module ``n -> k[Lambda(n, m)]`` truncated at level ``N``.

    Operators act by precomposition with cofaces, codegeneracies and the
    rotation.
    """
    from .cyclic_module import CyclicModule

    ranks = [hom_count(n, m) for n in range(N + 1)]
    faces = [[]] + [[precompose_matrix(ring, coface(n, i), m) for i in range(n + 1)]
                    for n in range(1, N + 1)]
    degens = [[precompose_matrix(ring, codegeneracy(n, i), m) for i in range(n + 1)]
              for n in range(N)]
    cyc = [precompose_matrix(ring, cyclic_rotation(n), m) for n in range(N + 1)]
    return CyclicModule(ring, N, ranks, faces, degens, cyc)


def circle_complex(ring: RingSpec, normalized: bool = True, N: int = 4):
    """Chains on the simplicial set underlying ``Lambda(-, 0)``.

    That simplicial set is the circle ``Delta^1 / boundary``; normalized, its
    complex has rank 1 in degrees 0 and 1 and zero differential.
    """
    from .cyclic_module import hochschild_chain_complex

    return hochschild_chain_complex(representable_module(ring, 0, N), normalized=normalized)
