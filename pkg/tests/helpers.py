import random

from cychom.hochschild import random_associative_algebra
from cychom.matrix import SparseMatrix


def corrupt_face(M, n, i):
    """Copy of ``M`` with ``d_i`` at level ``n`` perturbed by one entry."""
    from cychom.cyclic_module import CyclicModule

    faces = [list(fs) for fs in M.faces]
    d = faces[n][i]
    bump = SparseMatrix.from_triples(d.nrows, d.ncols, M.ring, [(0, 0, 1)])
    faces[n][i] = d + bump
    return CyclicModule(M.ring, M.N, list(M.ranks), faces, M.degens, M.cyc)


def seeded_algebra(ring, dim, seed):
    return random_associative_algebra(ring, dim, random.Random(seed))
