import pytest
from hypothesis import given, strategies as st

from cychom.linalg import (Echelon, HomologyGroup, RingMismatch, SpanSolver, determinant,
                           homology_group, invariant_factors, quotient_group, rank,
                           rank_kernel_image, same_span, smith_form_full, smith_normal_form)
from cychom.matrix import SparseMatrix
from cychom.rings import GF, QQ, ZZ

from oracles import det, invariant_factors_by_minors, rank_mod_p, rank_over_q

entries = st.integers(-4, 4)


def matrices(max_m=4, max_n=4):
    return st.integers(1, max_m).flatmap(
        lambda m: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_snf_small_example():
    # [DERIVED] diag(2, 3) has invariant factors 1, 6
    U, D, V = smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]], ZZ))
    assert D.to_dense() == [[1, 0], [0, 6]]


@given(matrices())
def test_snf_matches_determinantal_divisors(rows):
    # [DERIVED] oracle: gcd of k x k minors
    A = SparseMatrix.from_dense(rows, ZZ)
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i, i] for i in range(min(D.shape)) if D[i, i]]
    assert diag == invariant_factors_by_minors(rows)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert invariant_factors(A) == diag


@given(matrices(5, 5))
def test_rank_against_gaussian_oracle(rows):
    A = SparseMatrix.from_dense(rows, ZZ)
    assert rank(A) == rank_over_q(rows)
    for p in (2, 3):
        assert rank(A.change_ring(GF(p))) == rank_mod_p(rows, p)


@given(matrices(4, 5))
def test_kernel_and_image(rows):
    for ring in (ZZ, GF(2), GF(5), QQ):
        A = SparseMatrix.from_dense(rows, ring)
        r, ker, img = rank_kernel_image(A)
        assert (A @ ker).is_zero()
        assert ker.ncols == A.ncols - r
        assert rank(ker) == ker.ncols
        assert same_span(img, A)


@given(matrices(4, 4))
def test_full_form_inverses(rows):
    for ring in (ZZ, GF(3)):
        A = SparseMatrix.from_dense(rows, ring)
        U, Uinv, D, V, Vinv, r = smith_form_full(A)
        assert U @ Uinv == SparseMatrix.identity(A.nrows, ring)
        assert V @ Vinv == SparseMatrix.identity(A.ncols, ring)
        assert U @ A @ V == D


@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant(rows):
    assert determinant(SparseMatrix.from_dense(rows, ZZ)) == det(rows)
    assert determinant(SparseMatrix.from_dense(rows, GF(5))) == det(rows) % 5


def test_quotient_and_homology_groups():
    # [TRIVIAL] Z^2 / <(1,1), (1,-1)> = Z/2
    G = quotient_group(SparseMatrix.from_dense([[1, 1], [1, -1]], ZZ), 2)
    assert G == HomologyGroup(ZZ, 0, (2,))
    assert str(G) == "Z/2"
    H = homology_group(ZZ, 3, None, SparseMatrix.from_dense([[2], [0], [0]], ZZ))
    assert (H.rank, H.torsion) == (2, (2,))
    with pytest.raises(ValueError):
        HomologyGroup(GF(2), 1, (2,))
    with pytest.raises(RingMismatch):
        smith_normal_form(SparseMatrix.identity(2, GF(2)))


@given(matrices(4, 3), st.lists(entries, min_size=3, max_size=3))
def test_span_solver(rows, x):
    G = SparseMatrix.from_dense(rows, ZZ)
    v = G.apply({i: c for i, c in enumerate(x) if c})
    s = SpanSolver(G)
    y = s.solve(v)
    assert y is not None and G.apply(y) == v


def test_span_solver_rejects():
    s = SpanSolver(SparseMatrix.from_dense([[2], [0]], ZZ))
    assert s.solve({0: 1}) is None
    assert s.solve({0: 4}) == {0: 2}
    assert not s.contains({1: 1})


def test_echelon():
    e = Echelon(GF(3))
    assert e.add({0: 1, 1: 1})
    assert e.add({1: 2, 2: 1})
    # (1,1,0) + (0,2,1) = (1,0,1) mod 3
    assert e.contains({0: 1, 2: 1})
    assert not e.add({0: 2, 2: 2})
    assert not e.contains({0: 1, 2: 2})
    assert len(e) == 2
    with pytest.raises(RingMismatch):
        Echelon(ZZ)
