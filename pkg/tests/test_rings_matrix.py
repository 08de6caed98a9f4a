from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cychom.matrix import SparseMatrix
from cychom.rings import GF, QQ, ZZ, RingSpec

from oracles import matmul


def test_parse_rings():
    assert RingSpec.parse("Z") == ZZ
    assert RingSpec.parse("Q") == QQ
    for text in ("F5", "F_5", "GF(5)"):
        assert RingSpec.parse(text) == GF(5)
    with pytest.raises(ValueError):
        RingSpec.parse("F4")
    with pytest.raises(ValueError):
        RingSpec.parse("R")


def test_coercion():
    assert GF(5)(Fraction(1, 2)) == 3
    assert GF(5)(-1) == 4
    assert ZZ(Fraction(4, 1)) == 4
    with pytest.raises(ValueError):
        ZZ(Fraction(1, 2))
    with pytest.raises(ValueError):
        GF(3)(Fraction(1, 3))
    assert GF(7).inv(3) * 3 % 7 == 1
    assert QQ.inv(4) == Fraction(1, 4)


small = st.integers(-3, 3)


def dense(m, n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_matmul_matches_dense(m, k, n, data):
    A = data.draw(dense(m, k))
    B = data.draw(dense(k, n))
    P = SparseMatrix.from_dense(A, ZZ) @ SparseMatrix.from_dense(B, ZZ)
    assert P.to_dense() == matmul(A, B)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_mod_p_arithmetic(m, n, data):
    A = data.draw(dense(m, n))
    B = data.draw(dense(m, n))
    F = GF(3)
    S = SparseMatrix.from_dense(A, F) + SparseMatrix.from_dense(B, F)
    assert S.to_dense() == [[(a + b) % 3 for a, b in zip(r, s)] for r, s in zip(A, B)]
    assert (SparseMatrix.from_dense(A, F) - SparseMatrix.from_dense(A, F)).is_zero()


def test_blocks_and_transpose():
    A = SparseMatrix.from_dense([[1, 2], [3, 4]], ZZ)
    I = SparseMatrix.identity(1, ZZ)
    D = SparseMatrix.direct_sum([A, I])
    assert D.to_dense() == [[1, 2, 0], [3, 4, 0], [0, 0, 1]]
    assert A.T.to_dense() == [[1, 3], [2, 4]]
    H = SparseMatrix.hstack([A, A])
    assert H.shape == (2, 4)
    assert H.select(rows=[1], cols=[2, 3]).to_dense() == [[3, 4]]
    P = SparseMatrix.permutation([2, 0, 1], ZZ)
    assert (P ** 3) == SparseMatrix.identity(3, ZZ)


def test_triples_roundtrip():
    A = SparseMatrix.from_dense([[0, 2], [-1, 0]], ZZ)
    assert SparseMatrix.from_triples(2, 2, ZZ, A.to_triples()) == A
    Q = SparseMatrix.from_dense([[Fraction(1, 2)]], QQ)
    assert SparseMatrix.from_triples(1, 1, QQ, Q.to_triples()) == Q


def test_shape_errors():
    A = SparseMatrix.identity(2, ZZ)
    with pytest.raises(ValueError):
        A @ SparseMatrix.identity(3, ZZ)
    with pytest.raises(ValueError):
        A + SparseMatrix.identity(2, GF(2))
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, ZZ, {5: {0: 1}})
