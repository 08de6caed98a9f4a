import pytest
from hypothesis import given, strategies as st

from cychom.complexes import (Bicomplex, ChainComplex, TruncationWindow, check_bicomplex,
                              check_chain_map, check_complex, cohomology, homology,
                              homology_table, hom_to_ground, shift, totalize)
from cychom.matrix import SparseMatrix
from cychom.rings import GF, QQ, ZZ


def M(rows, ring=ZZ):
    return SparseMatrix.from_dense(rows, ring)


def rp2(ring=ZZ):
    # cellular chains of RP^2: Z <-0- Z <-2- Z
    return ChainComplex(ring, {0: 1, 1: 1, 2: 1}, {1: M([[0]], ring), 2: M([[2]], ring)})


def test_rp2_homology():
    # [TRIVIAL] H(RP^2; Z) = Z, Z/2, 0
    C = rp2()
    assert [str(homology(C, n)) for n in range(3)] == ["Z", "Z/2", "0"]
    # [TRIVIAL] over F2 every group is F2
    C2 = rp2(GF(2))
    assert [str(homology(C2, n)) for n in range(3)] == ["F2", "F2", "F2"]
    assert [homology(rp2(GF(3)), n).rank for n in range(3)] == [1, 0, 0]
    assert homology(rp2(QQ), 1).rank == 0


def test_cohomology_universal_coefficients():
    # [DERIVED] H^2(RP^2; Z) = Z/2 from Ext(H_1, Z)
    C = rp2()
    assert str(cohomology(C, 2)) == "Z/2"
    assert str(cohomology(C, 1)) == "0"
    D = hom_to_ground(C)
    assert check_complex(D) == []


def test_bad_complex_detected():
    C = ChainComplex(ZZ, {0: 1, 1: 1, 2: 1}, {1: M([[1]]), 2: M([[1]])})
    assert check_complex(C) == [2]


def test_shape_validation():
    with pytest.raises(ValueError):
        ChainComplex(ZZ, {0: 1, 1: 2}, {1: M([[1]])})


def test_shift_and_table():
    C = shift(rp2(), 3)
    assert str(homology(C, 4)) == "Z/2"
    assert sorted(homology_table(rp2(), range(3))) == [0, 1, 2]


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_identity_is_chain_map(xs):
    C = rp2()
    ident = {n: SparseMatrix.identity(1, ZZ) for n in range(3)}
    assert check_chain_map(C, C, ident) == []
    bad = dict(ident)
    bad[1] = M([[xs[0] + 7]])
    assert check_chain_map(C, C, bad) != []


def square(ring=ZZ):
    # 2x2 bicomplex of rank-1 entries, anticommuting
    one = M([[1]], ring)
    return Bicomplex(ring, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
                     h={(1, 0): one, (1, 1): one}, v={(0, 1): one, (1, 1): -one})


def test_bicomplex_and_totalization():
    B = square()
    assert check_bicomplex(B) == []
    T = totalize(B)
    assert check_complex(T) == []
    assert [T.rank(n) for n in range(3)] == [1, 2, 1]
    # [TRIVIAL] the square with identity edges is contractible
    assert all(homology(T, n).is_zero() for n in range(3))
    assert T.block_of(1, (1, 0)) is not None


def test_bicomplex_sign_violation():
    one = M([[1]])
    B = Bicomplex(ZZ, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
                  h={(1, 0): one, (1, 1): one}, v={(0, 1): one, (1, 1): one})
    assert ("hv", (1, 1)) in check_bicomplex(B)
    C = Bicomplex(ZZ, dict(B.ranks), dict(B.h), dict(B.v), mode="commuting")
    assert check_bicomplex(C) == []
    assert check_complex(totalize(C)) == []


def test_windows():
    B = square()
    T = totalize(B, window=TruncationWindow(1))
    assert T.hi == 1
    P = totalize(B, "product", TruncationWindow(2, 0))
    assert sorted(P.ranks) == [0, 1]
    with pytest.raises(ValueError):
        TruncationWindow(-1)
    with pytest.raises(ValueError):
        totalize(B, "weird")
