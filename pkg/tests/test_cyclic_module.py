import pytest
from hypothesis import given, strategies as st

from cychom.complexes import check_complex, homology
from cychom.cyclic_module import (CyclicModule, TruncationError, check_functoriality,
                                  check_identities, constant_module, derived_operators,
                                  direct_sum, hochschild_chain_complex, moore_complex)
from cychom.hochschild import bundled_algebras, cyclic_nerve, dual_numbers
from cychom.lambda_cat import circle_complex, hom_set, representable_module
from cychom.rings import GF, ZZ

from helpers import corrupt_face, seeded_algebra

RINGS = [ZZ, GF(2), GF(3)]


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_representables_are_functors(ring):
    # [DERIVED] operators assembled from words agree with composition in the category
    for m in range(3):
        R = representable_module(ring, m, 4)
        assert check_functoriality(R) == []
        assert check_identities(R) == []


def test_constant_module():
    C = constant_module(ZZ, 5)
    assert check_functoriality(C) == []
    assert check_identities(C) == []
    ops = derived_operators(C, 2)
    # [TRIVIAL] b on the constant module alternates between 0 and 1
    assert ops.b.to_dense() == [[1]]
    assert derived_operators(C, 1).b.to_dense() == [[0]]
    # [TRIVIAL] t = (-1)^n and N = sum t^i
    assert ops.t.to_dense() == [[1]] and ops.norm.to_dense() == [[3]]
    assert derived_operators(C, 1).norm.to_dense() == [[0]]


def test_circle():
    # [PAPER] Lambda(-, 0) realizes the circle: H = Z, Z, 0, ...
    for normalized in (True, False):
        C = circle_complex(ZZ, normalized=normalized, N=5)
        assert [str(homology(C, n)) for n in range(4)] == ["Z", "Z", "0", "0"]


@given(st.integers(1, 3), st.integers(0, 10 ** 6), st.sampled_from(RINGS))
def test_nerve_identities_random(dim, seed, ring):
    # [DERIVED] functoriality and operator identities of random nerves
    A = seeded_algebra(ZZ, dim, seed).change_ring(ring)
    M = cyclic_nerve(A, 4 if dim < 3 else 3)
    assert check_identities(M) == []
    assert check_functoriality(M) == []


def test_corrupted_face_is_detected():
    # negative control
    M = cyclic_nerve(dual_numbers(ZZ), 4)
    bad = corrupt_face(M, 2, 1)
    assert check_functoriality(bad)
    assert check_identities(bad)


def test_truncation_guard():
    M = constant_module(ZZ, 3)
    with pytest.raises(TruncationError):
        M.degen(3, 0)
    with pytest.raises(TruncationError):
        M.operator(hom_set(4, 0)[0])
    with pytest.raises(TruncationError):
        M.truncate(5)
    assert M.truncate(2).N == 2


def test_shape_validation():
    M = constant_module(ZZ, 2)
    with pytest.raises(ValueError):
        CyclicModule(ZZ, 2, [1, 1, 1], M.faces, M.degens, M.cyc[:2])


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_json_roundtrip(ring):
    for A in bundled_algebras(ring)[:3]:
        M = cyclic_nerve(A, 3)
        M2 = CyclicModule.loads(M.dumps())
        assert M2.dumps() == M.dumps()
        assert M2.ring == ring and M2.ranks == M.ranks


def test_json_rejects_other_kinds():
    with pytest.raises(ValueError):
        CyclicModule.from_json({"schema": 2, "kind": "cyclic_module"})


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_normalized_matches_unnormalized(ring):
    # [PAPER] the quotient by degeneracies is a quasi-isomorphism
    for A in bundled_algebras(ring):
        M = cyclic_nerve(A, 4)
        C = hochschild_chain_complex(M)
        Cn = hochschild_chain_complex(M, normalized=True)
        assert check_complex(Cn) == []
        assert [homology(C, n) for n in range(3)] == [homology(Cn, n) for n in range(3)]


def test_moore_complex_matches_normalized():
    # [PAPER] Moore complex and normalized complex have equal homology
    for M in (cyclic_nerve(dual_numbers(ZZ), 4), representable_module(ZZ, 1, 4)):
        Mo = moore_complex(M)
        Cn = hochschild_chain_complex(M, normalized=True)
        assert [Mo.rank(n) for n in range(4)] == [Cn.rank(n) for n in range(4)]
        assert [homology(Mo, n) for n in range(3)] == [homology(Cn, n) for n in range(3)]


def test_direct_sum():
    A = cyclic_nerve(dual_numbers(ZZ), 3)
    S = direct_sum(A, constant_module(ZZ, 3))
    assert S.ranks == [3, 5, 9, 17]
    assert check_functoriality(S) == []
    with pytest.raises(ValueError):
        direct_sum(A, constant_module(ZZ, 2))


def test_quotient_paths_agree():
    # [DERIVED] the unit-pivot shortcut and the Smith-form fallback give the same quotient rank
    from cychom.cyclic_module import _Quotient
    from cychom.matrix import SparseMatrix

    prim = SparseMatrix.from_dense([[2], [3], [0]], ZZ)  # saturated, no unit entry
    q = _Quotient(prim)
    assert q.echelon is None and q.rank == 2
    assert q.project(prim).is_zero()
    unit = SparseMatrix.from_dense([[1], [3], [0]], ZZ)
    q2 = _Quotient(unit)
    assert q2.echelon is not None and q2.rank == 2
    assert q2.project(unit).is_zero()
    with pytest.raises(ValueError):
        _Quotient(SparseMatrix.from_dense([[2], [0], [0]], ZZ))
