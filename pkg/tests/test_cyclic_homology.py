import json

import pytest
from hypothesis import given, settings, strategies as st

from cychom.complexes import check_bicomplex, check_complex
from cychom.cyclic_homology import (HomologyBasis, HomologyTable, WindowError, bc_bicomplex,
                                    bn_bicomplex, hc, hh, hn, hn_required_truncation,
                                    periodicity_map, sbi_check, tot_bc)
from cychom.cyclic_module import constant_module, derived_operators
from cychom.hochschild import (bundled_algebras, cyclic_nerve, dual_numbers, ground_algebra,
                               group_algebra_cyclic, upper_triangular)
from cychom.lambda_cat import representable_module
from cychom.rings import GF, QQ, ZZ

from helpers import seeded_algebra
from oracles import rank_over_q


def test_ground_ring_tables():
    # [PAPER] HC(k) = k[u], HH(k) = k in degree 0, HN(k) = k in even nonpositive degrees
    C = constant_module(ZZ, 18)
    assert hh(C, range(6)).as_strings() == ["Z", "0", "0", "0", "0", "0"]
    assert hc(C, range(6)).as_strings() == ["Z", "0", "Z", "0", "Z", "0"]
    t = hn(C, range(-4, 1))
    assert t.as_strings() == ["Z", "0", "Z", "0", "Z"]
    assert all(t.stabilized)


def test_hn_flags_unstable_when_window_too_small():
    t = hn(constant_module(ZZ, 14), range(-4, 1))
    assert t.as_strings() == ["Z", "0", "Z", "0", "Z"]
    assert not any(t.stabilized)


def test_representables_are_acyclic_for_hc():
    # [DERIVED] a representable is projective, so HC is k in degree 0
    for m in range(3):
        R = representable_module(ZZ, m, 6)
        assert hc(R, range(5)).as_strings() == ["Z", "0", "0", "0", "0"]


def _hc_connes_ranks(M, degrees):
    """Ranks of H(C / (1 - t), b) over Q from dense Gaussian elimination."""
    def dense(A):
        return A.change_ring(QQ).to_dense()

    def one_minus_t(n):
        ops = derived_operators(M, n)
        I = [[int(i == j) for j in range(M.rank(n))] for i in range(M.rank(n))]
        return [[a - b for a, b in zip(r, s)] for r, s in zip(I, dense(ops.t))]

    def rank_b(n):
        if n == 0:
            return 0
        b = dense(derived_operators(M, n).b)
        u = one_minus_t(n - 1)
        both = [r + s for r, s in zip(b, u)]
        return rank_over_q(both) - rank_over_q(u)

    out = []
    for n in degrees:
        dim = M.rank(n) - rank_over_q(one_minus_t(n))
        out.append(dim - rank_b(n) - rank_b(n + 1))
    return out


@pytest.mark.parametrize("make", [dual_numbers, upper_triangular,
                                  lambda r: group_algebra_cyclic(r, 3)], ids=["dual", "ut", "c3"])
def test_hc_matches_connes_complex_over_q(make):
    # [DERIVED] over Q, HC is the homology of the coinvariants of t
    M = cyclic_nerve(make(QQ), 4)
    ours = [g.rank for g in hc(M, range(3)).groups]
    assert ours == _hc_connes_ranks(M, range(3))


@given(st.integers(1, 2), st.integers(0, 10 ** 6))
@settings(max_examples=10)
def test_hc_matches_connes_random(dim, seed):
    A = seeded_algebra(ZZ, dim, seed).change_ring(QQ)
    M = cyclic_nerve(A, 5)
    assert [g.rank for g in hc(M, range(4)).groups] == _hc_connes_ranks(M, range(4))


@pytest.mark.parametrize("ring", [ZZ, GF(2), GF(3)], ids=str)
def test_truncation_soundness(ring):
    # [DERIVED] raising the truncation by 2 does not change reliable degrees
    for A in bundled_algebras(ring)[:4]:
        a, b = cyclic_nerve(A, 4), cyclic_nerve(A, 6) if A.dim <= 2 else cyclic_nerve(A, 5)
        assert hh(a, range(3)).groups == hh(b, range(3)).groups
        assert hc(a, range(3)).groups == hc(b, range(3)).groups


def test_normalized_agrees():
    for A in bundled_algebras(GF(2)):
        M = cyclic_nerve(A, 4)
        assert hc(M, range(3)).groups == hc(M, range(3), normalized=True).groups


def test_window_errors():
    C = constant_module(ZZ, 4)
    with pytest.raises(WindowError):
        hh(C, range(4))
    with pytest.raises(WindowError):
        hc(C, [])
    with pytest.raises(WindowError):
        hn(C, range(-2, 1))
    assert hn_required_truncation(0, 4) == 10
    with pytest.raises(WindowError):
        periodicity_map(C, 1)


def test_bicomplexes_are_valid():
    for M in (cyclic_nerve(dual_numbers(ZZ), 4), representable_module(GF(2), 1, 4)):
        assert check_bicomplex(bc_bicomplex(M)) == []
        assert check_bicomplex(bn_bicomplex(M, 2)) == []
        assert check_complex(tot_bc(M)) == []


def test_periodicity_on_ground_ring():
    # [PAPER] S: HC_{2k}(k) -> HC_{2k-2}(k) is an isomorphism
    C = constant_module(ZZ, 9)
    for n in (2, 4, 6):
        S = periodicity_map(C, n)
        assert S.to_dense() in ([[1]], [[-1]])


@pytest.mark.parametrize("ring", [ZZ, GF(2), GF(5)], ids=str)
def test_sbi_exact(ring):
    # [PAPER] the SBI sequence is exact
    for A in bundled_algebras(ring)[:4]:
        rep = sbi_check(cyclic_nerve(A, 5 if A.dim <= 2 else 4), range(3))
        assert rep.ok, rep.violations
        assert rep.witness["spots"] > 0


def test_homology_basis_coordinates():
    M = cyclic_nerve(dual_numbers(ZZ), 5)
    from cychom.cyclic_module import hochschild_chain_complex
    C = hochschild_chain_complex(M)
    H = HomologyBasis(C, 1)
    assert str(H.group) == "Z + Z/2"
    for g in H.generators.columns():
        assert H.is_cycle(g)
    coords = [H.coords(g) for g in H.generators.columns()]
    assert sorted(map(tuple, coords)) == [(0, 1), (1, 0)]
    # boundaries have coordinate zero
    bd = C.d(2).columns()
    assert all(H.coords(z) == [0, 0] for z in bd)


def test_table_serialization():
    t = hh(cyclic_nerve(dual_numbers(ZZ), 4), range(3))
    doc = json.loads(t.dumps())
    assert doc["kind"] == "HH" and doc["schema"] == 1
    assert doc["rows"][1] == {"degree": 1, "free_rank": 1, "torsion": [2]}
    assert t.dumps() == hh(cyclic_nerve(dual_numbers(ZZ), 4), range(3)).dumps()
    csv = t.to_csv().splitlines()
    assert csv[0] == "degree,free_rank,torsion" and csv[2] == "1,1,2"
    n = hn(constant_module(ZZ, 12), [0])
    assert n.to_csv().splitlines()[0].endswith("stabilized")
    with pytest.raises(ValueError):
        HomologyTable("HX", ZZ, [0], [], 3)


@given(st.integers(1, 3), st.integers(0, 10 ** 6), st.sampled_from([ZZ, GF(2), GF(3)]))
@settings(max_examples=15)
def test_hc0_equals_hh0(dim, seed, ring):
    # [TRIVIAL] both are coker b_1
    M = cyclic_nerve(seeded_algebra(ZZ, dim, seed).change_ring(ring), 3)
    assert hc(M, [0])[0] == hh(M, [0])[0]


def test_bn_depth_zero_is_hochschild_column():
    M = cyclic_nerve(dual_numbers(ZZ), 4)
    B = bn_bicomplex(M, 0)
    assert {p for p, _ in B.ranks} == {0}
    assert not B.h
    B2, B4 = bn_bicomplex(M, 2), bn_bicomplex(M, 4)
    shared = set(B2.ranks) & set(B4.ranks)
    assert all(B2.ranks[k] == B4.ranks[k] for k in shared)


@pytest.mark.parametrize("ring", [GF(2), GF(3), QQ], ids=str)
def test_hn_stabilizes_over_fields(ring):
    # stabilization at depth width + 2 on small field examples
    for M in (constant_module(ring, 16), representable_module(ring, 0, 14)):
        t = hn(M, range(-2, 1))
        assert all(t.stabilized), (M, t.as_strings())
        assert t.depth == 4
