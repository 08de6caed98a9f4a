import pytest

from cychom.complexes import check_chain_map, check_complex, homology
from cychom.cyclic_homology import (HomologyBasis, hc, periodicity_map, tot_bc, tot_bn)
from cychom.cyclic_module import constant_module
from cychom.hochschild import cyclic_nerve, dual_numbers, group_algebra_cyclic, upper_triangular
from cychom.lambda_cat import representable_module
from cychom.mixed import (K, MixedComplex, QkResolution, check_mixed, direct_sum, hom_qk,
                          induced_comodule_map, kassel_iso_check, qk_selfmap, tensor_qk,
                          tensor_selfmap)
from cychom.rings import GF, ZZ


def test_qk_resolves_k():
    # [TRIVIAL] Qk has homology k in degree 0 below its cut
    for ring in (ZZ, GF(2)):
        Q = QkResolution(4)
        C = Q.as_complex(ring)
        assert check_complex(C) == []
        assert str(homology(C, 0)) == str(ring.name if ring.is_field else "Z")
        assert all(homology(C, n).is_zero() for n in range(1, 9))
        assert check_mixed(Q.as_mixed(ring)) == []
    with pytest.raises(ValueError):
        QkResolution(-1)


def test_qk_selfmap_is_chain_map():
    # [DERIVED] x_j -> x_{j-2} commutes with the zig-zag differential
    C = QkResolution(5).as_complex(ZZ)
    assert check_chain_map(C, C, qk_selfmap(5, ZZ), degree=-2) == []


def test_mixed_axioms():
    for M in (cyclic_nerve(dual_numbers(ZZ), 4), representable_module(GF(3), 2, 4)):
        assert check_mixed(K(M)) == []
        assert check_mixed(K(M, normalized=True)) == []


def test_mixed_shape_validation():
    X = K(cyclic_nerve(dual_numbers(ZZ), 3))
    with pytest.raises(ValueError):
        MixedComplex(X.complex, {0: X.Bop(1)})
    with pytest.raises(ValueError):
        X.Bop(3)


def test_tensor_ranks_and_complex():
    X = K(cyclic_nerve(dual_numbers(ZZ), 5))
    T = tensor_qk(X)
    assert check_complex(T) == []
    for n in range(6):
        assert T.rank(n) == sum(X.rank(n - 2 * i) for i in range(n // 2 + 1))


def test_tensor_selfmap_squares_to_shift_by_four():
    X = K(cyclic_nerve(dual_numbers(GF(2)), 6))
    T = tensor_qk(X)
    for n in range(4, 7):
        assert tensor_selfmap(T, n - 2) @ tensor_selfmap(T, n) == tensor_selfmap(T, n, steps=2)
    T2, maps = induced_comodule_map(X)
    assert check_chain_map(T2, T2, maps, degree=-2) == []


@pytest.mark.parametrize("ring", [ZZ, GF(2)], ids=str)
def test_comodule_map_induces_periodicity(ring):
    # [PAPER] id (x) sigma on Qk (x) K(M) is Connes' S under the Kassel identification
    M = cyclic_nerve(dual_numbers(ring), 6)
    T, maps = induced_comodule_map(M)
    for n in (2, 3, 4):
        S_ours = HomologyBasis(T, n).induced(maps[n], HomologyBasis(T, n - 2))
        assert S_ours == periodicity_map(M, n)


@pytest.mark.parametrize("make,ring,N", [
    (lambda r: None, ZZ, 6), (dual_numbers, GF(2), 5), (upper_triangular, ZZ, 4),
    (lambda r: group_algebra_cyclic(r, 3), GF(3), 4)], ids=["rep0", "dual", "ut", "c3"])
def test_kassel_isomorphisms(make, ring, N):
    # [PAPER] Tot BC = Qk (x) K(M) and Tot BN = Hom(Qk, K(M)) as complexes
    A = make(ring)
    M = representable_module(ring, 0, N) if A is None else cyclic_nerve(A, N)
    for normalized in (False, True):
        rep = kassel_iso_check(M, depth=2, normalized=normalized)
        assert rep.ok, rep.violations


def test_kassel_negative_control():
    # negative control: flipping the sign of B in X must be detected
    M = cyclic_nerve(dual_numbers(ZZ), 5)
    X = K(M)
    bad = MixedComplex(X.complex, {n: -m if n == 1 else m for n, m in X.B.items()})
    rep = kassel_iso_check(M, depth=2, X=bad)
    assert not rep.ok


def test_hom_side_homology_matches_bn():
    M = cyclic_nerve(dual_numbers(GF(2)), 8)
    X = K(M)
    H, T = hom_qk(X, 2), tot_bn(X, 2)
    assert check_complex(H) == []
    for n in range(-2, 3):
        assert homology(H, n) == homology(T, n)


def test_additivity():
    # [TRIVIAL] HC of a direct sum of mixed complexes is the direct sum
    X, Y = K(cyclic_nerve(dual_numbers(ZZ), 4)), K(constant_module(ZZ, 4))
    S = direct_sum(X, Y)
    assert check_mixed(S) == []
    a, b, s = hc(X, range(3)), hc(Y, range(3)), hc(S, range(3))
    for x, y, z in zip(a.groups, b.groups, s.groups):
        assert z.rank == x.rank + y.rank
        assert sorted(z.torsion) == sorted(x.torsion + y.torsion)
    assert tot_bc(S).rank(2) == tot_bc(X).rank(2) + tot_bc(Y).rank(2)
