import pytest
from hypothesis import given, strategies as st

from cychom.complexes import homology
from cychom.rings import GF, ZZ
from cychom.resolution import (build_K, build_L, build_M, check_bicomplexes,
                               check_delta_commutes, check_delta_generator, check_delta_mod_p,
                               check_naturality, check_phi_psi, check_resolution,
                               check_row_exactness, invariant_cochains,
                               preimage_under_id_minus_t, preimage_under_norm, tot, verify_all,
                               _regular_operators)


def test_K_entry_ranks():
    # [TRIVIAL] entry (p, q) of K at [0] is k[Lambda(q - p, 0)], of rank q - p + 1
    Kb = build_K(0, 4, ZZ)
    assert [Kb.rank(0, q) for q in range(5)] == [1, 2, 3, 4, 5]
    assert Kb.rank(1, 1) == 1 and Kb.rank(2, 1) == 0
    assert check_delta_commutes(Kb) == []


@pytest.mark.parametrize("ring", [ZZ, GF(2), GF(3)], ids=str)
@pytest.mark.parametrize("m", [0, 1, 2])
def test_bicomplexes(m, ring):
    assert check_bicomplexes(m, 5, ring).ok


def test_L_and_M_shapes():
    Lb, Mb = build_L(1, 4, ZZ), build_M(1, 4, ZZ)
    assert all(p % 2 for p, _ in Mb.ranks)
    assert Lb.rank(2, 1) == Lb.rank(0, 1) == 6
    assert not Mb.h


@pytest.mark.parametrize("m,N,ring", [(0, 6, ZZ), (1, 5, ZZ), (2, 5, GF(2)), (1, 5, GF(3))])
def test_phi_psi_short_exact(m, N, ring):
    # [PAPER] 0 -> Tot K -> Tot L -> Tot M -> 0 is a split short exact sequence of complexes
    rep = check_phi_psi(m, N, ring)
    assert rep.ok, rep.violations


def test_phi_psi_sign_flip_detected():
    # negative control: psi(x, y) = y + s N x is not a chain map
    rep = check_phi_psi(1, 5, ZZ, psi_sign=-1)
    assert not rep.ok
    assert any(v[0] == "psi not a chain map" for v in rep.violations)


@pytest.mark.parametrize("m,N,ring", [(0, 8, ZZ), (1, 6, ZZ), (2, 6, GF(2)), (1, 6, GF(5))])
def test_resolution(m, N, ring):
    # [PAPER] Tot K and Tot L resolve k; Tot M is acyclic
    rep = check_resolution(m, N, ring)
    assert rep.ok, rep.violations
    assert rep.witness["K"][0] == ("Z" if ring == ZZ else ring.name)


def test_resolution_fails_without_cyclic_structure():
    # negative control: the Hochschild column alone is not a resolution of k at [0]
    Kb = build_K(0, 6, ZZ)
    col = Kb.column(0)
    assert not homology(col, 1).is_zero()


@pytest.mark.parametrize("n", range(0, 6))
def test_row_exactness(n):
    for ring, m in ((ZZ, 0), (ZZ, 1), (GF(2), 2)):
        rep = check_row_exactness(n, m, ring)
        assert rep.ok, rep.violations


@given(st.integers(0, 6), st.lists(st.integers(-5, 5), min_size=7, max_size=7))
def test_explicit_preimages(n, xs):
    # [DERIVED] the closed-form preimages invert N and id - t on their images
    ring = ZZ
    c, t, N_op = _regular_operators(n, ring)
    I = t.__class__.identity(n + 1, ring)
    v = {i: x for i, x in enumerate(xs[:n + 1]) if x}
    z = N_op.apply(v)
    assert N_op.apply(preimage_under_norm(z, n, ring)) == z
    w = (I - t).apply(v)
    assert (I - t).apply(preimage_under_id_minus_t(w, n, ring)) == w


@pytest.mark.parametrize("ring", [ZZ, GF(5), GF(2)], ids=str)
def test_delta_generates_h2(ring):
    # [PAPER] the delta class generates H^2 of the natural cochains, H^1 = 0
    rep = check_delta_generator(8, ring)
    assert rep.ok, rep.violations
    assert rep.witness["H1"] == "0"


def test_delta_cochain_coboundaries():
    # the horizontal part of the natural coboundary is 2(q+1), not zero
    C, labels, bad = invariant_cochains(8, ZZ)
    assert bad == []
    D = C.d(-1).to_dense()
    assert D == [[1], [2]]
    D3 = C.d(-3).to_dense()
    assert D3 == [[1, 0], [6, 1], [0, 2]]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_delta_mod_p(p):
    assert check_delta_mod_p(6, p).ok


@pytest.mark.parametrize("m,m2", [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)])
def test_naturality(m, m2):
    rep = check_naturality(m, m2, 5, ZZ)
    assert rep.ok, rep.violations
    with pytest.raises(ValueError):
        check_naturality(0, 2, 4, ZZ)


def test_verify_all():
    reps = verify_all(1, 5, GF(2))
    assert all(r.ok for r in reps)
    assert {r.check for r in reps} >= {"bicomplexes", "phi_psi", "resolution", "row_exactness"}


def test_checks_over_q():
    from cychom.rings import QQ

    assert check_bicomplexes(1, 5, QQ).ok
    assert check_phi_psi(1, 5, QQ).ok
    assert check_resolution(1, 6, QQ).ok
    assert check_row_exactness(3, 1, QQ).ok
