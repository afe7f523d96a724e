from __future__ import annotations

from fractions import Fraction

import pytest

from quatrestrict.decomposition import (
    ComputeStore,
    Decomposition,
    MissingSuperorder,
    OrderLadder,
    eigensystems,
    hecke_primes,
    pullback,
    verify_theorems,
)
from quatrestrict.linalg import mat_vec


@pytest.fixture(scope="module")
def ladder27():
    return OrderLadder.build(3, 3)


@pytest.fixture(scope="module")
def store():
    return ComputeStore()


def test_hecke_primes():
    assert hecke_primes(3) == [2, 5, 7, 11, 13, 17, 19]
    assert 11 not in hecke_primes(11)


def test_ladder_structure(ladder27):
    assert ladder27.check_partial_order()
    assert ladder27.members[0].name == "O_max"
    with pytest.raises(MissingSuperorder):
        ladder27.member("O_9(K)")
    m3 = ladder27.member("O_3(M)")
    assert m3.order.level == 27


def test_pullback_of_constants(ladder27, store):
    top = ladder27.members[0]
    for member in ladder27.members[1:]:
        for sup in ladder27.superorders(member):
            pi = store.degeneracy(member.order, sup.order)
            h = store.class_set(sup.order).h
            assert pullback(pi, [Fraction(1)] * h) == [Fraction(1)] * len(pi)
        assert top in ladder27.superorders(member)


def test_degeneracy_is_hecke_equivariant(ladder27, store):
    small = ladder27.member("O_3(K)")
    for sup in ladder27.superorders(small):
        pi = store.degeneracy(small.order, sup.order)
        hb = store.class_set(sup.order).h
        for ell in (2, 5):
            tb, ts = store.brandt(sup.order, ell), store.brandt(small.order, ell)
            for i in range(hb):
                e = [Fraction(int(i == j)) for j in range(hb)]
                assert mat_vec(ts, pullback(pi, e)) == pullback(pi, mat_vec(tb, e))


def test_old_plus_new_is_cusp(ladder27, store):
    dec = Decomposition(ladder27, store)
    for rep in dec.all_reports():
        assert rep.old_in_cusp
        assert rep.dim_old + rep.dim_new == rep.dim_cusp
    assert dec.report(ladder27.member("O_3(M)")).dim_new == 1
    assert dec.report(ladder27.member("O_3(L)")).dim_new == 0


def test_eigensystems_empty_space():
    assert eigensystems({2: [[Fraction(1)]]}, []) == []


def test_eigensystems_detect_multiplicity():
    t = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]]
    basis = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    ((poly, mult),) = eigensystems({2: t}, basis)
    assert mult == 2


@pytest.mark.parametrize("p,r", [(11, 1), (3, 3), (5, 2)])
def test_verify_passes(p, r):
    out = verify_theorems(p, r)
    failed = [c["name"] for c in out["checks"] if not c["pass"]]
    assert not failed and out["all_pass"]


def test_verify_p3_level_81():
    out = verify_theorems(3, 4)
    assert out["all_pass"]
    names = {c["name"] for c in out["checks"]}
    assert "even_level_agreement[p^4]" in names and "kl_union_is_m[p^3]" in names
