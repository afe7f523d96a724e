from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quatrestrict.cyclotomic import Cyclotomic
from quatrestrict.finite_abelian import (
    FiniteAbelianGroup,
    NotAUnitError,
    ResidueRing,
    characters,
    mat_mul,
    smith_normal_form,
    subgroup_sum,
    unit_group,
)


def _is_unimodular(m) -> bool:
    from flint import fmpz_mat

    return abs(int(fmpz_mat(m).det())) == 1


def test_snf_identity():
    ident = [[int(i == k) for k in range(3)] for i in range(3)]
    u, d, v = smith_normal_form(ident)
    assert d == ident


def test_snf_diag_2_3():
    u, d, v = smith_normal_form([[2, 0], [0, 3]])
    assert d == [[1, 0], [0, 6]]
    assert mat_mul(mat_mul(u, [[2, 0], [0, 3]]), v) == d


def test_snf_zero():
    _, d, _ = smith_normal_form([[0, 0], [0, 0]])
    assert d == [[0, 0], [0, 0]]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_property(rows):
    u, d, v = smith_normal_form(rows)
    assert mat_mul(mat_mul(u, rows), v) == d
    assert _is_unimodular(u) and _is_unimodular(v)
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][k] == 0 for i in range(len(d)) for k in range(len(d[0])) if i != k)
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0


def test_unit_group_mod_9():
    g = unit_group(ResidueRing(3, 2))
    assert g.order == 6 and g.invariants == (6,)


def test_unit_group_mod_3_and_identity_log():
    g = unit_group(ResidueRing(3, 1))
    assert g.order == 2
    assert g.dlog(1) == (0,)


def test_dlog_rejects_non_units():
    g = unit_group(ResidueRing(3, 2))
    with pytest.raises(NotAUnitError, match="not a unit"):
        g.dlog(3)


@pytest.mark.parametrize("p,m,delta", [(3, 3, -3), (5, 2, None), (7, 3, 3), (5, 3, -10)])
def test_unit_group_orders_and_log_homomorphism(p, m, delta):
    ring = ResidueRing(p, m, delta)
    g = unit_group(ring)
    assert g.order == ring.unit_count()
    units = [x for x in ring.elements() if ring.is_unit(x)][:40]
    for x in units[:8]:
        for y in units[:8]:
            assert g.dlog(ring.mul(x, y)) == g.reduce(tuple(a + b for a, b in zip(g.dlog(x), g.dlog(y))))
    invs = g.invariants
    assert all(b % a == 0 for a, b in zip(invs, invs[1:]))


def test_characters_trivial_group():
    g = FiniteAbelianGroup.from_relations([[1]])
    assert len(list(characters(g))) == 1


def test_characters_cyclic_two():
    g = FiniteAbelianGroup.from_relations([[2]])
    chis = list(characters(g))
    assert len(chis) == 2
    nontrivial = next(c for c in chis if not c.is_trivial())
    assert nontrivial((1,)) == Cyclotomic.rational(-1)


def test_characters_mod_9_orthogonal():
    g = unit_group(ResidueRing(3, 2))
    chis = list(characters(g))
    assert len(chis) == 6
    elems = list(g.coordinates())
    for a in chis:
        for b in chis:
            total = Cyclotomic.zero()
            for e in elems:
                total = total + a(e) * b(e).conj()
            assert total == Cyclotomic.rational(6 if a == b else 0)


def test_column_orthogonality():
    g = unit_group(ResidueRing(5, 2, 2))
    chis = list(characters(g))
    e = next(iter(g.coordinates()))
    other = tuple(1 for _ in g.invariants)
    s_same = sum((c(e) * c(e).conj() for c in chis), Cyclotomic.zero())
    s_diff = sum((c(e) * c(other).conj() for c in chis), Cyclotomic.zero())
    assert s_same == Cyclotomic.rational(g.order)
    assert s_diff == Cyclotomic.zero()


def test_subgroup_sums():
    g = unit_group(ResidueRing(3, 2))
    elems = list(g.coordinates())
    chis = list(characters(g))
    trivial = next(c for c in chis if c.is_trivial())
    assert subgroup_sum(trivial, elems) == 1
    for c in chis:
        if not c.is_trivial():
            assert subgroup_sum(c, elems) == 0
    regular = lambda e: Cyclotomic.rational(g.order if not any(e) else 0)
    assert subgroup_sum(regular, elems) == 1
    sub = g.subgroup([(2,)])
    assert subgroup_sum(trivial, sub) == Fraction(1)
