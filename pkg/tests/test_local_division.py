from __future__ import annotations

import numpy as np
import pytest

from quatrestrict.cyclotomic import Cyclotomic
from quatrestrict.local_division.chartable import character_table
from quatrestrict.local_division.classify import analyze, predicted_dimension, records_of_conductor
from quatrestrict.local_division.model import LocalQuaternionModel, conjugacy_classes, quotient_order
from quatrestrict.local_quadratic import LocalFieldDesc, enumerate_characters


def test_group_orders():
    assert quotient_order(3, 3) == 216
    assert quotient_order(3, 1) == 8
    assert LocalQuaternionModel(3, 3).closure_size(LocalQuaternionModel(3, 3).generators) == 216
    assert LocalQuaternionModel(3, 1).closure_size(LocalQuaternionModel(3, 1).generators) == 8


def test_rejects_even_prime_and_size_bound():
    with pytest.raises(ValueError):
        LocalQuaternionModel(2, 2)
    with pytest.raises(ValueError, match="exceeds the size bound"):
        LocalQuaternionModel(13, 4, size_bound=10_000)


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3)])
def test_group_law(p, n):
    g = LocalQuaternionModel(p, n)
    rng = np.random.default_rng(0)
    x, y, z = (rng.integers(0, g.order, 500) for _ in range(3))
    assert (g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z))).all()
    assert (g.mul(x, g.inverse(x)) == g.identity).all()
    assert (g.mul(x, np.full(500, g.identity)) == x).all()
    assert (g.valuation_parity(g.mul(x, y)) == (g.valuation_parity(x) + g.valuation_parity(y)) % 2).all()
    assert g.valuation_parity(g.j) == 1


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2)])
def test_unit_filtration_is_normal(p, n):
    g = LocalQuaternionModel(p, n)
    for m in range(1, n):
        sub = g.unit_filtration(m)
        for h in g.generators:
            conj = g.conjugate(np.full(sub.size, h), sub)
            assert set(conj.tolist()) == set(sub.tolist())


@pytest.mark.parametrize("p,n,expected", [(3, 1, 5), (3, 2, 9), (3, 3, 13), (5, 2, 14), (7, 2, 19)])
def test_class_counts_match_burnside(p, n, expected):
    g = LocalQuaternionModel(p, n)
    classes = conjugacy_classes(g)
    assert len(classes) == expected
    # Burnside: number of classes = (1/|G|) sum_x |C(x)| = sum over classes of 1
    centralizers = g.order // classes.sizes
    assert int(sum(classes.sizes * centralizers)) == g.order * expected


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 2)])
def test_character_table_exact_orthogonality(p, n):
    g = LocalQuaternionModel(p, n)
    table = character_table(g, conjugacy_classes(g))
    assert sum(c.degree ** 2 for c in table.characters) == g.order
    for i in range(len(table)):
        for k in range(len(table)):
            assert table.inner_product_exact(i, k) == Cyclotomic.rational(int(i == k))


def test_trivial_character_invariants():
    qa = analyze(3, 2)
    triv = qa.table.characters[0]
    assert triv.degree == 1
    for e in ("K", "L", "M"):
        assert qa.invariant_dimension(triv, e) == 1


def test_odd_conductor_labels_split_evenly():
    recs = [r for r in records_of_conductor(3, 3) if r.degree > 1]
    labels = [r.label for r in recs]
    assert set(labels) == {"K", "L"}
    assert labels.count("K") == labels.count("L")


def test_even_minimal_labels_are_unramified():
    recs = [r for r in records_of_conductor(3, 2) if r.degree > 1 and r.minimal]
    assert recs and all(r.label == "M" for r in recs)


def test_q_mod_4_swap():
    k3 = [r for r in records_of_conductor(3, 3) if r.label == "K"]
    k5 = [r for r in records_of_conductor(5, 3) if r.label == "K"]
    assert all(r.invariants["K"] == 2 for r in k3)
    assert all(r.invariants["K"] == 0 for r in k5)


@pytest.mark.parametrize("p,c", [(3, 3), (5, 3), (3, 5), (7, 3)])
def test_counts_match_character_parametrization(p, c):
    recs = [r for r in records_of_conductor(p, c) if r.degree > 1]
    for lab in ("K", "L"):
        chis = [e for e in enumerate_characters(LocalFieldDesc(p).ext(lab), c - 1) if e.regular and e.minimal]
        assert 2 * sum(r.label == lab for r in recs) == len(chis)


def test_even_counts_match_unramified_parametrization():
    recs = [r for r in records_of_conductor(3, 2) if r.degree > 1 and r.minimal]
    chis = [e for e in enumerate_characters(LocalFieldDesc(3).ext("M"), 1) if e.regular and e.minimal]
    assert 2 * len(recs) == len(chis)


def test_predicted_dimension_rows():
    assert predicted_dimension("M", 2, True, 2, "K", 3) == 2
    assert predicted_dimension("K", 3, True, 6, "L", 5) == 2
    assert predicted_dimension("K", 3, True, 6, "K", 5) == 0
    assert predicted_dimension("non-minimal", 4, False, 6, "M", 3) == 0
    assert predicted_dimension("K", 5, True, 6, "M", 7) == 1
    assert predicted_dimension("one-dimensional", 1, True, 1, "K", 3, trivial_on_norms=True) == 1
