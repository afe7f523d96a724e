from __future__ import annotations

import pytest

from quatrestrict.classical import classical_dims, cusp_dimension, gamma0_invariants, new_dimension


@pytest.mark.parametrize("n,k,dims", [
    (1, 2, (0, 0)), (11, 2, (1, 1)), (23, 2, (2, 2)), (27, 2, (1, 1)), (31, 2, (2, 2)),
    (81, 2, (4, 2)), (125, 2, (8, 8)), (49, 2, (1, 1)), (11, 4, (2, 2)), (27, 4, (6, 4)),
])
def test_known_dimensions(n, k, dims):
    assert classical_dims(n, k) == dims


def test_genus_of_x0_11():
    assert cusp_dimension(11, 2) == 1
    assert len(gamma0_invariants(11)) == 4


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_prime_power_newforms_sum_to_cusp(p):
    for m in range(1, 5):
        n = p ** m
        total = sum((m - j + 1) * new_dimension(p ** j, 2) for j in range(1, m + 1))
        assert total == cusp_dimension(n, 2)


def test_odd_weight_rejected():
    with pytest.raises(ValueError):
        classical_dims(11, 3)
