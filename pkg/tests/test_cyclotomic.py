from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from quatrestrict.cyclotomic import Cyclotomic


def test_root_of_unity_identities():
    for n in (2, 3, 4, 5, 6, 12, 36):
        z = Cyclotomic.root(n)
        assert z ** n == Cyclotomic.rational(1)
        assert sum((z ** j for j in range(n)), Cyclotomic.zero()) == Cyclotomic.zero()


def test_cross_conductor_equality_and_hash():
    a = Cyclotomic.root(4)
    b = Cyclotomic.root(12, 3)
    assert a == b and hash(a) == hash(b)
    assert Cyclotomic.root(6, 3) == Cyclotomic.rational(-1)


def test_unit_modulus_of_roots():
    z = Cyclotomic.root(9, 2)
    assert z * z.conj() == Cyclotomic.rational(1)
    assert abs(abs(z.to_complex()) - 1) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 24), st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=6))
def test_inverse_and_commutativity(n, coeffs):
    x = Cyclotomic.from_coefficients(n, coeffs)
    y = Cyclotomic.root(n, 1) + Cyclotomic.rational(Fraction(1, 3), n)
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == Cyclotomic.rational(1)
    assert (x * y) * y == x * (y * y)
