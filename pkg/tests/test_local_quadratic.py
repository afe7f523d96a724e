from __future__ import annotations

from fractions import Fraction

import pytest

from quatrestrict.arith import legendre
from quatrestrict.local_quadratic import (
    LocalCharacter,
    LocalFieldDesc,
    admissible_characters,
    enumerate_characters,
    norm_image_is_squares,
    sign_character,
)

F = Fraction


def test_rejects_two_and_composites():
    with pytest.raises(ValueError):
        LocalFieldDesc(2)
    with pytest.raises(ValueError):
        LocalFieldDesc(9)


def test_norms_of_uniformizers():
    for p in (3, 5, 7, 11):
        base = LocalFieldDesc(p)
        k, l = base.ext("K"), base.ext("L")
        assert k.norm(k.uniformizer) == p
        assert l.norm(l.uniformizer) == base.u * p
        assert k.valuation(k.uniformizer) == 1 and l.valuation(l.uniformizer) == 1
        for e in base.extensions():
            assert e.e * e.f == 2


def test_norm_and_trace_small_cases():
    base = LocalFieldDesc(3)
    k, m = base.ext("K"), base.ext("M")
    assert k.norm((F(0), F(1))) == 3
    assert k.norm((F(1), F(0))) == 1 and k.trace((F(1), F(0))) == 2
    assert m.trace((F(0), F(1))) == 0


def test_valuation_is_additive():
    base = LocalFieldDesc(5)
    for e in base.extensions():
        xs = [(F(1), F(1)), e.uniformizer, (F(5), F(2)), (F(3), F(0))]
        for x in xs:
            for y in xs:
                assert e.valuation(e.mul(x, y)) == e.valuation(x) + e.valuation(y)


def test_ramified_extensions_are_distinct():
    for p in (3, 5, 7, 13):
        base = LocalFieldDesc(p)
        ratio = (base.ext("K").delta // p) * pow(base.ext("L").delta // p, -1, p)
        assert legendre(ratio, p) == -1


def test_norm_image_examples():
    rep = norm_image_is_squares(LocalFieldDesc(3).ext("K"), 2)
    assert rep.norms == {1, 4, 7} and rep.equal
    rep = norm_image_is_squares(LocalFieldDesc(5).ext("L"), 1)
    assert rep.norms == {1, 4} and rep.equal
    with pytest.raises(ValueError, match="ramified extensions only"):
        norm_image_is_squares(LocalFieldDesc(3).ext("M"), 2)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
@pytest.mark.parametrize("label", ["K", "L"])
def test_ramified_norms_are_squares(p, label):
    for m in (1, 2, 3):
        assert norm_image_is_squares(LocalFieldDesc(p).ext(label), m).equal


def test_sign_character():
    base = LocalFieldDesc(3)
    k = base.ext("K")
    nu = sign_character(k)
    assert nu.angle(k.uniformizer) == F(1, 2)
    assert nu.angle((F(2), F(1))) == 0
    assert nu.conductor == 0
    assert (nu * nu).is_trivial()


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("label", ["K", "L"])
def test_sign_character_factors_through_norm(p, label):
    base = LocalFieldDesc(p)
    e = base.ext(label)
    composed = sign_character(base).compose_norm(e, 1)
    nu = sign_character(e)
    for x in [e.uniformizer, (F(1), F(1)), (F(2), F(0)), e.uniformizer_power(3)]:
        assert composed.angle(x) == nu.angle(x)


def _brute_force_count(p: int, f: int) -> int:
    """Characters of (o_K / p_K^f)^x trivial on Z_p^x with conductor exactly f, for K = Q_p(sqrt(-p))."""
    from itertools import product

    a_mod, b_mod = p ** ((f + 1) // 2), p ** (f // 2)
    units = [(a, b) for a, b in product(range(a_mod), range(b_mod)) if a % p]

    def mul(x, y):
        return ((x[0] * y[0] - p * x[1] * y[1]) % a_mod, (x[0] * y[1] + x[1] * y[0]) % b_mod)

    base = {(a, 0) for a in range(a_mod) if a % p}

    def closure(gens):
        seen = {(1, 0)}
        frontier = [(1, 0)]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    # characters trivial on the base units number |units / base|; those also trivial on
    # 1 + p_K^(f-1) have smaller conductor
    full = len(units) // len(base)
    deeper = {u for u in units if (u[0] - 1) % p ** (f // 2) == 0 and u[1] % p ** ((f - 1) // 2) == 0}
    lower = len(units) // len(closure(list(base) + list(deeper)))
    return full - lower


@pytest.mark.parametrize("p,f", [(3, 2), (5, 2), (3, 4)])
def test_enumeration_count_matches_brute_force(p, f):
    found = enumerate_characters(LocalFieldDesc(p).ext("K"), f)
    assert len(found) == 2 * _brute_force_count(p, f)


def test_unramified_conductor_zero_characters():
    found = enumerate_characters(LocalFieldDesc(3).ext("K"), 0)
    assert len(found) == 2


def test_conductor_one_ramified_is_trivial_on_one_plus_p():
    for e in enumerate_characters(LocalFieldDesc(5).ext("L"), 1):
        assert e.chi.conductor == 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_galois_conjugate_preserves_conductor(p):
    for label in ("K", "L", "M"):
        for e in enumerate_characters(LocalFieldDesc(p).ext(label), 2, check_minimality=False):
            assert e.chi.galois_conjugate().conductor == e.chi.conductor


def test_admissible_counts():
    expected = {3: (2, 4, 12), 5: (0, 8, 40), 7: (2, 12, 84)}
    for p, counts in expected.items():
        k = LocalFieldDesc(p).ext("K")
        assert tuple(len(admissible_characters(k, f)) for f in (1, 2, 4)) == counts
