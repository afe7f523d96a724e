from __future__ import annotations

from fractions import Fraction

import pytest

from quatrestrict.cyclotomic import Cyclotomic
from quatrestrict.epsilon import (
    AdditiveCharacterDesc,
    WDRepDescriptor,
    dichotomy_check,
    gauss_epsilon,
    twist_ratio,
    sqrt_p,
    tunnell_multiplicity,
    twist_checks,
    twist_unramified,
    wd_representations,
)
from quatrestrict.local_quadratic import (
    LocalCharacter,
    LocalFieldDesc,
    admissible_characters,
    angle_to_root,
    base_characters,
    quadratic_character,
    sign_character,
)

ONE = Cyclotomic.rational(1)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_sqrt_p_squares_to_p(p):
    r = sqrt_p(p)
    assert r * r == Cyclotomic.rational(p)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_quadratic_gauss_sum_square(p):
    base = LocalFieldDesc(p)
    chi = quadratic_character(base.ext("K"))
    psi = AdditiveCharacterDesc(base, 0)
    eps = gauss_epsilon(chi, psi).value
    assert eps * eps == angle_to_root(chi.angle(Fraction(-1)))


def test_unramified_character_has_trivial_epsilon():
    base = LocalFieldDesc(5)
    assert gauss_epsilon(sign_character(base), AdditiveCharacterDesc(base, 0)).value == ONE
    assert gauss_epsilon(LocalCharacter.trivial(base), AdditiveCharacterDesc(base, 0)).value == ONE


@pytest.mark.parametrize("p,prec", [(3, 2), (5, 2), (7, 1), (3, 3)])
def test_unit_modulus_and_functional_equation(p, prec):
    base = LocalFieldDesc(p)
    psi = AdditiveCharacterDesc(base, 0)
    for chi in base_characters(base, prec, (Fraction(0), Fraction(1, 2))):
        if chi.conductor == 0:
            continue
        eps = gauss_epsilon(chi, psi)
        assert eps.has_unit_modulus()
        other = gauss_epsilon(chi.inverse(), psi).value
        assert eps.value * other == angle_to_root(chi.angle(Fraction(-1)))


def test_twist_unramified_examples():
    base = LocalFieldDesc(3)
    assert twist_unramified(3, 1, 0, LocalCharacter.trivial(base)) == ONE
    assert twist_unramified(3, 1, 0, sign_character(base)) == Cyclotomic.rational(-1)
    assert twist_unramified(2, 2, 1, sign_character(base)) == ONE
    with pytest.raises(ValueError):
        twist_unramified(2, 1, 0, quadratic_character(base.ext("K")))


@pytest.mark.parametrize("p", [3, 5])
def test_unramified_twist_formula_against_gauss_sums(p):
    rows = twist_checks(p, max_conductor=2)
    assert len(rows) >= 20
    assert all(r["pass"] for r in rows)


def test_wd_descriptor_validation():
    base = LocalFieldDesc(3)
    k = base.ext("K")
    kappa = admissible_characters(k, 2)[0]
    sigma = WDRepDescriptor(k, kappa)
    assert sigma.a == 3 and sigma.dim == 2
    with pytest.raises(ValueError):
        WDRepDescriptor(base.ext("M"), kappa)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("f", [1, 2, 4])
def test_twist_ratio_sign_rule(p, f):
    base = LocalFieldDesc(p)
    for label in ("K", "L"):
        for sigma in wd_representations(base, label, f):
            for twist in ("K", "L"):
                expected = 1 if (f == 1 or twist == label) else -1
                assert twist_ratio(sigma, base.ext(twist)) == expected


@pytest.mark.parametrize("p,f", [(3, 2), (7, 2), (5, 2), (3, 4)])
def test_tunnell_pattern_by_q_mod_4(p, f):
    """On the division-algebra side, m_B = 1 - m_GL2: the inducing extension sees 1 iff q = 3 mod 4."""
    base = LocalFieldDesc(p)
    for label in ("K", "L"):
        other = "L" if label == "K" else "K"
        for sigma in wd_representations(base, label, f):
            same = 1 - tunnell_multiplicity(sigma, base.ext(label))
            cross = 1 - tunnell_multiplicity(sigma, base.ext(other))
            assert same == (1 if p % 4 == 3 else 0)
            assert cross == 1 - same
            assert 1 - tunnell_multiplicity(sigma, base.ext("M")) == 1
            for e in ("K", "L"):
                assert tunnell_multiplicity(sigma, base.ext(e), "sign") in (0, 1)


@pytest.mark.parametrize("p,c", [(3, 3), (5, 3)])
def test_dichotomy(p, c):
    rows = dichotomy_check(p, c)
    assert rows and all(r.passed for r in rows)
    assert all(r.m_division == 1 for r in rows if r.ext == "M")
