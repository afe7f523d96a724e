"""Epsilon factors of characters of Q_p and its quadratic extensions via Gauss sums,
and the torus-multiplicity formula they feed.

eps(chi, psi) = q^(-f/2) * sum_{u in (o/p^f)^x} chi^-1(u g) psi(u g),
with v(g) = -(f + n(psi)); for unramified chi this is chi(uniformizer)^n(psi).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import legendre, reduce_mod, valuation
from .cyclotomic import Cyclotomic
from .local_quadratic import (
    LocalCharacter,
    LocalFieldDesc,
    QuadExtDesc,
    admissible_characters,
    angle_to_root,
    quadratic_character,
    sign_character,
)


class NonSelfDualInput(ArithmeticError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def sqrt_p(p: int) -> Cyclotomic:
    """sqrt(p) > 0 inside Q(zeta_4p), from the quadratic Gauss sum g with g^2 = (-1|p) p."""
    g = Cyclotomic.from_exponent_counts(p, [0] + [legendre(a, p) for a in range(1, p)])
    return g if p % 4 == 1 else g * Cyclotomic.root(4, 3)


# -- additive characters -----------------------------------------------------------


def _p_fractional_part(x: Fraction, p: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    k = max(0, -valuation(x, p))
    if k == 0:
        return Fraction(0)
    return Fraction(reduce_mod(x * p**k, p**k), p**k)


@dataclass(frozen=True)
class AdditiveCharacterDesc:
    """psi(x) = exp(2 pi i {p^n x}_p) on F, and psi o Tr on a quadratic extension.

    ``n`` is the base exponent: psi is trivial on p^-n Z_p but not on p^-(n+1) Z_p.
    """

    fld: object
    n: int = 0

    @property
    def conductor(self) -> int:
        """n(psi) for the field it lives on (d(E/F) + e n on an extension)."""
        if isinstance(self.fld, QuadExtDesc):
            return self.fld.different_exponent + self.fld.e * self.n
        return self.n

    def angle(self, x) -> Fraction:
        p = self.fld.p
        t = self.fld.trace(x) if isinstance(self.fld, QuadExtDesc) else Fraction(x)
        return _p_fractional_part(t * p**self.n, p)

    def __call__(self, x) -> Cyclotomic:
        return angle_to_root(self.angle(x))


# -- epsilon values ---------------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonValue:
    """gauss / sqrt(q)^f, kept exactly."""

    gauss: Cyclotomic
    q: int
    f: int

    @property
    def value(self) -> Cyclotomic:
        p = _prime_of(self.q)
        e = self.f * (1 if self.q == p else 2)  # sqrt(q)^f = sqrt(p)^e
        return self.gauss * (sqrt_p(p) ** e) / (p**e)

    def __mul__(self, other):
        if isinstance(other, EpsilonValue):
            return EpsilonValueProduct(self.value * other.value)
        return EpsilonValueProduct(self.value * other)

    def sign(self) -> int | None:
        v = self.value
        if v == 1:
            return 1
        if v == -1:
            return -1
        return None

    def has_unit_modulus(self) -> bool:
        v = self.value
        return v * v.conj() == 1


@dataclass(frozen=True)
class EpsilonValueProduct:
    value: Cyclotomic

    def __mul__(self, other):
        o = other.value if hasattr(other, "value") else other
        return EpsilonValueProduct(self.value * o)

    def sign(self) -> int | None:
        if self.value == 1:
            return 1
        if self.value == -1:
            return -1
        return None


def _prime_of(q: int) -> int:
    d = 2
    while q % d:
        d += 1
    return d


def gauss_epsilon(chi: LocalCharacter, psi: AdditiveCharacterDesc) -> EpsilonValue:
    if chi.fld != psi.fld:
        raise ValueError("character and additive character live on different fields")
    fld = chi.fld
    p = fld.p
    n = psi.conductor
    f = chi.conductor
    q = fld.q
    if f == 0:
        return EpsilonValue(angle_to_root(n * chi.pi_angle), q, 0)
    if chi.prec < f:
        raise ValueError("insufficient precision")
    chi = chi.restrict_prec(f)
    ring = fld.residue_ring(f)
    group = chi.group
    order = group.exponent
    ext = isinstance(fld, QuadExtDesc)
    if ext:
        gamma = fld.uniformizer_power(-(f + n))
        # Tr(u gamma) = 2 (u0 g0 + delta u1 g1); scale psi's argument by p^base_n
        g0, g1 = Fraction(gamma[0]), Fraction(gamma[1])
        denom = _lcm(g0.denominator, g1.denominator)
        c0 = 2 * g0 * denom * p**psi.n
        c1 = 2 * fld.delta * g1 * denom * p**psi.n
    else:
        gamma = Fraction(1, p ** (f + n))
        denom = gamma.denominator
        c0 = gamma * denom * p**psi.n
        c1 = Fraction(0)
    c0, c1 = int(c0), int(c1)
    pk = 1
    while denom % (pk * p) == 0:
        pk *= p
    unit_inv = pow(denom // pk, -1, pk) if pk > 1 else 0
    gamma_angle = chi.angle(gamma)
    modulus = _lcm(order, pk) * gamma_angle.denominator
    counts = [0] * modulus
    step_chi = modulus // order
    step_psi = modulus // pk
    base = int(-gamma_angle * modulus) % modulus
    for u in ring.elements():
        if not ring.is_unit(u):
            continue
        e_chi = chi.vec.exponent_at(group.dlog(u))
        if ext:
            t = (u[0] * c0 + u[1] * c1) * unit_inv % pk
        else:
            t = u * c0 * unit_inv % pk
        counts[(base - e_chi * step_chi + t * step_psi) % modulus] += 1
    return EpsilonValue(Cyclotomic.from_exponent_counts(modulus, counts), q, f)


def twist_unramified(a_sigma: int, dim: int, n_psi: int, mu: LocalCharacter) -> Cyclotomic:
    """eps(sigma x mu)/eps(sigma) = mu(uniformizer)^(a(sigma) + n(psi) dim sigma) for unramified mu."""
    if mu.conductor != 0:
        raise ValueError("twisting character must be unramified")
    return angle_to_root((a_sigma + n_psi * dim) * mu.pi_angle)


def lambda_factor(ext: QuadExtDesc, psi_base: AdditiveCharacterDesc) -> EpsilonValue:
    """lambda_{E/F}(psi) = eps(w_{E/F}, psi)."""
    return gauss_epsilon(quadratic_character(ext), psi_base)


# -- dihedral Weil-Deligne representations --------------------------------------------------


@dataclass(frozen=True)
class WDRepDescriptor:
    """sigma = Ind_{W_K}^{W_F} kappa for a ramified K with kappa|F^x = w_{K/F} (det sigma = 1)."""

    ext: QuadExtDesc
    kappa: LocalCharacter

    def __post_init__(self):
        if not self.ext.ramified:
            raise ValueError("inducing extension must be ramified")
        if not self.kappa.is_regular():
            raise ValueError("inducing character must be regular")
        restricted = self.kappa.restrict_to_base()
        w = quadratic_character(self.ext, restricted.prec)
        if restricted != w:
            raise ValueError("kappa|F^x must equal w_{K/F} for det sigma to be trivial")

    @property
    def a(self) -> int:
        return self.ext.different_exponent + self.kappa.conductor

    @property
    def dim(self) -> int:
        return 2

    def epsilon_twisted(self, phi: LocalCharacter | None = None, n: int = 0) -> Cyclotomic:
        """eps(sigma x phi, psi_n) = lambda_{K/F}(psi_n) eps(kappa (phi o N), psi_n o Tr)."""
        base = self.ext.base
        psi = AdditiveCharacterDesc(base, n)
        psi_k = AdditiveCharacterDesc(self.ext, n)
        theta = self.kappa if phi is None else self.kappa * phi.compose_norm(self.ext, self.kappa.prec)
        return lambda_factor(self.ext, psi).value * gauss_epsilon(theta, psi_k).value


def twist_ratio(sigma: WDRepDescriptor, twist_ext: QuadExtDesc) -> int:
    """eps(sigma x w_{L/F}) / eps(sigma) for a ramified L, computed three ways."""
    f = sigma.kappa.conductor
    if f == 0:
        raise ValueError("kappa must be ramified")
    if not twist_ext.ramified:
        raise ValueError("twisting extension must be ramified")
    K = sigma.ext
    psi_k = AdditiveCharacterDesc(K, 0)
    w = quadratic_character(twist_ext)
    w_tilde = w.compose_norm(K, sigma.kappa.prec)
    direct = gauss_epsilon(sigma.kappa * w_tilde, psi_k).value / gauss_epsilon(sigma.kappa, psi_k).value
    if w_tilde.conductor != 0:
        raise AssertionError("w_{L/F} o N must be unramified on K^x")
    mechanism = angle_to_root((f + 1) * w_tilde.pi_angle)
    rule = 1 if (f == 1 or twist_ext.label == K.label) else -1
    if not (direct == mechanism == rule):
        raise AssertionError(f"twist ratio disagreement: direct={direct}, mechanism={mechanism}, rule={rule}")
    return rule


ratio_prop33 = twist_ratio


def _torus_twists(ext: QuadExtDesc, chi: str) -> LocalCharacter:
    """phi with chi = phi o N_{E/F}: trivial -> 1, sign -> unramified quadratic."""
    base = ext.base
    if chi == "trivial":
        return LocalCharacter.trivial(base)
    if chi == "sign":
        if not ext.ramified:
            raise ValueError("nu_M is not trivial on F^x, so it is not of the form phi o N")
        return sign_character(base)
    raise ValueError(f"unknown torus character {chi!r}")


def tunnell_multiplicity(sigma: WDRepDescriptor, ext: QuadExtDesc, chi: str = "trivial") -> int:
    """dim Hom_{E^x}(pi', chi) for the GL(2) representation pi' with parameter sigma.

    m = (1 + eps(sigma x Ind_E chi) w_{E/F}(-1)) / 2, where Ind_E(phi o N) = phi + phi w_{E/F}.
    """
    phi = _torus_twists(ext, chi)
    w = quadratic_character(ext)
    eps = sigma.epsilon_twisted(phi) * sigma.epsilon_twisted(phi * w)
    if eps == 1:
        sign = 1
    elif eps == -1:
        sign = -1
    else:
        raise NonSelfDualInput(f"epsilon factor {eps} is not a sign")
    w_minus_one = 1 if w.angle(Fraction(-1)) == 0 else -1
    m = (1 + sign * w_minus_one) // 2
    if m not in (0, 1):
        raise AssertionError("multiplicity outside {0, 1}")
    return m


def wd_representations(base: LocalFieldDesc, label: str, f: int) -> list[WDRepDescriptor]:
    ext = base.ext(label)
    return [WDRepDescriptor(ext, k) for k in admissible_characters(ext, f)]


# -- the dichotomy against the division-algebra oracle -------------------------------------


@dataclass(frozen=True)
class DichotomyRow:
    rep_index: int
    label: str
    ext: str
    chi: str
    m_division: int
    m_gl2: tuple[int, ...]  # one value per admissible kappa; must all agree

    @property
    def consistent(self) -> bool:
        return len(set(self.m_gl2)) == 1

    @property
    def passed(self) -> bool:
        return self.consistent and self.m_division + self.m_gl2[0] == 1

    def as_dict(self) -> dict:
        return {
            "rep": self.rep_index,
            "label": self.label,
            "E": self.ext,
            "chi": self.chi,
            "m_division": self.m_division,
            "m_gl2": self.m_gl2[0] if self.consistent else list(self.m_gl2),
            "pass": self.passed,
        }


def twist_checks(p: int, max_conductor: int = 3, limit: int | None = None) -> list[dict]:
    """Direct Gauss-sum check of eps(chi mu)/eps(chi) = mu(uniformizer)^(f(chi) + n(psi))."""
    base = LocalFieldDesc(p)
    rows = []
    fields = [base] + base.extensions()
    for fld in fields:
        for f in range(1, max_conductor + 1):
            chis = _characters_of_conductor(fld, f)
            for chi in chis:
                for n in (0, 1):
                    psi = AdditiveCharacterDesc(fld, n)
                    mu = sign_character(fld)
                    lhs = gauss_epsilon(chi * mu, psi).value * gauss_epsilon(chi, psi).value.conj()
                    rhs = twist_unramified(f, 1, psi.conductor, mu)
                    rows.append({
                        "field": getattr(fld, "label", "F"),
                        "conductor": f,
                        "n_psi": psi.conductor,
                        "lhs": str(lhs),
                        "pass": lhs == rhs,
                    })
                    if limit is not None and len(rows) >= limit:
                        return rows
    return rows


def _characters_of_conductor(fld, f: int) -> list[LocalCharacter]:
    from .finite_abelian import characters as all_characters
    from .local_quadratic import _units

    group = _units(fld.p, f, fld.delta)
    out = []
    for vec in all_characters(group):
        chi = LocalCharacter(fld, f, vec, Fraction(0))
        if chi.conductor == f:
            out.append(chi)
    return out


def dichotomy_check(p: int, c: int) -> list[DichotomyRow]:
    """m_B(pi, chi) + m_GL2(sigma_pi, chi) = 1 for all odd-conductor pi, E and chi in {1, nu_E}."""
    from .local_division.classify import analyze

    if c % 2 == 0:
        raise ValueError("the dichotomy check is for odd conductors")
    qa = analyze(p, c - 1)
    base = LocalFieldDesc(p)
    sigmas = {lab: wd_representations(base, lab, c - 1) for lab in ("K", "L")}
    gl2 = {}
    for lab, reps in sigmas.items():
        for ext_label in ("K", "L", "M"):
            for chi in ("trivial", "sign") if ext_label != "M" else ("trivial",):
                ext = base.ext(ext_label)
                gl2[lab, ext_label, chi] = tuple(tunnell_multiplicity(s, ext, chi) for s in reps)
    rows = []
    for rec in qa.records:
        if rec.conductor != c or rec.degree == 1:
            continue
        chi_vals = qa.table.characters[rec.index]
        for ext_label in ("K", "L", "M"):
            if ext_label == "M":
                pairs = [("trivial", qa.invariant_dimension(chi_vals, "M"))]
            else:
                triv, sign = qa.sign_split(chi_vals, ext_label)
                pairs = [("trivial", triv), ("sign", sign)]
            for chi, m_b in pairs:
                rows.append(DichotomyRow(rec.index, rec.label, ext_label, chi, m_b, gl2[rec.label, ext_label, chi]))
    return rows
