"""Q_p, its three quadratic extensions K, L, M, and characters of their multiplicative groups.

Field elements are exact: a base-field element is a Fraction, an element of
E = Q_p(sqrt(delta)) is a pair (a, b) of Fractions meaning a + b*sqrt(delta).
Characters are finite-order and take values in Q/Z ("angles"), so chi(x) is
exp(2 pi i * angle).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import ceil
from typing import Callable, Iterator

from .arith import is_prime, legendre, reduce_mod, smallest_nonresidue, valuation
from .cyclotomic import Cyclotomic
from .finite_abelian import CharacterVec, FiniteAbelianGroup, ResidueRing, characters, unit_group

LABELS = ("K", "L", "M")


class PrecisionError(ValueError):
    pass


def _frac_angle(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class LocalFieldDesc:
    p: int
    precision: int = 4

    def __post_init__(self):
        if self.p == 2:
            raise ValueError("p = 2 is not supported: the construction needs odd residue characteristic")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.precision < 1:
            raise ValueError("precision must be at least 1")

    @property
    def q(self) -> int:
        return self.p

    @property
    def u(self) -> int:
        """Smallest positive quadratic non-residue mod p."""
        return smallest_nonresidue(self.p)

    @property
    def e(self) -> int:
        return 1

    @property
    def delta(self) -> None:
        return None

    @property
    def uniformizer(self) -> Fraction:
        return Fraction(self.p)

    def valuation(self, x) -> int:
        return valuation(x, self.p)

    def unit_part(self, x, prec: int) -> int:
        """x / p^v(x) reduced mod p^prec."""
        v = self.valuation(x)
        return reduce_mod(Fraction(x) / Fraction(self.p) ** v, self.p**prec)

    def residue_ring(self, prec: int) -> ResidueRing:
        return ResidueRing(self.p, prec)

    def ext(self, label: str) -> "QuadExtDesc":
        return QuadExtDesc(self, label)

    def extensions(self) -> list["QuadExtDesc"]:
        return [QuadExtDesc(self, lab) for lab in LABELS]


@dataclass(frozen=True)
class QuadExtDesc:
    """E = Q_p(sqrt(delta)) with delta = -p (K), -u*p (L) or u (M)."""

    base: LocalFieldDesc
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown extension label {self.label!r}")
        # K and L are distinct: their discriminants differ by the non-square u
        if legendre(self.base.u, self.base.p) != -1:
            raise AssertionError("u must be a non-residue")

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def q(self) -> int:
        """Residue field cardinality of E."""
        return self.p if self.ramified else self.p**2

    @property
    def delta(self) -> int:
        p, u = self.base.p, self.base.u
        return {"K": -p, "L": -u * p, "M": u}[self.label]

    @property
    def ramified(self) -> bool:
        return self.label != "M"

    @property
    def e(self) -> int:
        return 2 if self.ramified else 1

    @property
    def f(self) -> int:
        return 1 if self.ramified else 2

    @property
    def different_exponent(self) -> int:
        return 1 if self.ramified else 0

    @property
    def uniformizer(self) -> tuple[Fraction, Fraction]:
        return (Fraction(0), Fraction(1)) if self.ramified else (Fraction(self.p), Fraction(0))

    # arithmetic ---------------------------------------------------------------
    def mul(self, x, y):
        a, b = x
        c, d = y
        return (Fraction(a) * c + self.delta * Fraction(b) * d, Fraction(a) * d + Fraction(b) * c)

    def conj(self, x):
        return (Fraction(x[0]), -Fraction(x[1]))

    def norm(self, x) -> Fraction:
        a, b = Fraction(x[0]), Fraction(x[1])
        return a * a - self.delta * b * b

    def trace(self, x) -> Fraction:
        return 2 * Fraction(x[0])

    def inverse(self, x):
        n = self.norm(x)
        return (Fraction(x[0]) / n, -Fraction(x[1]) / n)

    def valuation(self, x) -> int:
        a, b = Fraction(x[0]), Fraction(x[1])
        vals = []
        if a:
            vals.append(self.e * valuation(a, self.p))
        if b:
            vals.append(self.e * valuation(b, self.p) + (1 if self.ramified else 0))
        if not vals:
            raise ValueError("valuation of zero")
        return min(vals)

    def uniformizer_power(self, k: int):
        x = (Fraction(1), Fraction(0))
        base = self.uniformizer if k >= 0 else self.inverse(self.uniformizer)
        for _ in range(abs(k)):
            x = self.mul(x, base)
        return x

    def unit_part(self, x, prec: int) -> tuple[int, int]:
        """x / uniformizer^v(x) in the residue ring o_E / p_E^prec."""
        v = self.valuation(x)
        y = self.mul(x, self.uniformizer_power(-v))
        return self.residue_ring(prec).reduce_fractions(y)

    def residue_ring(self, prec: int) -> "ResidueRing":
        return ResidueRing(self.p, prec, self.delta)

    def norm_residue(self, x, prec_f: int) -> int:
        """N(x) mod p^prec_f for x a residue-ring pair known to enough precision."""
        a, b = x
        return (a * a - self.delta * b * b) % self.p**prec_f


def _reduce_fractions(ring: ResidueRing, x):
    ma, mb = ring.moduli
    if ring.is_base:
        return reduce_mod(x, ma)
    return (reduce_mod(x[0], ma), reduce_mod(x[1], mb) if mb > 1 else 0)


ResidueRing.reduce_fractions = _reduce_fractions


# -- characters ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _units(p: int, prec: int, delta: int | None) -> FiniteAbelianGroup:
    return unit_group(ResidueRing(p, prec, delta))


def _one_plus_generators(fld, r: int, prec: int) -> list:
    """Generators of (1 + p_E^r) inside the residue ring at precision prec."""
    ring = fld.residue_ring(prec)
    p = fld.p
    gens = []
    for k in range(max(r, 1), prec):
        if fld.delta is None:
            gens.append(ring.reduce(1 + p**k))
        elif fld.ramified:
            gens.append(ring.reduce((1, p ** (k // 2)) if k % 2 else (1 + p ** (k // 2), 0)))
        else:
            gens += [ring.reduce((1 + p**k, 0)), ring.reduce((1, p**k))]
    return gens


@dataclass(frozen=True)
class LocalCharacter:
    """A finite-order character of F^x or E^x that is trivial on 1 + p^prec.

    Stored as a character of the residue unit group plus the angle of the
    value on the fixed uniformizer.
    """

    fld: object  # LocalFieldDesc or QuadExtDesc
    prec: int
    vec: CharacterVec
    pi_angle: Fraction

    def __post_init__(self):
        object.__setattr__(self, "pi_angle", _frac_angle(self.pi_angle))

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.vec.group

    @classmethod
    def from_unit_angles(cls, fld, prec: int, unit_angle: Callable, pi_angle) -> "LocalCharacter":
        """Build from an angle function on residue units (must be a homomorphism)."""
        group = _units(fld.p, prec, fld.delta)
        exps = []
        for g, d in zip(group.generators, group.invariants):
            c = _frac_angle(unit_angle(g)) * d
            if c.denominator != 1:
                raise ValueError("unit angles do not define a character at this precision")
            exps.append(int(c))
        return cls(fld, prec, CharacterVec(group, tuple(exps)), Fraction(pi_angle))

    @classmethod
    def trivial(cls, fld, prec: int = 1) -> "LocalCharacter":
        group = _units(fld.p, prec, fld.delta)
        return cls(fld, prec, CharacterVec(group, (0,) * group.rank), Fraction(0))

    # evaluation ---------------------------------------------------------------
    def unit_angle(self, u) -> Fraction:
        """Angle on a residue-ring unit at this character's precision."""
        n = self.group.exponent
        return Fraction(self.vec.exponent_at(self.group.dlog(u)), n)

    def angle(self, x) -> Fraction:
        v = self.fld.valuation(x)
        unit = self.fld.unit_part(x, self.prec)
        return _frac_angle(self.unit_angle(unit) + v * self.pi_angle)

    def __call__(self, x) -> Cyclotomic:
        return angle_to_root(self.angle(x))

    def at_unit_residue(self, u) -> Cyclotomic:
        return angle_to_root(self.unit_angle(u))

    # structure ----------------------------------------------------------------
    @cached_property
    def conductor(self) -> int:
        """Least r >= 0 with the character trivial on 1 + p^r (r = 0: trivial on units)."""
        if self.vec.is_trivial():
            return 0
        for r in range(1, self.prec):
            if all(self.unit_angle(g) == 0 for g in _one_plus_generators(self.fld, r, self.prec)):
                return r
        return self.prec

    def restrict_prec(self, prec: int) -> "LocalCharacter":
        if prec == self.prec:
            return self
        if prec < self.conductor:
            raise PrecisionError("insufficient precision for this character")
        ring = self.fld.residue_ring(self.prec)

        def lifted(u):
            # any lift works because the character is trivial on 1 + p^prec
            return self.unit_angle(ring.reduce(u))

        return LocalCharacter.from_unit_angles(self.fld, prec, lifted, self.pi_angle)

    def __mul__(self, other: "LocalCharacter") -> "LocalCharacter":
        if other.fld != self.fld:
            raise ValueError("characters live on different fields")
        prec = max(self.prec, other.prec)
        a, b = self.restrict_prec(prec), other.restrict_prec(prec)
        return LocalCharacter(self.fld, prec, a.vec * b.vec, a.pi_angle + b.pi_angle)

    def inverse(self) -> "LocalCharacter":
        return LocalCharacter(self.fld, self.prec, self.vec.inverse(), -self.pi_angle)

    def galois_conjugate(self) -> "LocalCharacter":
        """chi o sigma with sigma the nontrivial automorphism of E/F."""
        fld = self.fld
        if not isinstance(fld, QuadExtDesc):
            raise ValueError("Galois conjugation needs a quadratic extension")
        ring = fld.residue_ring(self.prec)
        pi_img = fld.conj(fld.uniformizer)
        # sigma(uniformizer) = uniformizer * (sigma(uniformizer) / uniformizer)
        ratio = fld.mul(pi_img, fld.inverse(fld.uniformizer))
        extra = self.unit_angle(ring.reduce_fractions(ratio))
        return LocalCharacter.from_unit_angles(
            fld, self.prec, lambda u: self.unit_angle(ring.reduce((u[0], -u[1]))), self.pi_angle + extra
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalCharacter) or other.fld != self.fld:
            return NotImplemented
        prec = max(self.prec, other.prec)
        a, b = self.restrict_prec(prec), other.restrict_prec(prec)
        return a.vec.exps == b.vec.exps and a.pi_angle == b.pi_angle

    def __hash__(self):
        return hash((self.fld, self.conductor, self.pi_angle))

    def is_trivial(self) -> bool:
        return self.vec.is_trivial() and self.pi_angle == 0

    def is_regular(self) -> bool:
        return self != self.galois_conjugate()

    def compose_norm(self, ext: "QuadExtDesc", prec_e: int) -> "LocalCharacter":
        """chi o N_{E/F} as a character of E^x (self must be a base-field character)."""
        if isinstance(self.fld, QuadExtDesc):
            raise ValueError("compose_norm expects a character of the base field")
        prec_f = ceil(prec_e / ext.e)
        chi = self.restrict_prec(max(prec_f, self.conductor, 1))
        pf = chi.prec
        ring_e = ext.residue_ring(max(prec_e, pf * ext.e))

        def ang(u):
            return chi.unit_angle(ring_e.norm_mod(u, pf))

        big = LocalCharacter.from_unit_angles(ext, ring_e.m, ang, chi.angle(ext.norm(ext.uniformizer)))
        return big.restrict_prec(prec_e) if big.conductor <= prec_e else big

    def restrict_to_base(self) -> "LocalCharacter":
        """chi restricted to F^x (self a character of a quadratic extension)."""
        fld = self.fld
        base = fld.base
        prec_f = ceil(self.prec / fld.e)
        return LocalCharacter.from_unit_angles(
            base, prec_f, lambda u: self.angle((Fraction(u), Fraction(0))), self.angle((Fraction(base.p), Fraction(0)))
        )

    def describe(self) -> dict:
        return {
            "field": getattr(self.fld, "label", "F"),
            "conductor": self.conductor,
            "unit_exponents": list(self.vec.exps),
            "uniformizer_angle": str(self.pi_angle),
        }


def _norm_mod(ring: ResidueRing, u, prec_f: int) -> int:
    a, b = u
    return (a * a - ring.delta * b * b) % ring.p**prec_f


ResidueRing.norm_mod = _norm_mod


def angle_to_root(angle: Fraction) -> Cyclotomic:
    angle = _frac_angle(angle)
    return Cyclotomic.root(angle.denominator, angle.numerator)


# -- named characters ------------------------------------------------------------


def sign_character(fld) -> LocalCharacter:
    """nu(x) = (-1)^v(x)."""
    group = _units(fld.p, 1, fld.delta)
    return LocalCharacter(fld, 1, CharacterVec(group, (0,) * group.rank), Fraction(1, 2))


def quadratic_character(ext: QuadExtDesc, prec: int = 1) -> LocalCharacter:
    """w_{E/F}: the character of F^x with kernel N(E^x)."""
    base = ext.base
    p = base.p
    if not ext.ramified:
        return LocalCharacter.from_unit_angles(base, prec, lambda u: 0, Fraction(1, 2))
    unit = lambda u: Fraction(0) if legendre(u, p) == 1 else Fraction(1, 2)
    # w(N(uniformizer)) = 1 with N(uniformizer) = p (K) or u*p (L)
    pi = Fraction(0) if ext.label == "K" else unit(base.u)
    return LocalCharacter.from_unit_angles(base, prec, unit, pi)


def base_characters(base: LocalFieldDesc, prec: int, pi_angles=(Fraction(0),)) -> Iterator[LocalCharacter]:
    group = _units(base.p, prec, None)
    for vec in characters(group):
        for a in pi_angles:
            yield LocalCharacter(base, prec, vec, a)


# -- Lemma: norms of ramified units are the squares ---------------------------------


@dataclass(frozen=True)
class NormImageReport:
    norms: frozenset[int]
    squares: frozenset[int]

    @property
    def equal(self) -> bool:
        return self.norms == self.squares

    def __bool__(self) -> bool:
        return self.equal


def norm_image_is_squares(ext: QuadExtDesc, m: int) -> NormImageReport:
    """Compare N(o_E^x) mod p^m with the unit squares mod p^m by enumeration."""
    if not ext.ramified:
        raise ValueError("lemma applies to ramified extensions only")
    p = ext.p
    mod = p**m
    norms = frozenset(
        (a * a - ext.delta * b * b) % mod for a in range(mod) if a % p for b in range(p ** max(m - 1, 0))
    )
    squares = frozenset((a * a) % mod for a in range(mod) if a % p)
    return NormImageReport(norms, squares)


# -- enumeration -------------------------------------------------------------------


CENTRAL_TRIVIAL = "trivial"
CENTRAL_UNRESTRICTED = "unrestricted"
CENTRAL_QUADRATIC = "quadratic"  # restriction to F^x equals w_{E/F}


@dataclass(frozen=True)
class EnumeratedCharacter:
    chi: LocalCharacter
    regular: bool
    minimal: bool


def _central_target(ext: QuadExtDesc, central: str, prec_f: int) -> LocalCharacter | None:
    if central == CENTRAL_TRIVIAL:
        return LocalCharacter.trivial(ext.base, prec_f)
    if central == CENTRAL_QUADRATIC:
        return quadratic_character(ext, prec_f)
    return None


def enumerate_characters(
    ext: QuadExtDesc,
    f: int,
    central: str = CENTRAL_TRIVIAL,
    precision: int | None = None,
    uniformizer_order: int = 2,
    check_minimality: bool = True,
) -> list[EnumeratedCharacter]:
    """All characters of E^x of conductor exactly f satisfying the central condition.

    Under a central condition the value on the uniformizer is determined up to
    sign for ramified E (its square is fixed) and completely for unramified E.
    Without a condition the uniformizer value ranges over roots of unity of
    order dividing ``uniformizer_order``.
    """
    if precision is not None and f > precision:
        raise PrecisionError(f"conductor {f} exceeds working precision {precision}")
    prec = max(f, 1)
    group = _units(ext.p, prec, ext.delta)
    ring = ext.residue_ring(prec)
    prec_f = max(ceil(prec / ext.e), 1)
    target = _central_target(ext, central, prec_f)
    base_ring = ext.base.residue_ring(prec_f)
    base_units = unit_group(base_ring)
    p = ext.p
    out = []
    for vec in characters(group):
        proto = LocalCharacter(ext, prec, vec, Fraction(0))
        if proto.conductor != f:
            continue
        if target is None:
            pi_choices = [Fraction(k, uniformizer_order) for k in range(uniformizer_order)]
        else:
            ok = all(
                proto.unit_angle(ring.reduce((g, 0))) == target.unit_angle(g) for g in base_units.generators
            )
            if not ok:
                continue
            pi_choices = _uniformizer_angles(ext, proto, target)
        for a in pi_choices:
            chi = LocalCharacter(ext, prec, vec, a)
            out.append(EnumeratedCharacter(chi, chi.is_regular(), _is_minimal(chi) if check_minimality else True))
    return out


def _uniformizer_angles(ext: QuadExtDesc, proto: LocalCharacter, target: LocalCharacter) -> list[Fraction]:
    """Angles a = chi(uniformizer) compatible with chi(p) = target(p)."""
    p = Fraction(ext.p)
    want = target.angle(p)
    if not ext.ramified:
        return [want]
    # p = uniformizer^2 * (p / delta) and p / delta is a unit of F
    unit = p / ext.delta
    unit_angle = proto.angle((unit, Fraction(0)))
    two_a = _frac_angle(want - unit_angle)
    return sorted({_frac_angle(two_a / 2), _frac_angle(two_a / 2 + Fraction(1, 2))})


def _is_minimal(chi: LocalCharacter) -> bool:
    """True unless some twist by phi o N has strictly smaller conductor."""
    ext = chi.fld
    f = chi.conductor
    if f == 0:
        return True
    s = max(ceil(f / ext.e), 1)
    for phi in base_characters(ext.base, s):
        twist = chi * phi.compose_norm(ext, chi.prec)
        if twist.conductor < f:
            return False
    return True


def admissible_characters(ext: QuadExtDesc, f: int) -> list[LocalCharacter]:
    """Regular characters kappa of E^x of conductor f with kappa|F^x = w_{E/F}."""
    return [
        e.chi
        for e in enumerate_characters(ext, f, CENTRAL_QUADRATIC, check_minimality=False)
        if e.regular
    ]
