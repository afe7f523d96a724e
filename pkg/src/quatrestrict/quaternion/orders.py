"""Maximal and special orders in the definite algebra of discriminant p."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


from ..arith import legendre, prime_factors, valuation
from .algebra import GlobalAlgebraDesc, algebra_for_prime
from .lattice import Lattice, qmat

EXTENSIONS = ("K", "L", "M")


def _fgcd(values) -> Fraction:
    num, den = 0, 1
    for v in values:
        v = Fraction(v)
        num = math.gcd(num, v.numerator)
        den = math.lcm(den, v.denominator)
    return Fraction(num, den)


def lattice_product(alg: GlobalAlgebraDesc, x: Lattice, y: Lattice) -> Lattice:
    return Lattice.from_generators(alg.mul(a, b) for a in x.basis for b in y.basis)


def lattice_conj(alg: GlobalAlgebraDesc, x: Lattice) -> Lattice:
    return Lattice.from_generators(alg.conj(b) for b in x.basis)


def lattice_nrd(alg: GlobalAlgebraDesc, x: Lattice) -> Fraction:
    """Positive generator of the Z-module spanned by nrd(x) for x in the lattice."""
    basis = x.basis
    vals = [alg.nrd(b) for b in basis]
    vals += [alg.bilinear(basis[i], basis[k]) for i in range(4) for k in range(i + 1, 4)]
    return _fgcd(vals)


def right_order(alg: GlobalAlgebraDesc, x: Lattice) -> Lattice:
    """{y : x y subset x}."""
    out = None
    for b in x.basis:
        inv = alg.inverse(b)
        piece = Lattice.from_generators(alg.mul(inv, c) for c in x.basis)
        out = piece if out is None else out.intersect(piece)
    return out


def left_order(alg: GlobalAlgebraDesc, x: Lattice) -> Lattice:
    """{y : y x subset x}."""
    out = None
    for b in x.basis:
        inv = alg.inverse(b)
        piece = Lattice.from_generators(alg.mul(c, inv) for c in x.basis)
        out = piece if out is None else out.intersect(piece)
    return out


def trace_gram(alg: GlobalAlgebraDesc, x: Lattice) -> list[list[Fraction]]:
    basis = x.basis
    return [[alg.bilinear(u, v) for v in basis] for u in basis]


def reduced_discriminant(alg: GlobalAlgebraDesc, x: Lattice) -> int:
    """d(O) with d(O)^2 = |det(trd(b_i conj(b_j)))|."""
    det = abs(qmat(trace_gram(alg, x)).det())
    det = Fraction(int(det.p), int(det.q))
    if det.denominator != 1:
        raise ValueError("trace form is not integral on this lattice")
    d = math.isqrt(det.numerator)
    if d * d != det.numerator:
        raise ValueError("trace-form determinant is not a square")
    return d


def is_order(alg: GlobalAlgebraDesc, x: Lattice) -> bool:
    if not x.contains(alg.one()):
        return False
    if not all(alg.is_integral(b) for b in x.basis):
        return False
    return all(x.contains(alg.mul(u, v)) for u in x.basis for v in x.basis)


def _ring_closure(alg: GlobalAlgebraDesc, gens: list, max_rounds: int = 12) -> Lattice | None:
    """Smallest order containing gens, or None if some element is not integral."""
    lat = Lattice.from_generators(gens)
    for _ in range(max_rounds):
        basis = lat.basis
        if not all(alg.is_integral(b) for b in basis):
            return None
        grown = Lattice.from_generators(basis + [alg.mul(u, v) for u in basis for v in basis])
        if grown == lat:
            return lat
        lat = grown
    return None


@dataclass(frozen=True)
class OrderLattice:
    """An order of the algebra together with its reduced discriminant and optional special label."""

    alg: GlobalAlgebraDesc
    lattice: Lattice
    discriminant: int
    label: tuple[str, int] | None = None
    aliases: tuple[tuple[str, int], ...] = field(default=(), compare=False)

    @property
    def level(self) -> int:
        return self.discriminant

    @property
    def level_exponent(self) -> int:
        return valuation(self.discriminant, self.alg.p)

    @property
    def basis(self):
        return self.lattice.basis

    def contains(self, other: "OrderLattice") -> bool:
        return self.lattice.contains_lattice(other.lattice)

    def name(self) -> str:
        if self.label is None:
            return "O_max"
        ext, r = self.label
        return "O_max" if r == 1 else f"O_{r}({ext})"


@lru_cache(maxsize=None)
def maximal_order(p: int) -> OrderLattice:
    """Saturate Z<1, i, j, ij> prime by prime until the reduced discriminant equals p."""
    alg = algebra_for_prime(p)
    one = alg.one()
    std = [tuple(Fraction(int(i == k)) for k in range(4)) for i in range(4)]
    lat = Lattice.from_generators(std)
    d = reduced_discriminant(alg, lat)
    while d != p:
        ell = next(q for q in prime_factors(d) if q != p or d % (p * p) == 0)
        basis = lat.basis
        grown = None
        for coeffs in itertools.product(range(ell), repeat=4):
            if not any(coeffs):
                continue
            x = tuple(sum(Fraction(c, ell) * b[k] for c, b in zip(coeffs, basis)) for k in range(4))
            if not alg.is_integral(x):
                continue
            grown = _ring_closure(alg, basis + [x, one])
            if grown is not None:
                break
        if grown is None:
            raise RuntimeError(f"no integral enlargement at {ell}; discriminant stuck at {d}")
        lat = grown
        d = reduced_discriminant(alg, lat)
    return OrderLattice(alg, lat, d, ("M", 1), aliases=(("K", 1), ("L", 1), ("M", 1)))


def _small_elements(basis, bound: int = 2):
    rng = range(-bound, bound + 1)
    combos = sorted(itertools.product(rng, repeat=4), key=lambda c: (sum(abs(t) for t in c), c))
    for coeffs in combos:
        if any(coeffs):
            yield tuple(sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(4))


@lru_cache(maxsize=None)
def prime_ideal_above_p(p: int) -> Lattice:
    """The two-sided ideal P of O_max with P^2 = p O_max: all elements of norm divisible by p."""
    order = maximal_order(p)
    alg = order.alg
    alpha = next(x for x in _small_elements(order.basis) if valuation(alg.nrd(x), p) == 1)
    big = order.lattice
    ideal = Lattice.from_generators(
        [alg.mul(alpha, b) for b in big.basis] + [tuple(p * c for c in b) for b in big.basis]
    )
    if lattice_product(alg, ideal, ideal) != big.scale(p):
        raise RuntimeError("P^2 != p O_max")
    if ideal.index_in(big) != p * p:
        raise RuntimeError("P does not have index p^2 in O_max")
    return ideal


def ideal_power(p: int, k: int) -> Lattice:
    """P^k, using P^2 = p O_max."""
    big = maximal_order(p).lattice
    if k % 2 == 0:
        return big.scale(p ** (k // 2))
    return prime_ideal_above_p(p).scale(p ** (k // 2))


def extension_type(alg: GlobalAlgebraDesc, x) -> str | None:
    """Which quadratic extension of Q_p the integral element x generates, if its ring is maximal."""
    p = alg.p
    disc = Fraction(alg.trd(x)) ** 2 - 4 * Fraction(alg.nrd(x))
    if disc == 0:
        return None
    disc = int(disc)
    v = valuation(disc, p)
    if v == 0:
        return "M" if legendre(disc, p) == -1 else None
    if v == 1:
        return "K" if legendre(-disc // p, p) == 1 else "L"
    return None


@lru_cache(maxsize=None)
def torus_generator(p: int, ext: str):
    """An element alpha of O_max with Z_p[alpha] the ring of integers of E."""
    order = maximal_order(p)
    for x in _small_elements(order.basis, 3):
        if extension_type(order.alg, x) == ext:
            return x
    raise ValueError(f"no element of O_max generates the ring of integers of {ext}")


@lru_cache(maxsize=None)
def special_order(p: int, ext: str, r: int) -> OrderLattice:
    """O_r(E) = Z + Z alpha_E + P^(r-1), which is o_E + P^(r-1) at p and maximal elsewhere."""
    if ext not in EXTENSIONS:
        raise ValueError(f"unknown extension label {ext!r}")
    if r < 1:
        raise ValueError("r must be at least 1")
    top = maximal_order(p)
    if r == 1:
        return top
    alg = top.alg
    alpha = torus_generator(p, ext)
    lat = Lattice.from_generators([alg.one(), alpha] + ideal_power(p, r - 1).basis)
    if not is_order(alg, lat):
        raise RuntimeError(f"O_{r}({ext}) is not closed under multiplication")
    d = reduced_discriminant(alg, lat)
    return OrderLattice(alg, lat, d, (ext, r))
