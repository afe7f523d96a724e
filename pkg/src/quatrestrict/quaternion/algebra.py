"""The quaternion algebra (a, b | Q) ramified exactly at {p, infinity}.

Elements are 4-tuples of Fractions in the basis 1, i, j, k = ij with
i^2 = a, j^2 = b and ji = -ij.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..arith import hilbert_symbol, is_prime, legendre, prime_factors

Quat = tuple  # 4-tuple of Fraction


@dataclass(frozen=True)
class GlobalAlgebraDesc:
    p: int
    a: int
    b: int

    def __post_init__(self):
        ramified = self.ramification()
        if ramified != (-1, self.p):
            raise ValueError(f"({self.a}, {self.b}) is ramified at {ramified}, expected (-1, {self.p})")
        if not (self.a < 0 and self.b < 0):
            raise ValueError("reduced norm form is not positive definite")

    def ramification(self) -> tuple[int, ...]:
        """Places (with -1 for the real place) where the local Hilbert symbol is -1."""
        places = sorted(set(prime_factors(2 * self.a * self.b)))
        bad = [ell for ell in places if hilbert_symbol(self.a, self.b, ell) == -1]
        if hilbert_symbol(self.a, self.b, -1) == -1:
            bad.insert(0, -1)
        return tuple(bad)

    def mul(self, x: Quat, y: Quat) -> Quat:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conj(x: Quat) -> Quat:
        return (x[0], -x[1], -x[2], -x[3])

    def nrd(self, x: Quat):
        a, b = self.a, self.b
        return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]

    @staticmethod
    def trd(x: Quat):
        return 2 * x[0]

    def inverse(self, x: Quat) -> Quat:
        n = Fraction(self.nrd(x))
        if n == 0:
            raise ZeroDivisionError("zero quaternion")
        return tuple(Fraction(c) / n for c in self.conj(x))

    def bilinear(self, x: Quat, y: Quat):
        """trd(x conj(y)), the polar form of nrd: nrd(x + y) - nrd(x) - nrd(y)."""
        a, b = self.a, self.b
        return 2 * (x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + a * b * x[3] * y[3])

    @staticmethod
    def one() -> Quat:
        return (Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    def is_integral(self, x: Quat) -> bool:
        return Fraction(self.trd(x)).denominator == 1 and Fraction(self.nrd(x)).denominator == 1


def algebra_for_prime(p: int) -> GlobalAlgebraDesc:
    """Standard Hilbert-symbol presentation of the definite algebra of discriminant p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if p % 4 == 3:
        return GlobalAlgebraDesc(p, -1, -p)
    if p % 8 == 5:
        return GlobalAlgebraDesc(p, -2, -p)
    r = 3
    while not (is_prime(r) and r % 4 == 3 and legendre(r, p) == -1):
        r += 4
    return GlobalAlgebraDesc(p, -r, -p)
