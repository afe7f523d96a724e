"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(n)-1),
reduced modulo the n-th cyclotomic polynomial, so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np
from flint import fmpq, fmpq_poly, fmpz_poly


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> fmpz_poly:
    return fmpz_poly.cyclotomic(n)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return cyclotomic_polynomial(n).degree()


@lru_cache(maxsize=64)
def power_reduction_matrix(n: int) -> np.ndarray:
    """Integer matrix R with row e = coefficients of zeta_n^e in the reduced basis."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    rows = np.zeros((n, phi), dtype=np.int64)
    for e in range(n):
        r = fmpz_poly([0] * e + [1]) % cyc
        cs = [int(c) for c in r.coeffs()]
        rows[e, : len(cs)] = cs
    return rows


def _q(x):
    if isinstance(x, (int, fmpq)):
        return x
    f = Fraction(x)
    return fmpq(f.numerator, f.denominator)


def _qpoly(coeffs) -> fmpq_poly:
    return fmpq_poly([_q(c) for c in coeffs])


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Cyclotomic:
    __slots__ = ("n", "_poly")

    def __init__(self, n: int, poly: fmpq_poly | Sequence = ()):
        if n < 1:
            raise ValueError("conductor must be positive")
        if not isinstance(poly, fmpq_poly):
            poly = _qpoly(poly)
        self.n = n
        self._poly = poly % fmpq_poly(cyclotomic_polynomial(n))

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int = 1) -> "Cyclotomic":
        return cls(n)

    @classmethod
    def rational(cls, value, n: int = 1) -> "Cyclotomic":
        return cls(n, _qpoly([value]))

    @classmethod
    def root(cls, n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n ** k with zeta_n = exp(2 pi i / n)."""
        k %= n
        return cls(n, fmpq_poly([0] * k + [1]))

    @classmethod
    def from_exponent_counts(cls, n: int, counts: Iterable[int]) -> "Cyclotomic":
        """sum_e counts[e] * zeta_n**e."""
        counts = list(counts)
        if len(counts) != n:
            raise ValueError("need exactly n exponent counts")
        return cls(n, fmpq_poly([int(c) for c in counts]))

    @classmethod
    def from_coefficients(cls, n: int, coeffs: Sequence) -> "Cyclotomic":
        return cls(n, _qpoly(coeffs))

    # structure ------------------------------------------------------------
    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        phi = euler_phi(self.n)
        cs = [Fraction(int(c.p), int(c.q)) for c in self._poly.coeffs()]
        return tuple(cs + [Fraction(0)] * (phi - len(cs)))

    def embed(self, m: int) -> "Cyclotomic":
        if m % self.n:
            raise ValueError(f"cannot embed Q(zeta_{self.n}) into Q(zeta_{m})")
        if m == self.n:
            return self
        step = m // self.n
        return Cyclotomic(m, self._poly(fmpq_poly([0] * step + [1])))

    def _common(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.n)
        if other.n == self.n:
            return self, other
        m = _lcm(self.n, other.n)
        return self.embed(m), other.embed(m)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.n, a._poly + b._poly)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, -self._poly)

    def __sub__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.n, a._poly - b._poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.n, a._poly * b._poly)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return Cyclotomic(self.n, self._poly / _q(other))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.rational(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        if self * c == 1:
            # roots of unity and other unit-modulus elements
            return c
        cyc = fmpq_poly(cyclotomic_polynomial(self.n))
        g, s, _ = self._poly.xgcd(cyc)
        # g is a nonzero constant because cyc is irreducible
        return Cyclotomic(self.n, s / g[0])

    def conj(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta^-1."""
        n = self.n
        out = [fmpq(0)] * n
        for e, c in enumerate(self._poly.coeffs()):
            out[(-e) % n] += c
        return Cyclotomic(n, fmpq_poly(out))

    def galois(self, k: int) -> "Cyclotomic":
        """Automorphism zeta -> zeta^k (gcd(k, n) = 1)."""
        n = self.n
        if gcd(k, n) != 1:
            raise ValueError("exponent must be a unit mod n")
        out = [Fraction(0)] * n
        for e, c in enumerate(self.coefficients):
            out[(e * k) % n] += c
        return Cyclotomic(n, _qpoly(out))

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coefficients[0] if self.coefficients else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return a._poly == b._poly

    def __hash__(self):
        # equal elements may live at different conductors, so hash the rounded complex value
        if self.is_rational():
            return hash(self.to_rational())
        z = self.to_complex()
        return hash((round(z.real, 6), round(z.imag, 6)))

    def to_complex(self) -> complex:
        z = np.exp(2j * np.pi / self.n)
        return complex(sum(float(c) * z**e for e, c in enumerate(self.coefficients)))

    def __repr__(self) -> str:
        terms = [f"{c}*z{self.n}^{e}" if e else f"{c}" for e, c in enumerate(self.coefficients) if c]
        return "Cyclotomic(" + (" + ".join(terms) or "0") + ")"
