"""Dimensions of cusp forms on Gamma_0(N) and of their new subspaces."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .arith import factorize, legendre


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _euler_phi(n: int) -> int:
    out = n
    for q in factorize(n):
        out = out // q * (q - 1)
    return out


def _kronecker_minus4(ell: int) -> int:
    return 0 if ell == 2 else (1 if ell % 4 == 1 else -1)


def _kronecker_minus3(ell: int) -> int:
    return 0 if ell == 3 else legendre(-3, ell)


def gamma0_invariants(n: int) -> tuple[int, int, int, int]:
    """(index, elliptic points of order 2, of order 3, cusps) of Gamma_0(n)."""
    fac = factorize(n)
    index = n
    for q in fac:
        index = index * (q + 1) // q
    nu2 = 0 if n % 4 == 0 else 1
    nu3 = 0 if n % 9 == 0 else 1
    for q in fac:
        nu2 *= 1 + _kronecker_minus4(q)
        nu3 *= 1 + _kronecker_minus3(q)
    cusps = sum(_euler_phi(gcd(d, n // d)) for d in _divisors(n))
    return index, nu2, nu3, cusps


def cusp_dimension(n: int, k: int) -> int:
    """dim S_k(Gamma_0(n)) for even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("weight must be even and at least 2")
    index, nu2, nu3, cusps = gamma0_invariants(n)
    genus = 1 + Fraction(index, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    if genus.denominator != 1:
        raise ArithmeticError(f"non-integral genus {genus} at level {n}")
    g = int(genus)
    if k == 2:
        return g
    return (k - 1) * (g - 1) + (k // 2 - 1) * cusps + nu2 * (k // 4) + nu3 * (k // 3)


def _beta(m: int) -> int:
    """Multiplicative kernel inverting dim S = sum_{M | N} d(N/M) dim S^new(M)."""
    out = 1
    for _, e in factorize(m).items():
        out *= {0: 1, 1: -2, 2: 1}.get(e, 0)
    return out


def new_dimension(n: int, k: int) -> int:
    return sum(_beta(n // m) * cusp_dimension(m, k) for m in _divisors(n))


def classical_dims(n: int, k: int = 2) -> tuple[int, int]:
    """(dim S_k(Gamma_0(n)), dim S_k^new(Gamma_0(n)))."""
    if k % 2:
        raise ValueError("odd weight is out of scope")
    return cusp_dimension(n, k), new_dimension(n, k)
