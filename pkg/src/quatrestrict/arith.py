"""Small integer helpers shared across modules."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    for q in prime_factors(n):
        k = 0
        while n % q == 0:
            n //= q
            k += 1
        out[q] = k
    return out


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    return next(u for u in range(2, p) if legendre(u, p) == -1)


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def reduce_mod(x, modulus: int) -> int:
    """Image of a p-integral rational in Z/modulus."""
    x = Fraction(x)
    return (x.numerator * pow(x.denominator, -1, modulus)) % modulus if modulus > 1 else 0


def hilbert_symbol(a: int, b: int, ell: int) -> int:
    """Hilbert symbol (a, b)_ell over Q for ell a prime or -1 (the real place)."""
    if ell == -1:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = valuation(a, ell), Fraction(a) / Fraction(ell) ** valuation(a, ell)
    beta, v = valuation(b, ell), Fraction(b) / Fraction(ell) ** valuation(b, ell)
    u, v = int(u), int(v)
    if ell == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = (-1) ** (alpha * beta * ((ell - 1) // 2) % 2)
    return s * legendre(u, ell) ** beta * legendre(v, ell) ** alpha
