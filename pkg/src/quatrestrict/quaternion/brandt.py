"""Brandt matrices on functions on the class set, and the Eisenstein / cusp splitting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..arith import legendre
from .classes import ClassSet, pair_lattice, scaled_gram
from .enumeration import count_by_value


@dataclass(frozen=True)
class BrandtOperator:
    """T_n(i, j) = counts[i][j] / e_j, acting on column vectors of class-function values."""

    n: int
    counts: tuple[tuple[int, ...], ...]
    units: tuple[int, ...]

    @property
    def matrix(self) -> list[list[Fraction]]:
        return [[Fraction(c, e) for c, e in zip(row, self.units)] for row in self.counts]

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.matrix]

    def is_self_adjoint(self) -> bool:
        """T(i, j) / e_i is symmetric, i.e. T is self-adjoint for the pairing sum phi psi / e_i."""
        m = self.matrix
        h = len(m)
        return all(m[i][k] / self.units[i] == m[k][i] / self.units[k] for i in range(h) for k in range(h))


def representation_counts(cs: ClassSet, bound: int) -> list[list[list[int]]]:
    """counts[i][j][n] = #{beta in I_i conj(I_j) : nrd(beta) = n nrd(I_i) nrd(I_j)}, 0 <= n <= bound."""
    cache = cs.__dict__.setdefault("_theta", {})
    have = cache.get("bound", -1)
    if have >= bound:
        table = cache["table"]
        return [[row[: bound + 1] for row in block] for block in table]
    h = cs.h
    table = [[None] * h for _ in range(h)]
    for i in range(h):
        for j in range(i, h):
            lat = pair_lattice(cs.alg, cs.ideals[i], cs.ideals[j])
            gram = scaled_gram(cs.alg, lat, cs.norms[i] * cs.norms[j])
            table[i][j] = table[j][i] = count_by_value(gram, bound)
    cache["bound"] = bound
    cache["table"] = table
    return table


def brandt_matrix(cs: ClassSet, n: int, table: list[list[list[int]]] | None = None) -> BrandtOperator:
    """T_n from representation counts (computed here unless a table reaching n is supplied)."""
    if n < 1 or gcd(n, cs.alg.p * cs.order.level) != 1:
        raise ValueError(f"n = {n} must be positive and coprime to p * level = {cs.alg.p * cs.order.level}")
    if table is None or len(table[0][0]) <= n:
        table = representation_counts(cs, n)
    counts = tuple(tuple(table[i][j][n] for j in range(cs.h)) for i in range(cs.h))
    return BrandtOperator(n, counts, tuple(cs.units))


def inner_product(cs: ClassSet, x, y) -> Fraction:
    return sum((Fraction(a) * Fraction(b) / e for a, b, e in zip(x, y, cs.units)), Fraction(0))


def eisenstein_basis(cs: ClassSet) -> list[list[Fraction]]:
    """mu o nrd for the characters mu of Z_p^x / nrd(O_p^x): constants, plus the Legendre symbol if index 2."""
    basis = [[Fraction(1)] * cs.h]
    if cs.norm_classes == 2:
        p = cs.alg.p
        basis.append([Fraction(legendre(int(n.numerator * n.denominator), p)) for n in cs.norms])
    return basis


def eisenstein_dimension(cs: ClassSet) -> int:
    basis = eisenstein_basis(cs)
    if len(basis) == 2 and all(v == basis[0][0] for v in basis[1]):
        raise RuntimeError("Eisenstein functions are linearly dependent")
    return len(basis)


def cusp_dimension(cs: ClassSet) -> int:
    return cs.h - eisenstein_dimension(cs)
