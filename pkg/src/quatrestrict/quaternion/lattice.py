"""Full-rank Z-lattices in Q^4 stored as (integer HNF rows, common denominator)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from flint import fmpq, fmpq_mat, fmpz_mat


def qmat(rows) -> fmpq_mat:
    """fmpq_mat from a list of rows of ints or Fractions."""
    rows = [list(r) for r in rows]
    return fmpq_mat(len(rows), len(rows[0]), [fmpq(Fraction(c).numerator, Fraction(c).denominator) for r in rows for c in r])


def from_qmat(m: fmpq_mat) -> list[list[Fraction]]:
    return [[Fraction(int(m[i, k].p), int(m[i, k].q)) for k in range(m.ncols())] for i in range(m.nrows())]


def _row_lcm(vectors) -> int:
    d = 1
    for v in vectors:
        for c in v:
            d = lcm(d, Fraction(c).denominator)
    return d


@dataclass(frozen=True)
class Lattice:
    """Z-span of the rows of hnf / denom; hnf is the row Hermite normal form."""

    hnf: tuple[tuple[int, ...], ...]
    denom: int

    @classmethod
    def from_generators(cls, vectors) -> "Lattice":
        vectors = list(vectors)
        d = _row_lcm(vectors)
        rows = [[int(Fraction(c) * d) for c in v] for v in vectors]
        h = fmpz_mat(rows).hnf()
        basis = [tuple(int(h[i, k]) for k in range(4)) for i in range(h.nrows())]
        basis = [r for r in basis if any(r)]
        if len(basis) != 4:
            raise ValueError(f"generators span a rank {len(basis)} lattice, expected 4")
        g = d
        for r in basis:
            for c in r:
                g = gcd(g, c)
        return cls(tuple(tuple(c // g for c in r) for r in basis), d // g)

    @property
    def basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(c, self.denom) for c in r) for r in self.hnf]

    def determinant(self) -> Fraction:
        """Covolume relative to Z^4."""
        det = 1
        for i in range(4):
            det *= self.hnf[i][i]
        return Fraction(abs(det), self.denom ** 4)

    def coordinates(self, x) -> list[Fraction]:
        m = qmat([[Fraction(c, self.denom) for c in r] for r in self.hnf])
        sol = m.transpose().solve(qmat([[c] for c in x]))
        return [row[0] for row in from_qmat(sol)]

    def contains(self, x) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def index_in(self, other: "Lattice") -> Fraction:
        """[other : self] when self is a sublattice of other."""
        return self.determinant() / other.determinant()

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.basis + other.basis)

    def scale(self, c) -> "Lattice":
        c = Fraction(c)
        return Lattice.from_generators([tuple(c * x for x in b) for b in self.basis])

    def dual(self) -> "Lattice":
        """Dual with respect to the standard dot product on Q^4."""
        m = qmat([[Fraction(c, self.denom) for c in r] for r in self.hnf])
        return Lattice.from_generators(from_qmat(m.inv().transpose()))

    def intersect(self, other: "Lattice") -> "Lattice":
        return (self.dual() + other.dual()).dual()

    def key(self) -> tuple:
        return (self.denom, self.hnf)
