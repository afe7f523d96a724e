"""Right ideal classes of an order by neighbour search, with exact isomorphism testing."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from ..arith import is_prime, legendre
from .algebra import GlobalAlgebraDesc
from .enumeration import count_by_value, vectors_of_value
from .lattice import Lattice
from .orders import OrderLattice, lattice_conj, lattice_nrd, lattice_product

MAX_CLASSES = 5000
_INVARIANT_BOUND = 3


class ClassSetTooLarge(RuntimeError):
    pass


def scaled_gram(alg: GlobalAlgebraDesc, lat: Lattice, scale: Fraction) -> list[list[int]]:
    """Even Gram matrix of x -> nrd(x) / scale on lat; raises if that form is not integral."""
    basis = lat.basis
    gram = []
    for u in basis:
        row = []
        for v in basis:
            val = Fraction(alg.bilinear(u, v)) / scale
            if val.denominator != 1:
                raise ValueError("nrd / scale is not integral on the lattice")
            row.append(int(val))
        gram.append(row)
    if any(gram[i][i] % 2 for i in range(4)):
        raise ValueError("nrd / scale is not integral on the lattice")
    return gram


def pair_lattice(alg: GlobalAlgebraDesc, left: Lattice, right: Lattice) -> Lattice:
    """left * conj(right), whose elements of norm nrd(left) nrd(right) give isomorphisms right -> left."""
    return lattice_product(alg, left, lattice_conj(alg, right))


def isomorphism(alg: GlobalAlgebraDesc, x: Lattice, nx: Fraction, y: Lattice, ny: Fraction):
    """An element beta with beta * y = x (scaled by nrd(y)), or None when the ideals are not isomorphic."""
    scale = nx * ny
    lat = pair_lattice(alg, x, y)
    found = vectors_of_value(scaled_gram(alg, lat, scale), 1)
    if not found:
        return None
    basis = lat.basis
    c = found[0]
    return tuple(sum(ci * b[k] for ci, b in zip(c, basis)) for k in range(4))


def unit_count(alg: GlobalAlgebraDesc, ideal: Lattice, norm: Fraction) -> int:
    """|O_l(I)^x|, counted as norm-one vectors of I conj(I) / nrd(I)."""
    left = pair_lattice(alg, ideal, ideal).scale(Fraction(1) / norm)
    return len(vectors_of_value(scaled_gram(alg, left, Fraction(1)), 1))


def ideal_invariant(alg: GlobalAlgebraDesc, ideal: Lattice, norm: Fraction) -> tuple[int, ...]:
    """Theta coefficients of the normalized norm form: equal for isomorphic right ideals."""
    return tuple(count_by_value(scaled_gram(alg, ideal, norm), _INVARIANT_BOUND))


def neighbours(alg: GlobalAlgebraDesc, order: Lattice, ideal: Lattice, norm: Fraction, ell: int) -> list[Lattice]:
    """The ell + 1 right O-ideals J with ell I subset J subset I and nrd(J) = ell nrd(I)."""
    basis = ideal.basis
    scaled = ideal.scale(ell)
    out: dict[tuple, Lattice] = {}
    for coeffs in itertools.product(range(ell), repeat=4):
        lead = next((c for c in coeffs if c), 0)
        if lead != 1:
            continue
        x = tuple(sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(4))
        if (Fraction(alg.nrd(x)) / norm) % ell != 0:
            continue
        sub = Lattice.from_generators([alg.mul(x, o) for o in order.basis] + scaled.basis)
        if sub.index_in(ideal) != ell * ell:
            continue
        out.setdefault(sub.key(), sub)
    found = [out[k] for k in sorted(out)]
    if len(found) != ell + 1:
        raise RuntimeError(f"found {len(found)} {ell}-neighbours, expected {ell + 1}")
    return found


def norm_class_count(alg: GlobalAlgebraDesc, order: Lattice) -> int:
    """Index of nrd(O_p^x) in Z_p^x: 1 if some unit has non-square norm mod p, else 2."""
    p = alg.p
    basis = order.basis
    coeff = [[int(Fraction(alg.nrd(basis[i])) if i == k else Fraction(alg.bilinear(basis[i], basis[k])))
              % p if i <= k else 0 for k in range(4)] for i in range(4)]
    for x in itertools.product(range(p), repeat=4):
        val = sum(coeff[i][k] * x[i] * x[k] for i in range(4) for k in range(i, 4)) % p
        if val and legendre(val, p) == -1:
            return 1
    return 2


def default_neighbour_prime(p: int, level: int, start: int = 3) -> int:
    ell = start
    while not is_prime(ell) or (2 * p * level) % ell == 0:
        ell += 1
    return ell


@dataclass
class ClassSet:
    """Representatives I_1 = O, ..., I_h of the right ideal classes of an order."""

    order: OrderLattice
    ideals: list[Lattice]
    norms: list[Fraction]
    units: list[int]
    neighbour_prime: int
    norm_classes: int

    @property
    def h(self) -> int:
        return len(self.ideals)

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, e) for e in self.units), Fraction(0))

    @property
    def alg(self) -> GlobalAlgebraDesc:
        return self.order.alg

    def find(self, ideal: Lattice, norm: Fraction | None = None) -> int:
        """Index of the class of a right O-ideal."""
        if norm is None:
            norm = lattice_nrd(self.alg, ideal)
        inv = ideal_invariant(self.alg, ideal, norm)
        for i, (rep, n) in enumerate(zip(self.ideals, self.norms)):
            if self.invariants[i] != inv:
                continue
            if isomorphism(self.alg, ideal, norm, rep, n) is not None:
                return i
        raise KeyError("ideal is not isomorphic to any representative")

    @property
    def invariants(self) -> list[tuple[int, ...]]:
        if "_invariants" not in self.__dict__:
            self._invariants = [ideal_invariant(self.alg, i, n) for i, n in zip(self.ideals, self.norms)]
        return self._invariants


def right_ideal_classes(order: OrderLattice, ell: int | None = None, max_classes: int = MAX_CLASSES) -> ClassSet:
    """Breadth-first search of the ell-neighbour graph starting from O, closed under isomorphism."""
    alg = order.alg
    p = alg.p
    if ell is None:
        ell = default_neighbour_prime(p, order.level)
    if (2 * p * order.level) % ell == 0 or not is_prime(ell):
        raise ValueError(f"neighbour prime {ell} must be a prime not dividing 2p * level")
    norm_classes = norm_class_count(alg, order.lattice)
    seeds = [(order.lattice, Fraction(1))]
    if norm_classes == 2 and legendre(ell, p) == 1:
        other = ell + 1
        while not (is_prime(other) and (2 * p * order.level) % other and legendre(other, p) == -1):
            other += 1
        seeds.append((neighbours(alg, order.lattice, order.lattice, Fraction(1), other)[0], Fraction(other)))

    reps: list[tuple[Lattice, Fraction]] = []
    invariants: list[tuple] = []

    def known(ideal, norm) -> bool:
        inv = ideal_invariant(alg, ideal, norm)
        for (rep, n), rinv in zip(reps, invariants):
            if rinv == inv and isomorphism(alg, ideal, norm, rep, n) is not None:
                return True
        reps.append((ideal, norm))
        invariants.append(inv)
        return False

    queue: deque = deque()
    for ideal, norm in seeds:
        if not known(ideal, norm):
            queue.append((ideal, norm))
    while queue:
        ideal, norm = queue.popleft()
        for nb in neighbours(alg, order.lattice, ideal, norm, ell):
            if not known(nb, norm * ell):
                if len(reps) > max_classes:
                    raise ClassSetTooLarge(f"more than {max_classes} ideal classes")
                queue.append((nb, norm * ell))

    units = [unit_count(alg, ideal, norm) for ideal, norm in reps]
    return ClassSet(order, [r for r, _ in reps], [n for _, n in reps], units, ell, norm_classes)
