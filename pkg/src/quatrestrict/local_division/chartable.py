"""Exact character tables via the class-algebra eigenvector method.

Central characters are computed as simultaneous eigenvectors of the class
multiplication matrices over a prime field F_P with P = 1 mod exp(G). Each
value is then lifted to Q(zeta_o) by recovering the multiplicities of the
eigenvalues of the represented element (o its order), which are integers in
[0, chi(1)] and hence determined by their residues.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np
from flint import nmod_mat, nmod_poly

from ..arith import is_prime, prime_factors
from ..cyclotomic import Cyclotomic
from .model import ConjugacyClasses, LocalQuaternionModel, power_map


@dataclass(frozen=True)
class IrreducibleCharacter:
    values: tuple[Cyclotomic, ...]  # one per conjugacy class
    residues: tuple[int, ...]  # the same values in F_P

    @property
    def degree(self) -> int:
        return int(self.values[0].to_rational())


@dataclass
class CharacterTable:
    model: LocalQuaternionModel
    classes: ConjugacyClasses
    characters: list[IrreducibleCharacter]
    prime: int
    exponent: int

    def __len__(self) -> int:
        return len(self.characters)

    def inner_product_mod_p(self, i: int, k: int) -> int:
        """|G| <chi_i, chi_k> reduced mod P."""
        P = self.prime
        a = self.characters[i].residues
        b = self.characters[k].residues
        inv = self.classes.inverse_class
        return sum(int(self.classes.sizes[s]) * a[s] * b[int(inv[s])] for s in range(len(a))) % P

    def inner_product_exact(self, i: int, k: int):
        a = self.characters[i].values
        b = self.characters[k].values
        total = Cyclotomic.zero()
        for s, size in enumerate(self.classes.sizes):
            total = total + a[s] * b[s].conj() * int(size)
        return total / self.model.order


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _choose_prime(exponent: int, lower: int) -> int:
    k = max(1, (lower - 1) // exponent + 1)
    while True:
        P = k * exponent + 1
        if P > lower and is_prime(P):
            return P
        k += 1


def _primitive_root(P: int) -> int:
    factors = prime_factors(P - 1)
    return next(g for g in range(2, P) if all(pow(g, (P - 1) // r, P) != 1 for r in factors))


def structure_constants(model: LocalQuaternionModel, classes: ConjugacyClasses) -> np.ndarray:
    """a[j, s, r] = #{x in C_j : x^-1 z_r in C_s} with z_r the class representatives."""
    k = len(classes)
    ids = model.all_ids
    inv_ids = model.inverse(ids)
    cls_x = classes.labels
    a = np.zeros((k, k, k), dtype=np.int64)
    for r, z in enumerate(classes.reps):
        cls_y = classes.labels[model.mul(inv_ids, np.full(model.order, z))]
        np.add.at(a[:, :, r], (cls_x, cls_y), 1)
    return a


def _split(space: nmod_mat, a_j: nmod_mat, P: int) -> list[nmod_mat]:
    k, d = space.nrows(), space.ncols()
    if d == 1:
        return [space]
    image = a_j * space
    # pivot rows of the basis give coordinates on the invariant subspace
    rref, _ = space.transpose().rref()
    pivots = []
    row = 0
    for col in range(k):
        if row < d and int(rref[row, col]) == 1 and all(int(rref[r, col]) == 0 for r in range(d) if r != row):
            pivots.append(col)
            row += 1
    bp = nmod_mat([[int(space[i, c]) for c in range(d)] for i in pivots], P)
    ip = nmod_mat([[int(image[i, c]) for c in range(d)] for i in pivots], P)
    rmat = bp.inv() * ip
    roots = rmat.charpoly().roots()
    if len(roots) == 1:
        return [space]
    pieces = []
    for lam, _ in roots:
        shifted = rmat - nmod_mat([[int(lam) if r == c else 0 for c in range(d)] for r in range(d)], P)
        null, nullity = shifted.nullspace()
        basis = nmod_mat([[int(null[r, c]) for c in range(nullity)] for r in range(d)], P)
        pieces.append(space * basis)
    if sum(p.ncols() for p in pieces) != d:
        raise ArithmeticError("class matrix is not diagonalizable on an invariant subspace")
    return pieces


def character_table(model: LocalQuaternionModel, classes: ConjugacyClasses) -> CharacterTable:
    order = model.order
    k = len(classes)
    exponent = 1
    for o in classes.orders:
        exponent = _lcm(exponent, int(o))
    P = _choose_prime(exponent, max(4 * order, 1000))
    a = structure_constants(model, classes)

    spaces = [nmod_mat([[int(r == c) for c in range(k)] for r in range(k)], P)]
    for j in range(1, k):
        if all(s.ncols() == 1 for s in spaces):
            break
        a_j = nmod_mat(a[j].tolist(), P)
        spaces = [piece for s in spaces for piece in _split(s, a_j, P)]
    if any(s.ncols() != 1 for s in spaces) or len(spaces) != k:
        raise ArithmeticError("class sums failed to separate the irreducible characters")

    sizes = [int(x) for x in classes.sizes]
    inv = [int(x) for x in classes.inverse_class]
    g = _primitive_root(P)
    z = pow(g, (P - 1) // exponent, P)
    max_order = int(max(classes.orders))
    powers = [power_map(model, classes, t) for t in range(max_order)]

    chars = []
    for s in spaces:
        v = [int(s[r, 0]) for r in range(k)]
        scale = pow(v[0], -1, P)
        omega = [(x * scale) % P for x in v]
        total = sum(omega[c] * omega[inv[c]] * pow(sizes[c], -1, P) for c in range(k)) % P
        deg_sq = (order * pow(total, -1, P)) % P
        roots = [int(r) for r, _ in nmod_poly([-deg_sq, 0, 1], P).roots()]
        degree = min(r if r <= P // 2 else P - r for r in roots)
        if degree * degree > order or (degree * degree) % P != deg_sq:
            raise ArithmeticError("degree recovery failed")
        residues = [(omega[c] * degree * pow(sizes[c], -1, P)) % P for c in range(k)]
        values = []
        for c in range(k):
            o = int(classes.orders[c])
            zeta = pow(z, exponent // o, P)
            inv_o = pow(o, -1, P)
            counts = []
            for r in range(o):
                acc = sum(residues[int(powers[t][c])] * pow(zeta, (-r * t) % o, P) for t in range(o))
                m = (acc * inv_o) % P
                if m > degree:
                    raise ArithmeticError("eigenvalue multiplicity out of range")
                counts.append(m)
            if sum(counts) != degree:
                raise ArithmeticError("eigenvalue multiplicities do not sum to the degree")
            values.append(Cyclotomic.from_exponent_counts(o, counts))
        chars.append(IrreducibleCharacter(tuple(values), tuple(residues)))
    chars.sort(key=lambda ch: (ch.degree, ch.residues))
    table = CharacterTable(model, classes, chars, P, exponent)
    if sum(ch.degree**2 for ch in chars) != order:
        raise ArithmeticError("sum of squared degrees differs from the group order")
    for i in range(len(chars)):
        for j in range(i, len(chars)):
            if table.inner_product_mod_p(i, j) != (order % P if i == j else 0):
                raise ArithmeticError("row orthogonality fails")
    return table
