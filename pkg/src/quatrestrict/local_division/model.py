"""Finite quotients G_n = B^x / F^x U^n of the local quaternion division algebra.

B = M + M j with M = Q_p(sqrt(u)) unramified, j^2 = -p and j b = sigma(b) j.
Every class of B^x / F^x has a representative (a + b j) j^w with a a unit of
o_M and w in {0, 1}; modulo U^n = 1 + P^n only a mod p^ceil(n/2) and
b mod p^floor(n/2) matter, and scaling by Z_p^x normalizes a to a0 = 1 (a0 a
unit) or a1 = 1 (p | a0). Elements are integer ids in range(|G_n|).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..arith import is_prime, smallest_nonresidue
from ..finite_abelian import ResidueRing, unit_group

DEFAULT_SIZE_BOUND = 2_000_000


def quotient_order(p: int, n: int) -> int:
    """|G_n| = 2 (q^2 - 1) q^(2(n-1)) / ((q - 1) q^(ceil(n/2) - 1))."""
    num = 2 * (p * p - 1) * p ** (2 * (n - 1))
    den = (p - 1) * p ** ((n + 1) // 2 - 1)
    return num // den


class LocalQuaternionModel:
    """Vectorized arithmetic on G_n; every method accepts and returns numpy id arrays."""

    def __init__(self, p: int, n: int, size_bound: int = DEFAULT_SIZE_BOUND):
        if p == 2:
            raise ValueError("p = 2 is not supported: the construction needs odd residue characteristic")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("level must be at least 1")
        order = quotient_order(p, n)
        if order > size_bound:
            raise ValueError(f"|G_{n}| = {order} exceeds the size bound {size_bound}")
        self.p, self.n = p, n
        self.u = smallest_nonresidue(p)
        self.prec_a = (n + 1) // 2
        self.prec_b = n // 2
        self.PA, self.PB = p**self.prec_a, p**self.prec_b
        self.Na = self.PA + self.PA // p
        self.order = 2 * self.Na * self.PB * self.PB
        if self.order != order:
            raise AssertionError("normalized representatives do not match the closed-form order")
        self._inv = np.zeros(self.PA, dtype=np.int64)
        for x in range(self.PA):
            if x % p:
                self._inv[x] = pow(x, -1, self.PA)

    # encoding -----------------------------------------------------------------
    def decode(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        b1 = ids % self.PB
        r = ids // self.PB
        b0 = r % self.PB
        r = r // self.PB
        ia = r % self.Na
        w = r // self.Na
        small = ia < self.PA
        a0 = np.where(small, 1, (ia - self.PA) * self.p)
        a1 = np.where(small, ia, 1)
        return w, a0, a1, b0, b1

    def encode(self, w, a0, a1, b0, b1):
        p, PA, PB = self.p, self.PA, self.PB
        w, a0, a1, b0, b1 = (np.asarray(x, dtype=np.int64) for x in (w, a0, a1, b0, b1))
        a0 = a0 % PA
        a1 = a1 % PA
        unit0 = (a0 % p) != 0
        if np.any(~unit0 & ((a1 % p) == 0)):
            raise ValueError("a must be a unit of o_M")
        t = np.where(unit0, self._inv[a0], self._inv[a1])
        a0n, a1n = (a0 * t) % PA, (a1 * t) % PA
        b0n, b1n = (b0 * t) % PB, (b1 * t) % PB
        ia = np.where(unit0, a1n, PA + a0n // p)
        return ((w % 2 * self.Na + ia) * PB + b0n) * PB + b1n

    def element(self, a, b=(0, 0), w: int = 0) -> int:
        """Id of (a0 + a1 sqrt(u) + (b0 + b1 sqrt(u)) j) j^w."""
        return int(self.encode(w, a[0], a[1], b[0], b[1]))

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def j(self) -> int:
        return self.element((1, 0), (0, 0), 1)

    @cached_property
    def all_ids(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    # group law ----------------------------------------------------------------
    def mul(self, x, y):
        w, a0, a1, b0, b1 = self.decode(x)
        w2, c0, c1, d0, d1 = self.decode(y)
        # (a + b j) j^w (c + d j) = (a + b j) (sigma^w(c) + sigma^w(d) j) j^w
        sg = np.where(w == 1, -1, 1)
        c1 = c1 * sg
        d1 = d1 * sg
        u, p = self.u, self.p
        ac0 = a0 * c0 + u * a1 * c1
        ac1 = a0 * c1 + a1 * c0
        bd0 = b0 * d0 - u * b1 * d1
        bd1 = -b0 * d1 + b1 * d0
        r0 = ac0 - p * bd0
        r1 = ac1 - p * bd1
        s0 = a0 * d0 + u * a1 * d1 + b0 * c0 - u * b1 * c1
        s1 = a0 * d1 + a1 * d0 - b0 * c1 + b1 * c0
        return self.encode((w + w2) % 2, r0 % self.PA, r1 % self.PA, s0 % self.PB, s1 % self.PB)

    def inverse(self, x):
        w, a0, a1, b0, b1 = self.decode(x)
        # up to central factors: (a + b j)^-1 ~ sigma(a) - b j and ((a + b j) j)^-1 ~ a - sigma(b) j ... j
        na1 = np.where(w == 0, -a1, a1)
        nb1 = np.where(w == 0, -b1, b1)
        return self.encode(w, a0, na1 % self.PA, (-b0) % self.PB, nb1 % self.PB)

    def power(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        result = np.zeros_like(x)
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def conjugate(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inverse(g))

    # filtration and reduced norm --------------------------------------------------
    def valuation_parity(self, x):
        return self.decode(x)[0]

    def in_unit_filtration(self, x, m: int):
        """Mask of elements lying in the image of U^m (U^0 = O_B^x)."""
        w, a0, a1, b0, b1 = self.decode(x)
        if m == 0:
            return w == 0
        pa, pb = self.p ** ((m + 1) // 2), self.p ** (m // 2)
        # a representative is t (1 + y) with t in Z_p^x: a1 = 0 mod pa, b = 0 mod pb after a0 = 1
        return (w == 0) & (a0 == 1) & (a1 % pa == 0) & (b0 % pb == 0) & (b1 % pb == 0)

    def unit_filtration(self, m: int) -> np.ndarray:
        ids = self.all_ids
        return ids[self.in_unit_filtration(ids, m)]

    def nrd_unit_residue(self, x, prec: int):
        """Nrd of the O_B^x-part of x modulo p^prec (defined up to squares of Z_p^x)."""
        w, a0, a1, b0, b1 = self.decode(x)
        mod = self.p**prec
        return (a0 * a0 - self.u * a1 * a1 + self.p * (b0 * b0 - self.u * b1 * b1)) % mod

    # generation -------------------------------------------------------------------
    @cached_property
    def generators(self) -> list[int]:
        p = self.p
        ring = ResidueRing(p, self.prec_a, self.u)
        gens = [self.j]
        gens += [self.element(g) for g in unit_group(ring).generators]
        for k in range(self.prec_b):
            gens += [self.element((1, 0), (p**k, 0)), self.element((1, 0), (0, p**k))]
        return gens

    def closure_size(self, gens) -> int:
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            new = np.concatenate([self.mul(frontier, np.full(frontier.size, g)) for g in gens])
            new = np.unique(new)
            new = new[~seen[new]]
            seen[new] = True
            frontier = new
        return int(seen.sum())


@dataclass
class ConjugacyClasses:
    labels: np.ndarray  # class index of every element id
    reps: np.ndarray  # smallest id of each class; class 0 is the identity
    sizes: np.ndarray
    inverse_class: np.ndarray
    orders: np.ndarray  # element order of each class
    power_maps: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.reps)

    def classes_of(self, ids) -> np.ndarray:
        return self.labels[np.asarray(ids, dtype=np.int64)]


def conjugacy_classes(model: LocalQuaternionModel) -> ConjugacyClasses:
    ids = model.all_ids
    n = model.order
    rows, cols = [], []
    for g in model.generators:
        rows.append(ids)
        cols.append(model.conjugate(np.full(n, g), ids))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    _, raw = connected_components(graph, directed=False)
    # relabel classes by their smallest element so numbering is canonical
    first = np.full(raw.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, raw, ids)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    labels = relabel[raw]
    reps = first[order]
    sizes = np.bincount(labels)
    inverse_class = labels[model.inverse(reps)]
    orders = _element_orders(model, reps)
    return ConjugacyClasses(labels, reps, sizes, inverse_class, orders)


def _element_orders(model: LocalQuaternionModel, reps: np.ndarray) -> np.ndarray:
    orders = np.zeros(len(reps), dtype=np.int64)
    x = reps.copy()
    k = 1
    pending = np.ones(len(reps), dtype=bool)
    while pending.any():
        done = pending & (x == 0)
        orders[done] = k
        pending &= ~done
        x = model.mul(x, reps)
        k += 1
        if k > model.order + 1:
            raise AssertionError("element order search did not terminate")
    return orders


def power_map(model: LocalQuaternionModel, classes: ConjugacyClasses, k: int) -> np.ndarray:
    if k not in classes.power_maps:
        classes.power_maps[k] = classes.labels[model.power(classes.reps, k)]
    return classes.power_maps[k]
