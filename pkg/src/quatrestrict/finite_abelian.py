"""Finite abelian groups, their characters, and residue-ring unit groups."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .cyclotomic import Cyclotomic

Matrix = list[list[int]]

MAX_TABLE_SIZE = 2**24


class NotAUnitError(ValueError):
    pass


class NonIntegralMultiplicity(ArithmeticError):
    pass


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    d = [list(map(int, row)) for row in m]
    rows = len(d)
    cols = len(d[0]) if rows else 0
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        d[dst] = [a + k * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + k * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if d[i][j] and (pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return u, d, v
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            if d[t][t] < 0:
                d[t] = [-x for x in d[t]]
                u[t] = [-x for x in u[t]]
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
    return u, d, v


def _inverse_unimodular(m: Matrix) -> Matrix:
    """Exact inverse of a unimodular integer matrix (Gauss-Jordan over Q)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = [[row[n + j] for j in range(n)] for row in a]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


class _RelationLattice:
    """Incremental row-echelon basis of an integer lattice, entries reduced mod a known exponent."""

    def __init__(self, rank: int, modulus: int):
        self.rank = rank
        self.modulus = modulus
        self.rows: dict[int, list[int]] = {}
        for i in range(rank):
            self.rows[i] = [modulus if j == i else 0 for j in range(rank)]

    def insert(self, vec: Sequence[int]) -> None:
        v = [x % self.modulus for x in vec]
        for c in range(self.rank):
            if v[c] == 0:
                continue
            b = self.rows.get(c)
            if b is None:
                self.rows[c] = v
                return
            g, s, t = _xgcd(b[c], v[c])
            bc, vc = b[c] // g, v[c] // g
            new_b = [s * x + t * y for x, y in zip(b, v)]
            v = [bc * y - vc * x for x, y in zip(b, v)]
            self.rows[c] = [new_b[j] if j <= c else new_b[j] % self.modulus for j in range(self.rank)]
            v = [x % self.modulus if j > c else x for j, x in enumerate(v)]

    def matrix(self) -> Matrix:
        return [self.rows[c] for c in sorted(self.rows)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Cokernel of an integer relation matrix, with optional concrete realization.

    Elements are exponent vectors reduced modulo the invariant factors. When the
    group was built from concrete generators, ``dlog`` maps a concrete element to
    its exponent vector and ``element`` maps back.
    """

    relation_matrix: tuple[tuple[int, ...], ...]
    invariants: tuple[int, ...]
    transform: tuple[tuple[int, ...], ...] = ()
    generators: tuple = ()
    _dlog: dict = field(default_factory=dict, repr=False, compare=False)
    _mul: Callable | None = field(default=None, repr=False, compare=False)
    _identity: Hashable = field(default=None, repr=False, compare=False)

    @classmethod
    def from_relations(cls, relations: Sequence[Sequence[int]]) -> "FiniteAbelianGroup":
        _, d, v = smith_normal_form(relations)
        diag = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
        ngens = len(relations[0]) if relations else 0
        diag += [0] * (ngens - len(diag))
        if any(x == 0 for x in diag):
            raise ValueError("relation matrix has infinite cokernel")
        keep = [i for i, x in enumerate(diag) if x != 1]
        return cls(
            relation_matrix=tuple(tuple(r) for r in relations),
            invariants=tuple(diag[i] for i in keep),
            transform=tuple(tuple(row[i] for i in keep) for row in v),
        )

    @classmethod
    def from_generators(
        cls,
        gens: Sequence[Hashable],
        mul: Callable[[Hashable, Hashable], Hashable],
        identity: Hashable,
        max_size: int = MAX_TABLE_SIZE,
    ) -> "FiniteAbelianGroup":
        """Build the abelian group generated by ``gens`` with an exhaustive dlog table."""
        r = len(gens)
        vec: dict = {identity: (0,) * r}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            vx = vec[x]
            for i, g in enumerate(gens):
                y = mul(x, g)
                if y not in vec:
                    if len(vec) >= max_size:
                        raise ValueError(f"group exceeds the table bound {max_size}")
                    vec[y] = vx[:i] + (vx[i] + 1,) + vx[i + 1 :]
                    queue.append(y)
        order = len(vec)
        lattice = _RelationLattice(r, order)
        for x, vx in vec.items():
            for i, g in enumerate(gens):
                y = mul(x, g)
                rel = [a - b for a, b in zip(vx, vec[y])]
                rel[i] += 1
                lattice.insert(rel)
        rel_matrix = lattice.matrix()
        _, d, v = smith_normal_form(rel_matrix)
        diag = [d[i][i] for i in range(r)]
        keep = [i for i, x in enumerate(diag) if x != 1]
        invariants = tuple(diag[i] for i in keep)
        prod_inv = 1
        for x in invariants:
            prod_inv *= x
        if prod_inv != order:
            raise AssertionError("relation lattice does not match enumerated order")
        dlog = {}
        for x, vx in vec.items():
            coords = tuple(
                sum(vx[k] * v[k][i] for k in range(r)) % diag[i] for i in keep
            )
            dlog[x] = coords
        basis = {tuple(int(j == i) for j in keep): None for i in keep}
        for x, c in dlog.items():
            if c in basis and basis[c] is None:
                basis[c] = x
        new_gens = list(basis.values())
        return cls(
            relation_matrix=tuple(tuple(row) for row in rel_matrix),
            invariants=invariants,
            transform=tuple(tuple(row[i] for i in keep) for row in v),
            generators=tuple(new_gens),
            _dlog=dlog,
            _mul=mul,
            _identity=identity,
        )

    # basic structure ------------------------------------------------------
    @property
    def order(self) -> int:
        n = 1
        for d in self.invariants:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(c % d for c, d in zip(coords, self.invariants))

    def coordinates(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.invariants))

    def dlog(self, x: Hashable) -> tuple[int, ...]:
        try:
            return self._dlog[x]
        except KeyError:
            raise NotAUnitError(f"{x!r} is not a unit of this group") from None

    def elements(self) -> list:
        return list(self._dlog)

    def element(self, coords: Sequence[int]):
        if self._mul is None:
            raise ValueError("group has no concrete realization")
        x = self._identity
        for g, c, d in zip(self.generators, coords, self.invariants):
            x = self._mul(x, self.power(g, c % d))
        return x

    def power(self, x, k: int):
        if self._mul is None:
            raise ValueError("group has no concrete realization")
        result, base = self._identity, x
        while k:
            if k & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            k >>= 1
        return result

    def subgroup(self, gens: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
        """Exponent vectors of the subgroup generated by the given vectors."""
        zero = (0,) * self.rank
        seen = {zero}
        queue = deque([zero])
        gens = [self.reduce(g) for g in gens]
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.reduce([a + b for a, b in zip(x, g)])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen


@dataclass(frozen=True)
class CharacterVec:
    """chi(e) = exp(2 pi i * sum_i c_i e_i / d_i)."""

    group: FiniteAbelianGroup
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", self.group.reduce(self.exps))

    @property
    def conductor(self) -> int:
        """Cyclotomic conductor used for values (the group exponent)."""
        return self.group.exponent

    def exponent_at(self, coords: Sequence[int]) -> int:
        n = self.group.exponent
        return sum(c * e * (n // d) for c, e, d in zip(self.exps, coords, self.group.invariants)) % n

    def __call__(self, coords: Sequence[int]) -> Cyclotomic:
        return Cyclotomic.root(self.group.exponent, self.exponent_at(coords))

    def at(self, x: Hashable) -> Cyclotomic:
        return self(self.group.dlog(x))

    @property
    def order(self) -> int:
        o = 1
        for c, d in zip(self.exps, self.group.invariants):
            k = d // gcd(c, d)
            o = o * k // gcd(o, k)
        return o

    def is_trivial(self) -> bool:
        return not any(self.exps)

    def __mul__(self, other: "CharacterVec") -> "CharacterVec":
        return CharacterVec(self.group, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def inverse(self) -> "CharacterVec":
        return CharacterVec(self.group, tuple(-a for a in self.exps))


def characters(group: FiniteAbelianGroup) -> Iterator[CharacterVec]:
    for exps in group.coordinates():
        yield CharacterVec(group, exps)


def subgroup_sum(chi: Callable[[Hashable], Cyclotomic], subgroup: Iterable[Hashable]) -> Fraction:
    """(1/|H|) * sum_{h in H} chi(h) as an exact rational."""
    total = Cyclotomic.zero()
    size = 0
    for h in subgroup:
        total = total + chi(h)
        size += 1
    if size == 0:
        raise ValueError("empty subgroup")
    if not total.is_rational():
        raise NonIntegralMultiplicity("character average over the subgroup is not rational")
    return total.to_rational() / size


# -- residue rings ------------------------------------------------------------


@dataclass(frozen=True)
class ResidueRing:
    """Z/p^m, or o_E / p_E^m for E = Q_p(sqrt(delta)) with elements a + b*sqrt(delta).

    For ramified E (p | delta) the ideal p_E^m fixes a mod p^ceil(m/2) and b mod
    p^floor(m/2); for unramified E it fixes both mod p^m.
    """

    p: int
    m: int
    delta: int | None = None

    @property
    def is_base(self) -> bool:
        return self.delta is None

    @property
    def ramified(self) -> bool:
        return self.delta is not None and self.delta % self.p == 0

    @property
    def moduli(self) -> tuple[int, int]:
        p, m = self.p, self.m
        if self.is_base:
            return p**m, 1
        if self.ramified:
            return p ** ((m + 1) // 2), p ** (m // 2)
        return p**m, p**m

    def reduce(self, x):
        ma, mb = self.moduli
        if self.is_base:
            return x % ma
        return (x[0] % ma, x[1] % mb)

    def one(self):
        return 1 if self.is_base else (1, 0)

    def mul(self, x, y):
        if self.is_base:
            return (x * y) % self.moduli[0]
        a, b = x
        c, d = y
        return self.reduce((a * c + self.delta * b * d, a * d + b * c))

    def is_unit(self, x) -> bool:
        p = self.p
        if self.is_base:
            return x % p != 0
        a, b = x
        if self.ramified:
            return a % p != 0
        return (a * a - self.delta * b * b) % p != 0

    def elements(self) -> Iterator:
        ma, mb = self.moduli
        if self.is_base:
            return iter(range(ma))
        return product(range(ma), range(mb))

    def unit_count(self) -> int:
        p, m = self.p, self.m
        if self.is_base:
            return (p - 1) * p ** (m - 1)
        if self.ramified:
            return (p - 1) * p ** (m - 1)
        return (p * p - 1) * p ** (2 * (m - 1))


def _residue_unit_generators(ring: ResidueRing) -> list:
    p, m = ring.p, ring.m
    g = next(x for x in range(2, p + 1) if all(pow(x, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1))) if p > 2 else 1
    if ring.is_base:
        return [ring.reduce(g)] + ([ring.reduce(1 + p)] if m > 1 else [])
    if ring.ramified:
        gens = [ring.reduce((g, 0))]
        for k in range(1, m):
            # 1 + p^(k//2) * omega^(k%2), with omega = sqrt(delta) a uniformizer
            if k % 2:
                gens.append(ring.reduce((1, p ** (k // 2))))
            else:
                gens.append(ring.reduce((1 + p ** (k // 2), 0)))
        return gens
    order = p * p - 1
    h = next(
        (a, b)
        for a in range(p)
        for b in range(1, p)
        if ring.is_unit((a, b)) and _mult_order(ring, (a, b), p) == order
    )
    gens = [ring.reduce(h)]
    for k in range(1, m):
        gens += [ring.reduce((1 + p**k, 0)), ring.reduce((1, p**k))]
    return gens


def _mult_order(ring: ResidueRing, x, p: int) -> int:
    base = ResidueRing(p, 1, ring.delta)
    y = base.reduce(x)
    one = base.one()
    k, z = 1, y
    while z != one:
        z = base.mul(z, y)
        k += 1
    return k


def _prime_factors(n: int) -> list[int]:
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


def unit_group(ring: ResidueRing, max_size: int = MAX_TABLE_SIZE) -> FiniteAbelianGroup:
    """(ring)^x with a total discrete-log table."""
    if ring.p == 2:
        raise ValueError("odd residue characteristic required")
    if ring.m < 1:
        raise ValueError("precision must be at least 1")
    if ring.unit_count() > max_size:
        raise ValueError(f"unit group of order {ring.unit_count()} exceeds the table bound {max_size}")
    group = FiniteAbelianGroup.from_generators(_residue_unit_generators(ring), ring.mul, ring.one(), max_size)
    if group.order != ring.unit_count():
        raise AssertionError("unit generators do not generate the full unit group")
    return group
