"""Old and new subspaces along the ladder of special orders, eigensystems, and the global checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import fmpq_mat

from .arith import is_prime
from .classical import classical_dims
from .linalg import charpoly, nullspace, poly_eval_matrix, poly_key, rank, restrict, span_basis
from .quaternion.brandt import brandt_matrix, eisenstein_basis, representation_counts
from .quaternion.classes import ClassSet, right_ideal_classes
from .quaternion.lattice import from_qmat, qmat
from .quaternion.orders import EXTENSIONS, OrderLattice, lattice_nrd, lattice_product, special_order

HECKE_WINDOW = 20


class EigensystemCollision(RuntimeError):
    pass


class MissingSuperorder(LookupError):
    pass


def hecke_primes(p: int, window: int = HECKE_WINDOW) -> list[int]:
    return [ell for ell in range(2, window + 1) if is_prime(ell) and ell != p]


def _weights(primes: list[int]) -> tuple[dict[int, int], dict[int, int]]:
    first = {ell: k + 1 for k, ell in enumerate(primes)}
    second = {ell: (k + 1) ** 2 + 3 * k + 7 for k, ell in enumerate(primes)}
    return first, second


class ComputeStore:
    """Produces class sets, representation counts and degeneracy maps, memoized in memory.

    Subclasses override the load_* hooks to persist results.
    """

    def __init__(self, window: int = HECKE_WINDOW):
        self.window = window
        self._classes: dict = {}
        self._counts: dict = {}
        self._maps: dict = {}

    def class_set(self, order: OrderLattice) -> ClassSet:
        key = order.lattice.key()
        if key not in self._classes:
            self._classes[key] = self.load_class_set(order)
        return self._classes[key]

    def counts(self, order: OrderLattice) -> list[list[list[int]]]:
        key = order.lattice.key()
        if key not in self._counts:
            self._counts[key] = self.load_counts(order)
        return self._counts[key]

    def brandt(self, order: OrderLattice, ell: int) -> list[list[Fraction]]:
        return brandt_matrix(self.class_set(order), ell, self.counts(order)).matrix

    def degeneracy(self, small: OrderLattice, big: OrderLattice) -> list[int]:
        key = (small.lattice.key(), big.lattice.key())
        if key not in self._maps:
            self._maps[key] = self.load_degeneracy(small, big)
        return self._maps[key]

    def load_class_set(self, order: OrderLattice) -> ClassSet:
        return right_ideal_classes(order)

    def load_counts(self, order: OrderLattice) -> list[list[list[int]]]:
        return representation_counts(self.class_set(order), self.window)

    def load_degeneracy(self, small: OrderLattice, big: OrderLattice) -> list[int]:
        return class_map(self.class_set(small), self.class_set(big))

    def prefetch(self, orders: list[OrderLattice], threads: int = 1) -> None:
        """Compute class sets and counts for several orders, optionally in worker processes."""
        todo = [o for o in orders if o.lattice.key() not in self._counts]
        if threads <= 1 or len(todo) <= 1:
            for o in todo:
                self.counts(o)
            return
        from concurrent.futures import ProcessPoolExecutor

        missing = [o for o in todo if not self.has_cached(o)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_class_data, missing, [self.window] * len(missing)))
        for order, (cs, table) in zip(missing, results):
            self.store_class_data(order, cs, table)
        for o in todo:
            self.counts(o)

    def has_cached(self, order: OrderLattice) -> bool:
        return order.lattice.key() in self._counts

    def store_class_data(self, order: OrderLattice, cs: ClassSet, table) -> None:
        self._classes[order.lattice.key()] = cs
        self._counts[order.lattice.key()] = table


def _class_data(order: OrderLattice, window: int):
    cs = right_ideal_classes(order)
    return cs, representation_counts(cs, window)


def class_map(small: ClassSet, big: ClassSet) -> list[int]:
    """pi(i) = class of I_i * O' in Cl(O')."""
    if not big.order.contains(small.order):
        raise ValueError(f"{small.order.name()} is not contained in {big.order.name()}")
    alg = small.alg
    out = []
    for ideal in small.ideals:
        ext = lattice_product(alg, ideal, big.order.lattice)
        out.append(big.find(ext, lattice_nrd(alg, ext)))
    return out


def degeneracy_map(small: ClassSet, big: ClassSet) -> list[list[Fraction]]:
    """Matrix of the pullback phi' -> phi' o pi from functions on Cl(O') to functions on Cl(O)."""
    pi = class_map(small, big)
    return [[Fraction(int(pi[i] == k)) for k in range(big.h)] for i in range(small.h)]


def pullback(pi: list[int], vec: list[Fraction]) -> list[Fraction]:
    return [vec[k] for k in pi]


def weighted_rows(vectors: list[list[Fraction]], units: list[int]) -> list[list[Fraction]]:
    return [[c / e for c, e in zip(v, units)] for v in vectors]


@dataclass
class LadderMember:
    order: OrderLattice
    names: tuple[str, ...]

    @property
    def name(self) -> str:
        return self.names[0]

    @property
    def exponent(self) -> int:
        return self.order.level_exponent


@dataclass
class OrderLadder:
    """Special orders O_r(E) of realized level at most p^r_max, deduplicated as lattices."""

    p: int
    r_max: int
    members: list[LadderMember]

    @classmethod
    def build(cls, p: int, r_max: int) -> "OrderLadder":
        found: dict[tuple, LadderMember] = {}
        order_of: list[tuple] = []
        for r in range(1, r_max + 1):
            for ext in EXTENSIONS:
                order = special_order(p, ext, r)
                if order.level_exponent > r_max:
                    continue
                name = "O_max" if r == 1 else f"O_{r}({ext})"
                key = order.lattice.key()
                if key in found:
                    if name not in found[key].names:
                        found[key].names += (name,)
                    continue
                found[key] = LadderMember(order, (name,))
                order_of.append(key)
        members = [found[k] for k in order_of]
        return cls(p, r_max, members)

    def member(self, name: str) -> LadderMember:
        for m in self.members:
            if name in m.names:
                return m
        raise MissingSuperorder(f"{name} is not in the ladder")

    def superorders(self, member: LadderMember) -> list[LadderMember]:
        """Members properly containing the given one."""
        return [m for m in self.members if m is not member and m.order.contains(member.order)]

    def check_partial_order(self) -> bool:
        ms = self.members
        for a in ms:
            for b in ms:
                if a is not b and a.order.contains(b.order) and b.order.contains(a.order):
                    return False
        top = ms[0]
        return all(top.order.contains(m.order) for m in ms)


@dataclass
class SpaceReport:
    name: str
    aliases: tuple[str, ...]
    level: int
    ext: str
    r: int
    h: int
    units: list[int]
    dim_eis: int
    dim_cusp: int
    dim_old: int
    dim_new: int
    old_in_cusp: bool
    eigensystems: list[tuple[str, int]]
    cusp_basis: list[list[Fraction]] = field(repr=False, default_factory=list)
    new_basis: list[list[Fraction]] = field(repr=False, default_factory=list)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "aliases": list(self.aliases),
            "level": self.level,
            "ext": self.ext,
            "r": self.r,
            "h": self.h,
            "units": self.units,
            "dim_eis": self.dim_eis,
            "dim_cusp": self.dim_cusp,
            "dim_old": self.dim_old,
            "dim_new": self.dim_new,
            "old_in_cusp": self.old_in_cusp,
            "eigensystems": [{"poly": f, "mult": m} for f, m in self.eigensystems],
        }


def eigensystems(operators: dict[int, list[list[Fraction]]], basis: list[list[Fraction]]) -> list[tuple[str, int]]:
    """Irreducible factors (with multiplicity) of the characteristic polynomial of sum c_l T_l on the span.

    A second weight vector must act on each generalized eigenspace through a single irreducible factor.
    """
    if not basis:
        return []
    primes = sorted(operators)
    first, second = _weights(primes)
    restricted = {ell: restrict(operators[ell], basis) for ell in primes}
    d = len(basis)

    def combo(weights):
        m = fmpq_mat(d, d)
        for ell in primes:
            m += qmat(restricted[ell]) * weights[ell]
        return m

    a, b = combo(first), combo(second)
    _, factors = a.charpoly().factor()
    out = []
    for g, mult in factors:
        kernel_rows = from_qmat(poly_eval_matrix(g ** mult, a))
        sub = nullspace(kernel_rows, d)
        if len(sub) != g.degree() * mult:
            raise EigensystemCollision("generalized eigenspace has unexpected dimension")
        sub_b = restrict(from_qmat(b), sub)
        _, sub_factors = charpoly(sub_b).factor()
        if len(sub_factors) != 1 or sub_factors[0][0].degree() != g.degree():
            raise EigensystemCollision(
                f"factor {poly_key(g)} splits under a second Hecke combination; enlarge the Hecke window"
            )
        out.append((poly_key(g), int(mult)))
    out.sort()
    return out


def _order_label(member: LadderMember) -> tuple[str, int]:
    name = member.name
    if name == "O_max":
        return "max", 1
    r, ext = name[2:].split("(")
    return ext.rstrip(")"), int(r)


class Decomposition:
    """New and old spaces for every ladder member."""

    def __init__(self, ladder: OrderLadder, store: ComputeStore | None = None, window: int = HECKE_WINDOW):
        self.ladder = ladder
        self.store = store or ComputeStore(window)
        self.primes = hecke_primes(ladder.p, window)
        if self.store.window < max(self.primes, default=0):
            raise ValueError("store window is smaller than the Hecke window")
        self.reports: dict[str, SpaceReport] = {}

    def operators(self, member: LadderMember) -> dict[int, list[list[Fraction]]]:
        return {ell: self.store.brandt(member.order, ell) for ell in self.primes}

    def report(self, member: LadderMember) -> SpaceReport:
        if member.name in self.reports:
            return self.reports[member.name]
        cs = self.store.class_set(member.order)
        units = list(cs.units)
        eis = eisenstein_basis(cs)
        cusp = nullspace(weighted_rows(eis, units), cs.h)
        old_vectors = []
        for sup in self.ladder.superorders(member):
            sup_report = self.report(sup)
            pi = self.store.degeneracy(member.order, sup.order)
            old_vectors += [pullback(pi, v) for v in sup_report.cusp_basis]
        old = span_basis(old_vectors) if old_vectors else []
        new = nullspace(weighted_rows(eis + old, units), cs.h)
        old_in_cusp = all(
            sum((x * y / e for x, y, e in zip(v, w, units)), Fraction(0)) == 0 for v in old for w in eis
        )
        systems = eigensystems(self.operators(member), new)
        ext, r = _order_label(member)
        rep = SpaceReport(
            name=member.name,
            aliases=member.names[1:],
            level=member.order.level,
            ext=ext,
            r=r,
            h=cs.h,
            units=units,
            dim_eis=len(eis),
            dim_cusp=len(cusp),
            dim_old=len(old),
            dim_new=len(new),
            old_in_cusp=old_in_cusp,
            eigensystems=systems,
            cusp_basis=cusp,
            new_basis=new,
        )
        self.reports[member.name] = rep
        return rep

    def all_reports(self) -> list[SpaceReport]:
        return [self.report(m) for m in self.ladder.members]


def new_space(ladder: OrderLadder, name: str, store: ComputeStore | None = None) -> SpaceReport:
    return Decomposition(ladder, store).report(ladder.member(name))


def _check(name: str, passed: bool, lhs, rhs, detail: str = "") -> dict:
    out = {"name": name, "pass": bool(passed), "lhs": lhs, "rhs": rhs}
    if detail:
        out["detail"] = detail
    return out


def _halved(systems: list[tuple[str, int]]) -> list[tuple[str, int]] | None:
    if any(m % 2 for _, m in systems):
        return None
    return [(f, m // 2) for f, m in systems]


def _merge(*lists: list[tuple[str, int]]) -> list[tuple[str, int]]:
    acc: dict[str, int] = {}
    for systems in lists:
        for f, m in systems:
            acc[f] = acc.get(f, 0) + m
    return sorted(acc.items())


def theorem_checks(dec: Decomposition) -> list[dict]:
    ladder = dec.ladder
    p = ladder.p
    reports = {m.name: dec.report(m) for m in ladder.members}
    by_alias = {}
    for m in ladder.members:
        for n in m.names:
            by_alias[n] = reports[m.name]
    checks = []

    top = reports["O_max"]
    classical_new = classical_dims(p, 2)[1]
    checks.append(_check("bottom_rung", top.dim_new == classical_new, top.dim_new, classical_new,
                         f"dim S_0^new(O_max) vs dim S_2^new(Gamma_0({p}))"))

    for r in range(3, ladder.r_max + 1, 2):
        k, l, m = (by_alias.get(f"O_{r}({e})") for e in EXTENSIONS)
        for rep in (k, l):
            if rep is None or rep.level != p ** r:
                continue
            odd = [(f, mult) for f, mult in rep.eigensystems if mult % 2]
            checks.append(_check(f"odd_level_evenness[{rep.name}]", not odd, rep.eigensystems, "all even",
                                 "" if not odd else f"odd multiplicities: {odd}"))
        if m is not None and m.level == p ** r:
            repeated = [(f, mult) for f, mult in m.eigensystems if mult != 1]
            checks.append(_check(f"unramified_multiplicity_one[{m.name}]", not repeated, m.eigensystems, "all 1"))
        if k is None or l is None or m is None or m.level != p ** r:
            continue
        checks.append(_check(f"kl_m_dimension[p^{r}]", k.dim_new + l.dim_new == 2 * m.dim_new,
                             k.dim_new + l.dim_new, 2 * m.dim_new))
        shared = sorted(set(f for f, _ in k.eigensystems) & set(f for f, _ in l.eigensystems))
        checks.append(_check(f"kl_disjoint[p^{r}]", not shared, shared, []))
        hk, hl = _halved(k.eigensystems), _halved(l.eigensystems)
        union = _merge(hk, hl) if hk is not None and hl is not None else None
        checks.append(_check(f"kl_union_is_m[p^{r}]", union == m.eigensystems, union, m.eigensystems))

    for r in range(2, ladder.r_max + 1, 2):
        k, l = by_alias.get(f"O_{r}(K)"), by_alias.get(f"O_{r}(L)")
        if k is None or l is None:
            continue
        even = all(mult % 2 == 0 for _, mult in k.eigensystems + l.eigensystems)
        same = k.eigensystems == l.eigensystems
        checks.append(_check(f"even_level_agreement[p^{r}]", same and even, k.eigensystems, l.eigensystems,
                             f"coincide={same}, even={even}"))

    for member in ladder.members:
        rep = reports[member.name]
        supers = [reports[s.name].dim_new for s in ladder.superorders(member)]
        total = rep.dim_new + sum(supers)
        checks.append(_check(f"ladder_additivity[{rep.name}]", total == rep.dim_cusp, rep.dim_cusp, total))
        checks.append(_check(f"old_new_split[{rep.name}]",
                             rep.old_in_cusp and rep.dim_old + rep.dim_new == rep.dim_cusp,
                             rep.dim_old + rep.dim_new, rep.dim_cusp))
    return checks


def verify_theorems(p: int, r_max: int, store: ComputeStore | None = None, window: int = HECKE_WINDOW,
                    threads: int = 1) -> dict:
    ladder = OrderLadder.build(p, r_max)
    dec = Decomposition(ladder, store, window)
    dec.store.prefetch([m.order for m in ladder.members], threads)
    checks = theorem_checks(dec)
    classical = {str(p ** m): list(classical_dims(p ** m, 2)) for m in range(1, r_max + 1)}
    return {
        "p": p,
        "max_level": p ** r_max,
        "hecke_primes": dec.primes,
        "orders": [dec.report(m).as_dict() for m in ladder.members],
        "classical_weight2": classical,
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }
