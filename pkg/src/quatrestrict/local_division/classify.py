"""Conductors, inducing extensions and torus-invariant dimensions of irreducibles of G_n.

Conductor convention: c(pi) = 1 + min{m >= 0 : pi trivial on U^m}, so that
level-zero representations have conductor 2, conductor c representations
factor through G_{c-1}, and odd conductor corresponds to induction from a
ramified quadratic extension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from ..arith import legendre
from ..cyclotomic import Cyclotomic
from ..finite_abelian import NonIntegralMultiplicity
from .chartable import CharacterTable, IrreducibleCharacter, character_table
from .model import DEFAULT_SIZE_BOUND, ConjugacyClasses, LocalQuaternionModel, conjugacy_classes

ONE_DIMENSIONAL = "one-dimensional"
NON_MINIMAL = "non-minimal"
RAMIFIED = ("K", "L")
EXTENSIONS = ("K", "L", "M")


class UnclassifiedRepresentation(ValueError):
    pass


@dataclass(frozen=True)
class IrreducibleCharacterRecord:
    index: int
    degree: int
    conductor: int
    label: str  # K, L, M, one-dimensional or non-minimal
    minimal: bool
    invariants: dict  # E -> dim pi^{o_E^x}
    predicted: dict  # E -> predicted dimension

    @property
    def matches(self) -> bool:
        return self.invariants == self.predicted

    def as_row(self) -> dict:
        return {
            "conductor": self.conductor,
            "dim": self.degree,
            "label": self.label,
            "minimal": self.minimal,
            "invariant": dict(self.invariants),
            "predicted": dict(self.predicted),
            "match": self.matches,
        }


def predicted_dimension(label: str, conductor: int, minimal: bool, dim: int, ext: str, q: int,
                        trivial_on_norms: bool | None = None) -> int:
    """Expected dim pi^{o_E^x} from the inducing data and q mod 4."""
    if dim == 1:
        if trivial_on_norms is None:
            raise ValueError("one-dimensional prediction needs the norm-triviality test")
        return int(trivial_on_norms)
    if not minimal:
        return 0
    if conductor % 2 == 0:
        return 1 if ext == "M" else 2
    if ext == "M":
        return 1
    same = label == ext
    if (same and q % 4 == 3) or (not same and q % 4 == 1):
        return 2
    return 0


class QuotientAnalysis:
    """Character table of G_n together with the embedded torus subgroups."""

    def __init__(self, p: int, n: int, size_bound: int = DEFAULT_SIZE_BOUND):
        self.model = LocalQuaternionModel(p, n, size_bound)
        self.classes: ConjugacyClasses = conjugacy_classes(self.model)
        self.table: CharacterTable = character_table(self.model, self.classes)

    @property
    def p(self) -> int:
        return self.model.p

    @property
    def n(self) -> int:
        return self.model.n

    # embedded subgroups ------------------------------------------------------------
    @cached_property
    def torus_coefficient(self) -> dict:
        """a_E in o_M with uniformizer a_E j of E (a_K = 1, N(a_L) a non-residue)."""
        m = self.model
        p = self.p
        a_l = next(
            (x, y) for x in range(p) for y in range(p) if legendre(x * x - m.u * y * y, p) == -1
        )
        return {"K": (1, 0), "L": a_l}

    def uniformizer(self, ext: str) -> int | None:
        if ext == "M":
            return None
        a = self.torus_coefficient[ext]
        return self.model.element(a, (0, 0), 1)

    @lru_cache(maxsize=None)
    def unit_image(self, ext: str) -> np.ndarray:
        """Image of o_E^x in G_n as a sorted id array."""
        m = self.model
        if ext == "M":
            a0, a1 = np.meshgrid(np.arange(m.PA), np.arange(m.PA), indexing="ij")
            a0, a1 = a0.ravel(), a1.ravel()
            keep = ((a0 * a0 - m.u * a1 * a1) % self.p) != 0
            ids = m.encode(0, a0[keep], a1[keep], 0, 0)
            return np.unique(ids)
        c0, c1 = self.torus_coefficient[ext]
        alpha, beta = np.meshgrid(np.arange(m.PA), np.arange(max(m.PB, 1)), indexing="ij")
        alpha, beta = alpha.ravel(), beta.ravel()
        keep = alpha % self.p != 0
        alpha, beta = alpha[keep], beta[keep]
        # alpha + beta a_E j: b = beta * a_E
        ids = m.encode(0, alpha, 0, beta * c0, beta * c1)
        return np.unique(ids)

    @lru_cache(maxsize=None)
    def torus_image(self, ext: str) -> np.ndarray:
        """Image of E^x."""
        h = self.unit_image(ext)
        if ext == "M":
            return h
        pi = self.uniformizer(ext)
        return np.unique(np.concatenate([h, self.model.mul(np.full(h.size, pi), h)]))

    @lru_cache(maxsize=None)
    def torus_unit_image(self, ext: str, m: int) -> np.ndarray:
        """Image of E^x U^m."""
        e = self.torus_image(ext)
        u = self.model.unit_filtration(m)
        prod = self.model.mul(np.repeat(e, u.size), np.tile(u, e.size))
        return np.unique(prod)

    def class_counts(self, ids: np.ndarray) -> np.ndarray:
        return np.bincount(self.classes.labels[ids], minlength=len(self.classes))

    @lru_cache(maxsize=None)
    def _filtration_classes(self, m: int) -> frozenset:
        return frozenset(np.unique(self.classes.labels[self.model.unit_filtration(m)]).tolist())

    # per-character data ----------------------------------------------------------
    def class_sum(self, chi: IrreducibleCharacter, counts: np.ndarray) -> Cyclotomic:
        total = Cyclotomic.zero()
        for c in np.nonzero(counts)[0]:
            total = total + chi.values[int(c)] * int(counts[c])
        return total

    def average(self, chi: IrreducibleCharacter, ids: np.ndarray) -> Fraction:
        total = self.class_sum(chi, self.class_counts(ids))
        if not total.is_rational():
            raise NonIntegralMultiplicity("character average over the subgroup is not rational")
        return total.to_rational() / ids.size

    def conductor(self, chi: IrreducibleCharacter) -> int:
        deg = chi.degree
        for m in range(self.n + 1):
            if all(chi.values[c] == deg for c in self._filtration_classes(m)):
                return m + 1
        raise AssertionError("a character of G_n must be trivial on U^n")

    def top_layer_scalar(self, chi: IrreducibleCharacter, conductor: int) -> bool:
        """True when pi acts by scalars on U^(c-2), the signature of a twist of lower conductor."""
        m = conductor - 2
        if m < 0:
            return False
        d2 = chi.degree**2
        return all((chi.values[c] * chi.values[c].conj()) == d2 for c in self._filtration_classes(m))

    def support_label(self, chi: IrreducibleCharacter, conductor: int) -> str:
        m = (conductor - 1) // 2
        fits = []
        for ext in RAMIFIED:
            inside = set(np.unique(self.classes.labels[self.torus_unit_image(ext, m)]).tolist())
            if all(chi.values[c].is_zero() for c in range(len(self.classes)) if c not in inside):
                fits.append(ext)
        if len(fits) != 1:
            raise UnclassifiedRepresentation(f"support matches {fits or 'no'} ramified torus")
        return fits[0]

    def classify(self, chi: IrreducibleCharacter) -> tuple[int, str, bool]:
        """(conductor, label, minimal)."""
        c = self.conductor(chi)
        if chi.degree == 1:
            return c, ONE_DIMENSIONAL, True
        if self.top_layer_scalar(chi, c):
            return c, NON_MINIMAL, False
        if c % 2:
            return c, self.support_label(chi, c), True
        return c, "M", True

    def invariant_dimension(self, chi: IrreducibleCharacter, ext: str) -> int:
        value = self.average(chi, self.unit_image(ext))
        if value.denominator != 1 or value < 0:
            raise NonIntegralMultiplicity(f"invariant dimension {value} is not a non-negative integer")
        return int(value)

    def sign_split(self, chi: IrreducibleCharacter, ext: str) -> tuple[int, int]:
        """(dim Hom_{E^x}(pi, 1), dim Hom_{E^x}(pi, nu_E)) for ramified E."""
        h = self.unit_image(ext)
        pi = self.uniformizer(ext)
        s0 = self.class_sum(chi, self.class_counts(h))
        s1 = self.class_sum(chi, self.class_counts(self.model.mul(np.full(h.size, pi), h)))
        out = []
        for total in (s0 + s1, s0 - s1):
            if not total.is_rational():
                raise NonIntegralMultiplicity("torus multiplicity is not rational")
            v = total.to_rational() / (2 * h.size)
            if v.denominator != 1 or v < 0:
                raise NonIntegralMultiplicity(f"torus multiplicity {v} is not a non-negative integer")
            out.append(int(v))
        return out[0], out[1]

    def trivial_on_norms(self, chi: IrreducibleCharacter, ext: str) -> bool:
        """For chi = mu o Nrd: is mu trivial on N(o_E^x)?

        N(o_M^x) is all units and N(o_E^x) is the unit squares for ramified E,
        so this is triviality of chi (resp. chi^2) on the image of O_B^x.
        """
        classes = self._filtration_classes(0)
        if ext == "M":
            return all(chi.values[c] == 1 for c in classes)
        return all(chi.values[c] * chi.values[c] == 1 for c in classes)

    def record(self, index: int) -> IrreducibleCharacterRecord:
        chi = self.table.characters[index]
        c, label, minimal = self.classify(chi)
        inv = {e: self.invariant_dimension(chi, e) for e in EXTENSIONS}
        pred = {
            e: predicted_dimension(
                label, c, minimal, chi.degree, e, self.p,
                self.trivial_on_norms(chi, e) if chi.degree == 1 else None,
            )
            for e in EXTENSIONS
        }
        return IrreducibleCharacterRecord(index, chi.degree, c, label, minimal, inv, pred)

    @cached_property
    def records(self) -> list[IrreducibleCharacterRecord]:
        return [self.record(i) for i in range(len(self.table))]


@lru_cache(maxsize=8)
def analyze(p: int, n: int) -> QuotientAnalysis:
    return QuotientAnalysis(p, n)


def records_of_conductor(p: int, c: int) -> list[IrreducibleCharacterRecord]:
    """Irreducibles of conductor exactly c, computed on G_{c-1} (G_1 for c <= 2)."""
    qa = analyze(p, max(c - 1, 1))
    return [r for r in qa.records if r.conductor == c]
