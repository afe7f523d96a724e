"""Exact linear algebra over Q on lists of Fraction vectors, backed by python-flint."""
from __future__ import annotations

from fractions import Fraction

from flint import fmpq_mat, fmpq_poly

from .quaternion.lattice import from_qmat, qmat


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows) and pivot columns."""
    if not rows:
        return [], []
    red, rank = qmat(rows).rref()
    out = from_qmat(red)[:rank]
    pivots = [next(k for k, c in enumerate(r) if c != 0) for r in out]
    return out, pivots


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[0])


def span_basis(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    """Canonical (echelon) basis of the span of the given vectors."""
    return rref(vectors)[0]


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows x = 0}, in canonical echelon form."""
    red, pivots = rref(rows)
    free = [k for k in range(ncols) if k not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return span_basis(basis) if basis else []


def mat_vec(m: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    return from_qmat(qmat(a) * qmat(b))


def restrict(operator: list[list[Fraction]], basis: list[list[Fraction]]) -> list[list[Fraction]]:
    """Matrix R of an operator on the span of basis (vectors b_k): T b_k = sum_i R[i][k] b_i.

    Raises ValueError if the span is not stable.
    """
    d = len(basis)
    if d == 0:
        return []
    images = [mat_vec(operator, b) for b in basis]
    ech, piv = rref(basis)
    if len(ech) != d:
        raise ValueError("basis vectors are linearly dependent")
    square = qmat([[b[c] for c in piv] for b in basis]).transpose()
    inv = square.inv()
    out_cols = []
    for img in images:
        coeff = from_qmat(inv * qmat([[img[c]] for c in piv]))
        coeff = [row[0] for row in coeff]
        recon = [sum((coeff[i] * basis[i][t] for i in range(d)), Fraction(0)) for t in range(len(img))]
        if recon != img:
            raise ValueError("subspace is not stable under the operator")
        out_cols.append(coeff)
    return [[out_cols[k][i] for k in range(d)] for i in range(d)]


def charpoly(m: list[list[Fraction]]) -> fmpq_poly:
    if not m:
        return fmpq_poly([1])
    return qmat(m).charpoly()


def poly_key(f: fmpq_poly) -> str:
    """Canonical text of a rational polynomial: coefficients from the constant term up."""
    return " ".join(str(Fraction(int(c.p), int(c.q))) for c in f.coeffs())


def poly_eval_matrix(f: fmpq_poly, m: fmpq_mat) -> fmpq_mat:
    n = m.nrows()
    acc = fmpq_mat(n, n)
    for c in reversed(f.coeffs()):
        acc = acc * m
        for i in range(n):
            acc[i, i] += c
    return acc
