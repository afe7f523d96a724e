"""Short-vector enumeration for positive definite integral quadratic forms.

A form is given by an even symmetric integer Gram matrix G, with
q(x) = x^T G x / 2.  Enumeration runs on an LLL-reduced basis using a
floating Cholesky decomposition with a safety margin to prune, and every
reported vector has its value checked in exact integer arithmetic.
"""
from __future__ import annotations

import math

import numpy as np
from flint import fmpz_mat

_MARGIN = 1e-7


def lll_reduce(gram: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """LLL-reduce a Gram matrix; returns (reduced Gram, transform U with U G U^T = reduced)."""
    g = fmpz_mat(gram)
    red, u = g.lll(transform=True, rep="gram")
    n = g.nrows()
    red_rows = [[int(red[i, k]) for k in range(n)] for i in range(n)]
    u_rows = [[int(u[i, k]) for k in range(n)] for i in range(n)]
    return red_rows, u_rows


def _cholesky_coeffs(gram):
    """q(x) = sum_i Q[i][i] (x_i + sum_{j>i} Q[i][j] x_j)^2 for q = x^T (G/2) x."""
    n = len(gram)
    q = [[gram[i][k] / 2.0 for k in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(gram: list[list[int]], bound: int) -> list[tuple[tuple[int, ...], int]]:
    """All nonzero x (up to nothing: both x and -x are listed) with q(x) <= bound.

    Returns pairs (x, q(x)) with x in the coordinates of the input Gram matrix.
    """
    n = len(gram)
    red, u = lll_reduce(gram)
    q = _cholesky_coeffs(red)
    gm = np.array(red, dtype=object)
    out = []
    x = [0] * n
    budget = float(bound) * (1 + _MARGIN) + _MARGIN

    def recurse(i: int, remaining: float):
        centre = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        radius = math.sqrt(max(remaining, 0.0) / q[i][i])
        lo = math.ceil(centre - radius - _MARGIN)
        hi = math.floor(centre + radius + _MARGIN)
        for v in range(lo, hi + 1):
            x[i] = v
            rest = remaining - q[i][i] * (v - centre) ** 2
            if rest < -_MARGIN * max(1.0, float(bound)):
                continue
            if i == 0:
                vec = np.array(x, dtype=object)
                val = int(vec @ gm @ vec) // 2
                if 0 < val <= bound:
                    out.append((tuple(x), val))
            else:
                recurse(i - 1, rest)
        x[i] = 0

    recurse(n - 1, budget)
    um = np.array(u, dtype=object)
    result = []
    for y, val in out:
        orig = tuple(int(c) for c in np.array(y, dtype=object) @ um)
        result.append((orig, val))
    result.sort()
    return result


def count_by_value(gram: list[list[int]], bound: int) -> list[int]:
    """counts[n] = #{x : q(x) = n} for 0 <= n <= bound (counts[0] = 1)."""
    counts = [0] * (bound + 1)
    counts[0] = 1
    for _, val in short_vectors(gram, bound):
        counts[val] += 1
    return counts


def vectors_of_value(gram: list[list[int]], value: int) -> list[tuple[int, ...]]:
    return [x for x, val in short_vectors(gram, value) if val == value]
