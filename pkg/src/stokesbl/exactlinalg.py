"""Small exact linear algebra helpers over the rationals.

Used for basis generation (nullspaces of divergence/Laplace coefficient maps)
and for certifying the dimension formulas.  Matrices are lists of rows of
Fraction; everything is deterministic (no pivoting heuristics beyond first
nonzero column, so bases come out in a reproducible order).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

#: prime for the fast rank certificate; (P-1)^2 fits in int64 products
RANK_PRIME = 2147483647


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot column indices)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def exact_rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q by exact elimination."""
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Deterministic basis of the kernel of the matrix (rows act on R^ncols)."""
    if not rows:
        return [[Fraction(i == j) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def rank_mod_p(rows: list[list[Fraction]], p: int = RANK_PRIME) -> int:
    """Rank of the matrix reduced mod p.

    Denominators are inverted mod p; every prime factor of a denominator must
    be < p (true here: they come from small factorials).  rank_mod_p <= exact
    rank always, and rank_mod_p == nrows certifies full row rank over Q.
    """
    if not rows:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    mat = np.zeros((nrows, ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v == 0:
                continue
            den = v.denominator % p
            if den == 0 or gcd(v.denominator, p) != 1:
                raise ValueError("denominator not invertible mod p")
            mat[i, j] = (v.numerator % p) * pow(den, p - 2, p) % p
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        col = mat[rank:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            mat[[rank, piv]] = mat[[piv, rank]]
        inv = pow(int(mat[rank, c]), p - 2, p)
        mat[rank] = (mat[rank] * inv) % p
        below = mat[rank + 1 :, c].copy()
        if below.any():
            mat[rank + 1 :] = (mat[rank + 1 :] - below[:, None] * mat[rank][None, :]) % p
        rank += 1
    return rank
