"""Rank and kernel computations over the rationals (exact) or floats (SVD).

Matrices are plain nested sequences or numpy arrays.  In exact mode every
entry must be an ``int`` or ``fractions.Fraction``; elimination is done with
Fractions so the resulting rank is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_RTOL = 1e-10


def _to_fraction_rows(M) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in M]


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (rows, pivot columns)."""
    A = _to_fraction_rows(M)
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def matrix_rank(M, exact: bool, rtol: float = DEFAULT_RTOL) -> int:
    """Rank of ``M``.  Floating mode counts singular values above ``rtol * s_max``."""
    if exact:
        return len(rref(M)[1])
    A = np.asarray(M, dtype=float)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def nullspace(M, exact: bool, rtol: float = DEFAULT_RTOL, ncols: int | None = None) -> list:
    """Basis of ``{y : M y = 0}`` as a list of vectors.

    Exact mode returns lists of Fractions (one free variable set to 1 per
    vector); floating mode returns orthonormal numpy vectors.
    """
    if exact:
        rows, pivots = rref(M)
        n = len(rows[0]) if rows else (ncols or 0)
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -rows[r][f]
            basis.append(v)
        return basis
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] == 0:
        n = A.shape[1] if A.ndim == 2 else (ncols or 0)
        return list(np.eye(n))
    _, s, vt = np.linalg.svd(A)
    tol = rtol * s[0] if s.size and s[0] > 0 else 0.0
    r = int(np.sum(s > tol)) if s.size and s[0] > 0 else 0
    return list(vt[r:])


def independent(vectors: Sequence[Sequence], exact: bool, rtol: float = DEFAULT_RTOL) -> bool:
    if not vectors:
        return True
    return matrix_rank(vectors, exact, rtol) == len(vectors)
