"""Exact integer linear algebra.

Scalar routines work on Python ints (unbounded, so they cannot overflow).
The batched determinant runs on ``int64`` arrays and is guarded by a
Hadamard bound; it falls back to object arrays when the bound is too large.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CubeError

# Bareiss intermediates are minors, so |p * a| <= bound**2 must stay below 2**63.
_INT64_SAFE_MINOR = 1 << 31


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, len(m)):
            a = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - a * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in matrix]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        p = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (p * m[i][j] - m[i][k] * m[k][j]) // prev
        prev = p
    return sign * m[size - 1][size - 1]


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(vec)
    return tuple(x // g for x in vec)


def kernel_vector(rows: Sequence[Sequence[int]], ncols: int) -> tuple[int, ...]:
    """Primitive integer generator of a one-dimensional right kernel.

    Raises ``CubeError`` when the kernel has any other dimension.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        raise CubeError(f"kernel has dimension {len(free)}, expected 1")
    f = free[0]
    sol = [Fraction(0)] * ncols
    sol[f] = Fraction(1)
    for i, c in enumerate(pivots):
        sol[c] = -m[i][f]
    denom = 1
    for x in sol:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    return primitive([int(x * denom) for x in sol])


def hadamard_bound(batch: np.ndarray) -> float:
    """Upper bound on |det| of every square submatrix in the batch."""
    norms = np.sqrt((batch.astype(np.float64) ** 2).sum(axis=-1))
    norms = np.maximum(norms, 1.0)
    return float(np.prod(norms, axis=-1).max(initial=1.0))


def batch_det(batch: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of square integer matrices, shape (N, m, m)."""
    batch = np.asarray(batch)
    N, m, m2 = batch.shape
    if m != m2:
        raise CubeError("batch_det needs square matrices")
    if m == 0:
        return np.ones(N, dtype=np.int64)
    if hadamard_bound(batch) >= _INT64_SAFE_MINOR:
        return np.array([bareiss_det(a.tolist()) for a in batch], dtype=object)
    M = batch.astype(np.int64, copy=True)
    rows = np.arange(N)
    sign = np.ones(N, dtype=np.int64)
    prev = np.ones(N, dtype=np.int64)
    singular = np.zeros(N, dtype=bool)
    for k in range(m):
        nz = M[:, k:, k] != 0
        has = nz.any(axis=1)
        singular |= ~has
        piv = k + nz.argmax(axis=1)
        swap = piv != k
        if swap.any():
            top = M[rows, k].copy()
            M[rows, k] = M[rows, piv]
            M[rows, piv] = top
            sign[swap] = -sign[swap]
        p = np.where(has, M[:, k, k], 1)
        if k < m - 1:
            M[:, k + 1 :, k + 1 :] = (
                p[:, None, None] * M[:, k + 1 :, k + 1 :]
                - M[:, k + 1 :, k : k + 1] * M[:, k : k + 1, k + 1 :]
            ) // prev[:, None, None]
        prev = p
    det = sign * M[:, m - 1, m - 1]
    det[singular] = 0
    return det
