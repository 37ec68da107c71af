"""Slow, independent reference computations used to cross-check the engine.

Everything here works on explicit coordinate tuples with ``fractions.Fraction``
Gaussian elimination and shares no code path with the bitset/Bareiss engine
beyond the vertex encoding.  Intended for n <= 4 (some helpers n <= 3).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .core import SignedSet, num_vertices, vertex_coords


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by plain row reduction on Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def homogeneous(vertices: Iterable[int], n: int) -> list[list[int]]:
    return [list(vertex_coords(v, n)) + [1] for v in vertices]


def flat_rank(vertices: Sequence[int], n: int) -> int:
    """Rank of a vertex collection in M(C^n) (affine dimension + 1)."""
    vertices = list(vertices)
    return rational_rank(homogeneous(vertices, n)) if vertices else 0


def span_points(vertices: Sequence[int], n: int) -> frozenset[int]:
    """All cube vertices in the affine span of ``vertices``."""
    r = flat_rank(vertices, n)
    return frozenset(w for w in range(num_vertices(n)) if flat_rank(list(vertices) + [w], n) == r)


def plane_fourth_points(v: int, v1: int, v2: int, n: int) -> frozenset[int]:
    """Cube vertices other than the triple on the affine plane through it."""
    return span_points([v, v1, v2], n) - {v, v1, v2}


def hyperplanes_by_closure(n: int) -> set[frozenset[int]]:
    """Every hyperplane as the span of an affinely independent n-subset."""
    out: set[frozenset[int]] = set()
    for S in itertools.combinations(range(num_vertices(n)), n):
        if any(F.issuperset(S) for F in out):
            continue
        if flat_rank(S, n) == n:
            out.add(span_points(S, n))
    return out


def rectangles_by_rank(n: int) -> set[frozenset[int]]:
    """4-subsets of rank 3, which are exactly the rectangles."""
    return {frozenset(S) for S in itertools.combinations(range(num_vertices(n)), 4) if flat_rank(S, n) == 3}


def subcube_sets(n: int) -> set[frozenset[int]]:
    """Every k-subcube with k <= 2, as a 2^k-subset of rank k+1."""
    out = set()
    for k in (0, 1, 2):
        for S in itertools.combinations(range(num_vertices(n)), 1 << k):
            if flat_rank(S, n) == k + 1:
                out.add(frozenset(S))
    return out


def circuits(n: int, max_size: int | None = None) -> list[frozenset[int]]:
    """All minimally dependent vertex sets, by increasing size."""
    N = num_vertices(n)
    top = n + 2 if max_size is None else max_size
    found: list[frozenset[int]] = []
    for size in range(3, top + 1):
        for S in itertools.combinations(range(N), size):
            if flat_rank(S, n) == size - 1 and not any(C <= set(S) for C in found):
                found.append(frozenset(S))
    return found


def signed_circuit(C: Iterable[int], n: int) -> SignedSet:
    """Signs of the (one-dimensional) affine dependency on C, solved by elimination."""
    pts = sorted(C)
    cols = homogeneous(pts, n)
    # find lambda with sum lambda_p (x_p, 1) = 0; fix the first coefficient to 1
    rows = [[Fraction(cols[p][r]) for p in range(1, len(pts))] + [Fraction(-cols[0][r])] for r in range(n + 1)]
    m, k = rows, len(pts) - 1
    piv_cols = []
    rank = 0
    for c in range(k):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        m[rank] = [x / m[rank][c] for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        piv_cols.append(c)
        rank += 1
    lam = [Fraction(1)] + [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        lam[c + 1] = m[i][k]
    pos = sum(1 << p for p, x in zip(pts, lam) if x > 0)
    neg = sum(1 << p for p, x in zip(pts, lam) if x < 0)
    return SignedSet(pos, neg).canonical()


def has_positive_circuit(cocircuits: Sequence[SignedSet], n: int) -> bool:
    """True when the all-positive signing of some circuit support is orthogonal to
    every cocircuit.  Circuit signs are not taken from any realization.  n <= 3.
    """
    for C in circuits(n):
        X = SignedSet(sum(1 << v for v in C), 0)
        if all(_orth(X, Y) for Y in cocircuits):
            return True
    return False


def _orth(X: SignedSet, Y: SignedSet) -> bool:
    agree = (X.positive & Y.positive) | (X.negative & Y.negative)
    disagree = (X.positive & Y.negative) | (X.negative & Y.positive)
    return bool(agree) == bool(disagree)


def side_signs(normal: Sequence[int], offset: int, n: int) -> SignedSet:
    """Cocircuit signs read directly from a normal by evaluating every vertex."""
    pos = neg = 0
    for v in range(num_vertices(n)):
        val = sum(a * b for a, b in zip(vertex_coords(v, n), normal)) - offset
        if val > 0:
            pos |= 1 << v
        elif val < 0:
            neg |= 1 << v
    return SignedSet(pos, neg).canonical()
