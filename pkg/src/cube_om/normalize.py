"""Reorienting an orientation of M(C^n) so that it contains every positive facet cocircuit.

Pipeline: reorient so both facet cocircuits of the last coordinate become
pure; read the sign pattern forced on one probe rectangle; if it is the
twisted pattern, additionally reverse the half-cube x_n = 1.  The result is
verified, never assumed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import SignedSet, Vertex, VertexSet, full_set, reorient
from .errors import CubeError, NotAnOrientationError, NotNormalizableError
from .matroid import HyperplaneCatalog, facet_points, hex_bits
from .orientation import Orientation, SignedRectangle, family_R, orthogonality_violations


class Branch(enum.Enum):
    """Sign pattern carried by the rectangles C(v; I, J u {n})."""

    ALTERNATING = "alternating"  # v+ -Iv- -IJn v+ -Jn v-
    TWISTED = "twisted"  # v+ -Iv- -IJn v- -Jn v+


@dataclass(frozen=True)
class NormalizationResult:
    A: VertexSet
    normalized: Orientation
    branch: Branch | None
    verified: bool

    def record(self, n: int) -> dict:
        branch = self.branch.value if self.branch else None
        return {"A": hex_bits(self.A, n), "branch": branch, "verified": self.verified}


def last_halves(n: int) -> tuple[VertexSet, VertexSet]:
    """(x_n = 1, x_n = -1) as vertex sets."""
    return facet_points(n, n, 1), facet_points(n, n, -1)


def _facet_cocircuit_indices(catalog: HyperplaneCatalog) -> list[int]:
    n = catalog.n
    return [catalog.facet_index(i, eps) for i in range(1, n + 1) for eps in (1, -1)]


def base_reorientation_set(O: Orientation, catalog: HyperplaneCatalog) -> VertexSet:
    """Union of the negative parts of the two cocircuits supported on the
    half-cubes x_n = +-1, each read in its canonical representative (so the
    answer does not depend on how the pair was stored)."""
    n = catalog.n
    B = 0
    for eps in (1, -1):
        Y = O[catalog.facet_index(n, eps)].canonical()
        B |= Y.negative
    return B


def probe_cycle(n: int, v: Vertex = 0, I: int = 1, J: int = 0) -> tuple[Vertex, Vertex, Vertex, Vertex]:
    """Cycle v, -I v, -IJn v, -Jn v of the rectangle C(v; I, J u {n})."""
    last = 1 << (n - 1)
    if not I or I & J or (I | J) & last or (I | J) >> n:
        raise CubeError("probe needs nonempty I and disjoint J inside [n-1]")
    Jn = J | last
    return v, v ^ I, v ^ I ^ Jn, v ^ Jn


def probe_cycles(n: int) -> list[tuple[Vertex, Vertex, Vertex, Vertex]]:
    """Every probe C(v; I, J u {n}) with I nonempty, I and J disjoint in [n-1]."""
    rest = (1 << (n - 1)) - 1
    out = []
    for I in range(1, rest + 1):
        free = rest & ~I
        J = free
        while True:
            for v in range(1 << n):
                out.append(probe_cycle(n, v, I, J))
            if J == 0:
                break
            J = (J - 1) & free
    return out


def forced_signatures(cycle: Sequence[Vertex], signs: np.ndarray) -> list[SignedSet]:
    """Signatures of a 4-point support (first vertex positive) orthogonal to every cocircuit row."""
    idx = np.asarray(cycle, dtype=np.int64)
    Y = signs[:, idx]
    Y = Y[(Y != 0).any(axis=1)]
    out = []
    for rest in itertools.product((1, -1), repeat=3):
        x = np.array((1,) + rest, dtype=np.int8)
        prod = Y * x
        if np.array_equal((prod > 0).any(axis=1), (prod < 0).any(axis=1)):
            out.append(SignedSet.from_signs(dict(zip(cycle, (1,) + rest))).canonical())
    return out


def _pattern(cycle, pattern) -> SignedSet:
    return SignedSet.from_signs(dict(zip(cycle, pattern))).canonical()


def rectangle_branch(O: Orientation, probe: tuple[Vertex, int, int] | None = None, signs: np.ndarray | None = None) -> Branch:
    """Which of the two sign patterns orthogonality forces on a probe rectangle."""
    n = O.n
    cycle = probe_cycle(n, *(probe or (0, 1, 0)))
    if signs is None:
        signs = O.sign_matrix()
    forced = forced_signatures(cycle, signs)
    alternating = _pattern(cycle, (1, -1, 1, -1))
    twisted = _pattern(cycle, (1, -1, -1, 1))
    if forced == [alternating]:
        return Branch.ALTERNATING
    if forced == [twisted]:
        return Branch.TWISTED
    raise NotAnOrientationError(
        f"probe rectangle {cycle}: {len(forced)} orthogonal signatures, none of the two admissible patterns"
    )


def verify_F(O: Orientation, catalog: HyperplaneCatalog) -> bool:
    """All 2n facet cocircuits are pure (positive up to the +- convention)."""
    return all(O[k].is_pure() for k in _facet_cocircuit_indices(catalog))


def verify_R(O: Orientation, R: Sequence[SignedRectangle] | None = None) -> bool:
    """Every signed rectangle of Aff is orthogonal to every cocircuit of O."""
    if R is None:
        R = family_R(O.n)
    return not orthogonality_violations(O.sign_matrix(), R).any()


def normalize(O: Orientation, catalog: HyperplaneCatalog, strict: bool = True) -> NormalizationResult:
    """Find A such that reorienting O by A contains every positive facet cocircuit.

    With ``strict`` a failed final check raises ``NotNormalizableError``;
    otherwise the result comes back with ``verified=False``.
    """
    O.check_against(catalog)
    A = base_reorientation_set(O, catalog)
    step = O.reorient(A)
    try:
        branch = rectangle_branch(step)
    except NotAnOrientationError as exc:
        if strict:
            raise NotNormalizableError(str(exc)) from exc
        return NormalizationResult(A, step, None, False)
    if branch is Branch.TWISTED:
        upper, _ = last_halves(O.n)
        A ^= upper
        step = O.reorient(A)
    ok = verify_F(step, catalog)
    if not ok and strict:
        raise NotNormalizableError("reoriented input still lacks some positive facet cocircuit")
    return NormalizationResult(A, step, branch, ok)


def uniqueness_check(O: Orientation, catalog: HyperplaneCatalog, exhaustive: bool = False) -> bool:
    """True when no reorientation changing O keeps all facet cocircuits pure.

    Only A in {{}, x_n = 1, x_n = -1, C^n} keep both last-coordinate facet
    cocircuits pure, so those are the candidates; ``exhaustive`` scans every
    subset of C^n instead (n <= 4).
    """
    if not verify_F(O, catalog):
        raise CubeError("uniqueness check needs an orientation containing every facet cocircuit")
    n = O.n
    facets = [O[k] for k in _facet_cocircuit_indices(catalog)]
    if exhaustive:
        if n > 4:
            raise CubeError("exhaustive uniqueness scan is limited to n <= 4")
        candidates = range(1, full_set(n) + 1)
    else:
        upper, lower = last_halves(n)
        candidates = (upper, lower, full_set(n))
    for A in candidates:
        if all(reorient(Y, A).is_pure() for Y in facets) and O.reorient(A) != O:
            return False
    return True
