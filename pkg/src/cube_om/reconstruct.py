"""Recovering cocircuit signatures from the signed rectangles by orthogonality.

A rectangle X meeting a cocircuit support in exactly two vertices {p, q}
must agree with the cocircuit Y on one of them and disagree on the other,
so Y(p) Y(q) = -X(p) X(q).  Those parity edges form the constraint graph of
a support.  Rectangles meeting a support in three or four vertices impose
the weaker rule that the agreements with X are not all equal; the default
propagation uses both, the two-point mode only the edges.  Every finished
signature is re-checked against full orthogonality with all of R.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import bitarray
from .core import SignedSet, Vertex, VertexSet, full_set, iter_members
from .errors import CubeError
from .matroid import HyperplaneCatalog
from .orientation import Orientation, SignedRectangle, aff_orientation, family_R, rectangle_arrays

_SUPPORT_CHUNK = 2048
EXHAUSTIVE_MAX_N = 4


class Status(enum.Enum):
    DETERMINED = "determined"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"


class Verdict(enum.Enum):
    VERIFIED = "Verified"
    NOT_DECIDED = "NotDecided"


@dataclass(frozen=True)
class ConstraintGraph:
    support: VertexSet
    edges: tuple[tuple[Vertex, Vertex, int], ...]


def two_point_constraint(X: SignedRectangle, support: VertexSet) -> tuple[Vertex, Vertex, int] | None:
    meet = X.signs.support & support
    if meet.bit_count() != 2:
        return None
    p, q = iter_members(meet)
    return p, q, -X.signs.sign(p) * X.signs.sign(q)


def constraint_graph(support: VertexSet, R: Sequence[SignedRectangle]) -> ConstraintGraph:
    edges = []
    for X in R:
        c = two_point_constraint(X, support)
        if c is not None:
            edges.append(c)
    return ConstraintGraph(support, tuple(edges))


def solve_graph(graph: ConstraintGraph) -> tuple[dict[Vertex, int], list[VertexSet], bool]:
    """Sign each component from its minimum vertex.

    Returns (signs, components, conflict); signs are relative within each
    component.
    """
    adj: dict[Vertex, list[tuple[Vertex, int]]] = {v: [] for v in iter_members(graph.support)}
    for p, q, parity in graph.edges:
        adj[p].append((q, parity))
        adj[q].append((p, parity))
    signs: dict[Vertex, int] = {}
    components: list[VertexSet] = []
    conflict = False
    for root in adj:
        if root in signs:
            continue
        signs[root] = 1
        comp = 1 << root
        stack = [root]
        while stack:
            p = stack.pop()
            for q, parity in adj[p]:
                want = parity * signs[p]
                if q not in signs:
                    signs[q] = want
                    comp |= 1 << q
                    stack.append(q)
                elif signs[q] != want:
                    conflict = True
        components.append(comp)
    return signs, components, conflict


@dataclass(frozen=True)
class SupportResult:
    status: Status
    components: int
    signature: SignedSet | None = None
    by_search: bool = False


@dataclass
class DeterminacyReport:
    n: int
    supports: list[SupportResult]
    rectangles: int
    recovered: Orientation | None = None
    verdict: Verdict | None = None
    wall_time_ms: int | None = field(default=None, compare=False)

    def count(self, status: Status) -> int:
        return sum(1 for s in self.supports if s.status is status)

    def record(self, timing: bool = False) -> dict:
        rec = {
            "n": self.n,
            "supports_total": len(self.supports),
            "determined": self.count(Status.DETERMINED),
            "underdetermined": self.count(Status.UNDERDETERMINED),
            "inconsistent": self.count(Status.INCONSISTENT),
            "determined_by_branching": sum(1 for s in self.supports if s.by_search),
            "rectangles": self.rectangles,
            "verdict": self.verdict.value if self.verdict else None,
        }
        if timing:
            rec["wall_time_ms"] = self.wall_time_ms
        return rec


def _propagate_chunk(
    supp: np.ndarray,
    verts: np.ndarray,
    xsigns: np.ndarray,
    inference: str = "full",
    start: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sign propagation for a block of supports.

    With ``inference="full"`` every rectangle meeting a support in at least
    two vertices contributes the unit rule of orthogonality: once all but one
    of its vertices in the support are signed and they all agree (or all
    disagree) with the rectangle, the last one must do the opposite.  With
    ``"two-point"`` only rectangles meeting the support in exactly two
    vertices take part.

    Propagation starts from ``start`` when given, otherwise from the minimum
    vertex of each support signed +1 (the global sign is free).  Returns the
    (block, 2**n) sign matrix (0 = unreached) and a per-support conflict flag.
    """
    m = supp.shape[0]
    inside = supp[:, verts]  # (m, rects, 4)
    size = inside.sum(axis=2)
    active = size == 2 if inference == "two-point" else size >= 2
    inside = inside & active[:, :, None]
    if start is None:
        Y = np.zeros(supp.shape, dtype=np.int8)
        Y[np.arange(m), supp.argmax(axis=1)] = 1
    else:
        Y = start.astype(np.int8, copy=True)
    while True:
        rel = Y[:, verts] * xsigns[None] * inside  # agreement +1, disagreement -1, 0 unknown/outside
        unknown = inside & (rel == 0)
        n_pos = (rel > 0).sum(axis=2)
        n_neg = (rel < 0).sum(axis=2)
        ready = (unknown.sum(axis=2) == 1) & ((n_pos == 0) != (n_neg == 0))
        r, c = np.nonzero(ready)
        if not len(r):
            break
        slot = unknown[r, c].argmax(axis=1)
        forced_rel = np.where(n_pos[r, c] > 0, -1, 1).astype(np.int8)
        Y[r, verts[c, slot]] = forced_rel * xsigns[c, slot]
    rel = Y[:, verts] * xsigns[None] * inside
    done = ~(inside & (rel == 0)).any(axis=2)
    equal = ((rel > 0).sum(axis=2) == 0) | ((rel < 0).sum(axis=2) == 0)
    conflict = (active & done & equal).any(axis=1)
    return Y, conflict


def _full_orthogonality_ok(Y: np.ndarray, verts: np.ndarray, xsigns: np.ndarray) -> np.ndarray:
    prod = Y[:, verts] * xsigns[None]
    return ~((prod > 0).any(axis=2) != (prod < 0).any(axis=2)).any(axis=1)


def _search_support(
    row: np.ndarray, start: np.ndarray, verts: np.ndarray, xsigns: np.ndarray, limit: int = 2
) -> list[np.ndarray]:
    """Signatures on one support orthogonal to every rectangle, extending ``start``.

    Depth-first: propagate with the full rule, branch on the first unsigned
    vertex, stop once ``limit`` solutions are known.
    """
    touching = row[verts].any(axis=1)
    verts, xsigns = verts[touching], xsigns[touching]
    found: list[np.ndarray] = []
    stack = [start]
    while stack and len(found) < limit:
        Y, conflict = _propagate_chunk(row[None], verts, xsigns, "full", stack.pop()[None])
        if conflict[0]:
            continue
        Y = Y[0]
        free = np.flatnonzero(row & (Y == 0))
        if not len(free):
            if _full_orthogonality_ok(Y[None], verts, xsigns)[0]:
                found.append(Y)
            continue
        for s in (-1, 1):
            branch = Y.copy()
            branch[free[0]] = s
            stack.append(branch)
    return found


def _enumerate_support(row: np.ndarray, verts: np.ndarray, xsigns: np.ndarray, limit: int = 2) -> list[np.ndarray]:
    """Brute force over every signing of the support with its minimum vertex positive."""
    pts = np.flatnonzero(row)
    touching = row[verts].any(axis=1)
    verts, xsigns = verts[touching], xsigns[touching]
    free = len(pts) - 1
    codes = np.arange(1 << free, dtype=np.int64)
    found: list[np.ndarray] = []
    for lo in range(0, len(codes), 4096):
        block = codes[lo : lo + 4096]
        Y = np.zeros((len(block), row.shape[0]), dtype=np.int8)
        Y[:, pts[0]] = 1
        Y[:, pts[1:]] = 1 - 2 * ((block[:, None] >> np.arange(free)) & 1)
        for k in np.flatnonzero(_full_orthogonality_ok(Y, verts, xsigns)):
            found.append(Y[k])
            if len(found) >= limit:
                return found
    return found


def _signed(Y: np.ndarray) -> SignedSet:
    pos, neg = bitarray.pack_rows(np.stack([Y > 0, Y < 0]))
    return SignedSet(pos, neg).canonical()


def propagate(
    n: int,
    catalog: HyperplaneCatalog,
    R: Sequence[SignedRectangle],
    inference: str = "full",
    search: bool = True,
    exhaustive: bool = False,
    jobs: int = 1,
) -> DeterminacyReport:
    """Determine each cocircuit signature (up to sign) by orthogonality with R.

    Supports where propagation stalls go to a branching search (``search``)
    or, with ``exhaustive``, to brute-force enumeration of all signings
    (n <= 4).  A support is determined when exactly one signature survives.
    """
    if inference not in ("full", "two-point"):
        raise CubeError(f"unknown inference mode {inference!r}")
    if catalog.n != n:
        raise CubeError(f"catalog is for n={catalog.n}, requested n={n}")
    if exhaustive and n > EXHAUSTIVE_MAX_N:
        raise CubeError(f"exhaustive per-support enumeration is limited to n <= {EXHAUSTIVE_MAX_N}")
    start = time.perf_counter()
    everything = full_set(n)
    supports = [everything & ~H.points for H in catalog]
    if R:
        verts, xsigns = rectangle_arrays(R)
    else:
        verts = np.zeros((0, 4), dtype=np.int64)
        xsigns = np.zeros((0, 4), dtype=np.int8)
    def run(lo: int) -> list[SupportResult]:
        block = supports[lo : lo + _SUPPORT_CHUNK]
        supp = bitarray.unpack_many(block, n)
        Y, conflict = _propagate_chunk(supp, verts, xsigns, inference)
        reached = ~((Y == 0) & supp).any(axis=1)
        ortho = _full_orthogonality_ok(Y, verts, xsigns)
        out = []
        for k, S in enumerate(block):
            if conflict[k] or (reached[k] and not ortho[k]):
                out.append(SupportResult(Status.INCONSISTENT, 0))
                continue
            if reached[k]:
                out.append(SupportResult(Status.DETERMINED, 1, _signed(Y[k])))
                continue
            _, comps, _ = solve_graph(constraint_graph(S, R))
            if exhaustive:
                sols = _enumerate_support(supp[k], verts, xsigns)
            elif search:
                sols = _search_support(supp[k], Y[k], verts, xsigns)
            else:
                sols = None
            if sols is None or len(sols) > 1:
                out.append(SupportResult(Status.UNDERDETERMINED, len(comps)))
            elif not sols:
                out.append(SupportResult(Status.INCONSISTENT, len(comps)))
            else:
                out.append(SupportResult(Status.DETERMINED, len(comps), _signed(sols[0]), by_search=True))
        return out

    starts = range(0, len(supports), _SUPPORT_CHUNK)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(run, starts))
    else:
        blocks = [run(lo) for lo in starts]
    results = [r for blk in blocks for r in blk]
    report = DeterminacyReport(n, results, len(R))
    if all(s.status is Status.DETERMINED for s in results):
        report.recovered = Orientation(n, tuple(s.signature for s in results))
    report.wall_time_ms = int((time.perf_counter() - start) * 1000)
    return report


def rectangle_subset(n: int, which: str = "all") -> list[SignedRectangle]:
    """``all`` signed rectangles, or only ``faces`` (blocks of one coordinate each)."""
    R = family_R(n)
    if which == "all":
        return R
    if which == "faces":
        return [X for X in R if X.rect.I.bit_count() == 1 and X.rect.J.bit_count() == 1]
    raise CubeError(f"unknown rectangle subset {which!r}")


def verify_conjecture(
    n: int,
    catalog: HyperplaneCatalog,
    R: Sequence[SignedRectangle] | None = None,
    inference: str = "full",
    search: bool = True,
    exhaustive: bool = False,
    jobs: int = 1,
) -> DeterminacyReport:
    """Verified when orthogonality with R pins every cocircuit signature and the result is Aff."""
    start = time.perf_counter()
    if R is None:
        R = family_R(n)
    report = propagate(n, catalog, R, inference=inference, search=search, exhaustive=exhaustive, jobs=jobs)
    ok = report.recovered is not None and report.recovered == aff_orientation(n, catalog)
    report.verdict = Verdict.VERIFIED if ok else Verdict.NOT_DECIDED
    report.wall_time_ms = int((time.perf_counter() - start) * 1000)
    return report
