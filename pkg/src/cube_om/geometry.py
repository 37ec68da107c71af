"""Subcubes, rectangles, the plane-through-three-vertices trichotomy and
elimination between rectangles forming a modular pair."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .core import (
    MAX_N,
    CoordSet,
    Vertex,
    VertexSet,
    check_dimension,
    iter_members,
    mask_coords,
    members,
    min_member,
    num_vertices,
)
from .errors import InvalidDescriptorError, InvalidTripleError, NotAModularPairError, NotASubcubeError
from .matroid import affine_rank


def _offsets(blocks: Sequence[CoordSet]) -> list[int]:
    """All unions of sub-collections of ``blocks`` (as XOR offsets)."""
    offs = [0]
    for blk in blocks:
        offs += [o ^ blk for o in offs]
    return offs


@dataclass(frozen=True)
class SubcubeDescriptor:
    """C(base; blocks[0], ..., blocks[k-1]) inside C^n."""

    n: int
    base: Vertex
    blocks: tuple[CoordSet, ...] = ()

    def __post_init__(self) -> None:
        check_dimension(self.n)
        if not 0 <= self.base < num_vertices(self.n):
            raise InvalidDescriptorError(f"base vertex {self.base} out of range")
        seen = 0
        for blk in self.blocks:
            if blk <= 0:
                raise InvalidDescriptorError("blocks must be nonempty")
            if blk >> self.n:
                raise InvalidDescriptorError(f"block {mask_coords(blk)} not inside [{self.n}]")
            if blk & seen:
                raise InvalidDescriptorError("blocks must be pairwise disjoint")
            seen |= blk

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def residual(self) -> CoordSet:
        used = 0
        for blk in self.blocks:
            used |= blk
        return ((1 << self.n) - 1) & ~used

    def points(self) -> VertexSet:
        return generate_subcube(self)

    def canonical(self) -> SubcubeDescriptor:
        base = min_member(self.points())
        blocks = tuple(sorted(self.blocks, key=lambda b: b & -b))
        return SubcubeDescriptor(self.n, base, blocks)

    def __str__(self) -> str:
        blocks = ",".join("{" + ",".join(map(str, mask_coords(b))) + "}" for b in self.blocks)
        return f"C({self.base}; {blocks})"


def generate_subcube(d: SubcubeDescriptor) -> VertexSet:
    bits = 0
    for off in _offsets(d.blocks):
        bits |= 1 << (d.base ^ off)
    return bits


def recognize_subcube(S: VertexSet, n: int) -> int | None:
    """k when |S| = 2**k and dim aff(S) = k, otherwise None."""
    if S == 0:
        raise NotASubcubeError("empty set")
    size = S.bit_count()
    if size & (size - 1):
        return None
    k = size.bit_length() - 1
    return k if affine_rank(S, n) == k + 1 else None


def _split(S: VertexSet, n: int) -> tuple[Vertex, list[CoordSet]]:
    """Recursive descriptor of a subcube: split on a non-constant coordinate,
    describe the half containing the minimum vertex, then read the new block
    off any vertex of the other half."""
    pts = members(S)
    v = pts[0]
    if len(pts) == 1:
        return v, []
    varying = 0
    for w in pts[1:]:
        varying |= v ^ w
    bit = varying & -varying
    same = sum(1 << w for w in pts if not (w ^ v) & bit)
    other = S & ~same
    base, blocks = _split(same, n)
    used = 0
    for blk in blocks:
        used |= blk
    w = min_member(other)
    # w = base flipped on some blocks plus the new block; the new block lives outside the old blocks
    new_block = (w ^ base) & ~used
    if not new_block & bit:
        raise NotASubcubeError("vertex set is not a subcube")
    return base, blocks + [new_block]


def recover_descriptor(S: VertexSet, n: int) -> SubcubeDescriptor:
    k = recognize_subcube(S, n)
    if k is None:
        raise NotASubcubeError("vertex set is not a subcube")
    base, blocks = _split(S, n)
    try:
        d = SubcubeDescriptor(n, base, tuple(blocks)).canonical()
    except InvalidDescriptorError as exc:
        raise NotASubcubeError(str(exc)) from exc
    if generate_subcube(d) != S:
        raise NotASubcubeError("vertex set is not a subcube")
    return d


@dataclass(frozen=True)
class Rectangle:
    """The rectangle C(base; I, J): vertices base, -I base, -IJ base, -J base."""

    n: int
    base: Vertex
    I: CoordSet
    J: CoordSet

    def __post_init__(self) -> None:
        SubcubeDescriptor(self.n, self.base, (self.I, self.J))

    @property
    def cycle(self) -> tuple[Vertex, Vertex, Vertex, Vertex]:
        v = self.base
        return v, v ^ self.I, v ^ self.I ^ self.J, v ^ self.J

    @property
    def points(self) -> VertexSet:
        a, b, c, d = self.cycle
        return (1 << a) | (1 << b) | (1 << c) | (1 << d)

    @property
    def descriptor(self) -> SubcubeDescriptor:
        return SubcubeDescriptor(self.n, self.base, (self.I, self.J))

    def canonical(self) -> Rectangle:
        d = self.descriptor.canonical()
        return Rectangle(self.n, d.base, *d.blocks)

    @classmethod
    def from_points(cls, S: VertexSet, n: int) -> Rectangle:
        d = recover_descriptor(S, n)
        if d.k != 2:
            raise NotASubcubeError("vertex set is not a rectangle")
        return cls(n, d.base, *d.blocks)


def _disjoint_pairs(n: int):
    """Unordered pairs {I, J} of disjoint nonempty coordinate sets, I holding the smaller minimum."""
    full = (1 << n) - 1
    for I in range(1, full + 1):
        rest = full & ~I
        J = rest
        while J:
            if (I & -I) < (J & -J):
                yield I, J
            J = (J - 1) & rest


def rectangle_count(n: int) -> int:
    unordered = (3**n - 2 ** (n + 1) + 1) // 2
    return (1 << n) * unordered // 4


def enumerate_rectangles(n: int) -> list[Rectangle]:
    """Every rectangle of C^n once, canonical, ordered by point set."""
    check_dimension(n, 2, MAX_N)
    found: dict[VertexSet, Rectangle] = {}
    for I, J in _disjoint_pairs(n):
        for v in range(num_vertices(n)):
            # canonical base = minimum vertex of the rectangle
            if v < v ^ I and v < v ^ J and v < v ^ I ^ J:
                r = Rectangle(n, v, I, J)
                found[r.points] = r
    return [found[k] for k in sorted(found)]


class TripleKind(enum.Enum):
    DISJOINT_COMPLETION = "DisjointCompletion"
    NESTED_COMPLETION = "NestedCompletion"
    NO_FOURTH_POINT = "NoFourthPoint"


@dataclass(frozen=True)
class TripleClass:
    kind: TripleKind
    fourth: Vertex | None = None

    def __post_init__(self) -> None:
        if (self.fourth is None) != (self.kind is TripleKind.NO_FOURTH_POINT):
            raise ValueError("fourth vertex present iff a completion exists")


def classify_triple(v: Vertex, v1: Vertex, v2: Vertex) -> TripleClass:
    """Where the plane through three vertices meets the cube again, if anywhere."""
    if v == v1 or v == v2 or v1 == v2:
        raise InvalidTripleError("triple vertices must be pairwise distinct")
    I, J = v ^ v1, v ^ v2
    if not I & J:
        return TripleClass(TripleKind.DISJOINT_COMPLETION, v ^ I ^ J)
    if I & J == I:
        return TripleClass(TripleKind.NESTED_COMPLETION, v ^ (J & ~I))
    if I & J == J:
        return TripleClass(TripleKind.NESTED_COMPLETION, v ^ (I & ~J))
    return TripleClass(TripleKind.NO_FOURTH_POINT)


def _blocks_from(R: Rectangle, v: Vertex) -> tuple[CoordSet, CoordSet]:
    if not (R.points >> v) & 1:
        raise NotAModularPairError(f"pivot {v} is not a vertex of {R.descriptor}")
    offs = sorted(w ^ v for w in iter_members(R.points) if w != v)
    # two of the offsets are the blocks, the third is their union
    a, b, c = offs
    for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
        if x | y == z and not x & y:
            return x, y
    raise NotAModularPairError("not a rectangle")


def eliminate_rectangles(R1: Rectangle, R2: Rectangle, pivot: Vertex) -> Rectangle:
    """The unique rectangle inside (R1 u R2) minus pivot, for the two modular-pair patterns:
    C(v;I,J) & C(v;I,K) gives C(-J v; I, JK); C(v;IJ,K) & C(v;I,JK) gives C(-I v; J, IK)."""
    if R1.n != R2.n:
        raise NotAModularPairError("rectangles live in different cubes")
    n, v = R1.n, pivot
    b1, b2 = _blocks_from(R1, v), _blocks_from(R2, v)
    for P, Q in (b1, b1[::-1]):
        for S, T in (b2, b2[::-1]):
            # pattern 1: shared block I = P = S, J = Q, K = T
            if P == S and Q != T and not Q & T:
                I, J, K = P, Q, T
                return Rectangle(n, v ^ J, I, J | K).canonical()
            # pattern 2: P = IJ, Q = K, S = I, T = JK
            if S & P == S and S != P and Q & T == Q and Q != T:
                I, K = S, Q
                J = P & ~S
                if J == T & ~Q:
                    return Rectangle(n, v ^ I, J, I | K).canonical()
    raise NotAModularPairError("rectangles do not form one of the two modular-pair patterns at the pivot")
