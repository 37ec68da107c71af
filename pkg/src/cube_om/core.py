"""Ground-set primitives for the n-cube C^n = {-1, 1}^n.

Conventions used throughout the package:

* A vertex is an ``int`` in ``range(2**n)``.  Bit ``i`` set means coordinate
  ``i + 1`` equals -1, so vertex 0 is ``(1, ..., 1)`` and reversing the signs
  on a coordinate set is a single XOR.
* A coordinate set is an ``int`` mask over ``n`` bits (bit ``i`` is
  coordinate ``i + 1``).
* A vertex set is an ``int`` bitset over ``2**n`` bits (bit ``v`` is vertex
  ``v``).  Python ints are immutable, so every value here is safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, CubeError

MAX_N = 8

Vertex = int
CoordSet = int
VertexSet = int


def check_dimension(n: int, lo: int = 1, hi: int = MAX_N) -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise CapExceededError(f"dimension must be an int, got {n!r}")
    if n < lo or n > hi:
        raise CapExceededError(f"dimension n={n} outside supported range [{lo}, {hi}]")
    return n


def num_vertices(n: int) -> int:
    return 1 << n


def full_set(n: int) -> VertexSet:
    return (1 << (1 << n)) - 1


def vertex_from_coords(coords: Sequence[int]) -> Vertex:
    v = 0
    for i, c in enumerate(coords):
        if c == -1:
            v |= 1 << i
        elif c != 1:
            raise CubeError(f"coordinate {i + 1} is {c!r}, expected -1 or 1")
    return v


def vertex_coords(v: Vertex, n: int) -> tuple[int, ...]:
    if not 0 <= v < (1 << n):
        raise CubeError(f"vertex index {v} out of range for n={n}")
    return tuple(-1 if (v >> i) & 1 else 1 for i in range(n))


def coord_mask(coords: Iterable[int], n: int | None = None) -> CoordSet:
    """Mask of a set of 1-based coordinate indices."""
    mask = 0
    for i in coords:
        if i < 1 or (n is not None and i > n):
            raise CubeError(f"coordinate index {i} out of range")
        mask |= 1 << (i - 1)
    return mask


def mask_coords(mask: CoordSet) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def reverse(v: Vertex, I: CoordSet, n: int | None = None) -> Vertex:
    """Vertex obtained from ``v`` by reversing the signs of the coordinates in ``I``."""
    if n is not None and I >> n:
        raise CubeError(f"coordinate set {mask_coords(I)} not contained in [{n}]")
    return v ^ I


def restrict(v: Vertex, I: CoordSet, n: int) -> tuple[int, ...]:
    """Integer vector equal to ``v`` on ``I`` and zero elsewhere."""
    if I >> n:
        raise CubeError(f"coordinate set {mask_coords(I)} not contained in [{n}]")
    coords = vertex_coords(v, n)
    return tuple(c if (I >> i) & 1 else 0 for i, c in enumerate(coords))


def vertex_set(vertices: Iterable[Vertex]) -> VertexSet:
    bits = 0
    for v in vertices:
        bits |= 1 << v
    return bits


def members(bits: VertexSet) -> list[Vertex]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def iter_members(bits: VertexSet) -> Iterator[Vertex]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def card(bits: VertexSet) -> int:
    return bits.bit_count()


def min_member(bits: VertexSet) -> Vertex:
    if not bits:
        raise CubeError("empty vertex set has no minimum")
    return (bits & -bits).bit_length() - 1


def translate(bits: VertexSet, I: CoordSet) -> VertexSet:
    """Image of a vertex set under ``v -> reverse(v, I)``."""
    if not I:
        return bits
    return vertex_set(v ^ I for v in iter_members(bits))


@dataclass(frozen=True, slots=True)
class SignedSet:
    """Ordered pair of disjoint vertex sets ``(positive, negative)``."""

    positive: VertexSet = 0
    negative: VertexSet = 0

    def __post_init__(self) -> None:
        if self.positive & self.negative:
            raise CubeError("positive and negative parts of a signed set must be disjoint")
        if self.positive < 0 or self.negative < 0:
            raise CubeError("vertex sets are nonnegative bitsets")

    @property
    def support(self) -> VertexSet:
        return self.positive | self.negative

    def __neg__(self) -> SignedSet:
        return SignedSet(self.negative, self.positive)

    def sign(self, v: Vertex) -> int:
        if (self.positive >> v) & 1:
            return 1
        if (self.negative >> v) & 1:
            return -1
        return 0

    def is_pure(self) -> bool:
        """True when one side is empty (and the support is not)."""
        return bool(self.support) and not (self.positive and self.negative)

    def canonical(self) -> SignedSet:
        """Representative of ``{self, -self}`` with its minimum support element positive."""
        s = self.support
        if s and self.negative & (s & -s):
            return SignedSet(self.negative, self.positive)
        return self

    def reorient(self, A: VertexSet) -> SignedSet:
        return reorient(self, A)

    @classmethod
    def from_signs(cls, signs: dict[Vertex, int]) -> SignedSet:
        pos = neg = 0
        for v, s in signs.items():
            if s > 0:
                pos |= 1 << v
            elif s < 0:
                neg |= 1 << v
        return cls(pos, neg)


def reorient(S: SignedSet, A: VertexSet) -> SignedSet:
    """Swap the sides of every element of ``A``; elements outside ``A`` stay put."""
    keep = ~A
    return SignedSet(
        (S.positive & keep) | (S.negative & A),
        (S.negative & keep) | (S.positive & A),
    )


def orthogonal(X: SignedSet, Y: SignedSet) -> bool:
    agree = (X.positive & Y.positive) | (X.negative & Y.negative)
    disagree = (X.positive & Y.negative) | (X.negative & Y.positive)
    return bool(agree) == bool(disagree)
