"""The cube matroid M(C^n): affine rank, closure and the hyperplane catalog."""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import bitarray
from .core import (
    MAX_N,
    VertexSet,
    check_dimension,
    coord_mask,
    full_set,
    iter_members,
    members,
    num_vertices,
)
from .errors import CacheMismatchError, CubeError, InconsistentCatalogError, MalformedFileError
from .linalg import bareiss_rank, batch_det

CATALOG_VERSION = 1
_CHUNK = 200_000


def affine_rank(S: VertexSet, n: int) -> int:
    """r(S) = dim aff(S) + 1; the empty set has rank 0.

    Differences of +-1 vectors are -2 times the 0/1 vector of the XOR of
    their indices, so the rank is taken over those XOR masks.
    """
    if S == 0:
        return 0
    pts = members(S)
    v0 = pts[0]
    rows = [[((v ^ v0) >> i) & 1 for i in range(n)] for v in pts[1:]]
    return bareiss_rank(rows) + 1


def _independent_subset(S: VertexSet, n: int) -> list[int]:
    """Greedy affinely independent subset of S spanning aff(S)."""
    basis: list[int] = []
    rank = 0
    for v in iter_members(S):
        trial = basis + [v]
        r = affine_rank(sum(1 << w for w in trial), n)
        if r > rank:
            basis, rank = trial, r
            if rank == n + 1:
                break
    return basis


def closure(S: VertexSet, n: int) -> VertexSet:
    if S == 0:
        raise CubeError("closure of the empty set is not defined here")
    basis = _independent_subset(S, n)
    base_bits = sum(1 << w for w in basis)
    r = len(basis)
    out = S
    for w in range(num_vertices(n)):
        if not (S >> w) & 1 and affine_rank(base_bits | (1 << w), n) == r:
            out |= 1 << w
    return out


def canonical_normal(h: Iterable[int], b: int) -> tuple[tuple[int, ...], int]:
    """Primitive (h, b) whose first nonzero normal entry is positive."""
    h = tuple(h)
    g = math.gcd(*h, b)
    if g == 0 or not any(h):
        raise CubeError("zero normal does not define a hyperplane")
    h = tuple(x // g for x in h)
    b //= g
    first = next(x for x in h if x)
    if first < 0:
        h = tuple(-x for x in h)
        b = -b
    return h, b


def points_of(h: tuple[int, ...], b: int, n: int) -> VertexSet:
    hits = bitarray.cube_coords(n) @ np.asarray(h, dtype=np.int64) == b
    return bitarray.pack_rows(hits[None, :])[0]


@dataclass(frozen=True)
class Hyperplane:
    n: int
    normal: tuple[int, ...]
    offset: int
    points: VertexSet

    @property
    def size(self) -> int:
        return self.points.bit_count()

    @property
    def key(self) -> tuple[tuple[int, ...], int]:
        return self.normal, self.offset

    def value(self, v: int) -> int:
        """x . h - b at vertex v."""
        return sum(c * hc for c, hc in zip(_coords(v, self.n), self.normal)) - self.offset

    def check(self) -> None:
        """Raise if the point set, normal or rank are inconsistent."""
        if canonical_normal(self.normal, self.offset) != self.key:
            raise InconsistentCatalogError(f"normal {self.key} is not canonical")
        if points_of(self.normal, self.offset, self.n) != self.points:
            raise InconsistentCatalogError(f"points do not match normal {self.key}")
        if affine_rank(self.points, self.n) != self.n:
            raise InconsistentCatalogError(f"hyperplane {self.key} does not have rank n")


def _coords(v: int, n: int) -> list[int]:
    return [-1 if (v >> i) & 1 else 1 for i in range(n)]


def make_hyperplane(h: Iterable[int], b: int, n: int) -> Hyperplane:
    h, b = canonical_normal(h, b)
    if len(h) != n:
        raise CubeError(f"normal has length {len(h)}, expected {n}")
    return Hyperplane(n, h, b, points_of(h, b, n))


def make_facet(n: int, i: int, eps: int) -> Hyperplane:
    """Facet x_i = eps (i is 1-based)."""
    check_dimension(n)
    if not 1 <= i <= n or eps not in (-1, 1):
        raise CubeError(f"facet parameters out of range: i={i}, eps={eps}, n={n}")
    h = [0] * n
    h[i - 1] = 1
    return make_hyperplane(h, eps, n)


def make_skew_facet(n: int, i: int, j: int, eps: int) -> Hyperplane:
    """Skew-facet x_i + eps x_j = 0 for 1 <= i < j <= n."""
    check_dimension(n, 2)
    if not 1 <= i < j <= n or eps not in (-1, 1):
        raise CubeError(f"skew-facet parameters out of range: i={i}, j={j}, eps={eps}, n={n}")
    h = [0] * n
    h[i - 1] = 1
    h[j - 1] = eps
    return make_hyperplane(h, 0, n)


def facet_points(n: int, i: int, eps: int) -> VertexSet:
    """Vertices with x_i = eps, without building a Hyperplane."""
    bit = coord_mask([i], n)
    want = 0 if eps == 1 else bit
    return sum(1 << v for v in range(num_vertices(n)) if v & bit == want)


class Kind(enum.Enum):
    FACET = "facet"
    SKEW_FACET = "skew-facet"
    OTHER = "other"


@dataclass(frozen=True)
class HyperplaneKind:
    kind: Kind
    i: int | None = None
    j: int | None = None
    eps: int | None = None

    def __str__(self) -> str:
        if self.kind is Kind.FACET:
            return f"Facet({self.i},{self.eps:+d})"
        if self.kind is Kind.SKEW_FACET:
            return f"SkewFacet({self.i},{self.j},{self.eps:+d})"
        return "Other"


def classify_hyperplane(H: Hyperplane) -> HyperplaneKind:
    nz = [(i + 1, x) for i, x in enumerate(H.normal) if x]
    if len(nz) == 1 and nz[0][1] == 1 and H.offset in (-1, 1):
        return HyperplaneKind(Kind.FACET, i=nz[0][0], eps=H.offset)
    if len(nz) == 2 and nz[0][1] == 1 and nz[1][1] in (-1, 1) and H.offset == 0:
        return HyperplaneKind(Kind.SKEW_FACET, i=nz[0][0], j=nz[1][0], eps=nz[1][1])
    return HyperplaneKind(Kind.OTHER)


@dataclass(frozen=True)
class HyperplaneCatalog:
    """All hyperplanes of C^n, sorted by canonical (normal, offset)."""

    n: int
    entries: tuple[Hyperplane, ...]
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Hyperplane]:
        return iter(self.entries)

    def __getitem__(self, k: int) -> Hyperplane:
        return self.entries[k]

    def index_of(self, points: VertexSet) -> int:
        if not self._index:
            self._index.update((H.points, k) for k, H in enumerate(self.entries))
        try:
            return self._index[points]
        except KeyError:
            raise InconsistentCatalogError("vertex set is not a hyperplane of this catalog") from None

    def facet_index(self, i: int, eps: int) -> int:
        return self.index_of(facet_points(self.n, i, eps))

    def size_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for H in self.entries:
            hist[H.size] = hist.get(H.size, 0) + 1
        return dict(sorted(hist.items()))

    def self_check(self) -> None:
        keys = [H.key for H in self.entries]
        if keys != sorted(keys) or len(set(keys)) != len(keys):
            raise CacheMismatchError("catalog entries are not sorted and distinct")
        for H in self.entries:
            if H.n != self.n:
                raise CacheMismatchError(f"entry of dimension {H.n} in catalog for n={self.n}")
            try:
                H.check()
            except InconsistentCatalogError as exc:
                raise CacheMismatchError(str(exc)) from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text("".join(line + "\n" for line in catalog_lines(self)))

    @classmethod
    def load(cls, path: str | Path, n: int | None = None, check: bool = True) -> HyperplaneCatalog:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise CacheMismatchError(f"cannot read catalog cache {path}: {exc}") from exc
        cat = parse_catalog(text.splitlines())
        if n is not None and cat.n != n:
            raise CacheMismatchError(f"catalog cache is for n={cat.n}, requested n={n}")
        if check:
            cat.self_check()
        return cat


def hex_bits(bits: VertexSet, n: int) -> str:
    """Lowercase hex of the 2**n-bit set as little-endian bytes (bit 0 = vertex 0)."""
    return bits.to_bytes(max(1, num_vertices(n) // 8), "little").hex()


def parse_hex_bits(text: str, n: int) -> VertexSet:
    nbytes = max(1, num_vertices(n) // 8)
    try:
        raw = bytes.fromhex(text)
    except (ValueError, TypeError) as exc:
        raise MalformedFileError(f"bad hex bitset {text!r}") from exc
    if len(raw) != nbytes:
        raise MalformedFileError(f"bitset {text!r} has {len(raw)} bytes, expected {nbytes}")
    bits = int.from_bytes(raw, "little")
    if bits >> num_vertices(n):
        raise MalformedFileError(f"bitset {text!r} has bits beyond vertex {num_vertices(n) - 1}")
    return bits


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def catalog_lines(cat: HyperplaneCatalog) -> list[str]:
    lines = [_dumps({"version": CATALOG_VERSION, "n": cat.n, "count": len(cat)})]
    for H in cat.entries:
        lines.append(
            _dumps({"n": cat.n, "h": list(H.normal), "b": H.offset, "points": hex_bits(H.points, cat.n)})
        )
    return lines


def parse_catalog(lines: list[str]) -> HyperplaneCatalog:
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise CacheMismatchError("empty catalog cache")
    try:
        header = json.loads(lines[0])
        n, count = header["n"], header["count"]
        if header.get("version") != CATALOG_VERSION:
            raise CacheMismatchError(f"unsupported catalog version {header.get('version')!r}")
        check_dimension(n, 2)
        entries = []
        for ln in lines[1:]:
            rec = json.loads(ln)
            if rec["n"] != n or len(rec["h"]) != n:
                raise CacheMismatchError("record dimension differs from header")
            entries.append(Hyperplane(n, tuple(rec["h"]), rec["b"], parse_hex_bits(rec["points"], n)))
    except (KeyError, TypeError, json.JSONDecodeError, MalformedFileError) as exc:
        raise CacheMismatchError(f"malformed catalog cache: {exc}") from exc
    if len(entries) != count:
        raise CacheMismatchError(f"header announces {count} entries, found {len(entries)}")
    return HyperplaneCatalog(n, tuple(entries))


# --- enumeration -----------------------------------------------------------


def _canonical_rows(hb: np.ndarray) -> np.ndarray:
    """Row-wise canonical (h, b): primitive, first nonzero of h positive, zero normals dropped."""
    h = hb[:, :-1]
    keep = (h != 0).any(axis=1)
    hb = hb[keep]
    h = hb[:, :-1]
    g = np.gcd.reduce(hb, axis=1)
    hb = hb // g[:, None]
    first = h[np.arange(len(h)), (h != 0).argmax(axis=1)]
    hb = hb * np.where(first < 0, -1, 1)[:, None]
    return hb


def _cofactors(rows: np.ndarray) -> np.ndarray:
    """Generalized cross product of each stack of (m, m+1) integer rows."""
    N, m, cols = rows.shape
    out = np.empty((N, cols), dtype=np.int64)
    for j in range(cols):
        minor = np.delete(rows, j, axis=2)
        out[:, j] = (-1) ** j * batch_det(minor)
    return out


def _combinations_array(pool: int, k: int, start: int = 0) -> Iterator[np.ndarray]:
    it = itertools.combinations(range(start, pool), k)
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64).reshape(len(chunk), k)


def _catalog_from_keys(n: int, hb: np.ndarray) -> HyperplaneCatalog:
    hb = np.unique(hb, axis=0)
    coords = bitarray.cube_coords(n)
    entries = []
    for lo in range(0, len(hb), _CHUNK):
        block = hb[lo : lo + _CHUNK]
        hits = (coords @ block[:, :-1].T) == block[:, -1][None, :]
        for row, pts in zip(block, bitarray.pack_rows(hits.T)):
            entries.append(Hyperplane(n, tuple(int(x) for x in row[:-1]), int(row[-1]), pts))
    return HyperplaneCatalog(n, tuple(entries))


def _scan_keys(n: int) -> np.ndarray:
    """Normals of every affinely independent n-subset of C^n (by cofactor expansion)."""
    coords = bitarray.cube_coords(n)
    keys = []
    for combo in _combinations_array(num_vertices(n), n):
        rows = np.concatenate([coords[combo], np.ones((len(combo), n, 1), dtype=np.int64)], axis=2)
        c = _cofactors(rows)
        # c . (x, 1) = 0 on every row, so x . h = b with h = c[:n], b = -c[n]
        hb = np.concatenate([c[:, :n], -c[:, n:]], axis=1)
        keys.append(_canonical_rows(hb))
    return np.concatenate(keys) if keys else np.empty((0, n + 1), dtype=np.int64)


def _translate_keys(n: int) -> np.ndarray:
    """Hyperplanes through vertex 0, then their images under all coordinate reversals."""
    bits = bitarray.cube_bits(n)
    keys = []
    for combo in _combinations_array(num_vertices(n), n - 1, start=1):
        h = _cofactors(bits[combo]) if n > 1 else np.zeros((len(combo), 0), dtype=np.int64)
        # through vertex 0 = (1, ..., 1): points satisfy bits . h = 0, i.e. x . h = sum(h)
        hb = np.concatenate([h, h.sum(axis=1, keepdims=True)], axis=1)
        keys.append(_canonical_rows(hb))
    base = np.unique(np.concatenate(keys), axis=0)
    signs = bitarray.cube_coords(n)
    images = [
        _canonical_rows(np.concatenate([base[:, :-1] * signs[t], base[:, -1:]], axis=1))
        for t in range(num_vertices(n))
    ]
    return np.concatenate(images)


def enumerate_hyperplanes(
    n: int, cache: HyperplaneCatalog | None = None, method: str = "translate"
) -> HyperplaneCatalog:
    """Complete, sorted hyperplane catalog of C^n.

    ``method="scan"`` takes the normal of every n-subset; ``"translate"``
    (default) only scans subsets through vertex 0 and maps them around the
    cube by coordinate reversals.  Both give the same catalog.
    """
    check_dimension(n, 2, MAX_N)
    if cache is not None:
        if cache.n != n:
            raise CacheMismatchError(f"catalog cache is for n={cache.n}, requested n={n}")
        cache.self_check()
        return cache
    if method == "scan":
        keys = _scan_keys(n)
    elif method == "translate":
        keys = _translate_keys(n)
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    return _catalog_from_keys(n, keys)


def cocircuit_supports(catalog: HyperplaneCatalog) -> list[VertexSet]:
    everything = full_set(catalog.n)
    return [everything & ~H.points for H in catalog.entries]
