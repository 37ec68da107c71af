"""The realizable orientation Aff(C^n) and orientations presented by their cocircuits."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import bitarray
from .core import SignedSet, VertexSet, full_set, members, reorient
from .errors import CacheMismatchError, MalformedFileError, NotACircuitError
from .geometry import Rectangle, enumerate_rectangles
from .linalg import kernel_vector
from .matroid import Hyperplane, HyperplaneCatalog, affine_rank, facet_points, hex_bits, parse_hex_bits

ORIENTATION_VERSION = 1


@dataclass(frozen=True)
class Orientation:
    """Total cocircuit signature map: entry k signs the complement of catalog hyperplane k.

    Entries are stored as canonical representatives of their +- pair, so two
    orientations are equal exactly when they agree entrywise.
    """

    n: int
    cocircuits: tuple[SignedSet, ...]

    def __len__(self) -> int:
        return len(self.cocircuits)

    def __getitem__(self, k: int) -> SignedSet:
        return self.cocircuits[k]

    def reorient(self, A: VertexSet) -> Orientation:
        if not A:
            return self
        return Orientation(self.n, tuple(reorient(Y, A).canonical() for Y in self.cocircuits))

    def sign_matrix(self) -> np.ndarray:
        """(len(self), 2**n) int8 matrix of signs."""
        pos = bitarray.unpack_many([Y.positive for Y in self.cocircuits], self.n)
        neg = bitarray.unpack_many([Y.negative for Y in self.cocircuits], self.n)
        return pos.astype(np.int8) - neg.astype(np.int8)

    @classmethod
    def from_sign_matrix(cls, n: int, signs: np.ndarray) -> Orientation:
        pos = bitarray.pack_rows(signs > 0)
        neg = bitarray.pack_rows(signs < 0)
        return cls(n, tuple(SignedSet(p, q).canonical() for p, q in zip(pos, neg)))

    def check_against(self, catalog: HyperplaneCatalog) -> None:
        if catalog.n != self.n or len(catalog) != len(self.cocircuits):
            raise CacheMismatchError(
                f"orientation (n={self.n}, {len(self)} cocircuits) does not match "
                f"catalog (n={catalog.n}, {len(catalog)} hyperplanes)"
            )
        everything = full_set(self.n)
        for k, (Y, H) in enumerate(zip(self.cocircuits, catalog)):
            if Y.support != everything & ~H.points:
                raise MalformedFileError(f"cocircuit {k} is not supported on the complement of hyperplane {k}")


@dataclass(frozen=True)
class SignedRectangle:
    rect: Rectangle
    signs: SignedSet

    @classmethod
    def of(cls, rect: Rectangle) -> SignedRectangle:
        """Alternating signs around the rectangle: + at base and -IJ base, - at -I base and -J base."""
        a, b, c, d = rect.cycle
        return cls(rect, SignedSet((1 << a) | (1 << c), (1 << b) | (1 << d)).canonical())


def aff_cocircuit(H: Hyperplane) -> SignedSet:
    vals = bitarray.cube_coords(H.n) @ np.asarray(H.normal, dtype=np.int64) - H.offset
    pos, neg = bitarray.pack_rows(np.stack([vals > 0, vals < 0]))
    return SignedSet(pos, neg).canonical()


def aff_sign_matrix(catalog: HyperplaneCatalog) -> np.ndarray:
    normals = np.array([H.normal for H in catalog], dtype=np.int64).reshape(len(catalog), catalog.n)
    offsets = np.array([H.offset for H in catalog], dtype=np.int64)
    vals = normals @ bitarray.cube_coords(catalog.n).T - offsets[:, None]
    return np.sign(vals).astype(np.int8)


def aff_orientation(n: int, catalog: HyperplaneCatalog) -> Orientation:
    if catalog.n != n:
        raise CacheMismatchError(f"catalog is for n={catalog.n}, requested n={n}")
    return Orientation.from_sign_matrix(n, aff_sign_matrix(catalog))


def radon_signature(C: VertexSet, n: int) -> SignedSet:
    """Signed circuit of Aff on support ``C`` from its affine dependency."""
    pts = members(C)
    if len(pts) < 2 or affine_rank(C, n) != len(pts) - 1:
        raise NotACircuitError("vertex set is not minimally affinely dependent")
    coords = bitarray.cube_coords(n)[pts]
    rows = [[int(x) for x in coords[:, i]] for i in range(n)] + [[1] * len(pts)]
    lam = kernel_vector(rows, len(pts))
    if any(x == 0 for x in lam):
        raise NotACircuitError("dependency vanishes on some element; support is not a circuit")
    pos = sum(1 << v for v, x in zip(pts, lam) if x > 0)
    neg = sum(1 << v for v, x in zip(pts, lam) if x < 0)
    return SignedSet(pos, neg).canonical()


def family_F(n: int, catalog: HyperplaneCatalog | None = None) -> list[SignedSet]:
    """The 2n positive facet cocircuits (negatives are implied by the +- convention)."""
    out = []
    for i in range(1, n + 1):
        for eps in (1, -1):
            pts = facet_points(n, i, eps)
            if catalog is not None:
                catalog.index_of(pts)
            out.append(SignedSet(pts, 0))
    return out


def family_R(n: int, rectangles: Sequence[Rectangle] | None = None) -> list[SignedRectangle]:
    if rectangles is None:
        rectangles = enumerate_rectangles(n)
    return [SignedRectangle.of(r) for r in rectangles]


def rectangle_arrays(R: Sequence[SignedRectangle]) -> tuple[np.ndarray, np.ndarray]:
    """(len(R), 4) vertex indices in cycle order and their +-1 signs."""
    verts = np.array([r.rect.cycle for r in R], dtype=np.int64).reshape(len(R), 4)
    signs = np.array([[r.signs.sign(v) for v in r.rect.cycle] for r in R], dtype=np.int8).reshape(len(R), 4)
    return verts, signs


def orthogonality_violations(
    cocircuit_signs: np.ndarray, R: Sequence[SignedRectangle], chunk: int = 512
) -> np.ndarray:
    """Boolean (cocircuits, rectangles) matrix, True where the pair violates orthogonality."""
    verts, signs = rectangle_arrays(R)
    out = np.zeros((cocircuit_signs.shape[0], len(R)), dtype=bool)
    for lo in range(0, len(R), chunk):
        prod = cocircuit_signs[:, verts[lo : lo + chunk]] * signs[lo : lo + chunk][None]
        agree = (prod > 0).any(axis=2)
        disagree = (prod < 0).any(axis=2)
        out[:, lo : lo + chunk] = agree != disagree
    return out


def is_acyclic(O: Orientation) -> bool:
    """Every vertex lies in the support of a pure (positive up to sign) cocircuit."""
    covered = 0
    for Y in O.cocircuits:
        if Y.is_pure():
            covered |= Y.support
    return covered == full_set(O.n)


# --- orientation files -------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def orientation_lines(O: Orientation, catalog: HyperplaneCatalog) -> list[str]:
    O.check_against(catalog)
    lines = [_dumps({"version": ORIENTATION_VERSION, "n": O.n, "catalog": {"n": catalog.n, "count": len(catalog)}})]
    for k, Y in enumerate(O.cocircuits):
        lines.append(_dumps({"index": k, "positive": hex_bits(Y.positive, O.n), "negative": hex_bits(Y.negative, O.n)}))
    return lines


def write_orientation(O: Orientation, catalog: HyperplaneCatalog, path) -> None:
    with open(path, "w") as fh:
        fh.writelines(line + "\n" for line in orientation_lines(O, catalog))


def parse_orientation(lines: Iterable[str], catalog: HyperplaneCatalog) -> Orientation:
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise MalformedFileError("empty orientation file")
    try:
        header = json.loads(lines[0])
        n = header["n"]
        ref = header["catalog"]
        if header.get("version") != ORIENTATION_VERSION:
            raise MalformedFileError(f"unsupported orientation version {header.get('version')!r}")
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise MalformedFileError(f"bad orientation header: {exc}") from exc
    if n != catalog.n or ref.get("n") != catalog.n or ref.get("count") != len(catalog):
        raise CacheMismatchError(f"orientation refers to catalog {ref}, loaded catalog has n={catalog.n}, count={len(catalog)}")
    slots: list[SignedSet | None] = [None] * len(catalog)
    for ln in lines[1:]:
        try:
            rec = json.loads(ln)
            k = rec["index"]
            pos = parse_hex_bits(rec["positive"], n)
            neg = parse_hex_bits(rec["negative"], n)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise MalformedFileError(f"bad orientation record: {exc}") from exc
        if not isinstance(k, int) or not 0 <= k < len(slots) or slots[k] is not None:
            raise MalformedFileError(f"bad or duplicate cocircuit index {k!r}")
        if pos & neg:
            raise MalformedFileError(f"cocircuit {k}: positive and negative parts overlap")
        slots[k] = SignedSet(pos, neg).canonical()
    if any(Y is None for Y in slots):
        raise MalformedFileError("orientation file does not sign every cocircuit")
    O = Orientation(n, tuple(slots))
    O.check_against(catalog)
    return O


def read_orientation(path, catalog: HyperplaneCatalog) -> Orientation:
    try:
        with open(path) as fh:
            return parse_orientation(fh.read().splitlines(), catalog)
    except OSError as exc:
        raise MalformedFileError(f"cannot read orientation file {path}: {exc}") from exc
