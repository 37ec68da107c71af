"""Conversions between int bitsets and numpy arrays over the cube's vertices."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def cube_bits(n: int) -> np.ndarray:
    """(2**n, n) array of 0/1 with entry [v, i] = bit i of vertex v."""
    v = np.arange(1 << n, dtype=np.int64)
    out = ((v[:, None] >> np.arange(n)) & 1).astype(np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def cube_coords(n: int) -> np.ndarray:
    """(2**n, n) array of +-1 coordinates, row v is vertex v."""
    out = 1 - 2 * cube_bits(n)
    out.setflags(write=False)
    return out


def unpack(bits: int, n: int) -> np.ndarray:
    nv = 1 << n
    nbytes = max(1, nv // 8)
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nv].astype(bool)


def unpack_many(bitsets, n: int) -> np.ndarray:
    """(len(bitsets), 2**n) bool matrix."""
    nv = 1 << n
    nbytes = max(1, nv // 8)
    buf = b"".join(b.to_bytes(nbytes, "little") for b in bitsets)
    raw = np.frombuffer(buf, dtype=np.uint8).reshape(-1, nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :nv].astype(bool)


def pack_rows(matrix: np.ndarray) -> list[int]:
    """Inverse of :func:`unpack_many`: one int bitset per row."""
    packed = np.packbits(np.asarray(matrix, dtype=bool), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]
