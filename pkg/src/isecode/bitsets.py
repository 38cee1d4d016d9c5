"""Bit-parallel helpers for dense families stored as arbitrary-size Python ints.

A family over an index range [0, N) is a single int whose bit k records
membership of index k.  The helpers here build periodic digit masks (which
make per-coordinate saturation sweeps O(s^2) big-int operations per
coordinate) and convert between int bitsets and numpy bool arrays.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

import numpy as np


def iter_bits(x: int) -> Iterator[int]:
    """Yield positions of set bits, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def tile(pattern: int, period: int, nbits: int) -> int:
    """Tile `pattern` (confined to [0, period)) periodically across nbits."""
    out = pattern
    span = period
    while span < nbits:
        out |= out << span
        span <<= 1
    return out & ((1 << nbits) - 1)


@lru_cache(maxsize=64)
def _zero_digit_mask(s: int, n: int, pos: int) -> int:
    stride = s ** (pos - 1)
    return tile((1 << stride) - 1, s**pos, s**n)


def digit_mask(s: int, n: int, pos: int, digit: int) -> int:
    """Mask of all indices in [0, s**n) whose base-s digit at 1-based `pos` is `digit`."""
    return _zero_digit_mask(s, n, pos) << (digit * s ** (pos - 1))


def to_bool_array(bits: int, nbits: int) -> np.ndarray:
    nbytes = (nbits + 7) // 8
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nbits].astype(bool)


def from_bool_array(arr: np.ndarray) -> int:
    packed = np.packbits(np.asarray(arr, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")
