"""Words over the alphabet {1..s}: index codec, meets, agreement profiles, pinned order.

A word is a plain tuple of n symbols from {1..s}.  Its dense index is
little-endian in positions: position 1 is the least significant base-s digit,
so slicing a family by the symbol at the last position is a contiguous block
of the index range.

The "pinned" order on words: x is below y for a set of pinned symbols when
every coordinate of x carrying a pinned symbol is unchanged in y; coordinates
carrying non-pinned symbols may be rewritten freely.  A family closed upward
under this order is called pinned-complete for that symbol set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DENSE_CAP = 1 << 26
DENSE_CAP_ENV = "ISECODE_DENSE_CAP"

Word = tuple[int, ...]


class ParameterError(ValueError):
    """Raised when an operation's preconditions are violated."""


def dense_cap() -> int:
    """Cap on s**n for dense storage; ISECODE_DENSE_CAP overrides the default 2**26."""
    raw = os.environ.get(DENSE_CAP_ENV)
    if raw is None:
        return DEFAULT_DENSE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{DENSE_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 2:
        raise ParameterError(f"{DENSE_CAP_ENV} must be at least 2, got {cap}")
    return cap


@dataclass(frozen=True)
class SpaceParams:
    """The word space: alphabet {1..s} (s >= 2) and fixed length n >= 1.

    Construction fails when s**n exceeds the dense-storage cap; everything in
    this package materializes families as dense bitsets over [0, s**n).
    """

    s: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.s, int) or self.s < 2:
            raise ParameterError(f"alphabet size must be an integer >= 2, got {self.s!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ParameterError(f"word length must be an integer >= 1, got {self.n!r}")
        cap = dense_cap()
        if self.s**self.n > cap:
            raise ParameterError(
                f"s**n = {self.s}**{self.n} exceeds the dense-storage cap {cap}"
            )

    @property
    def size(self) -> int:
        """Number of words, s**n."""
        return self.s**self.n


def check_word(params: SpaceParams, word: Sequence[int]) -> Word:
    """Validate length and symbol range; return the word as a tuple."""
    w = tuple(int(x) for x in word)
    if len(w) != params.n:
        raise ParameterError(f"word length {len(w)} does not match n = {params.n}")
    for sym in w:
        if not 1 <= sym <= params.s:
            raise ParameterError(f"symbol {sym} outside alphabet 1..{params.s}")
    return w


def check_demand(params: SpaceParams, demand: Sequence[int]) -> tuple[int, ...]:
    """Validate an intersection demand vector: s non-negative integer entries."""
    t = tuple(int(x) for x in demand)
    if len(t) != params.s:
        raise ParameterError(f"demand vector needs {params.s} entries, got {len(t)}")
    for ti in t:
        if ti < 0:
            raise ParameterError(f"demand entries must be non-negative, got {ti}")
    return t


def check_symbol_set(
    params: SpaceParams,
    symbols: Iterable[int],
    *,
    proper: bool = True,
    nonempty: bool = False,
) -> frozenset[int]:
    """Validate a subset of the alphabet."""
    syms = frozenset(int(x) for x in symbols)
    for sym in syms:
        if not 1 <= sym <= params.s:
            raise ParameterError(f"symbol {sym} outside alphabet 1..{params.s}")
    if proper and len(syms) == params.s:
        raise ParameterError("symbol set must be a proper subset of the alphabet")
    if nonempty and not syms:
        raise ParameterError("symbol set must be nonempty")
    return syms


def encode(params: SpaceParams, word: Sequence[int]) -> int:
    """Dense index of a word; position 1 is the least significant base-s digit."""
    w = check_word(params, word)
    idx = 0
    for sym in reversed(w):
        idx = idx * params.s + (sym - 1)
    return idx


def decode(params: SpaceParams, index: int) -> Word:
    """Inverse of encode."""
    if not 0 <= index < params.size:
        raise ParameterError(f"index {index} outside [0, {params.size})")
    out = []
    rem = index
    for _ in range(params.n):
        rem, digit = divmod(rem, params.s)
        out.append(digit + 1)
    return tuple(out)


def decode_matrix(params: SpaceParams, indices: np.ndarray | None = None) -> np.ndarray:
    """Decode many indices at once into an (m, n) uint8 symbol matrix."""
    if indices is None:
        rem = np.arange(params.size, dtype=np.int64)
    else:
        rem = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((rem.shape[0], params.n), dtype=np.uint8)
    for pos in range(params.n):
        out[:, pos] = rem % params.s + 1
        rem //= params.s
    return out


def meet(params: SpaceParams, y: Sequence[int], z: Sequence[int]) -> Word:
    """Coordinatewise agreement vector: agreeing coordinates keep their symbol, others become 0."""
    wy = check_word(params, y)
    wz = check_word(params, z)
    return tuple(a if a == b else 0 for a, b in zip(wy, wz))


def profile(params: SpaceParams, y: Sequence[int], z: Sequence[int]) -> tuple[int, ...]:
    """Agreement profile (c_1, ..., c_s): c_l = number of coordinates where both words carry l."""
    counts = [0] * params.s
    for sym in meet(params, y, z):
        if sym:
            counts[sym - 1] += 1
    return tuple(counts)


def satisfies(
    params: SpaceParams, y: Sequence[int], z: Sequence[int], demand: Sequence[int]
) -> bool:
    """True when the pair's agreement profile dominates the demand componentwise."""
    t = check_demand(params, demand)
    prof = profile(params, y, z)
    return all(c >= need for c, need in zip(prof, t))


def leq_pinned(
    params: SpaceParams, x: Sequence[int], y: Sequence[int], pinned: Iterable[int]
) -> bool:
    """Pinned order: every coordinate of x carrying a pinned symbol must be unchanged in y.

    The pinned set must be a proper subset of the alphabet.  Coordinates whose
    symbol is not pinned are free, so two words that differ only on such
    coordinates are below each other in both directions.
    """
    syms = check_symbol_set(params, pinned, proper=True)
    wx = check_word(params, x)
    wy = check_word(params, y)
    return all(a == b or a not in syms for a, b in zip(wx, wy))


def format_word(params: SpaceParams, word: Sequence[int]) -> str:
    """Digit-string text form, e.g. (1, 2, 3, 1) -> \"1231\"; requires s <= 9."""
    if params.s > 9:
        raise ParameterError("digit-string form needs s <= 9; use the binary family format")
    return "".join(str(sym) for sym in check_word(params, word))


def parse_word(params: SpaceParams, text: str) -> Word:
    """Inverse of format_word."""
    if params.s > 9:
        raise ParameterError("digit-string form needs s <= 9; use the binary family format")
    if not text.isdigit():
        raise ParameterError(f"word {text!r} is not a digit string")
    return check_word(params, tuple(int(ch) for ch in text))
