"""Dense families of words and of subsets, with closures, slices, and projections.

A Family is an immutable bitset over all s**n word indices.  A SetFamily is
the analogous bitset over all 2**n subsets of {1..n} (subset A is stored at
index sum(1 << (j - 1) for j in A)).  All operations return new values.
"""

from __future__ import annotations

import struct
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bitsets import digit_mask, from_bool_array, iter_bits
from .words import (
    ParameterError,
    SpaceParams,
    Word,
    check_demand,
    check_symbol_set,
    decode,
    decode_matrix,
    dense_cap,
    encode,
    format_word,
    parse_word,
)

_GRAM_CHUNK_BITS = 1 << 22  # bound on chunk_rows * m when forming agreement grams


class FamilyFormatError(ValueError):
    """Malformed family file; carries the offending 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _pair_agreement_ok(digits: np.ndarray, demand: Sequence[int]) -> bool:
    """All ordered pairs of rows agree on >= demand[l] coordinates carrying l+1, for each l."""
    m = digits.shape[0]
    marks = []
    for sym, need in enumerate(demand, start=1):
        if need == 0:
            continue
        e = digits == sym
        if int(e.sum(axis=1).min()) < need:
            return False  # some self pair already fails
        marks.append((e.astype(np.int32), need))
    chunk = max(1, _GRAM_CHUNK_BITS // max(m, 1))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        for e, need in marks:
            gram = e[lo:hi] @ e.T
            if int(gram.min()) < need:
                return False
    return True


class Family:
    """Immutable dense family F of words in [s]^n with cached cardinality."""

    __slots__ = ("params", "_bits", "_size")

    def __init__(self, params: SpaceParams, bits: int = 0):
        if bits < 0 or bits >> params.size:
            raise ParameterError("membership bits outside the index range")
        self.params = params
        self._bits = bits
        self._size = bits.bit_count()

    # -- construction ------------------------------------------------------

    @classmethod
    def empty(cls, params: SpaceParams) -> "Family":
        return cls(params, 0)

    @classmethod
    def full(cls, params: SpaceParams) -> "Family":
        return cls(params, (1 << params.size) - 1)

    @classmethod
    def from_indices(cls, params: SpaceParams, indices: Iterable[int]) -> "Family":
        bits = 0
        for idx in indices:
            if not 0 <= idx < params.size:
                raise ParameterError(f"index {idx} outside [0, {params.size})")
            bits |= 1 << idx
        return cls(params, bits)

    @classmethod
    def from_words(cls, params: SpaceParams, words: Iterable[Sequence[int]]) -> "Family":
        return cls.from_indices(params, (encode(params, w) for w in words))

    # -- basic queries -----------------------------------------------------

    @property
    def bits(self) -> int:
        return self._bits

    def __len__(self) -> int:
        return self._size

    def contains_index(self, index: int) -> bool:
        return bool((self._bits >> index) & 1)

    def __contains__(self, word: Sequence[int]) -> bool:
        return self.contains_index(encode(self.params, word))

    def indices(self) -> Iterator[int]:
        return iter_bits(self._bits)

    def members(self) -> Iterator[Word]:
        for idx in self.indices():
            yield decode(self.params, idx)

    def density(self) -> Fraction:
        """Exact |F| / s**n."""
        return Fraction(self._size, self.params.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.params == other.params and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.params, self._bits))

    def __repr__(self) -> str:
        return f"Family(s={self.params.s}, n={self.params.n}, size={self._size})"

    # -- set algebra -------------------------------------------------------

    def _require_same(self, other: "Family") -> None:
        if self.params != other.params:
            raise ParameterError("families live in different word spaces")

    def __or__(self, other: "Family") -> "Family":
        self._require_same(other)
        return Family(self.params, self._bits | other._bits)

    def __and__(self, other: "Family") -> "Family":
        self._require_same(other)
        return Family(self.params, self._bits & other._bits)

    def __sub__(self, other: "Family") -> "Family":
        self._require_same(other)
        return Family(self.params, self._bits & ~other._bits)

    def complement(self) -> "Family":
        return Family(self.params, ~self._bits & ((1 << self.params.size) - 1))

    def issubset(self, other: "Family") -> bool:
        self._require_same(other)
        return not (self._bits & ~other._bits)

    # -- intersection demands ----------------------------------------------

    def is_t_intersecting(self, demand: Sequence[int]) -> bool:
        """True when every ordered pair of members, self pairs included, meets the demand."""
        t = check_demand(self.params, demand)
        if not any(t) or self._size == 0:
            return True
        idx = np.fromiter(self.indices(), dtype=np.int64, count=self._size)
        return _pair_agreement_ok(decode_matrix(self.params, idx), t)

    # -- pinned closure ----------------------------------------------------

    def _sweep(self, pinned: frozenset[int], find_witness: bool):
        """Per-coordinate saturation to fixpoint.

        For each position and each non-pinned source digit, every member
        spawns all symbol variants at that position.  Returns the saturated
        bits, or the first added word as a witness triple when requested.
        """
        s, n = self.params.s, self.params.n
        bits = self._bits
        changed = True
        while changed:
            changed = False
            for pos in range(1, n + 1):
                stride = s ** (pos - 1)
                for c in range(s):
                    if (c + 1) in pinned:
                        continue
                    sub = bits & digit_mask(s, n, pos, c)
                    if not sub:
                        continue
                    base = sub >> (c * stride)
                    expand = 0
                    for c2 in range(s):
                        if c2 != c:
                            expand |= base << (c2 * stride)
                    new = expand & ~bits
                    if new:
                        if find_witness:
                            y_idx = (new & -new).bit_length() - 1
                            c2 = (y_idx // stride) % s
                            x_idx = y_idx + (c - c2) * stride
                            return bits, (x_idx, y_idx, pos)
                        bits |= new
                        changed = True
        return bits, None

    def pinned_closure(self, pinned: Iterable[int]) -> "Family":
        """Minimal superset closed upward under the pinned order.

        Equivalently: every member may have all coordinates carrying
        non-pinned symbols rewritten arbitrarily.  The pinned set must be a
        nonempty proper subset of the alphabet.
        """
        syms = check_symbol_set(self.params, pinned, proper=True, nonempty=True)
        bits, _ = self._sweep(syms, find_witness=False)
        return Family(self.params, bits)

    def pinned_violation(
        self, pinned: Iterable[int]
    ) -> tuple[Word, Word, int] | None:
        """A witness (x in F, y not in F, 1-based position) that x is below y, or None."""
        syms = check_symbol_set(self.params, pinned, proper=True, nonempty=True)
        _, witness = self._sweep(syms, find_witness=True)
        if witness is None:
            return None
        x_idx, y_idx, pos = witness
        return decode(self.params, x_idx), decode(self.params, y_idx), pos

    def is_pinned_complete(self, pinned: Iterable[int]) -> bool:
        return self.pinned_violation(pinned) is None

    # -- slices and projections ---------------------------------------------

    def slice(self, symbol: int) -> "Family":
        """Sub-family of words whose last position carries `symbol`, with that position dropped.

        The last position is the most significant digit, so this is a
        contiguous block of the index range.
        """
        s, n = self.params.s, self.params.n
        if n < 2:
            raise ParameterError("slicing needs word length n >= 2")
        if not 1 <= symbol <= s:
            raise ParameterError(f"symbol {symbol} outside alphabet 1..{s}")
        block = s ** (n - 1)
        sub = (self._bits >> ((symbol - 1) * block)) & ((1 << block) - 1)
        return Family(SpaceParams(s, n - 1), sub)

    def slices(self) -> tuple["Family", ...]:
        return tuple(self.slice(sym) for sym in range(1, self.params.s + 1))

    def project(self, symbol: int) -> "SetFamily":
        """Subsets of positions realized as {j : y_j = symbol} by some member."""
        s, n = self.params.s, self.params.n
        if not 1 <= symbol <= s:
            raise ParameterError(f"symbol {symbol} outside alphabet 1..{s}")
        if self._size == 0:
            return SetFamily(n, 0)
        idx = np.fromiter(self.indices(), dtype=np.int64, count=self._size)
        digits = decode_matrix(self.params, idx)
        weights = 1 << np.arange(n, dtype=np.int64)
        masks = ((digits == symbol) * weights).sum(axis=1)
        arr = np.zeros(1 << n, dtype=bool)
        arr[masks] = True
        return SetFamily(n, from_bool_array(arr))


class SetFamily:
    """Immutable dense family of subsets of {1..n}."""

    __slots__ = ("n", "_bits", "_size")

    def __init__(self, n: int, bits: int = 0):
        if not isinstance(n, int) or n < 1:
            raise ParameterError(f"ground-set size must be an integer >= 1, got {n!r}")
        if (1 << n) > dense_cap():
            raise ParameterError(f"2**{n} exceeds the dense-storage cap {dense_cap()}")
        if bits < 0 or bits >> (1 << n):
            raise ParameterError("membership bits outside the subset range")
        self.n = n
        self._bits = bits
        self._size = bits.bit_count()

    @classmethod
    def empty(cls, n: int) -> "SetFamily":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "SetFamily":
        return cls(n, (1 << (1 << n)) - 1)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        bits = 0
        for mask in masks:
            if not 0 <= mask < (1 << n):
                raise ParameterError(f"subset mask {mask} outside [0, 2**{n})")
            bits |= 1 << mask
        return cls(n, bits)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        masks = []
        for elems in sets:
            mask = 0
            for j in elems:
                if not 1 <= j <= n:
                    raise ParameterError(f"element {j} outside ground set 1..{n}")
                mask |= 1 << (j - 1)
            masks.append(mask)
        return cls.from_masks(n, masks)

    @property
    def bits(self) -> int:
        return self._bits

    def __len__(self) -> int:
        return self._size

    def contains_mask(self, mask: int) -> bool:
        return bool((self._bits >> mask) & 1)

    def __contains__(self, elems: Iterable[int]) -> bool:
        mask = 0
        for j in elems:
            mask |= 1 << (int(j) - 1)
        return self.contains_mask(mask)

    def masks(self) -> Iterator[int]:
        return iter_bits(self._bits)

    def sets(self) -> Iterator[frozenset[int]]:
        for mask in self.masks():
            yield frozenset(j + 1 for j in iter_bits(mask))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.n == other.n and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.n, self._bits))

    def __repr__(self) -> str:
        return f"SetFamily(n={self.n}, size={self._size})"

    def is_upward_closed(self) -> bool:
        bits = self._bits
        for j in range(1, self.n + 1):
            stride = 1 << (j - 1)
            lower = bits & digit_mask(2, self.n, j, 0)
            if (lower << stride) & ~bits:
                return False
        return True

    def up_closure(self) -> "SetFamily":
        bits = self._bits
        changed = True
        while changed:
            changed = False
            for j in range(1, self.n + 1):
                stride = 1 << (j - 1)
                lower = bits & digit_mask(2, self.n, j, 0)
                add = (lower << stride) & ~bits
                if add:
                    bits |= add
                    changed = True
        return SetFamily(self.n, bits)


# -- file formats ------------------------------------------------------------
#
# Text: line 1 "s n", then one word per line as a digit string (s <= 9).
# Order irrelevant, duplicates rejected.  Binary: u32le s, u32le n, then the
# raw little-endian bitset, exactly ceil(s**n / 8) bytes.

BINARY_SUFFIX = ".famb"


def save_family(family: Family, path: str, *, binary: bool | None = None) -> None:
    if binary is None:
        binary = str(path).endswith(BINARY_SUFFIX)
    if binary:
        _save_binary(family, path)
    else:
        _save_text(family, path)


def load_family(path: str, *, binary: bool | None = None) -> Family:
    if binary is None:
        binary = str(path).endswith(BINARY_SUFFIX)
    return _load_binary(path) if binary else _load_text(path)


def _save_text(family: Family, path: str) -> None:
    params = family.params
    if params.s > 9:
        raise ParameterError("text family format needs s <= 9; use the binary format")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{params.s} {params.n}\n")
        for word in family.members():
            fh.write(format_word(params, word) + "\n")


def _load_text(path: str) -> Family:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FamilyFormatError("missing 's n' header", line=1)
    head = lines[0].split()
    if len(head) != 2 or not all(tok.isdigit() for tok in head):
        raise FamilyFormatError(f"expected 's n' header, got {lines[0]!r}", line=1)
    try:
        params = SpaceParams(int(head[0]), int(head[1]))
    except ParameterError as exc:
        raise FamilyFormatError(str(exc), line=1) from exc
    if params.s > 9:
        raise FamilyFormatError("text family format needs s <= 9", line=1)
    bits = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        try:
            idx = encode(params, parse_word(params, text))
        except ParameterError as exc:
            raise FamilyFormatError(str(exc), line=lineno) from exc
        if (bits >> idx) & 1:
            raise FamilyFormatError(f"duplicate word {text!r}", line=lineno)
        bits |= 1 << idx
    return Family(params, bits)


def _save_binary(family: Family, path: str) -> None:
    params = family.params
    nbytes = (params.size + 7) // 8
    with open(path, "wb") as fh:
        fh.write(struct.pack("<II", params.s, params.n))
        fh.write(family.bits.to_bytes(nbytes, "little"))


def _load_binary(path: str) -> Family:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 8:
        raise FamilyFormatError("binary family file shorter than its 8-byte header")
    s, n = struct.unpack("<II", blob[:8])
    try:
        params = SpaceParams(s, n)
    except ParameterError as exc:
        raise FamilyFormatError(str(exc)) from exc
    nbytes = (params.size + 7) // 8
    payload = blob[8:]
    if len(payload) != nbytes:
        raise FamilyFormatError(
            f"expected {nbytes} bitset bytes for s={s}, n={n}, found {len(payload)}"
        )
    bits = int.from_bytes(payload, "little")
    if bits >> params.size:
        raise FamilyFormatError("nonzero padding bits beyond s**n")
    return Family(params, bits)
