"""Explicit families meeting intersection demands: majority blocks, window lifts, products.

The binary two-block construction puts a majority threshold on symbol 1
inside one block of positions and on symbol 2 inside another.  The general
product construction partitions the positions into one block per symbol,
hosts a lifted window-threshold family in each block, and takes the
conjunction; its density is exactly the product of the per-symbol window
measures at bias 1/s.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .bitsets import from_bool_array, to_bool_array
from .families import Family, SetFamily
from .measures import window_product_bound
from .words import ParameterError, SpaceParams, check_demand, decode_matrix

# Full pairwise verification of a constructed family is quadratic in its size;
# above this many members the constructors fall back to structural checks only.
VERIFY_SIZE_LIMIT = 4096


def majority_tail_count(m: int, t: int) -> int:
    """Number of ways to mark at least ceil((m + t) / 2) out of m positions."""
    if m < 0 or t < 0:
        raise ParameterError("block size and threshold must be non-negative")
    lo = (m + t + 1) // 2
    return sum(comb(m, k) for k in range(lo, m + 1))


def _positions(n: int, block: Iterable[int]) -> tuple[int, ...]:
    pos = tuple(sorted(int(j) for j in set(block)))
    for j in pos:
        if not 1 <= j <= n:
            raise ParameterError(f"position {j} outside 1..{n}")
    return pos


def _should_verify(size: int, verify: bool | None) -> bool:
    if verify is None:
        return size <= VERIFY_SIZE_LIMIT
    return verify


def binary_majority_family(
    n: int,
    block1: Iterable[int],
    block2: Iterable[int],
    t: Sequence[int],
    *,
    verify: bool | None = None,
) -> Family:
    """Binary words holding a symbol-1 majority on block1 and a symbol-2 majority on block2.

    Membership for i = 1, 2: at least (|block_i| + t_i) / 2 positions of
    block_i carry symbol i.  For disjoint blocks the result is checked to be
    (t1, t2)-intersecting (skipped above VERIFY_SIZE_LIMIT members unless
    verify=True).  A threshold above the block size yields an empty family
    with a warning, not an error.
    """
    params = SpaceParams(2, n)
    t1, t2 = check_demand(params, t)
    if t1 < 1 or t2 < 1:
        raise ParameterError("both demand entries must be at least 1")
    x1 = _positions(n, block1)
    x2 = _positions(n, block2)
    if t1 > len(x1) or t2 > len(x2):
        warnings.warn("threshold exceeds its block size; the family is empty", stacklevel=2)
    digits = decode_matrix(params)
    keep = np.ones(params.size, dtype=bool)
    for block, sym, ti in ((x1, 1, t1), (x2, 2, t2)):
        cols = np.array([j - 1 for j in block], dtype=np.int64)
        counts = (
            (digits[:, cols] == sym).sum(axis=1)
            if cols.size
            else np.zeros(params.size, dtype=np.int64)
        )
        keep &= 2 * counts >= len(block) + ti
    fam = Family(params, from_bool_array(keep))
    if not set(x1).intersection(x2) and _should_verify(len(fam), verify):
        if not fam.is_t_intersecting((t1, t2)):
            raise RuntimeError("internal check failed: majority family not intersecting")
    return fam


def binary_majority_density(n1: int, n2: int, t: Sequence[int]) -> Fraction:
    """Exact density of the two-block majority family from the block sizes alone."""
    t1, t2 = (int(x) for x in t)
    if t1 < 1 or t2 < 1:
        raise ParameterError("both demand entries must be at least 1")
    if n1 < 0 or n2 < 0:
        raise ParameterError("block sizes must be non-negative")
    return Fraction(majority_tail_count(n1, t1), 1 << n1) * Fraction(
        majority_tail_count(n2, t2), 1 << n2
    )


def symbol_majority_family(
    n: int,
    s: int,
    block: Iterable[int],
    t: int,
    *,
    verify: bool | None = None,
) -> Family:
    """Words with at least (|block| + t) / 2 coordinates of the block equal to symbol 1.

    The result shares >= t symbol-1 coordinates across every pair, and is
    pinned-complete for {1} (only symbol-1 coordinates are constrained).
    """
    params = SpaceParams(s, n)
    t = int(t)
    x = _positions(n, block)
    if t < 1:
        raise ParameterError("threshold must be at least 1")
    if t > len(x):
        raise ParameterError(f"threshold {t} exceeds block size {len(x)}")
    digits = decode_matrix(params)
    cols = np.array([j - 1 for j in x], dtype=np.int64)
    counts = (digits[:, cols] == 1).sum(axis=1)
    keep = 2 * counts >= len(x) + t
    fam = Family(params, from_bool_array(keep))
    if _should_verify(len(fam), verify):
        demand = (t,) + (0,) * (s - 1)
        if not fam.is_t_intersecting(demand):
            raise RuntimeError("internal check failed: majority family not intersecting")
    return fam


def symbol_majority_density(s: int, block_size: int, t: int) -> Fraction:
    """Exact density of the one-symbol majority family from the block size alone."""
    if s < 2:
        raise ParameterError("alphabet size must be at least 2")
    if t < 1 or t > block_size:
        raise ParameterError("threshold must satisfy 1 <= t <= block size")
    lo = (block_size + t + 1) // 2
    p = Fraction(1, s)
    q = 1 - p
    return sum(
        (comb(block_size, k) * p**k * q ** (block_size - k) for k in range(lo, block_size + 1)),
        start=Fraction(0),
    )


def window_threshold_family(n: int, t: int, r: int) -> SetFamily:
    """Subsets of [n] containing at least t + r of the first t + 2r elements; upward-closed."""
    if t < 0 or r < 0:
        raise ParameterError("threshold and radius must be non-negative")
    m = t + 2 * r
    if m > n:
        raise ParameterError(f"window length {m} exceeds ground-set size {n}")
    wmask = (1 << m) - 1
    bits = 0
    for mask in range(1 << n):
        if (mask & wmask).bit_count() >= t + r:
            bits |= 1 << mask
    return SetFamily(n, bits)


def lift_family(subsets: SetFamily, symbol: int, s: int) -> Family:
    """Words whose set of symbol positions {j : w_j = symbol} belongs to the given family.

    Requires an upward-closed subset family; the lift is then pinned-complete
    for {symbol} and projects back onto the input exactly.
    """
    n = subsets.n
    params = SpaceParams(s, n)
    if not 1 <= symbol <= s:
        raise ParameterError(f"symbol {symbol} outside alphabet 1..{s}")
    if not subsets.is_upward_closed():
        raise ParameterError("lift needs an upward-closed subset family")
    digits = decode_matrix(params)
    weights = 1 << np.arange(n, dtype=np.int64)
    masks = ((digits == symbol) * weights).sum(axis=1)
    member = to_bool_array(subsets.bits, 1 << n)
    return Family(params, from_bool_array(member[masks]))


def fixed_coordinate_family(n: int, s: int, demand: Sequence[int]) -> Family:
    """Words fixing t_1 leading coordinates to 1, the next t_2 to 2, and so on.

    Size is exactly s**(n - sum(t)); meets the demand since all fixed
    coordinates agree across every pair.
    """
    params = SpaceParams(s, n)
    t = check_demand(params, demand)
    if sum(t) > n:
        raise ParameterError(f"demand sum {sum(t)} exceeds word length {n}")
    digits = decode_matrix(params)
    keep = np.ones(params.size, dtype=bool)
    cursor = 0
    for sym, ti in enumerate(t, start=1):
        for _ in range(ti):
            keep &= digits[:, cursor] == sym
            cursor += 1
    return Family(params, from_bool_array(keep))


@dataclass(frozen=True)
class BlockSpec:
    """One block of the product construction: window positions demanding a symbol majority."""

    symbol: int
    positions: tuple[int, ...]
    window: tuple[int, ...]
    t: int
    radius: int


@dataclass(frozen=True)
class ProductConstruction:
    family: Family
    blocks: tuple[BlockSpec, ...]
    density: Fraction


def block_product_family(
    n: int, s: int, demand: Sequence[int], *, verify: bool | None = None
) -> ProductConstruction:
    """Partition the positions into per-symbol blocks and host a window threshold in each.

    Block i receives t_i + 2*r_i positions (the last block absorbs the
    remainder), where r_i is the radius selected by the window-measure rule at
    bias 1/s; membership demands at least t_i + r_i window positions carrying
    symbol i, for every i.  The density is exactly the product of the window
    measures.  Raises CapacityError (with the deficit) when the windows do not
    fit into n.
    """
    params = SpaceParams(s, n)
    t = check_demand(params, demand)
    bound = window_product_bound(n, s, t)  # validates s >= 3 and capacity
    sizes = [ti + 2 * sel.radius for ti, sel in zip(t, bound.selections)]
    if sum(sizes) > n:
        raise RuntimeError("internal check failed: selected windows exceed capacity")
    blocks = []
    cursor = 1
    for sym, (ti, sel) in enumerate(zip(t, bound.selections), start=1):
        window = tuple(range(cursor, cursor + sizes[sym - 1]))
        if sym == s:
            positions = tuple(range(cursor, n + 1))
        else:
            positions = window
        cursor += len(positions)
        blocks.append(BlockSpec(sym, positions, window, ti, sel.radius))
    digits = decode_matrix(params)
    keep = np.ones(params.size, dtype=bool)
    for block in blocks:
        if block.t == 0:
            continue
        cols = np.array([j - 1 for j in block.window], dtype=np.int64)
        counts = (digits[:, cols] == block.symbol).sum(axis=1)
        keep &= counts >= block.t + block.radius
    fam = Family(params, from_bool_array(keep))
    if fam.density() != bound.density:
        raise RuntimeError("internal check failed: product density mismatch")
    _verify_product(fam, blocks, t, s, verify)
    return ProductConstruction(fam, tuple(blocks), bound.density)


def _verify_product(
    fam: Family, blocks: Sequence[BlockSpec], t: Sequence[int], s: int, verify: bool | None
) -> None:
    # Blockwise check: each lifted window family meets its own one-symbol
    # demand, which forces the full product to meet the joint demand.  These
    # window families are small regardless of n.
    for block in blocks:
        if block.t == 0:
            continue
        m = block.t + 2 * block.radius
        wfam = lift_family(window_threshold_family(m, block.t, block.radius), block.symbol, s)
        block_demand = tuple(block.t if sym == block.symbol else 0 for sym in range(1, s + 1))
        if not wfam.is_t_intersecting(block_demand):
            raise RuntimeError("internal check failed: block family not intersecting")
    if _should_verify(len(fam), verify) and not fam.is_t_intersecting(t):
        raise RuntimeError("internal check failed: product family not intersecting")
