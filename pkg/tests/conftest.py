"""Shared brute-force oracles, kept independent of the library's fast paths.

These recompute expected values from the raw definitions (explicit loops over
words and pairs) so the bitset / gram-matrix implementations are checked
against a second route.
"""

from __future__ import annotations

import random
from itertools import combinations

from isecode import Family, SpaceParams
from isecode.words import decode, leq_pinned, satisfies


def all_words(params: SpaceParams):
    return [decode(params, i) for i in range(params.size)]


def brute_closure(family: Family, pinned) -> Family:
    params = family.params
    members = list(family.members())
    out = []
    for z in all_words(params):
        if any(leq_pinned(params, y, z, pinned) for y in members):
            out.append(z)
    return Family.from_words(params, out)


def brute_is_complete(family: Family, pinned) -> bool:
    params = family.params
    members = list(family.members())
    for x in members:
        for z in all_words(params):
            if leq_pinned(params, x, z, pinned) and z not in family:
                return False
    return True


def brute_intersecting(family: Family, demand) -> bool:
    params = family.params
    members = list(family.members())
    for y in members:
        if not satisfies(params, y, y, demand):
            return False
    for y, z in combinations(members, 2):
        if not satisfies(params, y, z, demand):
            return False
    return True


def brute_max_intersecting(n: int, s: int, demand) -> int:
    """Maximum family size by enumerating all subsets of the valid words."""
    params = SpaceParams(s, n)
    verts = [w for w in all_words(params) if satisfies(params, w, w, demand)]
    m = len(verts)
    assert m <= 16, "subset enumeration oracle limited to 2**16 cases"
    compat = [
        [satisfies(params, verts[i], verts[j], demand) for j in range(m)] for i in range(m)
    ]
    best = 0
    for mask in range(1 << m):
        size = mask.bit_count()
        if size <= best:
            continue
        chosen = [i for i in range(m) if (mask >> i) & 1]
        if all(compat[i][j] for i, j in combinations(chosen, 2)):
            best = size
    return best


def random_family(params: SpaceParams, seed: int, density_num: int = 1, density_den: int = 4) -> Family:
    rng = random.Random(seed)
    bits = 0
    for idx in range(params.size):
        if rng.randrange(density_den) < density_num:
            bits |= 1 << idx
    return Family(params, bits)
