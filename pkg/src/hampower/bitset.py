"""Vertex-set helpers on Python int bitmasks.

Vertex sets are manipulated as arbitrary-precision ints throughout the hot
paths (neighbourhood intersections, degree counts); these helpers keep the
bit fiddling in one place.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def pick_bit(mask: int, rng: random.Random) -> int:
    """Uniformly random set bit of a nonzero mask."""
    idx = rng.randrange(mask.bit_count())
    for _ in range(idx):
        mask &= mask - 1
    low = mask & -mask
    return low.bit_length() - 1
