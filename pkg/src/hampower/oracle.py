"""Exhaustive decision procedure for coloured Hamilton k-power existence.

Patterns are anchored, so the search enumerates injective assignments of
vertices to host positions 0..n-1 left to right (the position-0 vertex
ranges over all n vertices), pruning a partial assignment as soon as any
within-k host edge fails its colour's adjacency.  Wrap-around edges are
checked when their later endpoint is placed.  When the pattern is invariant
under the reflection through position 0, mirrored assignments are cut by
requiring the position-(n-1) vertex to exceed the position-1 vertex; for
general patterns that rule is unsound and is skipped.  Candidates are tried
in ascending residual degree in the colour of the next cycle edge.
Intended for n up to about 14.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .core import (
    POWER_CYCLE,
    ColourPattern,
    GraphCollection,
    PowerCycle,
    verify_coloured_embedding,
)
from .errors import HamPowerError, InvalidInstanceError

FOUND = "found"
NONE = "none"
UNKNOWN = "unknown"


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    elapsed: float = 0.0
    result: str = UNKNOWN


def _back_constraints(pattern: ColourPattern) -> list[list[tuple[int, int]]]:
    """For each position p, the (earlier position, colour) pairs it must
    respect; wrap edges are attributed to their later endpoint."""
    n, k = pattern.host.order, pattern.host.k
    back: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for p in range(n):
        for d in range(1, k + 1):
            if p - d >= 0:
                back[p].append((p - d, pattern.colour_of(p - d, p)))
            if p + d >= n:
                back[p].append((p + d - n, pattern.colour_of(p, p + d - n)))
    return back


def _reflection_symmetric(pattern: ColourPattern) -> bool:
    n = pattern.host.order
    return all(
        pattern.colour_of((-i) % n, (-j) % n) == c
        for (i, j), c in pattern.colours.items()
    )


def _run(
    collection: GraphCollection,
    pattern: ColourPattern,
    budget: Optional[int],
    count_all: bool,
    use_reflection: bool,
) -> tuple[Optional[list[int]], int, SearchStats]:
    if pattern.host.kind != POWER_CYCLE:
        raise InvalidInstanceError("oracle needs a power-cycle pattern")
    if pattern.host.order != collection.n:
        raise InvalidInstanceError("pattern order must equal the vertex count")
    n = collection.n
    stats = SearchStats()
    started = time.perf_counter()
    back = _back_constraints(pattern)
    next_colour = [pattern.colour_of(p, (p + 1) % n) for p in range(n)]
    full = (1 << n) - 1

    assignment = [-1] * n
    state = {"used": 0, "count": 0, "found": None, "truncated": False}

    def dfs(p: int) -> bool:  # True = stop the whole search
        if p == n:
            state["count"] += 1
            if state["found"] is None:
                state["found"] = assignment.copy()
            return not count_all
        cand = full & ~state["used"]
        for (q, colour) in back[p]:
            cand &= collection.neighbour_mask(colour, assignment[q])
        if use_reflection and p == n - 1 and n >= 3:
            cand &= ~((1 << (assignment[1] + 1)) - 1)
        if cand == 0:
            return False
        live = ~state["used"] & full
        key_colour = next_colour[p]
        ordered = []
        c = cand
        while c:
            low = c & -c
            v = low.bit_length() - 1
            ordered.append(((collection.neighbour_mask(key_colour, v) & live).bit_count(), v))
            c ^= low
        ordered.sort()
        for (_, v) in ordered:
            if budget is not None and stats.nodes >= budget:
                state["truncated"] = True
                return True
            stats.nodes += 1
            stats.max_depth = max(stats.max_depth, p + 1)
            assignment[p] = v
            state["used"] |= 1 << v
            stop = dfs(p + 1)
            state["used"] &= ~(1 << v)
            assignment[p] = -1
            if stop:
                return True
        return False

    dfs(0)
    stats.elapsed = time.perf_counter() - started
    if state["truncated"]:
        stats.result = UNKNOWN
    elif state["found"] is not None:
        stats.result = FOUND
    else:
        stats.result = NONE
    return state["found"], state["count"], stats


def find_coloured_hamilton_power(
    collection: GraphCollection,
    pattern: ColourPattern,
    budget: Optional[int] = None,
) -> tuple[Optional[PowerCycle], SearchStats]:
    """Search for any vertex placement realising the anchored cycle pattern.

    Returns a verified cycle with ``stats.result == "found"``, or
    ``(None, stats)`` where the result distinguishes "none" (search space
    exhausted) from "unknown" (node budget hit first).
    """
    if pattern.host.kind != POWER_CYCLE:
        raise InvalidInstanceError("oracle needs a power-cycle pattern")
    found, _, stats = _run(
        collection, pattern, budget, count_all=False,
        use_reflection=_reflection_symmetric(pattern),
    )
    if found is None:
        return None, stats
    result = verify_coloured_embedding(collection, pattern, found)
    if not result.ok:
        raise HamPowerError(
            f"internal error: oracle output fails verification at {result.violation}"
        )
    return PowerCycle(pattern.host.k, tuple(found)), stats


def count_coloured_hamilton_powers(
    collection: GraphCollection,
    pattern: ColourPattern,
    budget: Optional[int] = None,
) -> tuple[int, SearchStats]:
    """Count anchored placements realising the pattern, by full enumeration.

    The count normalisation: every injective position-to-vertex assignment
    counts once, so one unlabelled cycle subgraph contributes up to 2n
    placements (n rotations times two directions).  The reflection cut is
    disabled here so the count is exact.  A hit node budget yields
    ``stats.result == "unknown"`` with the partial count.
    """
    _, count, stats = _run(
        collection, pattern, budget, count_all=True, use_reflection=False
    )
    if stats.result != UNKNOWN:
        stats.result = FOUND if count else NONE
    return count, stats
