"""Random greedy builder for disjoint coloured k-power paths.

Given r equal parts and s path patterns, the builder produces s vertex
disjoint k-power paths, each visiting the parts in order, one path per
round.  Within a round it grows all residual paths simultaneously, level by
level: the partial paths restricted to the last (up to k) levels form a
clique tiling, and attaching the next level is one perfect matching in the
auxiliary tiling graph built from the pattern-specified colour graphs.
Before each matching, bipartite minimum degrees are checked against the
(2w-1)/2w threshold (w = window size) that guarantees the matching exists;
a breach aborts the round with full indices.  At the end of a round one of
the finished paths is removed uniformly at random and kept.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .bitset import mask_of
from .core import (
    ColourPattern,
    GraphCollection,
    PowerPath,
    power_path,
    verify_coloured_embedding,
)
from .errors import (
    AbortError,
    HamPowerError,
    InvalidInstanceError,
    NoMatchingError,
    NoPerfectMatchingError,
)
from .matching import BipartiteGraph, sample_perfect_matching


@dataclass
class PartitionState:
    """Residual parts during a run: equal sizes n_i, shrinking by one per step."""

    parts: list[list[int]]
    step: int
    n_i: int

    def check(self) -> None:
        if any(len(p) != self.n_i for p in self.parts):
            raise HamPowerError("internal error: residual parts lost equal sizes")


def build_path_collection(
    collection: GraphCollection,
    parts: Sequence[Sequence[int]],
    patterns: Sequence[ColourPattern],
    s: int,
    rng: random.Random,
    sampler_mode: str = "fast",
) -> list[PowerPath]:
    """Produce s disjoint coloured k-power paths, one per pattern.

    ``parts`` are r pairwise-disjoint vertex sets of equal size; pattern i
    must live on power_path(r, k) and colours index into the collection.
    Raises :class:`AbortError` when a degree threshold fails (with step,
    level and part pair) and :class:`NoMatchingError` if a matching is
    missing despite the thresholds holding.
    """
    if len(patterns) != s:
        raise InvalidInstanceError(f"expected {s} patterns, got {len(patterns)}")
    if s == 0:
        return []
    r = len(parts)
    k = patterns[0].host.k
    n1 = len(parts[0])
    if any(len(p) != n1 for p in parts):
        raise InvalidInstanceError("all parts must have equal size")
    if s > n1:
        raise InvalidInstanceError(f"cannot build s={s} paths from parts of size {n1}")
    seen: set[int] = set()
    for p in parts:
        if seen & set(p):
            raise InvalidInstanceError("parts must be pairwise disjoint")
        seen.update(p)
    for i, pat in enumerate(patterns):
        if pat.host != power_path(r, k):
            raise InvalidInstanceError(f"pattern {i + 1} does not live on power_path({r},{k})")
        if pat.max_colour > collection.m:
            raise InvalidInstanceError(f"pattern {i + 1} uses a colour beyond m={collection.m}")

    state = PartitionState([sorted(p) for p in parts], 0, n1)
    out: list[PowerPath] = []
    for step, pat in enumerate(patterns, start=1):
        state.step = step
        state.check()
        chains = _run_round(collection, state, pat, k, r, step, rng, sampler_mode)
        chosen = chains[rng.randrange(state.n_i)]
        result = verify_coloured_embedding(collection, pat, chosen)
        if not result.ok:
            raise HamPowerError(f"internal error: round {step} path fails at {result.violation}")
        out.append(PowerPath(k, tuple(chosen)))
        for j in range(r):
            state.parts[j].remove(chosen[j])
        state.n_i -= 1
    return out


def _run_round(
    collection: GraphCollection,
    state: PartitionState,
    pat: ColourPattern,
    k: int,
    r: int,
    step: int,
    rng: random.Random,
    sampler_mode: str,
) -> list[list[int]]:
    """Grow n_i disjoint coloured paths across all r parts."""
    n_i = state.n_i
    chains: list[list[int]] = [[v] for v in state.parts[0]]
    for lvl in range(1, r):
        win_lo = max(0, lvl - k)
        width = lvl - win_lo

        # threshold check on the colour graphs the pattern designates
        for j in range(win_lo, lvl):
            colour = pat.colour_of(j, lvl)
            d = _min_pair_degree(collection, colour, state.parts[j], state.parts[lvl])
            if 2 * width * d < (2 * width - 1) * n_i:
                raise AbortError(
                    f"step {step}: min degree {d} between parts {j} and {lvl} in "
                    f"colour {colour} is below {(2 * width - 1)}/{2 * width} of n_i={n_i}",
                    step=step,
                    level=lvl,
                    pair=(j, lvl),
                )

        right = state.parts[lvl]
        right_mask = mask_of(right)
        index_of = {v: i for i, v in enumerate(right)}
        rows = []
        for chain in chains:
            cand = right_mask
            for j in range(win_lo, lvl):
                cand &= collection.neighbour_mask(pat.colour_of(j, lvl), chain[j])
            row = []
            while cand:
                low = cand & -cand
                row.append(index_of[low.bit_length() - 1])
                cand ^= low
            rows.append(tuple(sorted(row)))
        aux = BipartiteGraph(n_i, n_i, tuple(rows))
        try:
            matching = sample_perfect_matching(aux, rng, mode=sampler_mode)
        except NoPerfectMatchingError as exc:
            raise NoMatchingError(
                f"step {step}: no perfect matching while attaching level {lvl} "
                f"although the degree thresholds held (anomalous)",
                step=step,
                level=lvl,
            ) from exc
        for (t_idx, v_idx) in matching:
            chains[t_idx].append(right[v_idx])

        _assert_window_tiling(collection, pat, chains, lvl, k, step)
    return chains


def _min_pair_degree(
    collection: GraphCollection, colour: int, a_side: Sequence[int], b_side: Sequence[int]
) -> int:
    a_mask, b_mask = mask_of(a_side), mask_of(b_side)
    d = min(collection.degree_into(colour, v, b_mask) for v in a_side)
    return min(d, min(collection.degree_into(colour, v, a_mask) for v in b_side))


def _assert_window_tiling(
    collection: GraphCollection,
    pat: ColourPattern,
    chains: Sequence[Sequence[int]],
    lvl: int,
    k: int,
    step: int,
) -> None:
    """Each chain's trailing window must be a clique in the pattern colours."""
    lo = max(0, lvl - k + 1)
    for chain in chains:
        for p in range(lo, lvl + 1):
            for q in range(p + 1, lvl + 1):
                colour = pat.colour_of(p, q)
                if not collection.has_edge(colour, chain[p], chain[q]):
                    raise HamPowerError(
                        f"internal error: step {step} tiling invariant broken at "
                        f"levels ({p},{q})"
                    )
