"""Bipartite matching, clique-tiling extension, and perfect-matching sampling.

The tiling machinery turns "attach one more level to a family of partial
cliques" into a single bipartite matching problem: the auxiliary graph has
one left vertex per tile, adjacent to a right vertex exactly when that
vertex completes the tile (is adjacent to every tile member).  A perfect
matching in the auxiliary graph extends a perfect K_k-tiling to a perfect
K_{k+1}-tiling.

Perfect matchings can be sampled exactly uniformly (sequential conditional
sampling weighted by permanent counts, side length <= 24) or heuristically
(randomised-order augmenting search, near-uniform, cheap at any size).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bitset import iter_bits, mask_of
from .errors import (
    InvalidInstanceError,
    NoExtensionError,
    NoPerfectMatchingError,
    SizeLimitError,
)

EXACT_SIDE_CAP = 24


@dataclass(frozen=True)
class BipartiteGraph:
    """Left/right sizes plus sorted right-neighbour tuples per left vertex."""

    n_left: int
    n_right: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adj) != self.n_left:
            raise InvalidInstanceError("bipartite adjacency must have one row per left vertex")
        for u, row in enumerate(self.adj):
            if any(not (0 <= v < self.n_right) for v in row):
                raise InvalidInstanceError(f"left vertex {u}: neighbour id out of range")
            if list(row) != sorted(set(row)):
                raise InvalidInstanceError(f"left vertex {u}: neighbours must be sorted and distinct")

    @property
    def edge_count(self) -> int:
        return sum(len(r) for r in self.adj)

    def rows(self) -> list[int]:
        return [mask_of(r) for r in self.adj]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph stored as per-vertex neighbour bitmasks."""

    n: int
    masks: tuple[int, ...]

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for (u, v) in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise InvalidInstanceError(f"bad edge ({u},{v}) for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.masks[u] >> v) & 1)

    def neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self.masks[v]))


@dataclass(frozen=True)
class CliqueTiling:
    """Pairwise-disjoint k-sets, each inducing a clique in the source graph."""

    k: int
    cliques: tuple[tuple[int, ...], ...]

    @staticmethod
    def build(graph: Graph, k: int, cliques: Sequence[Iterable[int]]) -> "CliqueTiling":
        norm = tuple(tuple(sorted(c)) for c in cliques)
        seen: set[int] = set()
        for tile in norm:
            if len(tile) != k:
                raise InvalidInstanceError(f"tile {tile} does not have size {k}")
            if seen & set(tile):
                raise InvalidInstanceError(f"tile {tile} overlaps a previous tile")
            seen.update(tile)
            for i in range(k):
                for j in range(i + 1, k):
                    if not graph.has_edge(tile[i], tile[j]):
                        raise InvalidInstanceError(
                            f"tile {tile} is not a clique: missing edge ({tile[i]},{tile[j]})"
                        )
        return CliqueTiling(k, norm)

    def support(self) -> frozenset[int]:
        return frozenset(v for tile in self.cliques for v in tile)


def _augment(adj: Sequence[Sequence[int]], u: int, match_right: list[int], seen: list[bool]) -> bool:
    for v in adj[u]:
        if not seen[v]:
            seen[v] = True
            if match_right[v] == -1 or _augment(adj, match_right[v], match_right, seen):
                match_right[v] = u
                return True
    return False


def max_matching(b: BipartiteGraph) -> list[tuple[int, int]]:
    """Maximum-cardinality matching as sorted (left, right) pairs.

    Plain augmenting-path search; deterministic for a fixed adjacency
    ordering.
    """
    match_right = [-1] * b.n_right
    for u in range(b.n_left):
        seen = [False] * b.n_right
        _augment(b.adj, u, match_right, seen)
    pairs = [(u, v) for v, u in enumerate(match_right) if u != -1]
    pairs.sort()
    return pairs


def build_auxiliary_tiling_graph(
    graph: Graph,
    tiling: CliqueTiling,
    b_vertices: Sequence[int],
) -> BipartiteGraph:
    """Tiles on the left, ``b_vertices`` on the right; edge iff the right
    vertex is adjacent to every tile member."""
    support = tiling.support()
    if support & set(b_vertices):
        raise InvalidInstanceError("tiling support overlaps the right-hand vertex set")
    b_mask = mask_of(b_vertices)
    index_of = {v: i for i, v in enumerate(b_vertices)}
    rows = []
    for tile in tiling.cliques:
        cand = b_mask
        for u in tile:
            cand &= graph.masks[u]
        rows.append(tuple(sorted(index_of[v] for v in iter_bits(cand))))
    return BipartiteGraph(len(tiling.cliques), len(b_vertices), tuple(rows))


def extend_tiling(
    graph: Graph,
    a_vertices: Iterable[int],
    b_vertices: Sequence[int],
    tiling: CliqueTiling,
) -> CliqueTiling:
    """Extend a perfect K_k-tiling of G[A] to a perfect K_{k+1}-tiling of
    G[A + B] by matching tiles to B-vertices in the auxiliary graph.

    Raises :class:`NoExtensionError` when the auxiliary graph has no perfect
    matching (the degree hypotheses were violated).
    """
    a_set = set(a_vertices)
    if tiling.support() != a_set:
        raise InvalidInstanceError("tiling must cover A exactly")
    if len(a_set) != tiling.k * len(b_vertices):
        raise InvalidInstanceError("need |A| = k|B|")
    aux = build_auxiliary_tiling_graph(graph, tiling, b_vertices)
    matching = max_matching(aux)
    if len(matching) < len(b_vertices):
        raise NoExtensionError(
            f"no perfect matching in the auxiliary graph "
            f"(matched {len(matching)} of {len(b_vertices)} tiles)"
        )
    new_cliques = [tiling.cliques[t] + (b_vertices[v],) for (t, v) in matching]
    return CliqueTiling.build(graph, tiling.k + 1, new_cliques)


def _count_completions(rows: Sequence[int], i: int, avail: int, memo: dict) -> int:
    if i == len(rows):
        return 1
    key = (i, avail)
    cached = memo.get(key)
    if cached is not None:
        return cached
    total = 0
    cand = rows[i] & avail
    while cand:
        low = cand & -cand
        total += _count_completions(rows, i + 1, avail ^ low, memo)
        cand ^= low
    memo[key] = total
    return total


def count_perfect_matchings(b: BipartiteGraph) -> int:
    """Exact perfect-matching count (the permanent of the biadjacency
    matrix), via subset dynamic programming.  Sides must be equal and at
    most 24."""
    if b.n_left != b.n_right:
        raise SizeLimitError("perfect-matching count needs equal sides")
    if b.n_left > EXACT_SIDE_CAP:
        raise SizeLimitError(f"side {b.n_left} exceeds the exact cap {EXACT_SIDE_CAP}")
    rows = b.rows()
    return _count_completions(rows, 0, (1 << b.n_right) - 1, {})


def sample_perfect_matching(
    b: BipartiteGraph,
    rng: random.Random,
    mode: str = "exact",
) -> list[tuple[int, int]]:
    """Sample a perfect matching.

    ``exact`` draws exactly uniformly over all perfect matchings by
    sequential conditional sampling with permanent counts (sides <= 24).
    ``fast`` shuffles the vertex orders and runs augmenting-path search; it
    returns a valid perfect matching whose distribution is only
    heuristically close to uniform.
    """
    if b.n_left != b.n_right:
        raise NoPerfectMatchingError("perfect matching needs equal sides")
    n = b.n_left
    if mode == "exact":
        if n > EXACT_SIDE_CAP:
            raise SizeLimitError(f"side {n} exceeds the exact cap {EXACT_SIDE_CAP}")
        rows = b.rows()
        memo: dict = {}
        avail = (1 << n) - 1
        total = _count_completions(rows, 0, avail, memo)
        if total == 0:
            raise NoPerfectMatchingError("graph has no perfect matching")
        pairs = []
        for i in range(n):
            weights = []
            cand = rows[i] & avail
            for v in iter_bits(cand):
                weights.append((v, _count_completions(rows, i + 1, avail ^ (1 << v), memo)))
            draw = rng.randrange(sum(w for _, w in weights))
            acc = 0
            for v, w in weights:
                acc += w
                if draw < acc:
                    pairs.append((i, v))
                    avail ^= 1 << v
                    break
        return pairs
    if mode == "fast":
        order = list(range(n))
        rng.shuffle(order)
        shuffled = []
        for u in range(n):
            row = list(b.adj[u])
            rng.shuffle(row)
            shuffled.append(row)
        match_right = [-1] * n
        size = 0
        for u in order:
            seen = [False] * n
            if _augment(shuffled, u, match_right, seen):
                size += 1
        if size < n:
            raise NoPerfectMatchingError("graph has no perfect matching")
        pairs = [(u, v) for v, u in enumerate(match_right)]
        pairs.sort()
        return pairs
    raise InvalidInstanceError(f"unknown sampling mode {mode!r}")
