"""Shared test oracles and instance generators.

Everything here is deliberately independent of the library's own search
paths: matchings by exhaustive recursion, permanents by permutation
enumeration, Hamilton powers by permutation scan.
"""

from __future__ import annotations

import itertools
import random

from hampower.core import GraphCollection, host_edges
from hampower.matching import BipartiteGraph, Graph, CliqueTiling


def brute_max_matching_size(b: BipartiteGraph) -> int:
    """Exhaustive branch-and-bound maximum matching size."""
    best = 0

    def rec(u: int, used: int, size: int) -> None:
        nonlocal best
        if size + (b.n_left - u) <= best:
            return
        if u == b.n_left:
            best = max(best, size)
            return
        for v in b.adj[u]:
            if not (used >> v) & 1:
                rec(u + 1, used | (1 << v), size + 1)
        rec(u + 1, used, size)

    rec(0, 0, 0)
    return best


def brute_count_perfect_matchings(b: BipartiteGraph) -> int:
    """Permanent by scanning all permutations (sides <= 7)."""
    assert b.n_left == b.n_right <= 7
    n = b.n_left
    rows = [set(r) for r in b.adj]
    return sum(
        1
        for perm in itertools.permutations(range(n))
        if all(perm[i] in rows[i] for i in range(n))
    )


def random_bipartite(rng: random.Random, n_left: int, n_right: int, p: float) -> BipartiteGraph:
    adj = tuple(
        tuple(v for v in range(n_right) if rng.random() < p) for _ in range(n_left)
    )
    return BipartiteGraph(n_left, n_right, adj)


def naive_hamilton_power_exists(collection: GraphCollection, pattern) -> bool:
    """All-permutations existence check (n <= 8)."""
    n = pattern.host.order
    assert n <= 8
    edges = host_edges(pattern.host)
    for perm in itertools.permutations(range(n)):
        if all(
            collection.has_edge(pattern.colours[(i, j)], perm[i], perm[j])
            for (i, j) in edges
        ):
            return True
    return False


def tiling_extension_instance(rng: random.Random, k: int, n: int):
    """Random instance meeting the tiling-extension degree bounds.

    Returns (graph, a_vertices, b_vertices, tiling) on (k+1)n vertices:
    A = 0..kn-1 carries a planted perfect K_k-tiling (consecutive blocks),
    and the A-B bipartite part satisfies d(v, A) >= (1 - 1/2k) kn for all
    v in B and d(u, B) >= (1 - 1/2k) n for all u in A.
    """
    a_size = k * n
    total = a_size + n
    a_vertices = list(range(a_size))
    b_vertices = list(range(a_size, total))
    need_b = a_size - (a_size // (2 * k))  # ceil((1 - 1/2k) kn) via exact ints
    need_a = n - (n // (2 * k))

    full_a = (1 << a_size) - 1
    rows_b = []
    for _ in range(n):
        mask = full_a
        deletions = rng.randint(0, max(0, a_size // (4 * k)))
        for pos in rng.sample(range(a_size), deletions):
            mask &= ~(1 << pos)
        rows_b.append(mask)
    # repair B side up to its floor
    for i in range(n):
        short = need_b - rows_b[i].bit_count()
        if short > 0:
            missing = [p for p in range(a_size) if not (rows_b[i] >> p) & 1]
            for p in rng.sample(missing, short):
                rows_b[i] |= 1 << p
    # repair A side
    deg_a = [sum((rows_b[i] >> u) & 1 for i in range(n)) for u in range(a_size)]
    for u in range(a_size):
        if deg_a[u] < need_a:
            missing = [i for i in range(n) if not (rows_b[i] >> u) & 1]
            for i in rng.sample(missing, need_a - deg_a[u]):
                rows_b[i] |= 1 << u

    edges = []
    for i in range(n):
        v = a_size + i
        mask = rows_b[i]
        while mask:
            low = mask & -mask
            edges.append((low.bit_length() - 1, v))
            mask ^= low
    tiles = []
    for t in range(n):
        block = list(range(t * k, (t + 1) * k))
        tiles.append(block)
        for x, y in itertools.combinations(block, 2):
            edges.append((x, y))
    graph = Graph.from_edges(total, edges)
    tiling = CliqueTiling.build(graph, k, tiles)
    return graph, a_vertices, b_vertices, tiling


def chi_square_statistic(observed: dict, total: int) -> float:
    outcomes = len(observed)
    expected = total / outcomes
    return sum((c - expected) ** 2 / expected for c in observed.values())


def chi_square_critical(df: int, significance: float = 0.01) -> float:
    from scipy.stats import chi2

    return float(chi2.ppf(1.0 - significance, df))
