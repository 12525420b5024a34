"""Domain types: graph collections, host templates, colour patterns, powers.

A *graph collection* is a family G_1, ..., G_m of simple graphs on the shared
vertex set {0, ..., n-1}.  Colours are 1-based graph indices: colour c on an
edge means "this edge must come from G_c".

A *host template* fixes the canonical edge set of the structure being
embedded:

* ``power_path(r, k)``   -- positions 0..r-1, edges between positions at
  distance <= k;
* ``power_cycle(n, k)``  -- positions 0..n-1, edges at cyclic distance <= k
  (requires n >= 2k+1 so the edge set is simple with exactly kn edges);
* ``connector(a, b, k)`` -- a power path on a+k+b positions, minus the edges
  inside the first a and inside the last b positions.  It joins a path end of
  length a to a path start of length b through k fresh internal vertices.

A *colour pattern* is a total map from the host's canonical edges to colours.
An ordered vertex list realises the pattern when every canonical host edge
(i, j) of colour c maps to an edge of G_c.  Patterns are anchored: position 0
of a vertex list always corresponds to host position 0; cycle rotation and
reflection are handled by callers (the oracle searches over placements).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .bitset import mask_of
from .errors import (
    InvalidHostError,
    InvalidInstanceError,
    InvalidPatternError,
    VerificationInputError,
)

Edge = tuple[int, int]

POWER_PATH = "power_path"
POWER_CYCLE = "power_cycle"
CONNECTOR = "connector"


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class HostTemplate:
    """Canonical edge-set description: a power path/cycle or a connector.

    ``order`` is the number of host positions; ``a``/``b`` are the end block
    sizes of a connector and are 0 otherwise.
    """

    kind: str
    k: int
    order: int
    a: int = 0
    b: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidHostError(f"power k must be >= 1, got {self.k}")
        if self.order < 1:
            raise InvalidHostError(f"host order must be >= 1, got {self.order}")
        if self.kind == POWER_CYCLE:
            if self.order < 2 * self.k + 1:
                raise InvalidHostError(
                    f"power_cycle needs n >= 2k+1 (n={self.order}, k={self.k})"
                )
        elif self.kind == CONNECTOR:
            if not (1 <= self.a <= self.k and 1 <= self.b <= self.k):
                raise InvalidHostError(
                    f"connector needs 1 <= a,b <= k (a={self.a}, b={self.b}, k={self.k})"
                )
            if self.order != self.a + self.k + self.b:
                raise InvalidHostError("connector order must equal a+k+b")
        elif self.kind != POWER_PATH:
            raise InvalidHostError(f"unknown host kind {self.kind!r}")


def power_path(r: int, k: int) -> HostTemplate:
    return HostTemplate(POWER_PATH, k, r)


def power_cycle(n: int, k: int) -> HostTemplate:
    return HostTemplate(POWER_CYCLE, k, n)


def connector(a: int, b: int, k: int) -> HostTemplate:
    return HostTemplate(CONNECTOR, k, a + k + b, a, b)


def host_edges(host: HostTemplate) -> list[Edge]:
    """Canonical edge list of a host, sorted lexicographically.

    Connector edges are the power-path edges minus those inside the first
    ``a`` and inside the last ``b`` positions.
    """
    n, k = host.order, host.k
    if host.kind == POWER_CYCLE:
        edges = {canonical_edge(i, (i + d) % n) for i in range(n) for d in range(1, k + 1)}
        return sorted(edges)
    edges = [(i, j) for i in range(n) for j in range(i + 1, min(i + k, n - 1) + 1)]
    if host.kind == CONNECTOR:
        a, b = host.a, host.b
        edges = [(i, j) for (i, j) in edges if not (j < a or i >= n - b)]
    return edges


@dataclass(frozen=True, eq=True)
class ColourPattern:
    """Total colour assignment on a host's canonical edge set."""

    host: HostTemplate
    colours: Mapping[Edge, int]

    def __post_init__(self) -> None:
        expected = host_edges(self.host)
        got = set(self.colours)
        if got != set(expected):
            missing = set(expected) - got
            extra = got - set(expected)
            raise InvalidPatternError(
                f"pattern domain mismatch: {len(missing)} host edges missing, "
                f"{len(extra)} extraneous (e.g. missing={sorted(missing)[:3]}, "
                f"extra={sorted(extra)[:3]})"
            )
        for e, c in self.colours.items():
            if not isinstance(c, int) or c < 1:
                raise InvalidPatternError(f"colour on edge {e} must be a 1-based int, got {c!r}")
        object.__setattr__(self, "colours", MappingProxyType(dict(self.colours)))

    def colour_of(self, i: int, j: int) -> int:
        return self.colours[canonical_edge(i, j)]

    @property
    def max_colour(self) -> int:
        return max(self.colours.values(), default=1)


@dataclass(frozen=True)
class PowerPath:
    """Ordered distinct vertices; the edge set is implied by the k-power rule."""

    k: int
    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 1:
            raise InvalidInstanceError("a power path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInstanceError("power path vertices must be distinct")

    @property
    def order(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class PowerCycle:
    """Cyclically ordered distinct vertices; requires order >= 2k+1."""

    k: int
    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInstanceError("power cycle vertices must be distinct")
        if len(self.vertices) < 2 * self.k + 1:
            raise InvalidInstanceError(
                f"power cycle needs >= 2k+1 vertices (got {len(self.vertices)}, k={self.k})"
            )

    @property
    def order(self) -> int:
        return len(self.vertices)


class GraphCollection:
    """m simple graphs on the shared vertex set {0, ..., n-1}.

    Adjacency is stored as sorted neighbour tuples per vertex per graph;
    per-graph bitmask rows are precomputed for the set-intersection heavy
    operations.  Identical adjacency objects (e.g. m copies of K_n) share
    one mask table.  Instances are immutable once constructed.
    """

    __slots__ = ("n", "graphs", "masks")

    def __init__(self, n: int, graphs: Sequence[Sequence[Sequence[int]]]):
        if n < 1:
            raise InvalidInstanceError(f"vertex count must be >= 1, got {n}")
        if len(graphs) < 1:
            raise InvalidInstanceError("a collection needs at least one graph")
        norm: list[tuple[tuple[int, ...], ...]] = []
        mask_cache: dict[int, tuple[int, ...]] = {}
        mask_tables: list[tuple[int, ...]] = []
        seen: dict[int, tuple[tuple[int, ...], ...]] = {}
        for gi, adj in enumerate(graphs):
            key = id(adj)
            if key in seen:
                norm.append(seen[key])
                mask_tables.append(mask_cache[key])
                continue
            if len(adj) != n:
                raise InvalidInstanceError(
                    f"graph {gi + 1}: adjacency has {len(adj)} rows, expected {n}"
                )
            rows: list[tuple[int, ...]] = []
            row_masks: list[int] = []
            for v, nbrs in enumerate(adj):
                t = tuple(sorted(nbrs))
                if any(u == v for u in t):
                    raise InvalidInstanceError(f"graph {gi + 1}: self-loop at vertex {v}")
                if any(not (0 <= u < n) for u in t):
                    raise InvalidInstanceError(f"graph {gi + 1}: endpoint out of range at vertex {v}")
                if len(set(t)) != len(t):
                    raise InvalidInstanceError(f"graph {gi + 1}: duplicate edge at vertex {v}")
                rows.append(t)
                row_masks.append(mask_of(t))
            for v, nbrs in enumerate(rows):
                for u in nbrs:
                    if not (row_masks[u] >> v) & 1:
                        raise InvalidInstanceError(
                            f"graph {gi + 1}: asymmetric adjacency on edge ({u},{v})"
                        )
            frozen = tuple(rows)
            table = tuple(row_masks)
            seen[key] = frozen
            mask_cache[key] = table
            norm.append(frozen)
            mask_tables.append(table)
        self.n = n
        self.graphs = tuple(norm)
        self.masks = tuple(mask_tables)

    @property
    def m(self) -> int:
        return len(self.graphs)

    def has_edge(self, colour: int, u: int, v: int) -> bool:
        return bool((self.masks[colour - 1][u] >> v) & 1)

    def neighbour_mask(self, colour: int, v: int) -> int:
        return self.masks[colour - 1][v]

    def degree(self, colour: int, v: int) -> int:
        return len(self.graphs[colour - 1][v])

    def degree_into(self, colour: int, v: int, vertex_mask: int) -> int:
        return (self.masks[colour - 1][v] & vertex_mask).bit_count()

    @staticmethod
    def from_edge_lists(n: int, edge_lists: Sequence[Iterable[tuple[int, int]]]) -> "GraphCollection":
        graphs = []
        for edges in edge_lists:
            adj: list[set[int]] = [set() for _ in range(n)]
            for (u, v) in edges:
                if not (0 <= u < n and 0 <= v < n):
                    raise InvalidInstanceError(f"edge ({u},{v}) out of range for n={n}")
                if u == v:
                    raise InvalidInstanceError(f"self-loop ({u},{v})")
                adj[u].add(v)
                adj[v].add(u)
            graphs.append([sorted(s) for s in adj])
        return GraphCollection(n, graphs)

    def edge_lists(self) -> list[list[tuple[int, int]]]:
        out = []
        for adj in self.graphs:
            out.append([(u, v) for u in range(self.n) for v in adj[u] if u < v])
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GraphCollection)
            and self.n == other.n
            and self.graphs == other.graphs
        )

    def __repr__(self) -> str:
        return f"GraphCollection(n={self.n}, m={self.m})"


class VerifyResult(NamedTuple):
    ok: bool
    violation: Optional[Edge]  # first offending host edge, canonical order

    def __bool__(self) -> bool:
        return self.ok


def verify_coloured_embedding(
    collection: GraphCollection,
    pattern: ColourPattern,
    vertices: Sequence[int],
) -> VerifyResult:
    """Check that the vertex list realises the pattern in the collection.

    Returns ``(True, None)`` when every canonical host edge (i, j) with
    colour c maps to an edge of G_c, otherwise ``(False, (i, j))`` for the
    first offending host edge in canonical order.  Raises on length mismatch
    or repeated vertices.
    """
    host = pattern.host
    if len(vertices) != host.order:
        raise VerificationInputError(
            f"vertex list has length {len(vertices)}, host order is {host.order}"
        )
    if len(set(vertices)) != len(vertices):
        raise VerificationInputError("vertex list contains repeats")
    for v in vertices:
        if not (0 <= v < collection.n):
            raise VerificationInputError(f"vertex {v} out of range for n={collection.n}")
    for (i, j) in host_edges(host):
        c = pattern.colours[(i, j)]
        if c > collection.m:
            return VerifyResult(False, (i, j))
        if not collection.has_edge(c, vertices[i], vertices[j]):
            return VerifyResult(False, (i, j))
    return VerifyResult(True, None)


def min_degree(collection: GraphCollection) -> int:
    """Minimum degree over all graphs and all vertices."""
    return min(len(adj[v]) for adj in collection.graphs for v in range(collection.n))


def min_bipartite_degree(
    collection: GraphCollection,
    a_side: Iterable[int],
    b_side: Iterable[int],
) -> int:
    """Minimum over all graphs of the induced-bipartite minimum degree.

    For each graph, every vertex of A is measured into B and vice versa.
    A and B must be disjoint and non-empty.
    """
    a_list, b_list = list(a_side), list(b_side)
    if not a_list or not b_list:
        raise InvalidInstanceError("min_bipartite_degree: empty side")
    if set(a_list) & set(b_list):
        raise InvalidInstanceError("min_bipartite_degree: sides must be disjoint")
    a_mask, b_mask = mask_of(a_list), mask_of(b_list)
    best = collection.n
    for c in range(1, collection.m + 1):
        for v in a_list:
            best = min(best, collection.degree_into(c, v, b_mask))
        for v in b_list:
            best = min(best, collection.degree_into(c, v, a_mask))
    return best


def restrict_pattern(pattern: ColourPattern, start: int, target: HostTemplate) -> ColourPattern:
    """Restriction of a pattern to a consecutive window of host positions.

    The window is ``start, start+1, ..., start+target.order-1``; it wraps
    modulo the host order for power-cycle sources and must stay in range for
    power-path sources.  The target host re-indexes positions from 0 and may
    be a path or a connector (whose end-block edges are simply dropped).
    """
    src = pattern.host
    if src.kind == CONNECTOR:
        raise InvalidPatternError("cannot restrict a connector pattern")
    if target.k != src.k:
        raise InvalidPatternError(f"window power mismatch: {target.k} != {src.k}")
    if target.order > src.order:
        raise InvalidPatternError("window longer than the source host")
    if src.kind == POWER_PATH:
        if start < 0 or start + target.order > src.order:
            raise InvalidPatternError(
                f"window [{start}, {start + target.order}) out of range for order {src.order}"
            )
        pos = lambda i: start + i
    else:
        pos = lambda i: (start + i) % src.order
    colours = {
        (i, j): pattern.colour_of(pos(i), pos(j)) for (i, j) in host_edges(target)
    }
    return ColourPattern(target, colours)


# --- instance / pattern / cycle file formats (JSON text) ------------------

_KIND_TO_FILE = {POWER_PATH: "path", POWER_CYCLE: "cycle", CONNECTOR: "connector"}
_FILE_TO_KIND = {v: k for k, v in _KIND_TO_FILE.items()}


def collection_to_dict(c: GraphCollection) -> dict:
    return {"n": c.n, "m": c.m, "graphs": c.edge_lists()}


def collection_from_dict(d: Mapping) -> GraphCollection:
    try:
        n = int(d["n"])
        m = int(d["m"])
        graphs = d["graphs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInstanceError(f"instance file: missing/invalid field ({exc})") from exc
    if len(graphs) != m:
        raise InvalidInstanceError(f"instance file: m={m} but {len(graphs)} graphs present")
    edge_lists = []
    for gi, edges in enumerate(graphs):
        try:
            edge_lists.append([(int(u), int(v)) for (u, v) in edges])
        except (TypeError, ValueError) as exc:
            raise InvalidInstanceError(f"instance file: graph {gi + 1} has a malformed edge") from exc
    return GraphCollection.from_edge_lists(n, edge_lists)


def pattern_to_dict(p: ColourPattern) -> dict:
    h = p.host
    host = {"kind": _KIND_TO_FILE[h.kind], "n_or_r": h.order, "k": h.k, "a": h.a, "b": h.b}
    colours = [[i, j, c] for (i, j), c in sorted(p.colours.items())]
    return {"host": host, "colours": colours}


def pattern_from_dict(d: Mapping) -> ColourPattern:
    try:
        h = d["host"]
        kind = _FILE_TO_KIND[h["kind"]]
        k = int(h["k"])
    except (KeyError, TypeError) as exc:
        raise InvalidPatternError(f"pattern file: missing/invalid host field ({exc})") from exc
    if kind == CONNECTOR:
        host = connector(int(h["a"]), int(h["b"]), k)
    elif kind == POWER_PATH:
        host = power_path(int(h["n_or_r"]), k)
    else:
        host = power_cycle(int(h["n_or_r"]), k)
    colours: dict[Edge, int] = {}
    for entry in d.get("colours", []):
        try:
            i, j, c = (int(x) for x in entry)
        except (TypeError, ValueError) as exc:
            raise InvalidPatternError(f"pattern file: malformed colour entry {entry!r}") from exc
        e = canonical_edge(i, j)
        if e in colours:
            raise InvalidPatternError(f"pattern file: host edge {e} coloured twice")
        colours[e] = c
    return ColourPattern(host, colours)


def cycle_to_dict(c: PowerCycle) -> dict:
    return {"k": c.k, "vertices": list(c.vertices)}


def cycle_from_dict(d: Mapping) -> PowerCycle:
    try:
        return PowerCycle(int(d["k"]), tuple(int(v) for v in d["vertices"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInstanceError(f"cycle file: missing/invalid field ({exc})") from exc


def save_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
