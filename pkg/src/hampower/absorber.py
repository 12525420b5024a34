"""Absorbing gadgets, robust template, and the absorbing structure.

An absorbing gadget on roles A (flexible), B and C (fixed) has the property
that for *any single* vertex a_i of A there is a fixed-colour k-power path
covering B, C and a_i, with the same first/last k vertices and the same
colour sequence no matter which a_i is absorbed.  The construction: lay out
B in order with a_i inserted directly after b_{(2i-1)k}, colour that
sequence as a k-power path, then give each c_i the combined neighbourhoods
of a_i and a_{i+1} (each c-edge inheriting the colour of the unique
corresponding a-edge).  Absorbing a_i means substituting c_j for a_j
(j < i) and c_{j-1} for a_j (j > i) in the base sequence.

The gadget has degeneracy k+2 with the A-vertices first (this fails for
k = 1, which is why gadgets require k >= 2), so it can be embedded greedily
and robustly wherever every colour-specific degree is high enough.

A *robustly matchable template* converts "absorb any s-subset of the
reservoir" into one matching computation: it is a bounded-degree bipartite
graph on (U + W, X) with |U| = 2s, |W| = s + t, |X| = 3s such that every
s-subset W' of W admits a perfect matching in B[U + W', X].  One gadget is
built per X-vertex (with the template neighbourhood as its flexible set),
gadgets are chained by connectors, and absorbing a set Z' reduces to
reading off the robust matching for W' = Z'.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .bitset import mask_of, pick_bit
from .connectors import ConnectorRequest, embed_connector
from .core import (
    ColourPattern,
    Edge,
    GraphCollection,
    PowerPath,
    canonical_edge,
    connector,
    host_edges,
    power_path,
    restrict_pattern,
    verify_coloured_embedding,
)
from .errors import (
    EmbeddingFailedError,
    HamPowerError,
    InvalidInstanceError,
    InvalidPatternError,
    TemplateError,
)
from .matching import BipartiteGraph, max_matching


# --------------------------------------------------------------------------
# gadget blueprints
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetBlueprint:
    """Edge-coloured absorbing gadget on abstract vertex ids.

    Ids: A = 0..ell-1, B = ell..ell+2k*ell-1, C = the remaining ell-1.
    ``base_sequence`` is the underlying path layout over A and B;
    ``position`` maps each A/B id to its sequence position.
    """

    k: int
    ell: int
    a_vertices: tuple[int, ...]
    b_vertices: tuple[int, ...]
    c_vertices: tuple[int, ...]
    base_sequence: tuple[int, ...]
    edges: Mapping[Edge, int]
    position: Mapping[int, int]

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.a_vertices + self.b_vertices + self.c_vertices

    @property
    def r_vertices(self) -> tuple[int, ...]:
        return self.b_vertices + self.c_vertices

    def neighbours_with_colours(self, v: int) -> list[tuple[int, int]]:
        out = []
        for (x, y), c in self.edges.items():
            if x == v:
                out.append((y, c))
            elif y == v:
                out.append((x, c))
        return out

    def degeneracy_order(self) -> list[int]:
        """Ordering with all of A first in which every vertex has at most
        k+2 earlier neighbours."""
        k, ell = self.k, self.ell
        b = lambda j: self.b_vertices[j - 1]  # 1-based
        order = list(self.a_vertices)
        for i in range(1, ell):
            order.extend(b(j) for j in range((2 * i - 2) * k + 1, (2 * i - 1) * k + 1))
            order.append(self.c_vertices[i - 1])
            order.extend(b(j) for j in range((2 * i - 1) * k + 1, 2 * i * k + 1))
        order.extend(b(j) for j in range(2 * k * (ell - 1) + 1, 2 * k * ell + 1))
        return order


def build_gadget_blueprint(k: int, ell: int, pattern: ColourPattern) -> GadgetBlueprint:
    """Construct the gadget for a path pattern of order (2k+1)*ell.

    Requires k >= 2 (the gadget lacks the needed degeneracy when k = 1) and
    ell >= 2.
    """
    if k < 2:
        raise InvalidInstanceError(f"absorbing gadgets need k >= 2, got k={k}")
    if ell < 2:
        raise InvalidInstanceError(f"absorbing gadgets need ell >= 2, got ell={ell}")
    r = (2 * k + 1) * ell
    if pattern.host != power_path(r, k):
        raise InvalidPatternError(f"gadget pattern must live on power_path({r},{k})")

    a_ids = tuple(range(ell))
    b_ids = tuple(range(ell, ell + 2 * k * ell))
    c_ids = tuple(range(ell + 2 * k * ell, ell + 2 * k * ell + ell - 1))

    seq: list[int] = []
    next_a = 1  # 1-based index of the next A vertex to insert
    for j in range(1, 2 * k * ell + 1):
        seq.append(b_ids[j - 1])
        if next_a <= ell and j == (2 * next_a - 1) * k:
            seq.append(a_ids[next_a - 1])
            next_a += 1
    if len(seq) != r:
        raise HamPowerError("internal error: gadget sequence has the wrong length")

    position = {v: p for p, v in enumerate(seq)}
    edges: dict[Edge, int] = {}
    for (p, q) in host_edges(pattern.host):
        edges[canonical_edge(seq[p], seq[q])] = pattern.colours[(p, q)]

    # c_i inherits the neighbourhoods (and edge colours) of a_i and a_{i+1}
    for i in range(1, ell):
        c = c_ids[i - 1]
        for a in (a_ids[i - 1], a_ids[i]):
            for (x, y), colour in list(edges.items()):
                if x == a or y == a:
                    other = y if x == a else x
                    edges[canonical_edge(c, other)] = colour

    blueprint = GadgetBlueprint(
        k, ell, a_ids, b_ids, c_ids, tuple(seq),
        MappingProxyType(edges), MappingProxyType(position),
    )
    _check_degeneracy(blueprint)
    return blueprint


def _check_degeneracy(blueprint: GadgetBlueprint) -> None:
    order = blueprint.degeneracy_order()
    if sorted(order) != sorted(blueprint.vertices):
        raise HamPowerError("internal error: degeneracy order does not cover the gadget")
    seen: set[int] = set()
    cap = blueprint.k + 2
    for v in order:
        back = sum(1 for (u, _) in blueprint.neighbours_with_colours(v) if u in seen)
        if back > cap:
            raise HamPowerError(
                f"internal error: gadget vertex {v} has {back} > k+2 earlier neighbours"
            )
        seen.add(v)


def gadget_absorb_sequence(blueprint: GadgetBlueprint, i: int) -> tuple[int, ...]:
    """Vertex sequence of the path that absorbs a_i (1-based i).

    Substitutes c_j for a_j when j < i and c_{j-1} for a_j when j > i; the
    result is a pattern-coloured k-power path on B + C + {a_i} whose first
    and last k entries lie in B.
    """
    if not (1 <= i <= blueprint.ell):
        raise InvalidInstanceError(f"absorb index must be in [1, {blueprint.ell}], got {i}")
    a_index = {a: j + 1 for j, a in enumerate(blueprint.a_vertices)}
    out = []
    for v in blueprint.base_sequence:
        j = a_index.get(v)
        if j is None or j == i:
            out.append(v)
        elif j < i:
            out.append(blueprint.c_vertices[j - 1])
        else:
            out.append(blueprint.c_vertices[j - 2])
    return tuple(out)


# --------------------------------------------------------------------------
# degeneracy-ordered greedy embedding
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ColouredGraph:
    """Abstract edge-coloured graph handed to the greedy embedder."""

    vertices: tuple[int, ...]
    edges: Mapping[Edge, int]


def coloured_graph_of(blueprint: GadgetBlueprint) -> ColouredGraph:
    return ColouredGraph(blueprint.vertices, dict(blueprint.edges))


def _peel_order(graph: ColouredGraph, initial: Sequence[int]) -> list[int]:
    """Degeneracy ordering with ``initial`` first: peel minimum-degree
    vertices (outside the initial segment) from the back."""
    nbrs: dict[int, set[int]] = {v: set() for v in graph.vertices}
    for (u, v) in graph.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    fixed = set(initial)
    alive = set(graph.vertices)
    suffix: list[int] = []
    while len(alive) > len(fixed):
        v = min(
            (v for v in alive if v not in fixed),
            key=lambda v: (len(nbrs[v] & alive), v),
        )
        suffix.append(v)
        alive.remove(v)
    suffix.reverse()
    return list(initial) + suffix


def embed_by_degeneracy(
    collection: GraphCollection,
    graph: ColouredGraph,
    initial: Sequence[int],
    images: Mapping[int, int],
    pool: Iterable[int],
    avoid: Iterable[int],
    degeneracy: int,
    rng: random.Random,
    order: Optional[Sequence[int]] = None,
) -> dict[int, int]:
    """Greedy coloured embedding in a degeneracy order.

    ``initial`` must be an independent set of ``graph`` pre-mapped by
    ``images``; all remaining vertices are mapped injectively into ``pool``
    minus ``avoid``, choosing uniformly among feasible images.  The ordering
    (computed if not supplied) must give every vertex at most ``degeneracy``
    earlier neighbours.
    """
    initial = list(initial)
    initial_set = set(initial)
    for (u, v) in graph.edges:
        if u in initial_set and v in initial_set:
            raise InvalidInstanceError("initial segment must be independent")
    if set(images) != initial_set:
        raise InvalidInstanceError("images must map exactly the initial segment")
    if len(set(images.values())) != len(images):
        raise InvalidInstanceError("initial images must be injective")

    if order is None:
        order = _peel_order(graph, initial)
    if list(order[: len(initial)]) != initial or sorted(order) != sorted(graph.vertices):
        raise InvalidInstanceError("order must start with the initial segment and cover the graph")

    nbrs: dict[int, list[tuple[int, int]]] = {v: [] for v in graph.vertices}
    for (u, v), c in graph.edges.items():
        nbrs[u].append((v, c))
        nbrs[v].append((u, c))

    placed_pos = {v: i for i, v in enumerate(order)}
    for i, v in enumerate(order):
        back = sum(1 for (u, _) in nbrs[v] if placed_pos[u] < i)
        if back > degeneracy:
            raise InvalidInstanceError(
                f"ordering gives vertex {v} back-degree {back} > {degeneracy}"
            )

    mapped = dict(images)
    used = mask_of(mapped.values())
    base_pool = mask_of(pool) & ~mask_of(avoid)
    for v in order[len(initial):]:
        cand = base_pool & ~used
        for (u, colour) in nbrs[v]:
            if u in mapped:
                cand &= collection.neighbour_mask(colour, mapped[u])
        if cand == 0:
            raise EmbeddingFailedError(f"no image available for vertex {v}", vertex=v)
        img = pick_bit(cand, rng)
        mapped[v] = img
        used |= 1 << img
    return mapped


# --------------------------------------------------------------------------
# robustly matchable template
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Template:
    """Bipartite template on (U + W, X): |U| = 2s, |W| = s+t, |X| = 3s.

    Left indices 0..2s-1 are U and 2s..3s+t-1 are W; ``adj`` maps each left
    index to its X-neighbours.  The robust property: for every s-subset W'
    of W, the subgraph on (U + W', X) has a perfect matching.  Degenerate
    s = 0 templates (no gadgets to drive) are permitted with empty parts.
    """

    s: int
    t: int
    adj: tuple[tuple[int, ...], ...]
    verified: str = "unverified"

    def __post_init__(self) -> None:
        if self.s < 0 or self.t < 0:
            raise TemplateError("template sizes must be non-negative")
        if self.s == 0:
            if self.adj:
                raise TemplateError("an s=0 template must be empty")
            return
        if self.t < 1:
            raise TemplateError("template needs t = eps*s >= 1")
        if len(self.adj) != 3 * self.s + self.t:
            raise TemplateError("template adjacency must cover U and W")
        degrees = [0] * (3 * self.s)
        for row in self.adj:
            for x in row:
                if not (0 <= x < 3 * self.s):
                    raise TemplateError("template neighbour out of range")
                degrees[x] += 1
        for left, row in enumerate(self.adj):
            if not (2 <= len(row) <= 40):
                raise TemplateError(f"left vertex {left} has degree {len(row)} outside [2, 40]")
        for x, d in enumerate(degrees):
            if not (2 <= d <= 40):
                raise TemplateError(f"X-vertex {x} has degree {d} outside [2, 40]")

    @staticmethod
    def empty() -> "Template":
        return Template(0, 0, (), verified="trivial")

    @property
    def n_u(self) -> int:
        return 2 * self.s

    @property
    def n_w(self) -> int:
        return self.s + self.t

    @property
    def n_x(self) -> int:
        return 3 * self.s

    @property
    def eps(self) -> Fraction:
        return Fraction(self.t, self.s) if self.s else Fraction(0)

    @property
    def edge_count(self) -> int:
        return sum(len(r) for r in self.adj)

    def x_degrees(self) -> list[int]:
        degrees = [0] * self.n_x
        for row in self.adj:
            for x in row:
                degrees[x] += 1
        return degrees

    def x_neighbourhoods(self) -> list[tuple[int, ...]]:
        """Left-index neighbourhood of each X vertex, sorted."""
        out: list[list[int]] = [[] for _ in range(self.n_x)]
        for left, row in enumerate(self.adj):
            for x in row:
                out[x].append(left)
        return [tuple(sorted(ns)) for ns in out]

    def robust_matching(self, w_locals: Iterable[int]) -> Optional[list[tuple[int, int]]]:
        """Perfect matching of (U + W', X) as (left_index, x) pairs, or None.

        ``w_locals`` are W-local indices (0-based within W) of size s.
        """
        chosen = sorted(w_locals)
        if len(chosen) != self.s or any(not (0 <= w < self.n_w) for w in chosen):
            raise InvalidInstanceError("robust_matching needs s distinct W-local indices")
        left_ids = list(range(self.n_u)) + [self.n_u + w for w in chosen]
        sub = BipartiteGraph(len(left_ids), self.n_x, tuple(self.adj[l] for l in left_ids))
        pairs = max_matching(sub)
        if len(pairs) < self.n_x:
            return None
        return [(left_ids[u], x) for (u, x) in pairs]


def template_edge_count(s: int, t: int) -> int:
    """Edge count of the deterministic template skeleton for given (s, t).

    The randomised builder permutes labels only, so this is exact; the
    pipeline planner uses it before any template is actually built.
    """
    if s == 0:
        return 0
    total = 4 * s
    for i in range(s + t):
        width = min(s - 1, i) - max(0, i - t) + 1
        total += width + (1 if width == 1 else 0)
    return total


def build_template(
    s: int,
    eps: float | Fraction,
    rng: random.Random,
    verify: str = "auto",
) -> Template:
    """Randomised bounded-degree template construction with certification.

    ``eps * s`` must be a positive integer t <= 39 (X-degrees are capped at
    40).  The skeleton: two cyclic perfect matchings from U onto a random
    2s-subset of X, plus a sliding-window bipartite graph from W onto the
    remaining s X-vertices (w_i adjacent to x_{i-t}..x_i, clipped), padded
    so every degree is at least 2.  Labels are randomly permuted.

    ``verify``: "exhaustive" checks every s-subset of W via matching;
    "sampled" checks 1000 random subsets; "auto" picks exhaustive when the
    subset count is at most 4096.  Construction restarts on a failed check.
    """
    if s < 1:
        raise TemplateError("build_template needs s >= 1")
    t_exact = Fraction(eps) * s if isinstance(eps, Fraction) else eps * s
    t = int(round(float(t_exact)))
    if abs(float(t_exact) - t) > 1e-9 or t < 1:
        raise TemplateError(f"eps*s must be a positive integer, got {float(t_exact)}")
    if t > 39:
        raise TemplateError(
            f"this construction needs eps*s <= 39 to respect the degree cap (got {t})"
        )
    if verify not in ("auto", "exhaustive", "sampled"):
        raise TemplateError(f"unknown verification mode {verify!r}")

    n_subsets = _subset_count(s + t, s)
    exhaustive = verify == "exhaustive" or (verify == "auto" and n_subsets <= 4096)

    for _ in range(32):
        adj = _random_template_adjacency(s, t, rng)
        template = Template(s, t, adj, verified="exhaustive" if exhaustive else "sampled")
        if template.edge_count != template_edge_count(s, t):
            raise HamPowerError("internal error: template edge count drifted from the skeleton")
        if _certify(template, rng, exhaustive):
            return template
    raise TemplateError(f"template certification failed repeatedly for s={s}, t={t}")


def _subset_count(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _random_template_adjacency(s: int, t: int, rng: random.Random) -> tuple[tuple[int, ...], ...]:
    xs = list(range(3 * s))
    rng.shuffle(xs)
    x_m, x_w = xs[: 2 * s], xs[2 * s:]

    perm = list(range(2 * s))
    rng.shuffle(perm)
    u_adj: list[set[int]] = [set() for _ in range(2 * s)]
    for u in range(2 * s):
        u_adj[u].add(x_m[perm[u]])
        u_adj[u].add(x_m[perm[(u + 1) % (2 * s)]])

    w_slots = list(range(s + t))
    rng.shuffle(w_slots)
    xw_slots = list(range(s))
    rng.shuffle(xw_slots)
    w_adj: list[set[int]] = [set() for _ in range(s + t)]
    for i in range(s + t):
        lo, hi = max(0, i - t), min(s - 1, i)
        for j in range(lo, hi + 1):
            w_adj[w_slots[i]].add(x_w[xw_slots[j]])

    # pad degree-1 W vertices with a balanced extra edge into the U-side block
    xm_load = {x: 2 for x in x_m}
    for w in range(s + t):
        if len(w_adj[w]) < 2:
            lowest = min(xm_load.values())
            choices = [x for x in x_m if xm_load[x] == lowest and x not in w_adj[w]]
            x = rng.choice(choices if choices else [x for x in x_m if x not in w_adj[w]])
            w_adj[w].add(x)
            xm_load[x] += 1

    rows = [tuple(sorted(r)) for r in u_adj] + [tuple(sorted(r)) for r in w_adj]
    return tuple(rows)


def _certify(template: Template, rng: random.Random, exhaustive: bool) -> bool:
    s, t = template.s, template.t
    if exhaustive:
        subsets: Iterable[tuple[int, ...]] = itertools.combinations(range(s + t), s)
    else:
        subsets = (tuple(rng.sample(range(s + t), s)) for _ in range(1000))
    for chosen in subsets:
        if template.robust_matching(chosen) is None:
            return False
    return True


# --------------------------------------------------------------------------
# absorbing structure
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddedGadget:
    blueprint: GadgetBlueprint
    images: Mapping[int, int]          # B and C ids -> actual vertices
    l_vertices: tuple[int, ...]        # actual flexible vertices, aligned with a_vertices
    l_left_indices: tuple[int, ...]    # template left indices, same alignment
    start: int                         # host position of the gadget window

    def fixed_first_k(self) -> tuple[int, ...]:
        return tuple(self.images[v] for v in self.blueprint.base_sequence[: self.blueprint.k])

    def fixed_last_k(self) -> tuple[int, ...]:
        return tuple(self.images[v] for v in self.blueprint.base_sequence[-self.blueprint.k:])

    def absorb_path(self, a_index: int) -> list[int]:
        """Realised absorb path for the a_index-th flexible vertex (1-based)."""
        flexible = self.l_vertices[a_index - 1]
        a_id = self.blueprint.a_vertices[a_index - 1]
        out = []
        for v in gadget_absorb_sequence(self.blueprint, a_index):
            out.append(flexible if v == a_id else self.images[v])
        return out


@dataclass(frozen=True)
class AbsorbingStructure:
    """Everything needed to absorb any admissible reservoir subset.

    The final path is [z1] + H_0 + P_1 + H_1 + ... + P_{3s} + H_{3s} + [z2],
    where P_i is gadget i's absorb path for its matched vertex and the H_i
    are the fixed connector internals.  The first and last k vertices are
    independent of the absorbed subset.
    """

    k: int
    collection: GraphCollection
    template: Template
    pattern: ColourPattern
    z1: int
    z2: int
    y_vertices: tuple[int, ...]
    w_vertices: tuple[int, ...]
    gadgets: tuple[EmbeddedGadget, ...]
    connectors: tuple[tuple[int, ...], ...]
    absorbed_set: frozenset[int]

    @property
    def a_size(self) -> int:
        return len(self.absorbed_set)

    @property
    def path_order(self) -> int:
        return self.pattern.host.order

    def boundary_first_k(self) -> tuple[int, ...]:
        return (self.z1,) + self.connectors[0][: self.k - 1]

    def boundary_last_k(self) -> tuple[int, ...]:
        return self.connectors[-1][-(self.k - 1):] + (self.z2,) if self.k > 1 else (self.z2,)


def expected_absorbed_size(k: int, s: int, b: int) -> int:
    """|A| = (2k+1)b + (3s+1)k - s."""
    return (2 * k + 1) * b + (3 * s + 1) * k - s


def build_absorbing_structure(
    collection: GraphCollection,
    pattern: ColourPattern,
    reservoir: Iterable[int],
    z1: int,
    z2: int,
    y_vertices: Sequence[int],
    template: Template,
    rng: random.Random,
) -> AbsorbingStructure:
    """Embed one gadget per template X-vertex and chain them with connectors.

    ``pattern`` must live on power_path(a + s + 2, k) where
    a = (2k+1)|E(template)| + (3s+1)k - s.  The reservoir must have exactly
    s + t + 2 vertices including z1 and z2 (its interior is identified with
    the template's W part); ``y_vertices`` (size 2s, outside the reservoir)
    are identified with U.  Gadget bodies and connector internals are drawn
    from outside reservoir + Y, avoiding everything used so far.
    """
    k = pattern.host.k
    s, t = template.s, template.t
    b = template.edge_count
    a = expected_absorbed_size(k, s, b)
    m_abs = a + s + 2
    if pattern.host != power_path(m_abs, k):
        raise InvalidPatternError(
            f"absorbing pattern must live on power_path({m_abs},{k}), got "
            f"{pattern.host.kind}({pattern.host.order},{pattern.host.k})"
        )
    z_set = frozenset(reservoir)
    if z1 == z2 or z1 not in z_set or z2 not in z_set:
        raise InvalidInstanceError("z1, z2 must be distinct reservoir members")
    if s >= 1 and len(z_set) != s + t + 2:
        raise InvalidInstanceError(
            f"reservoir size {len(z_set)} != s + t + 2 = {s + t + 2}"
        )
    y_tuple = tuple(sorted(y_vertices))
    if len(y_tuple) != 2 * s:
        raise InvalidInstanceError(f"need |Y| = 2s = {2 * s}, got {len(y_tuple)}")
    if set(y_tuple) & z_set:
        raise InvalidInstanceError("Y must avoid the reservoir")
    w_tuple = tuple(sorted(z_set - {z1, z2})) if s >= 1 else ()

    x_degrees = template.x_degrees()
    x_nbrs = template.x_neighbourhoods()

    # host layout: positions of each connector window and gadget window
    gadget_starts: list[int] = []
    connector_starts: list[int] = []
    pos = 0  # z1
    cursor = 1
    for i in range(3 * s):
        connector_starts.append(cursor)
        cursor += k
        gadget_starts.append(cursor)
        cursor += (2 * k + 1) * x_degrees[i]
    connector_starts.append(cursor)
    cursor += k
    if cursor + 1 != m_abs:
        raise HamPowerError("internal error: absorber layout does not fill the path")

    _assert_absorber_partition(pattern, x_degrees, gadget_starts, connector_starts, m_abs, k)

    all_vertices = range(collection.n)
    used: set[int] = set(y_tuple) | set(z_set)

    gadgets: list[EmbeddedGadget] = []
    for i in range(3 * s):
        ell = x_degrees[i]
        sub = restrict_pattern(pattern, gadget_starts[i], power_path((2 * k + 1) * ell, k))
        blueprint = build_gadget_blueprint(k, ell, sub)
        left_ids = x_nbrs[i]
        actual = tuple(
            y_tuple[l] if l < 2 * s else w_tuple[l - 2 * s] for l in left_ids
        )
        images = {blueprint.a_vertices[j]: actual[j] for j in range(ell)}
        mapped = embed_by_degeneracy(
            collection,
            coloured_graph_of(blueprint),
            blueprint.a_vertices,
            images,
            all_vertices,
            used - set(actual),
            k + 2,
            rng,
            order=blueprint.degeneracy_order(),
        )
        body = {v: mapped[v] for v in blueprint.r_vertices}
        used.update(body.values())
        gadgets.append(
            EmbeddedGadget(blueprint, MappingProxyType(body), actual, left_ids, gadget_starts[i])
        )

    pool = frozenset(all_vertices) - z_set - set(y_tuple)
    connectors_out: list[tuple[int, ...]] = []
    for idx in range(3 * s + 1):
        if idx == 0:
            w_path = PowerPath(k, (z1,))
        else:
            w_path = PowerPath(k, gadgets[idx - 1].fixed_last_k())
        if idx == 3 * s:
            y_path = PowerPath(k, (z2,))
        else:
            y_path = PowerPath(k, gadgets[idx].fixed_first_k())
        host = connector(w_path.order, y_path.order, k)
        sub = restrict_pattern(pattern, connector_starts[idx] - w_path.order, host)
        request = ConnectorRequest(w_path, y_path, sub, pool, frozenset(used))
        internals = embed_connector(collection, request, rng)
        used.update(internals)
        connectors_out.append(internals)

    absorbed = (
        set(y_tuple)
        | {v for g in gadgets for v in g.images.values()}
        | {v for c in connectors_out for v in c}
    )
    if len(absorbed) != a:
        raise HamPowerError(f"internal error: |A| = {len(absorbed)} != expected {a}")
    if absorbed & z_set:
        raise HamPowerError("internal error: absorbed set leaked into the reservoir")

    return AbsorbingStructure(
        k=k,
        collection=collection,
        template=template,
        pattern=pattern,
        z1=z1,
        z2=z2,
        y_vertices=y_tuple,
        w_vertices=w_tuple,
        gadgets=tuple(gadgets),
        connectors=tuple(connectors_out),
        absorbed_set=frozenset(absorbed),
    )


def _assert_absorber_partition(
    pattern: ColourPattern,
    x_degrees: Sequence[int],
    gadget_starts: Sequence[int],
    connector_starts: Sequence[int],
    m_abs: int,
    k: int,
) -> None:
    """The gadget windows plus connector hosts must tile the path edges."""
    covered: set[Edge] = set()
    total = 0

    def add(edges: Iterable[Edge]) -> None:
        nonlocal total
        for e in edges:
            if e in covered:
                raise HamPowerError(f"internal error: host edge {e} assigned twice")
            covered.add(e)
            total += 1

    for i, start in enumerate(gadget_starts):
        order = (2 * k + 1) * x_degrees[i]
        add(
            (start + p, start + q)
            for (p, q) in host_edges(power_path(order, k))
        )
    for idx, start in enumerate(connector_starts):
        a_len = 1 if idx == 0 else k
        b_len = 1 if idx == len(connector_starts) - 1 else k
        host = connector(a_len, b_len, k)
        shift = start - a_len
        add((shift + p, shift + q) for (p, q) in host_edges(host))

    expected = set(host_edges(pattern.host))
    if covered != expected:
        raise HamPowerError(
            f"internal error: absorber windows cover {total} edges, host has {len(expected)}"
        )


def absorb(structure: AbsorbingStructure, z_prime: Iterable[int]) -> PowerPath:
    """Fixed-colour path from z1 to z2 covering the absorbed set plus Z'.

    ``z_prime`` must be a subset of the structure's reservoir interior of
    size exactly s.  The robust template matching decides which gadget
    absorbs which vertex; output is deterministic for a given structure and
    Z'.
    """
    s = structure.template.s
    zp = frozenset(z_prime)
    if len(zp) != s:
        raise InvalidInstanceError(f"need |Z'| = s = {s}, got {len(zp)}")
    if not zp <= set(structure.w_vertices):
        raise InvalidInstanceError("Z' must lie inside the identified reservoir interior")

    path: list[int] = [structure.z1]
    if s == 0:
        path.extend(structure.connectors[0])
    else:
        w_index = {v: i for i, v in enumerate(structure.w_vertices)}
        pairs = structure.template.robust_matching(sorted(w_index[v] for v in zp))
        if pairs is None:
            raise HamPowerError("internal error: certified template failed to match Z'")
        x_to_left = {x: left for (left, x) in pairs}
        for i, gadget in enumerate(structure.gadgets):
            path.extend(structure.connectors[i])
            left = x_to_left[i]
            a_index = gadget.l_left_indices.index(left) + 1
            path.extend(gadget.absorb_path(a_index))
        path.extend(structure.connectors[-1])
    path.append(structure.z2)

    expected_cover = structure.absorbed_set | zp | {structure.z1, structure.z2}
    if set(path) != expected_cover or len(path) != structure.path_order:
        raise HamPowerError("internal error: absorb path does not cover A + Z' exactly")
    result = verify_coloured_embedding(structure.collection, structure.pattern, path)
    if not result.ok:
        raise HamPowerError(f"internal error: absorb path fails verification at {result.violation}")
    return PowerPath(structure.k, tuple(path))
