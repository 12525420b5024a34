"""End-to-end solver: reservoir, absorber, path collection, connections,
final absorption.

The run follows a fixed layout of the cycle's host positions:

    [0, m_abs)                      absorbing path (z1 ... z2)
    then for i = 1..s:              k connector internals, then path P_i (r)
    then for j = 1..c:              k connector internals, then leftover v_j
    then g single-vertex extensions from the reservoir
    then k final connector internals, wrapping back to position 0

m_abs = a + s_t + 2 where a is the absorber size determined by the template
edge count.  The asymptotic constant hierarchy is replaced by an explicit
integer plan: the planner searches the template size s_t downward from
floor(beta*n) and picks the reservoir surplus w_extra and path count s so
that every set size is a non-negative integer (small instances therefore
run with a degenerate s_t = 0 absorber, a single connector from z1 to z2).
Whatever rounding slack remains is burned in the greedy padding stage (g
vertices), exactly as the layout above prescribes.  Best-effort runs keep
the whole ranked candidate list and fall back to the next plan when one
plan's stages exhaust their retries; strict runs take the first plan only,
one attempt per stage.

Before anything random happens, each plan's layout is checked by set
arithmetic: the absorber window, the s path windows, the s+1+c connector
windows and the greedy back-edges must partition the host cycle's edge set
exactly.
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .absorber import (
    AbsorbingStructure,
    Template,
    absorb,
    build_absorbing_structure,
    build_template,
    expected_absorbed_size,
    template_edge_count,
)
from .bitset import mask_of
from .connectors import ConnectorRequest, embed_connector, extend_by_one
from .core import (
    POWER_CYCLE,
    ColourPattern,
    GraphCollection,
    PowerCycle,
    PowerPath,
    canonical_edge,
    connector,
    host_edges,
    power_cycle,
    power_path,
    restrict_pattern,
    verify_coloured_embedding,
)
from .errors import (
    HamPowerError,
    InfeasibleConfigError,
    InvalidInstanceError,
    ReservoirError,
    StageFailedError,
)
from .pathbuilder import build_path_collection

BEST_EFFORT = "best-effort"
STRICT = "strict"


@dataclass(frozen=True)
class PipelineConfig:
    """Explicit constant knobs replacing the asymptotic hierarchy."""

    alpha: float
    beta: float
    gamma: float
    epsilon: float
    r: int
    seed: int = 0
    sampler_mode: str = "fast"
    max_retries: int = 8
    mode: str = BEST_EFFORT

    def __post_init__(self) -> None:
        if not (0 < self.gamma < self.beta < self.alpha <= 1):
            raise InvalidInstanceError("need 0 < gamma < beta < alpha <= 1")
        if not (0 < self.epsilon < 1):
            raise InvalidInstanceError("need epsilon in (0, 1)")
        if self.r < 2:
            raise InvalidInstanceError("need r >= 2")
        if self.max_retries < 1:
            raise InvalidInstanceError("need max_retries >= 1")
        if self.mode not in (BEST_EFFORT, STRICT):
            raise InvalidInstanceError(f"unknown mode {self.mode!r}")
        if self.sampler_mode not in ("fast", "exact"):
            raise InvalidInstanceError(f"unknown sampler mode {self.sampler_mode!r}")


@dataclass(frozen=True)
class Plan:
    """Resolved integer sizes for one run."""

    n: int
    k: int
    r: int
    s_t: int       # template size (absorbed subset size)
    w_extra: int   # reservoir surplus beyond s_t (+2 endpoints)
    b: int         # template edge count
    a: int         # absorber size |A|
    m_abs: int     # absorbing path order = a + s_t + 2
    s: int         # number of builder paths
    c: int         # leftover sweep vertices
    g: int         # greedy padding extensions
    n1: int        # part size for the path builder

    @property
    def z_size(self) -> int:
        return self.s_t + self.w_extra + 2

    def path_window_start(self, i: int) -> int:
        """Host position of path P_i's first vertex (1-based i)."""
        return self.m_abs + (i - 1) * (self.k + self.r) + self.k

    def connector_window_start(self, i: int) -> int:
        """Host position of connector i's S1 block (1-based i)."""
        return self.m_abs + (i - 1) * (self.k + self.r) - self.k

    @property
    def sweep_base(self) -> int:
        return self.m_abs + self.s * (self.k + self.r)

    @property
    def greedy_base(self) -> int:
        return self.sweep_base + self.c * (self.k + 1)


def derive_rng(seed: int, *labels) -> random.Random:
    """Deterministic per-stage random stream from one 64-bit seed."""
    digest = hashlib.sha256(repr((seed,) + labels).encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _best_plan_for(
    n: int, k: int, config: PipelineConfig, s_t: int, s_force: Optional[int] = None
) -> Optional[Plan]:
    r = config.r
    t_target = max(1, int(config.gamma * n))
    t_lo, t_hi = (k, n) if s_t == 0 else (1, 39)
    best: Optional[tuple] = None
    for t in range(t_lo, t_hi + 1):
        b = template_edge_count(s_t, t)
        a = expected_absorbed_size(k, s_t, b)
        m_abs = a + s_t + 2
        navail = n - a - (s_t + t + 2)
        if navail < 0:
            continue
        n1 = navail // r
        s_cap = min(n1, int((1 - config.epsilon) * n1 + 1e-9))
        s = min(s_cap, navail // r)
        if s_force is not None:
            s = min(s, s_force)
        c = navail - s * r
        g = t - (s + c + 1) * k
        if g < 0:
            continue
        cand = (s, -abs(t - t_target), -t, s_t, t, b, a, m_abs, c, g, n1)
        if best is None or cand > best:
            best = cand
    if best is None:
        return None
    s, _, _, s_t_, t, b, a, m_abs, c, g, n1 = best
    return Plan(n, k, r, s_t_, t, b, a, m_abs, s, c, g, n1)


def candidate_plans(n: int, k: int, config: PipelineConfig) -> list[Plan]:
    """Feasible plans, most preferred first.

    One candidate per feasible template size, largest s_t first (closest to
    the beta target); within a template size the path count is maximised and
    the reservoir surplus lands nearest floor(gamma*n).  The template-free
    plan is additionally backed off through smaller path counts down to a
    pure-sweep plan.  Best-effort runs fall back along this list when a
    plan's stages keep failing (small reservoirs admit no degree
    concentration on random instances, and small residual parts can starve
    the path builder).
    """
    if n < 3 * k:  # the closing connector's end windows must not collide
        return []
    plans: list[Plan] = []
    s_t_max = int(config.beta * n) if k >= 2 else 0  # gadgets need k >= 2
    for s_t in range(s_t_max, 0, -1):
        plan = _best_plan_for(n, k, config, s_t)
        if plan is not None:
            plans.append(plan)
    base = _best_plan_for(n, k, config, 0)
    if base is not None:
        plans.append(base)
        s_next = base.s // 2
        while s_next > 0:
            plan = _best_plan_for(n, k, config, 0, s_force=s_next)
            if plan is not None and plan not in plans:
                plans.append(plan)
            s_next //= 2
        sweep_only = _best_plan_for(n, k, config, 0, s_force=0)
        if sweep_only is not None and sweep_only not in plans:
            plans.append(sweep_only)
    return plans


def feasibility_floor(k: int, config: PipelineConfig) -> int:
    """Smallest n for which the configuration admits an integer plan."""
    for n in range(2 * k + 1, 16 * (k + 2) + 64):
        if candidate_plans(n, k, config):
            return n
    raise InfeasibleConfigError("no feasible n found in the probe range")


def resolve_plan(n: int, k: int, config: PipelineConfig) -> Plan:
    plans = candidate_plans(n, k, config)
    if not plans:
        floor = feasibility_floor(k, config)
        raise InfeasibleConfigError(
            f"n={n} is below the feasibility floor {floor} for this configuration",
            floor=floor,
        )
    return plans[0]


def layout_edge_partition(plan: Plan) -> dict[str, set]:
    """Exact colour-accounting partition of the host cycle's edges.

    Returns the named edge families; raises if any host edge would be
    assigned twice or missed.  Runs on host indices only, before any
    embedding work.
    """
    n, k = plan.n, plan.k
    families: dict[str, set] = {}
    seenall: set = set()

    def add(name: str, edges: Iterable[tuple[int, int]]) -> None:
        fam = families.setdefault(name, set())
        for (x, y) in edges:
            e = canonical_edge(x % n, y % n)
            if e in seenall:
                raise HamPowerError(f"layout error: host edge {e} assigned twice (at {name})")
            seenall.add(e)
            fam.add(e)

    add("absorber", host_edges(power_path(plan.m_abs, k)))
    for i in range(1, plan.s + 1):
        shift = plan.connector_window_start(i)
        add("connectors", ((shift + p, shift + q) for (p, q) in host_edges(connector(k, k, k))))
        shift = plan.path_window_start(i)
        add("paths", ((shift + p, shift + q) for (p, q) in host_edges(power_path(plan.r, k))))
    for j in range(plan.c):
        shift = plan.sweep_base + j * (k + 1) - k
        add("sweep", ((shift + p, shift + q) for (p, q) in host_edges(connector(k, 1, k))))
    for idx in range(plan.g):
        p = plan.greedy_base + idx
        add("greedy", ((p - d, p) for d in range(1, k + 1)))
    shift = n - 2 * k
    add("final", ((shift + p, shift + q) for (p, q) in host_edges(connector(k, k, k))))

    expected = set(host_edges(power_cycle(n, k)))
    if seenall != expected:
        missing = expected - seenall
        raise HamPowerError(
            f"layout error: {len(missing)} host edges uncovered (e.g. {sorted(missing)[:4]})"
        )
    return families


def sample_reservoir(
    collection: GraphCollection,
    size: int,
    alpha: float,
    k: int,
    rng: random.Random,
    max_retries: int = 8,
) -> frozenset[int]:
    """Uniform random vertex subset, resampled until every vertex of every
    graph keeps degree fraction >= 1 - 1/2k + alpha/2 both into the subset
    and into its complement.

    The fraction for a vertex v into a set S is measured against the
    possible neighbours |S - {v}| (a member of S cannot be adjacent to
    itself), so complete collections are accepted at any size.  Raises
    :class:`ReservoirError` carrying the worst (vertex, colour, fraction)
    seen in the final attempt.
    """
    n = collection.n
    if size > n:
        raise InvalidInstanceError(f"reservoir size {size} exceeds n={n}")
    if size < 1 or size >= n:
        raise InvalidInstanceError("reservoir must be a proper non-empty subset")
    thr = 1 - 1 / (2 * k) + alpha / 2
    failure: Optional[tuple[int, int, float]] = None
    for _ in range(max_retries):
        z = frozenset(rng.sample(range(n), size))
        z_mask = mask_of(z)
        comp_mask = ((1 << n) - 1) & ~z_mask
        failure = None
        for colour in range(1, collection.m + 1):
            for v in range(n):
                in_z = (z_mask >> v) & 1
                cap_in = size - in_z
                cap_out = (n - size) - (1 - in_z)
                d_in = collection.degree_into(colour, v, z_mask)
                if d_in < thr * cap_in - 1e-9:
                    failure = (v, colour, d_in / cap_in if cap_in else 0.0)
                    break
                d_out = collection.degree_into(colour, v, comp_mask)
                if d_out < thr * cap_out - 1e-9:
                    failure = (v, colour, d_out / cap_out if cap_out else 0.0)
                    break
            if failure:
                break
        if failure is None:
            return z
    raise ReservoirError(
        f"reservoir sampling failed after {max_retries} attempts "
        f"(worst: vertex {failure[0]}, colour {failure[1]}, fraction {failure[2]:.3f})",
        worst=failure,
    )


def solve(
    collection: GraphCollection,
    pattern: ColourPattern,
    config: PipelineConfig,
) -> tuple[PowerCycle, dict]:
    """Construct a verified coloured Hamilton k-power, or raise.

    Returns the cycle together with a JSON-serialisable trace (plan sizes,
    per-stage attempts and timings).  Raises
    :class:`InfeasibleConfigError` before any work when n is too small, and
    :class:`StageFailedError` when a stage exhausts its retries.
    """
    host = pattern.host
    if host.kind != POWER_CYCLE or host.order != collection.n:
        raise InvalidInstanceError("solve needs a power-cycle pattern matching the instance")
    k, n = host.k, collection.n
    if config.r < k + 1:
        raise InvalidInstanceError(f"need r >= k+1 = {k + 1}, got r={config.r}")
    if pattern.max_colour > collection.m:
        raise InvalidInstanceError("pattern colours exceed the number of graphs")

    plans = candidate_plans(n, k, config)
    if not plans:
        floor = feasibility_floor(k, config)
        raise InfeasibleConfigError(
            f"n={n} is below the feasibility floor {floor} for this configuration",
            floor=floor,
        )
    if config.mode == STRICT:
        plans = plans[:1]

    failures: list[dict] = []
    for plan_index, plan in enumerate(plans):
        try:
            cycle, trace = _solve_with_plan(collection, pattern, config, plan, plan_index)
        except StageFailedError as exc:
            failures.append({"plan_index": plan_index, "stage": exc.stage, "error": str(exc.cause)})
            if plan_index == len(plans) - 1:
                raise
            continue
        trace["plan_fallbacks"] = failures
        return cycle, trace
    raise HamPowerError("unreachable: plan loop exited without a result")


def _solve_with_plan(
    collection: GraphCollection,
    pattern: ColourPattern,
    config: PipelineConfig,
    plan: Plan,
    plan_index: int,
) -> tuple[PowerCycle, dict]:
    k, n = plan.k, plan.n
    layout_edge_partition(plan)  # colour accounting, before any embedding

    attempts = 1 if config.mode == STRICT else config.max_retries
    trace: dict = {
        "seed": config.seed,
        "mode": config.mode,
        "sampler_mode": config.sampler_mode,
        "plan": asdict(plan),
        "plan_index": plan_index,
        "stages": [],
    }

    def run_stage(name: str, fn: Callable[[random.Random], object], tries: int = attempts):
        last: Optional[Exception] = None
        started = time.perf_counter()
        for attempt in range(tries):
            rng = derive_rng(config.seed, plan_index, name, attempt)
            try:
                out = fn(rng)
            except HamPowerError as exc:
                last = exc
                continue
            trace["stages"].append(
                {
                    "name": name,
                    "attempts": attempt + 1,
                    "elapsed_ms": int((time.perf_counter() - started) * 1000),
                }
            )
            return out
        raise StageFailedError(name, last if last else HamPowerError("unknown"), summary=f"plan={asdict(plan)}")

    reservoir = run_stage(
        "reservoir",
        lambda rng: sample_reservoir(
            collection, plan.z_size, config.alpha, k, rng, max_retries=attempts
        ),
        tries=1,
    )
    z1, z2 = run_stage("endpoints", lambda rng: tuple(rng.sample(sorted(reservoir), 2)))

    def stage_absorber(rng: random.Random) -> AbsorbingStructure:
        if plan.s_t >= 1:
            template = build_template(plan.s_t, Fraction(plan.w_extra, plan.s_t), rng)
            if template.edge_count != plan.b:
                raise HamPowerError("internal error: template edge count diverged from the plan")
        else:
            template = Template.empty()
        candidates = sorted(set(range(n)) - reservoir)
        y = tuple(rng.sample(candidates, 2 * plan.s_t))
        chi0 = restrict_pattern(pattern, 0, power_path(plan.m_abs, k))
        return build_absorbing_structure(collection, chi0, reservoir, z1, z2, y, template, rng)

    structure = run_stage("absorber", stage_absorber)

    v_prime = sorted(set(range(n)) - structure.absorbed_set - reservoir)
    if len(v_prime) != plan.s * plan.r + plan.c:
        raise HamPowerError("internal error: vertex accounting broke after the absorber")
    if n != structure.a_size + plan.z_size + len(v_prime):
        raise HamPowerError("internal error: |V| != |A| + |Z| + |V'|")

    def stage_paths(rng: random.Random) -> list[PowerPath]:
        # the random equipartition of V' is redrawn on every attempt
        pool = list(v_prime)
        rng.shuffle(pool)
        parts = [sorted(pool[j * plan.n1:(j + 1) * plan.n1]) for j in range(plan.r)]
        pats = [
            restrict_pattern(pattern, plan.path_window_start(i), power_path(plan.r, k))
            for i in range(1, plan.s + 1)
        ]
        return build_path_collection(
            collection, parts, pats, plan.s, rng, sampler_mode=config.sampler_mode
        )

    paths = run_stage("paths", stage_paths)

    def stage_connect(rng: random.Random) -> tuple[list[Optional[int]], frozenset[int]]:
        placement: list[Optional[int]] = [None] * n
        avail = set(reservoir) - {z1, z2}
        running = list(structure.boundary_last_k())

        def place(pos: int, v: int) -> None:
            if placement[pos] is not None:
                raise HamPowerError(f"internal error: position {pos} placed twice")
            placement[pos] = v

        for i in range(1, plan.s + 1):
            path = paths[i - 1]
            w = PowerPath(k, tuple(running[-k:]))
            y = PowerPath(k, path.vertices[:k])
            sub = restrict_pattern(pattern, plan.connector_window_start(i), connector(k, k, k))
            internals = embed_connector(
                collection, ConnectorRequest(w, y, sub, frozenset(avail), frozenset()), rng
            )
            avail.difference_update(internals)
            base = plan.connector_window_start(i) + k
            for off, v in enumerate(internals):
                place(base + off, v)
            for off, v in enumerate(path.vertices):
                place(plan.path_window_start(i) + off, v)
            running = list(path.vertices)

        covered = {v for p in paths for v in p.vertices}
        leftovers = sorted(set(v_prime) - covered)
        if len(leftovers) != plan.c:
            raise HamPowerError("internal error: leftover count disagrees with the plan")
        rng.shuffle(leftovers)
        for j, v in enumerate(leftovers):
            start = plan.sweep_base + j * (k + 1)
            w = PowerPath(k, tuple(running[-k:]))
            sub = restrict_pattern(pattern, start - k, connector(k, 1, k))
            internals = embed_connector(
                collection,
                ConnectorRequest(w, PowerPath(k, (v,)), sub, frozenset(avail), frozenset()),
                rng,
            )
            avail.difference_update(internals)
            for off, u in enumerate(internals):
                place(start + off, u)
            place(start + k, v)
            running.extend(internals)
            running.append(v)

        for idx in range(plan.g):
            p = plan.greedy_base + idx
            colours = [pattern.colour_of(p - k + j, p) for j in range(k)]
            z = extend_by_one(
                collection, PowerPath(k, tuple(running[-k:])), colours,
                frozenset(avail), frozenset(), rng,
            )
            avail.remove(z)
            place(p, z)
            running.append(z)

        if len(avail) != plan.s_t + k:
            raise HamPowerError("internal error: reservoir accounting before the final connector")
        w = PowerPath(k, tuple(running[-k:]))
        y = PowerPath(k, structure.boundary_first_k())
        sub = restrict_pattern(pattern, n - 2 * k, connector(k, k, k))
        internals = embed_connector(
            collection, ConnectorRequest(w, y, sub, frozenset(avail), frozenset()), rng
        )
        avail.difference_update(internals)
        for off, v in enumerate(internals):
            place(n - k + off, v)
        if len(avail) != plan.s_t:
            raise HamPowerError("internal error: reservoir residue is not exactly s_t")
        return placement, frozenset(avail)

    placement, z_prime = run_stage("connect", stage_connect)

    def stage_absorb(rng: random.Random) -> PowerPath:
        return absorb(structure, z_prime)

    absorber_path = run_stage("absorb", stage_absorb, tries=1)
    for pos, v in enumerate(absorber_path.vertices):
        if placement[pos] is not None:
            raise HamPowerError(f"internal error: absorber position {pos} already placed")
        placement[pos] = v

    if any(v is None for v in placement):
        raise HamPowerError("internal error: unfilled host positions remain")
    vertices = tuple(placement)  # type: ignore[arg-type]
    result = verify_coloured_embedding(collection, pattern, vertices)
    if not result.ok:
        raise HamPowerError(f"internal error: final cycle fails verification at {result.violation}")
    cycle = PowerCycle(k, vertices)
    trace["verified"] = True
    return cycle, trace
