"""Layout search: greedy seeding, simulated annealing, QWERTY-delta and brute force."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numba
import numpy as np

from .effort import EffortParams, LayoutMetrics, cost_matrices, evaluate, key_cost
from .errors import CapacityError, ConfigError, DataIOError, ParseError
from .frequency import BigramTable, FrequencyTable
from .keyboard import KeyboardGeometry, Layout, builtin_geometry, geometry_for

BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class OptimizeConfig:
    rng_seed: int = 0
    iterations: int = 200_000
    initial_temperature: float | str = "auto"
    cooling: float = 0.995
    cool_every: int = 100
    restarts: int = 4
    max_moves: int | None = None
    trace_every: int = 0

    def __post_init__(self):
        if not isinstance(self.rng_seed, int) or not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must be a 64-bit unsigned integer", field="rng_seed")
        if not isinstance(self.iterations, int) or self.iterations < 1:
            raise ConfigError("iterations must be >= 1", field="iterations")
        if not 0.0 < self.cooling < 1.0:
            raise ConfigError("cooling must lie strictly inside (0, 1)", field="cooling")
        if self.cool_every < 1:
            raise ConfigError("cool_every must be >= 1", field="cool_every")
        if not isinstance(self.restarts, int) or self.restarts < 1:
            raise ConfigError("restarts must be >= 1", field="restarts")
        t0 = self.initial_temperature
        if t0 != "auto" and (isinstance(t0, str) or not t0 > 0):
            raise ConfigError("initial_temperature must be positive or 'auto'", field="initial_temperature")
        if self.max_moves is not None and (not isinstance(self.max_moves, int) or self.max_moves < 0):
            raise ConfigError("max_moves must be a non-negative integer", field="max_moves")
        if self.trace_every < 0:
            raise ConfigError("trace_every must be >= 0", field="trace_every")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc) -> "OptimizeConfig":
        if not isinstance(doc, dict):
            raise ParseError("optimize config must be a JSON object")
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}", field=sorted(unknown)[0])
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "OptimizeConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"cannot read {path}: {exc.strerror}") from exc
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed optimize config {path}: {exc}") from exc


@dataclass(frozen=True)
class OptimizationResult:
    layout: Layout
    metrics: LayoutMetrics
    seed_metrics: LayoutMetrics
    moves_from_base: int
    trace: list = field(default_factory=list)

    def trace_csv(self) -> str:
        return "iteration,effort\n" + "".join(f"{i},{e:.6f}\n" for i, e in self.trace)


def _typed(freq: FrequencyTable):
    return {g: n for g, n in freq.counts.items() if not g.isspace()}


def greedy_seed(
    freq: FrequencyTable,
    geometry: KeyboardGeometry,
    params: EffortParams = EffortParams(),
    pinned=frozenset(),
    name: str = "greedy-seed",
) -> Layout:
    """Most frequent graphemes onto the cheapest unpinned slots."""
    pinned = frozenset(pinned)
    graphemes = sorted(_typed(freq).items(), key=lambda kv: (-kv[1], kv[0]))
    slots = sorted(
        (s for s in geometry.slots if s.id not in pinned), key=lambda s: (key_cost(s, params), s.id)
    )
    if len(graphemes) > len(slots):
        raise CapacityError(f"{len(graphemes)} graphemes but only {len(slots)} unpinned slots")
    assignment = {g: s.id for (g, _), s in zip(graphemes, slots)}
    return Layout(name, geometry.name, assignment, pinned)


# -- annealing ---------------------------------------------------------------

class _Problem:
    """Dense index form of a layout search instance."""

    def __init__(self, seed: Layout, freq, bigrams, params, geometry):
        self.geometry = geometry
        self.slot_ids = [s.id for s in geometry.slots]
        slot_index = {sid: i for i, sid in enumerate(self.slot_ids)}
        self.graphemes = sorted(seed.assignment)
        gi = {g: i for i, g in enumerate(self.graphemes)}
        n = len(self.graphemes)
        self.f = np.array([freq[g] if not g.isspace() else 0 for g in self.graphemes], dtype=np.float64)
        self.B = np.zeros((n, n), dtype=np.float64)
        for (a, b), c in bigrams.counts.items():
            if a in gi and b in gi:
                self.B[gi[a], gi[b]] = c
        self.costs, self.pen = cost_matrices(geometry, params)
        self.lam = params.bigram_lambda
        self.pos = np.array([slot_index[seed.assignment[g]] for g in self.graphemes], dtype=np.int64)
        self.free = np.array(
            [i for i, sid in enumerate(self.slot_ids) if sid not in seed.pinned], dtype=np.int64
        )

    def occupancy(self, pos):
        occ = np.full(len(self.slot_ids), -1, dtype=np.int64)
        occ[pos] = np.arange(len(pos))
        return occ

    def energy(self, pos) -> float:
        return float(_energy(self.f, self.B, self.costs, self.pen, self.lam, pos))

    def layout(self, pos, name, pinned) -> Layout:
        return Layout(name, self.geometry.name,
                      {g: self.slot_ids[p] for g, p in zip(self.graphemes, pos)}, pinned)


@numba.njit(cache=True)
def _energy(f, B, costs, pen, lam, pos):
    e = 0.0
    n = pos.shape[0]
    for a in range(n):
        e += f[a] * costs[pos[a]]
    pair = 0.0
    for a in range(n):
        for b in range(n):
            if B[a, b] != 0.0:
                pair += B[a, b] * pen[pos[a], pos[b]]
    return e + lam * pair


@numba.njit(cache=True)
def _touch(B, pen, pos, g1, g2):
    # Sum of pair terms with at least one endpoint in {g1, g2}; g2 may be -1.
    n = pos.shape[0]
    s = 0.0
    for a in (g1, g2):
        if a < 0:
            continue
        for b in range(n):
            s += B[a, b] * pen[pos[a], pos[b]]
            if b != g1 and b != g2:
                s += B[b, a] * pen[pos[b], pos[a]]
    return s


@numba.njit(cache=True)
def _anneal_kernel(f, B, costs, pen, lam, pos, occ, free, base_pos, max_moves,
                   picks, coins, t0, cooling, cool_every, trace_every):
    n_iter = picks.shape[0]
    energy = _energy(f, B, costs, pen, lam, pos)
    best = energy
    best_pos = pos.copy()
    moves = 0
    if max_moves >= 0:
        for g in range(pos.shape[0]):
            if pos[g] != base_pos[g]:
                moves += 1
    n_trace = n_iter // trace_every if trace_every > 0 else 0
    trace = np.empty(n_trace, dtype=np.float64)
    temp = t0
    for it in range(n_iter):
        if it > 0 and it % cool_every == 0:
            temp *= cooling
        s1 = free[picks[it, 0]]
        s2 = free[picks[it, 1]]
        g1 = occ[s1]
        g2 = occ[s2]
        if s1 != s2 and not (g1 < 0 and g2 < 0):
            if g1 < 0:
                g1, g2 = g2, g1
                s1, s2 = s2, s1
            # g1 moves s1 -> s2; g2 (possibly empty) moves s2 -> s1.
            ok = True
            new_moves = moves
            if max_moves >= 0:
                new_moves += int(s2 != base_pos[g1]) - int(pos[g1] != base_pos[g1])
                if g2 >= 0:
                    new_moves += int(s1 != base_pos[g2]) - int(pos[g2] != base_pos[g2])
                ok = new_moves <= max_moves
            if ok:
                delta = f[g1] * (costs[s2] - costs[s1])
                if g2 >= 0:
                    delta += f[g2] * (costs[s1] - costs[s2])
                if lam != 0.0:
                    before = _touch(B, pen, pos, g1, g2)
                    pos[g1] = s2
                    if g2 >= 0:
                        pos[g2] = s1
                    delta += lam * (_touch(B, pen, pos, g1, g2) - before)
                    pos[g1] = s1
                    if g2 >= 0:
                        pos[g2] = s2
                if delta <= 0.0 or coins[it] < math.exp(-delta / temp):
                    pos[g1] = s2
                    occ[s2] = g1
                    occ[s1] = g2
                    if g2 >= 0:
                        pos[g2] = s1
                    energy += delta
                    moves = new_moves
                    if energy < best:
                        best = energy
                        best_pos[:] = pos
        if trace_every > 0 and (it + 1) % trace_every == 0:
            trace[(it + 1) // trace_every - 1] = energy
    return best_pos, trace


def _run_restarts(problem: _Problem, config: OptimizeConfig, base_pos, max_moves):
    seed_energy = problem.energy(problem.pos)
    t0 = config.initial_temperature
    if t0 == "auto":
        t0 = 0.1 * seed_energy if seed_energy > 0 else 1e-9
    candidates = []
    trace = []
    for r in range(config.restarts):
        # Restart r owns the PRNG stream seeded with rng_seed + r.
        rng = np.random.default_rng((config.rng_seed + r) % 2**64)
        n_free = len(problem.free)
        picks = rng.integers(0, n_free, size=(config.iterations, 2), dtype=np.int64)
        coins = rng.random(config.iterations)
        pos = problem.pos.copy()
        occ = problem.occupancy(pos)
        best_pos, samples = _anneal_kernel(
            problem.f, problem.B, problem.costs, problem.pen, problem.lam, pos, occ,
            problem.free, base_pos, max_moves, picks, coins, float(t0), config.cooling,
            config.cool_every, config.trace_every,
        )
        candidates.append((problem.energy(best_pos), tuple(best_pos.tolist())))
        if config.trace_every and r == 0:
            trace = [((k + 1) * config.trace_every, float(e)) for k, e in enumerate(samples)]
    candidates.append((seed_energy, tuple(problem.pos.tolist())))
    energy, best = min(candidates)
    return np.array(best, dtype=np.int64), trace


def anneal(
    seed: Layout,
    freq: FrequencyTable,
    bigrams: BigramTable = BigramTable(),
    params: EffortParams = EffortParams(),
    config: OptimizeConfig = OptimizeConfig(),
    geometry: KeyboardGeometry | None = None,
    base: Layout | None = None,
    name: str | None = None,
) -> OptimizationResult:
    """Simulated annealing over swaps of unpinned slots.

    Swapping an occupied slot with an empty one moves that grapheme. With
    ``config.max_moves`` set, moves that would leave more than that many
    graphemes off their ``base`` slot (default: ``seed``) are rejected. The
    best layout visited over all restarts is returned, never worse than the
    seed.
    """
    if not isinstance(config, OptimizeConfig):
        raise ConfigError("config must be an OptimizeConfig")
    geometry = geometry_for(seed, geometry)
    base = seed if base is None else base
    problem = _Problem(seed, freq, bigrams, params, geometry)
    slot_index = {sid: i for i, sid in enumerate(problem.slot_ids)}
    base_pos = np.array(
        [slot_index.get(base.assignment.get(g), -1) for g in problem.graphemes], dtype=np.int64
    )
    max_moves = -1 if config.max_moves is None else config.max_moves
    if len(problem.free) >= 2 and len(problem.graphemes) > 0:
        best_pos, trace = _run_restarts(problem, config, base_pos, max_moves)
    else:
        best_pos, trace = problem.pos, []
    layout = problem.layout(best_pos, name or seed.name, seed.pinned)
    seed_metrics = evaluate(seed, freq, bigrams, params, geometry)
    metrics = evaluate(layout, freq, bigrams, params, geometry)
    if metrics.total_effort > seed_metrics.total_effort:
        layout, metrics = seed, seed_metrics
    return OptimizationResult(layout, metrics, seed_metrics, layout.moves_from(base), trace)


def optimize_free(
    freq: FrequencyTable,
    bigrams: BigramTable = BigramTable(),
    params: EffortParams = EffortParams(),
    config: OptimizeConfig = OptimizeConfig(),
    geometry: KeyboardGeometry | None = None,
    pinned=frozenset(),
    name: str = "optimized",
) -> OptimizationResult:
    """Unconstrained layout: greedy seed refined by annealing."""
    geometry = geometry or builtin_geometry("ansi32")
    seed = greedy_seed(freq, geometry, params, pinned)
    if config.max_moves is not None:
        config = OptimizeConfig(**{**config.to_dict(), "max_moves": None})
    return anneal(seed, freq, bigrams, params, config, geometry, name=name)


def optimize_qwerty_delta(
    base: Layout,
    freq: FrequencyTable,
    bigrams: BigramTable = BigramTable(),
    params: EffortParams = EffortParams(),
    config: OptimizeConfig = OptimizeConfig(max_moves=6),
    geometry: KeyboardGeometry | None = None,
    name: str | None = None,
) -> OptimizationResult:
    """Improve ``base`` while relocating at most ``config.max_moves`` graphemes."""
    if config.max_moves is None:
        config = OptimizeConfig(**{**config.to_dict(), "max_moves": 6})
    name = name or f"{base.name}-delta"
    if config.max_moves == 0:
        geometry = geometry_for(base, geometry)
        m = evaluate(base, freq, bigrams, params, geometry)
        return OptimizationResult(base, m, m, 0)
    return anneal(base, freq, bigrams, params, config, geometry, base=base, name=name)


# -- exhaustive oracle -------------------------------------------------------

def brute_force(
    freq: FrequencyTable,
    bigrams: BigramTable = BigramTable(),
    geometry: KeyboardGeometry | None = None,
    params: EffortParams = EffortParams(),
    pinned=frozenset(),
    name: str = "brute-force",
) -> Layout:
    """Exact minimum-effort layout by enumerating every injective placement.

    Graphemes are taken in text order and slots in geometry order; among
    equal-effort placements the first in lexicographic enumeration order wins.
    """
    if geometry is None:
        raise ConfigError("brute_force needs an explicit geometry")
    pinned = frozenset(pinned)
    graphemes = sorted(set(_typed(freq)) | {g for pair in bigrams.counts for g in pair if not g.isspace()})
    free = [i for i, s in enumerate(geometry.slots) if s.id not in pinned]
    if len(free) > BRUTE_FORCE_LIMIT or len(graphemes) > BRUTE_FORCE_LIMIT:
        raise CapacityError(
            f"brute force limited to {BRUTE_FORCE_LIMIT} graphemes and slots "
            f"(got {len(graphemes)} graphemes, {len(free)} free slots)"
        )
    if len(graphemes) > len(free):
        raise CapacityError(f"{len(graphemes)} graphemes but only {len(free)} unpinned slots")
    costs, pen = cost_matrices(geometry, params)
    gi = {g: i for i, g in enumerate(graphemes)}
    f = np.array([freq[g] for g in graphemes], dtype=np.float64)
    perms = np.array(list(itertools.permutations(free, len(graphemes))), dtype=np.int64)
    if perms.size == 0:
        return Layout(name, geometry.name, {}, pinned)
    energy = costs[perms] @ f
    pair = np.zeros(len(perms))
    for (a, b), c in sorted(bigrams.counts.items()):
        if a in gi and b in gi:
            pair += c * pen[perms[:, gi[a]], perms[:, gi[b]]]
    energy = energy + params.bigram_lambda * pair
    lowest = energy.min()
    # First placement within float noise of the minimum.
    k = int(np.flatnonzero(energy <= lowest + 1e-9 * max(1.0, abs(lowest)))[0])
    slots = geometry.slots
    return Layout(name, geometry.name, {g: slots[p].id for g, p in zip(graphemes, perms[k])}, pinned)
