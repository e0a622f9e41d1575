import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerate_optimum
from quechuakb import (
    BigramTable,
    CapacityError,
    ConfigError,
    EffortParams,
    FrequencyTable,
    OptimizeConfig,
    anneal,
    brute_force,
    builtin_table,
    builtin_layout,
    evaluate,
    greedy_seed,
    optimize_free,
    optimize_qwerty_delta,
    serialize_layout,
)

FAST = OptimizeConfig(rng_seed=7, iterations=20_000, restarts=2)


def test_greedy_pairs_sorted(ansi32):
    geo = ansi32.subset(["home-3", "top-0"])
    layout = greedy_seed(FrequencyTable.from_counts({"a": 3, "b": 1}), geo)
    assert layout.assignment == {"a": "home-3", "b": "top-0"}


def test_greedy_tie_breaks(ansi32):
    geo = ansi32.subset(["home-3", "home-6"])
    layout = greedy_seed(FrequencyTable.from_counts({"b": 2, "a": 2}), geo)
    assert layout.assignment == {"a": "home-3", "b": "home-6"}


def test_greedy_quechua_a_on_resting_key(quechua_table, ansi32):
    layout = greedy_seed(quechua_table, ansi32)
    slot = ansi32[layout.slot_of("a")]
    assert slot.row == "home" and slot.is_home_position
    assert " " not in layout.assignment


def test_greedy_capacity(ansi32):
    geo = ansi32.subset(["home-3"])
    with pytest.raises(CapacityError):
        greedy_seed(FrequencyTable.from_counts({"a": 1, "b": 1}), geo)
    with pytest.raises(CapacityError):
        greedy_seed(FrequencyTable.from_counts({"a": 1}), geo, pinned={"home-3"})


def test_config_validation():
    with pytest.raises(ConfigError):
        OptimizeConfig(cooling=1.0)
    with pytest.raises(ConfigError):
        OptimizeConfig(iterations=0)
    with pytest.raises(ConfigError):
        OptimizeConfig(initial_temperature="hot")
    with pytest.raises(ConfigError):
        OptimizeConfig.from_dict({"seed": 1})
    assert OptimizeConfig.from_dict({"rng_seed": 3, "cooling": 0.9}).cooling == 0.9


def test_anneal_never_worse_than_seed(quechua_table, ansi32):
    seed = builtin_layout("dvorak-en")
    r = anneal(seed, quechua_table, config=FAST)
    assert r.metrics.total_effort <= r.seed_metrics.total_effort
    assert r.seed_metrics.total_effort == evaluate(seed, quechua_table).total_effort


def test_anneal_deterministic(quechua_table):
    bigrams = BigramTable.from_counts({("a", "n"): 50, ("n", "a"): 40, ("k", "a"): 30})
    seed = builtin_layout("qwerty-latam")
    a = anneal(seed, quechua_table, bigrams, config=FAST)
    b = anneal(seed, quechua_table, bigrams, config=FAST)
    assert serialize_layout(a.layout) == serialize_layout(b.layout)
    c = anneal(seed, quechua_table, bigrams, config=OptimizeConfig(rng_seed=8, iterations=5, restarts=1))
    assert c.metrics.total_effort >= a.metrics.total_effort


def test_pinned_slots_do_not_move(quechua_table):
    base = builtin_layout("qwerty-latam")
    pinned = {base.slot_of("a"), base.slot_of("q")}
    seed = type(base)(base.name, base.geometry, base.assignment, frozenset(pinned))
    r = anneal(seed, quechua_table, config=FAST)
    assert r.layout.slot_of("a") == base.slot_of("a")
    assert r.layout.slot_of("q") == base.slot_of("q")
    assert r.layout.pinned == frozenset(pinned)


def test_trace(quechua_table):
    cfg = OptimizeConfig(rng_seed=1, iterations=1000, restarts=1, trace_every=100)
    r = anneal(builtin_layout("qwerty-latam"), quechua_table, config=cfg)
    assert [i for i, _ in r.trace] == list(range(100, 1001, 100))
    assert r.trace_csv().startswith("iteration,effort\n100,")


def test_qwerty_delta_zero_moves(quechua_table):
    base = builtin_layout("qwerty-latam")
    r = optimize_qwerty_delta(base, quechua_table, config=OptimizeConfig(max_moves=0))
    assert r.layout == base and r.moves_from_base == 0


@pytest.mark.parametrize("budget", [1, 2, 3, 6])
def test_qwerty_delta_budget(quechua_table, budget):
    base = builtin_layout("qwerty-latam")
    cfg = OptimizeConfig(rng_seed=3, iterations=20_000, restarts=2, max_moves=budget)
    r = optimize_qwerty_delta(base, quechua_table, config=cfg)
    assert r.layout.moves_from(base) == r.moves_from_base <= budget
    assert r.metrics.total_effort < evaluate(base, quechua_table).total_effort


def test_optimize_free_home_row(quechua_table):
    r = optimize_free(quechua_table, config=FAST)
    assert r.metrics.row_usage["home"] >= 0.70
    assert r.metrics.total_effort <= r.seed_metrics.total_effort


def test_brute_force_two_graphemes(ansi32):
    geo = ansi32.subset(["home-3", "top-3"])
    params = EffortParams(row_weight={"home": 1.0, "top": 2.0, "bottom": 2.2})
    freq = FrequencyTable.from_counts({"a": 2, "b": 1})
    layout = brute_force(freq, BigramTable(), geo, params)
    assert layout.assignment == {"a": "home-3", "b": "top-3"}
    assert evaluate(layout, freq, params=params, geometry=geo).total_effort == pytest.approx(4.0)


def test_brute_force_symmetric_tie_break(ansi32):
    geo = ansi32.subset(["home-3", "home-6", "top-9"])
    params = EffortParams(row_weight={"home": 1.0, "top": 1.0, "bottom": 1.0},
                          finger_weight={"index": 1.6, "middle": 1.6, "ring": 1.6, "pinky": 1.6})
    freq = FrequencyTable.from_counts({"b": 5, "a": 5})
    layout = brute_force(freq, BigramTable(), geo, params)
    # Geometry order is top row first, so the first enumerated placement wins.
    assert layout.assignment == {"a": "top-9", "b": "home-3"}


def test_brute_force_limits(ansi32):
    with pytest.raises(CapacityError):
        brute_force(FrequencyTable.from_counts({"a": 1}), geometry=ansi32)
    geo = ansi32.subset(["home-3"])
    with pytest.raises(CapacityError):
        brute_force(FrequencyTable.from_counts({"a": 1, "b": 1}), geometry=geo)


def _random_instance(rng, ansi32, max_n=6):
    n_slots = rng.randint(2, max_n)
    n_graphemes = rng.randint(1, n_slots)
    geo = ansi32.subset(rng.sample([s.id for s in ansi32.slots], n_slots), name="instance")
    gs = rng.sample(list("aiunkqhtp'"), n_graphemes)
    freq = {g: rng.randint(1, 1000) for g in gs}
    pairs = {}
    for _ in range(rng.randint(0, 8)):
        pairs[rng.choice(gs), rng.choice(gs)] = rng.randint(1, 500)
    return geo, freq, pairs


def test_brute_force_matches_enumerator(ansi32):
    rng = random.Random(2024)
    for _ in range(20):
        geo, freq, pairs = _random_instance(rng, ansi32)
        ft, bt = FrequencyTable.from_counts(freq), BigramTable.from_counts(pairs)
        layout = brute_force(ft, bt, geo)
        got = evaluate(layout, ft, bt, geometry=geo).total_effort
        cells = [(s.row, s.column) for s in geo.slots]
        assert got == pytest.approx(enumerate_optimum(freq, pairs, cells), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_constrained_moves_never_exceed_budget(seed):
    base = builtin_layout("qwerty-latam")
    freq = builtin_table("quechua")
    budget = seed % 5
    cfg = OptimizeConfig(rng_seed=seed, iterations=2000, restarts=1, max_moves=budget)
    r = optimize_qwerty_delta(base, freq, config=cfg)
    assert r.layout.moves_from(base) <= budget
    assert r.metrics.total_effort <= evaluate(base, freq).total_effort


def test_without_bigrams_greedy_is_already_optimal(quechua_table, ansi32):
    # Linear assignment: sorted frequencies onto sorted costs cannot be beaten.
    seed = greedy_seed(quechua_table, ansi32)
    r = optimize_free(quechua_table, config=FAST)
    assert r.metrics.total_effort == pytest.approx(evaluate(seed, quechua_table).total_effort, rel=1e-12)
    ranked = [g for g, _ in sorted(quechua_table.counts.items(), key=lambda kv: -kv[1]) if g != " "]
    assert ranked.index("'") == 16
    assert sum(s.row == "home" for s in ansi32.slots) == 12
