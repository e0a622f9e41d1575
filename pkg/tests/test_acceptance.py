"""Exit criteria for the package, one test per criterion."""

import io
import json
import random
import time
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerate_optimum, listing_counter
from quechuakb import (
    BigramTable,
    FrequencyTable,
    Layout,
    OptimizeConfig,
    anneal,
    brute_force,
    builtin_geometry,
    builtin_layout,
    builtin_profile,
    builtin_table,
    evaluate,
    greedy_seed,
    merge,
    optimize_free,
    optimize_qwerty_delta,
    parse_layout,
    percent_improvement,
    serialize_layout,
    sorted_entries,
    tokenize,
)
from quechuakb.cli import main

README = Path(__file__).resolve().parents[1] / "README.md"


def test_1_table_fixture_integrity(record):
    start = time.perf_counter()
    q = builtin_table("quechua")
    first_letter = next(g for g, _ in sorted_entries(q) if g.isalpha())
    checks = {"a": 21300, "n": 7307, "u": 7203, "'": 1133, "f": 5}
    ok = all(q[g] == n for g, n in checks.items()) and first_letter == "a"
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    record(1, ok, f"fixture counts {[q[g] for g in checks]}, first letter {first_letter!r}, {elapsed:.3f}s")
    assert ok


def _synthetic_corpus(path, size=1_000_000):
    rng = random.Random(1532)
    letters = list("achiklmnñpqrstuwyAKQÑ") + list("úéíóÚÉÍÓ") + list("bdefgjovxz")
    punct = list(".,;:!?¿¡-\"()'") + list("0123456789")
    parts, n = [], 0
    while n < size:
        word = "".join(rng.choice(letters) for _ in range(rng.randint(1, 9)))
        if rng.random() < 0.25:
            word = word[: rng.randint(0, len(word))] + "'" + word
        if rng.random() < 0.15:
            word += rng.choice(punct)
        sep = "\n" if rng.random() < 0.05 else " "
        chunk = word + sep
        parts.append(chunk)
        n += len(chunk.encode("utf-8"))
    path.write_text("".join(parts), encoding="utf-8")


def test_2_listing_equivalence(tmp_path, record):
    corpus = tmp_path / "synthetic.txt"
    _synthetic_corpus(corpus)
    reference = listing_counter(corpus)
    start = time.perf_counter()
    code = main(["analyze", str(corpus), "--mode", "char", "--out", str(tmp_path / "out")], out=io.StringIO())
    elapsed = time.perf_counter() - start
    counts = json.loads((tmp_path / "out" / "unigrams.json").read_text("utf-8"))["counts"]
    special = [" ", "ñ", "ú", "é", "í", "ó", "'", "¿"]
    ok = code == 0 and counts == reference and all(c in counts for c in special) and elapsed < 5.0
    size = corpus.stat().st_size
    record(2, ok, f"{size} bytes, {len(counts)} symbols, exact match {counts == reference}, {elapsed:.2f}s")
    assert ok


@pytest.fixture(scope="module")
def free_run():
    start = time.perf_counter()
    result = optimize_free(builtin_table("quechua"), config=OptimizeConfig())
    return result, time.perf_counter() - start


def test_3_row_usage(free_run, record):
    result, elapsed = free_run
    usage = result.metrics.row_usage
    ok = usage["home"] >= 0.70 and usage["bottom"] <= 0.10 and elapsed < 60
    record(3, ok, "home {:.1%} top {:.1%} bottom {:.1%} (published 78/18/4), {:.1f}s".format(
        usage["home"], usage["top"], usage["bottom"], elapsed))
    assert ok


def test_4_home_row_placement(free_run, record):
    result, _ = free_run
    geo = builtin_geometry("ansi32")
    rows = {g: geo[result.layout.slot_of(g)].row for g in ("a", "n", "'")}
    ok = all(r == "home" for r in rows.values())
    record(4, ok, f"rows {rows}")
    assert ok


def _random_instance(rng, geo):
    n_slots = rng.randint(2, 6)
    n_graphemes = rng.randint(1, n_slots)
    sub = geo.subset(rng.sample([s.id for s in geo.slots], n_slots), name="instance")
    gs = rng.sample(list("aiunkqhtp'"), n_graphemes)
    freq = {g: rng.randint(1, 1000) for g in gs}
    pairs = {}
    for _ in range(rng.randint(0, 8)):
        pairs[rng.choice(gs), rng.choice(gs)] = rng.randint(1, 500)
    return sub, freq, pairs


def test_5_oracle_equivalence(record):
    start = time.perf_counter()
    geo = builtin_geometry("ansi32")
    rng = random.Random(5)
    within = 0
    for k in range(100):
        sub, freq, pairs = _random_instance(rng, geo)
        ft, bt = FrequencyTable.from_counts(freq), BigramTable.from_counts(pairs)
        optimum = evaluate(brute_force(ft, bt, sub), ft, bt, geometry=sub).total_effort
        cfg = OptimizeConfig(rng_seed=k, iterations=50_000, restarts=4)
        got = anneal(greedy_seed(ft, sub), ft, bt, config=cfg, geometry=sub).metrics.total_effort
        within += got <= optimum * 1.01
    exact = 0
    for _ in range(20):
        sub, freq, pairs = _random_instance(rng, geo)
        ft, bt = FrequencyTable.from_counts(freq), BigramTable.from_counts(pairs)
        bf = evaluate(brute_force(ft, bt, sub), ft, bt, geometry=sub).total_effort
        ref = enumerate_optimum(freq, pairs, [(s.row, s.column) for s in sub.slots])
        exact += bf == pytest.approx(ref, rel=1e-12)
    elapsed = time.perf_counter() - start
    ok = within >= 95 and exact == 20 and elapsed < 120
    record(5, ok, f"anneal within 1% on {within}/100, brute force exact on {exact}/20, {elapsed:.1f}s")
    assert ok


def test_6_constrained_mode(record):
    start = time.perf_counter()
    q = builtin_table("quechua")
    base = builtin_layout("qwerty-latam")
    base_effort = evaluate(base, q).total_effort
    r6 = optimize_qwerty_delta(base, q, config=OptimizeConfig(max_moves=6))
    r0 = optimize_qwerty_delta(base, q, config=OptimizeConfig(max_moves=0))
    moved = r6.layout.moves_from(base)
    elapsed = time.perf_counter() - start
    ok = moved <= 6 and r6.metrics.total_effort < base_effort and r0.layout == base and elapsed < 60
    record(6, ok, f"{moved} moves, effort {base_effort:.0f} -> {r6.metrics.total_effort:.0f}, "
                  f"max_moves=0 identity {r0.layout == base}, {elapsed:.1f}s")
    assert ok


def test_7_percent_improvement(record):
    speed = percent_improvement(32.5, 38.2)
    modest = percent_improvement(32.5, 35.4)
    ok = abs(speed - 17.5) <= 0.05 and abs(modest - 8.9) <= 0.05
    record(7, ok, f"32.5->38.2 = {speed:.3f}%, 32.5->35.4 = {modest:.3f}%")
    assert ok


tables = st.dictionaries(st.sampled_from(list("aiunkq'ñ ")), st.integers(1, 100), max_size=7).map(
    FrequencyTable.from_counts)


@settings(max_examples=200, deadline=None, database=None)
@given(tables, tables, tables)
def _merge_laws(a, b, c):
    assert merge([a, b]) == merge([b, a])
    assert merge([merge([a, b]), c]) == merge([a, merge([b, c])])


@settings(max_examples=200, deadline=None, database=None)
@given(st.text(alphabet=list("achiklmnñpqrstuwy' "), max_size=80))
def _lossless(text):
    assert "".join(tokenize(text, builtin_profile("quechua"), "grapheme")) == text


@st.composite
def _layouts(draw):
    ids = [s.id for s in builtin_geometry("ansi32").slots]
    gs = draw(st.lists(st.sampled_from(list("abcdefghijklmnopqrstuvwxyzñ'") + ["ch", "ll", "qh"]),
                       unique=True, max_size=28))
    slots = draw(st.permutations(ids))[: len(gs)]
    pinned = draw(st.sets(st.sampled_from(ids), max_size=5))
    return Layout(draw(st.text(min_size=1, max_size=12)), "ansi32", dict(zip(gs, slots)), frozenset(pinned))


@settings(max_examples=200, deadline=None, database=None)
@given(_layouts())
def _round_trip(layout):
    assert parse_layout(serialize_layout(layout)) == layout


def test_8_property_suites(record):
    start = time.perf_counter()
    outcomes = {}
    for name, prop in (("merge", _merge_laws), ("tokenizer", _lossless), ("round-trip", _round_trip)):
        try:
            prop()
            outcomes[name] = True
        except AssertionError:
            outcomes[name] = False
    q = builtin_table("quechua")
    bigrams = BigramTable.from_counts({("a", "n"): 500, ("q", "a"): 300, ("'", "a"): 200})
    cfg = OptimizeConfig(rng_seed=99, iterations=50_000, restarts=2)
    runs = [serialize_layout(optimize_free(q, bigrams, config=cfg).layout) for _ in range(3)]
    outcomes["determinism"] = len(set(runs)) == 1
    elapsed = time.perf_counter() - start
    ok = all(outcomes.values()) and elapsed < 60
    record(8, ok, f"{outcomes}, {elapsed:.1f}s")
    assert ok


def test_9_scope_disclaimer(record):
    text = " ".join(README.read_text(encoding="utf-8").split())
    ok = "not reproduc" in text and "85%" in text and "words per minute" in text.lower()
    record(9, ok, "human-subject measurements documented as out of scope; only the arithmetic is checked")
    assert ok
