"""
Optimizing a layout for Quechua
===============================

Two regimes: a small edit of QWERTY (at most six graphemes relocated) and a
free layout searched from scratch. Both minimize the same effort model.
"""

import sys
from pathlib import Path

from quechuakb import (
    OptimizeConfig,
    builtin_layout,
    builtin_table,
    compare,
    evaluate,
    optimize_free,
    optimize_qwerty_delta,
)
from quechuakb.effort import format_comparison
from quechuakb.report import HeatmapSpec, render

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-output")
out.mkdir(parents=True, exist_ok=True)

freq = builtin_table("quechua")
qwerty = builtin_layout("qwerty-latam")
baseline = evaluate(qwerty, freq)

###############################################################################
# QWERTY with a relocation budget
# -------------------------------

delta = optimize_qwerty_delta(qwerty, freq, config=OptimizeConfig(max_moves=6, rng_seed=1))
print(format_comparison(compare(baseline, delta.metrics)))
moved = {g: (qwerty.slot_of(g), delta.layout.slot_of(g))
         for g in delta.layout.assignment if qwerty.slot_of(g) != delta.layout.slot_of(g)}
print("relocated:", moved)

###############################################################################
# Free layout
# -----------

free = optimize_free(freq, config=OptimizeConfig(rng_seed=1, trace_every=10_000))
print()
print(format_comparison(compare(baseline, free.metrics)))
print(render(HeatmapSpec.from_table(free.layout, freq, "text")))

(out / "free.svg").write_text(render(HeatmapSpec.from_table(free.layout, freq, "svg")), "utf-8")
(out / "trace.csv").write_text(free.trace_csv(), "utf-8")
print(f"wrote {out / 'free.svg'} and {out / 'trace.csv'}")

###############################################################################
# The home row ends up with about 83% of the typing. "a" and "n" go on resting
# keys. The apostrophe is only the 17th most frequent symbol, so it lands on
# the top row under the default weights.
