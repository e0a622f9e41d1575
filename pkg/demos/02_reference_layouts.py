"""
How well do QWERTY and Dvorak fit Quechua?
==========================================

Score the two reference layouts against the Quechua frequency column and
look at where the typing mass falls.
"""

from quechuakb import builtin_layout, builtin_profile, builtin_table, evaluate, validate_layout
from quechuakb.effort import format_metrics
from quechuakb.report import HeatmapSpec, render

freq = builtin_table("quechua")
quechua = builtin_profile("quechua")

for name in ("qwerty-latam", "dvorak-en"):
    layout = builtin_layout(name)
    print(format_metrics(evaluate(layout, freq)))
    print("coverage issues:", validate_layout(layout, quechua) or "none")
    print(render(HeatmapSpec.from_table(layout, freq, "text")))

###############################################################################
# On QWERTY, "n" sits on the bottom row and "q", "p", "u", "i" on the top row,
# so well under half of the typing happens on the home row.
