"""
Character frequencies: Quechua against English and Spanish
===========================================================

The shipped tables hold the published per-character counts for three
corpora of very different sizes, so raw counts are not comparable. Relative
frequencies are.
"""

from importlib import resources

from quechuakb import builtin_profile, builtin_table, relative, sorted_entries
from quechuakb.frequency import analyze_text

tables = {lang: builtin_table(lang) for lang in ("english", "spanish", "quechua")}
for lang, t in tables.items():
    print(f"{lang:<8} total {t.total:>10,}")

# Drop the space column before comparing letters.
letters = {lang: relative(t.without([" "])) for lang, t in tables.items()}

print("\nchar   english  spanish  quechua")
for ch in ["a", "u", "k", "q", "w", "'", "e", "o", "f"]:
    row = "  ".join(f"{100 * letters[lang].get(ch, 0.0):6.2f}%" for lang in tables)
    print(f"{ch!r:<6} {row}")

# Raw "a": 21,300 in Quechua vs 513,640 in English. Relative share tells the
# opposite story.
print("\nshare of 'a':", {lang: round(letters[lang]["a"], 3) for lang in tables})

###############################################################################
# Characters vs graphemes
# -----------------------
# In character mode "ch" and "ll" split into their letters, which is how the
# published table counts them. Grapheme mode keeps digraphs and aspirates
# whole.

text = (resources.files("quechuakb") / "fixtures" / "sample_quechua.txt").read_text("utf-8")
quechua = builtin_profile("quechua")
for mode in ("char", "grapheme"):
    unigrams, bigrams = analyze_text(text, quechua, mode)
    top = [g for g, _ in sorted_entries(unigrams) if not g.isspace()][:12]
    print(f"\n{mode:<8} {len(unigrams)} units; top: {' '.join(top)}")
    print(f"{'':<8} most common bigrams: "
          f"{sorted(bigrams.counts.items(), key=lambda kv: -kv[1])[:5]}")
