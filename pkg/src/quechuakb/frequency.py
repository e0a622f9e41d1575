"""Unigram and bigram frequency tables."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DataIOError, DomainError, ParseError, UnknownNameError, ValidationError
from .graphemes import normalize, tokenize

BUILTIN_TABLES = ("english", "spanish", "quechua")


def _check_counts(counts: Mapping, total: int):
    for key, n in counts.items():
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ValidationError(f"count for {key!r} must be a non-negative integer", field="counts")
    if sum(counts.values()) != total:
        raise ValidationError(
            f"total {total} does not match sum of counts {sum(counts.values())}", field="total"
        )


@dataclass(frozen=True)
class FrequencyTable:
    """Grapheme counts. Zero counts are never stored."""

    counts: Mapping[str, int] = field(default_factory=dict)
    total: int = 0

    def __post_init__(self):
        counts = {g: n for g, n in self.counts.items() if n != 0}
        _check_counts(counts, self.total)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "FrequencyTable":
        counts = dict(counts)
        return cls(counts, sum(counts.values()))

    def __getitem__(self, grapheme: str) -> int:
        return self.counts.get(grapheme, 0)

    def __len__(self):
        return len(self.counts)

    def __iter__(self):
        return (g for g, _ in sorted_entries(self))

    def without(self, graphemes: Iterable[str]) -> "FrequencyTable":
        drop = set(graphemes)
        return FrequencyTable.from_counts({g: n for g, n in self.counts.items() if g not in drop})

    def to_dict(self) -> dict:
        return {"total": self.total, "counts": dict(sorted_entries(self))}


@dataclass(frozen=True)
class BigramTable:
    """Directional counts of adjacent grapheme pairs."""

    counts: Mapping[tuple[str, str], int] = field(default_factory=dict)
    total: int = 0

    def __post_init__(self):
        counts = {tuple(p): n for p, n in self.counts.items() if n != 0}
        _check_counts(counts, self.total)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_counts(cls, counts: Mapping[tuple[str, str], int]) -> "BigramTable":
        counts = dict(counts)
        return cls(counts, sum(counts.values()))

    def __getitem__(self, pair: tuple[str, str]) -> int:
        return self.counts.get(tuple(pair), 0)

    def __len__(self):
        return len(self.counts)

    def to_dict(self) -> dict:
        # Pairs serialize as a nested map first -> second -> count.
        nested: dict[str, dict[str, int]] = {}
        for (a, b), n in sorted(self.counts.items()):
            nested.setdefault(a, {})[b] = n
        return {"total": self.total, "counts": nested}


def count_unigrams(tokens: Iterable[str]) -> FrequencyTable:
    return FrequencyTable.from_counts(Counter(tokens))


def count_bigrams(tokens: Iterable[str]) -> BigramTable:
    """Count word-internal adjacent pairs; any whitespace token breaks the window."""
    counts: Counter = Counter()
    prev = None
    for tok in tokens:
        if tok.isspace():
            prev = None
            continue
        if prev is not None:
            counts[prev, tok] += 1
        prev = tok
    return BigramTable.from_counts(counts)


def merge(tables: Iterable[FrequencyTable]) -> FrequencyTable:
    counts: Counter = Counter()
    for t in tables:
        counts.update(t.counts)
    return FrequencyTable.from_counts(counts)


def merge_bigrams(tables: Iterable[BigramTable]) -> BigramTable:
    counts: Counter = Counter()
    for t in tables:
        counts.update(t.counts)
    return BigramTable.from_counts(counts)


def relative(table: FrequencyTable) -> dict[str, float]:
    if table.total == 0:
        raise DomainError("relative frequencies of an empty table are undefined")
    return {g: n / table.total for g, n in table.counts.items()}


def sorted_entries(table: FrequencyTable) -> list[tuple[str, int]]:
    """Entries by descending count, ties by grapheme text ascending."""
    return sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))


# -- serialization -----------------------------------------------------------

def _load_json(source):
    if isinstance(source, dict):
        return source
    if isinstance(source, Path):
        try:
            source = source.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed frequency document: {exc}") from exc


def _counts_field(doc, what):
    if not isinstance(doc, dict) or "counts" not in doc or not isinstance(doc["counts"], dict):
        raise ParseError(f"{what} document needs a 'counts' object")
    total = doc.get("total")
    if total is not None and (not isinstance(total, int) or isinstance(total, bool)):
        raise ParseError("field 'total' must be an integer")
    return doc["counts"], total


def table_from_dict(source) -> FrequencyTable:
    counts, total = _counts_field(_load_json(source), "frequency table")
    if total is None:
        total = sum(v for v in counts.values() if isinstance(v, int))
    return FrequencyTable(dict(counts), total)


def bigrams_from_dict(source) -> BigramTable:
    nested, total = _counts_field(_load_json(source), "bigram table")
    counts = {}
    for a, row in nested.items():
        if not isinstance(row, dict):
            raise ParseError(f"bigram row for {a!r} must be an object")
        for b, n in row.items():
            counts[a, b] = n
    if total is None:
        total = sum(v for v in counts.values() if isinstance(v, int))
    return BigramTable(counts, total)


def dumps(table) -> str:
    """Deterministic JSON text for a unigram or bigram table."""
    return json.dumps(table.to_dict(), ensure_ascii=False, indent=2) + "\n"


def builtin_table(name: str) -> FrequencyTable:
    """Frequency column for one language as published (Table I fixtures)."""
    if name not in BUILTIN_TABLES:
        raise UnknownNameError(f"unknown frequency table {name!r}; expected one of {BUILTIN_TABLES}")
    text = resources.files(__package__).joinpath(f"fixtures/table1_{name}.json").read_text("utf-8")
    return table_from_dict(text)


def builtin_bigrams(name: str) -> BigramTable:
    """Bigram counts of the shipped sample corpus for a language."""
    path = resources.files(__package__).joinpath(f"fixtures/sample_{name}_bigrams.json")
    if not path.is_file():
        raise UnknownNameError(f"no shipped bigram table for {name!r}")
    return bigrams_from_dict(path.read_text("utf-8"))


def resolve_table(spec: str) -> FrequencyTable:
    if spec.startswith("builtin:"):
        return builtin_table(spec.split(":", 1)[1])
    return table_from_dict(Path(spec))


def resolve_bigrams(spec: str | None) -> BigramTable:
    if spec is None:
        return BigramTable()
    if spec.startswith("builtin:"):
        return builtin_bigrams(spec.split(":", 1)[1])
    return bigrams_from_dict(Path(spec))


def split_at_whitespace(text: str, shard_chars: int) -> list[str]:
    """Cut ``text`` into pieces of roughly ``shard_chars``, only after whitespace.

    Cutting at whitespace keeps multigraphs and word-internal bigrams intact.
    """
    shards, start = [], 0
    while start < len(text):
        end = min(start + shard_chars, len(text))
        while end < len(text) and not text[end - 1].isspace():
            end += 1
        shards.append(text[start:end])
        start = end
    return shards


def analyze_text(text, profile, mode="char", shard_chars: int | None = None):
    """Normalize, tokenize and count ``text``; returns (unigrams, bigrams)."""
    text = normalize(text)
    shards = split_at_whitespace(text, shard_chars) if shard_chars else [text]
    unigrams, bigrams = [], []
    for shard in shards:
        tokens = tokenize(shard, profile, mode)
        unigrams.append(count_unigrams(tokens))
        bigrams.append(count_bigrams(tokens))
    return merge(unigrams), merge_bigrams(bigrams)
