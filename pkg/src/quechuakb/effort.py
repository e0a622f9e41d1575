"""Typing-effort cost model and layout metrics."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataIOError, DomainError, ParseError
from .frequency import BigramTable, FrequencyTable
from .keyboard import FINGERS, ROWS, KeyboardGeometry, KeySlot, Layout, geometry_for


def _default_rows():
    return {"home": 1.0, "top": 1.8, "bottom": 2.2}


def _default_fingers():
    return {"index": 1.0, "middle": 1.1, "ring": 1.3, "pinky": 1.6}


@dataclass(frozen=True)
class EffortParams:
    row_weight: dict = field(default_factory=_default_rows)
    finger_weight: dict = field(default_factory=_default_fingers)
    off_home_bonus: float = 0.3
    bigram_lambda: float = 0.5
    same_finger_penalty: float = 2.0
    row_jump_penalty: float = 0.5

    def __post_init__(self):
        if set(self.row_weight) != set(ROWS):
            raise ConfigError(f"row_weight needs exactly {ROWS}", field="row_weight")
        if set(self.finger_weight) != set(FINGERS):
            raise ConfigError(f"finger_weight needs exactly {FINGERS}", field="finger_weight")
        for name, table in (("row_weight", self.row_weight), ("finger_weight", self.finger_weight)):
            for k, v in table.items():
                if not v > 0:
                    raise ConfigError(f"{name}[{k}] must be positive", field=name)
        for name in ("off_home_bonus", "same_finger_penalty", "row_jump_penalty"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive", field=name)
        if not self.bigram_lambda >= 0:
            raise ConfigError("bigram_lambda must be non-negative", field="bigram_lambda")
        home = self.row_weight["home"]
        if home > self.row_weight["top"] or home > self.row_weight["bottom"]:
            raise ConfigError("home row weight must not exceed top/bottom weights", field="row_weight")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc) -> "EffortParams":
        if not isinstance(doc, dict):
            raise ParseError("effort params document must be a JSON object")
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown effort params: {sorted(unknown)}", field=sorted(unknown)[0])
        doc = dict(doc)
        # Partial weight maps override the defaults key by key.
        if "row_weight" in doc:
            doc["row_weight"] = {**_default_rows(), **doc["row_weight"]}
        if "finger_weight" in doc:
            doc["finger_weight"] = {**_default_fingers(), **doc["finger_weight"]}
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "EffortParams":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"cannot read {path}: {exc.strerror}") from exc
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed effort params {path}: {exc}") from exc


def key_cost(slot: KeySlot, params: EffortParams = EffortParams()) -> float:
    cost = params.row_weight[slot.row] * params.finger_weight[slot.finger]
    if slot.row == "home" and not slot.is_home_position:
        cost += params.off_home_bonus
    return cost


def pair_penalty(a: KeySlot, b: KeySlot, params: EffortParams = EffortParams()) -> float:
    if a.hand != b.hand:
        return 0.0
    if a.finger == b.finger:
        return params.same_finger_penalty
    return params.row_jump_penalty * abs(a.row_index - b.row_index)


def cost_matrices(geometry: KeyboardGeometry, params: EffortParams):
    """Per-slot costs and the slot x slot pair-penalty matrix, in geometry order."""
    slots = geometry.slots
    costs = np.array([key_cost(s, params) for s in slots], dtype=np.float64)
    penalties = np.array([[pair_penalty(a, b, params) for b in slots] for a in slots], dtype=np.float64)
    return costs, penalties


def inputs_digest(freq: FrequencyTable, bigrams: BigramTable, params: EffortParams) -> str:
    doc = {
        "freq": sorted(freq.counts.items()),
        "bigrams": sorted([a, b, n] for (a, b), n in bigrams.counts.items()),
        "params": params.to_dict(),
    }
    blob = json.dumps(doc, ensure_ascii=False, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class LayoutMetrics:
    total_effort: float
    row_usage: dict
    same_finger_fraction: float
    hand_alternation_fraction: float
    unassigned_mass: float
    layout: str = ""
    inputs_digest: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc) -> "LayoutMetrics":
        if not isinstance(doc, dict):
            raise ParseError("metrics document must be a JSON object")
        try:
            return cls(
                total_effort=float(doc["total_effort"]),
                row_usage={r: float(doc["row_usage"].get(r, 0.0)) for r in ROWS},
                same_finger_fraction=float(doc.get("same_finger_fraction", 0.0)),
                hand_alternation_fraction=float(doc.get("hand_alternation_fraction", 0.0)),
                unassigned_mass=float(doc.get("unassigned_mass", 0.0)),
                layout=str(doc.get("layout", "")),
                inputs_digest=str(doc.get("inputs_digest", "")),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"metrics document is missing or has bad field: {exc}") from exc


def evaluate(
    layout: Layout,
    freq: FrequencyTable,
    bigrams: BigramTable = BigramTable(),
    params: EffortParams = EffortParams(),
    geometry: KeyboardGeometry | None = None,
) -> LayoutMetrics:
    """Score ``layout`` against unigram and bigram counts.

    Whitespace graphemes never carry effort and are dropped from every
    fraction; unassigned graphemes only feed ``unassigned_mass``.
    """
    geometry = geometry_for(layout, geometry)
    slots = geometry.by_id
    placed = {g: slots[sid] for g, sid in layout.assignment.items()}

    effort = 0.0
    row_mass = dict.fromkeys(ROWS, 0)
    assigned = unassigned = 0
    for g, n in freq.counts.items():
        if g.isspace():
            continue
        slot = placed.get(g)
        if slot is None:
            unassigned += n
            continue
        assigned += n
        row_mass[slot.row] += n
        effort += n * key_cost(slot, params)

    pair_effort = 0.0
    pair_mass = same_finger = alternating = 0
    for (a, b), n in bigrams.counts.items():
        sa, sb = placed.get(a), placed.get(b)
        if sa is None or sb is None:
            continue
        pair_mass += n
        if sa.hand != sb.hand:
            alternating += n
        elif sa.finger == sb.finger:
            same_finger += n
        pair_effort += n * pair_penalty(sa, sb, params)
    effort += params.bigram_lambda * pair_effort

    typed = assigned + unassigned
    return LayoutMetrics(
        total_effort=effort,
        row_usage={r: (row_mass[r] / assigned if assigned else 0.0) for r in ROWS},
        same_finger_fraction=same_finger / pair_mass if pair_mass else 0.0,
        hand_alternation_fraction=alternating / pair_mass if pair_mass else 0.0,
        unassigned_mass=unassigned / typed if typed else 0.0,
        layout=layout.name,
        inputs_digest=inputs_digest(freq, bigrams, params),
    )


def percent_improvement(baseline: float, candidate: float, higher_is_better: bool = True) -> float:
    """Relative change of ``candidate`` over ``baseline`` in percent, signed so gains are positive."""
    if baseline == 0:
        raise DomainError("percent improvement over a zero baseline is undefined")
    change = 100.0 * (candidate - baseline) / baseline
    return change if higher_is_better else -change


@dataclass(frozen=True)
class ComparisonReport:
    baseline: LayoutMetrics
    candidate: LayoutMetrics
    effort_reduction_percent: float
    row_usage_delta: dict
    same_finger_delta: float
    hand_alternation_delta: float

    @property
    def effort_change_percent(self) -> float:
        return 0.0 - self.effort_reduction_percent

    @property
    def same_inputs(self) -> bool:
        return self.baseline.inputs_digest == self.candidate.inputs_digest

    def to_dict(self) -> dict:
        return {
            "effort": {
                "baseline": self.baseline.total_effort,
                "candidate": self.candidate.total_effort,
                "reduction_percent": self.effort_reduction_percent,
            },
            "row_usage": {
                "baseline": self.baseline.row_usage,
                "candidate": self.candidate.row_usage,
            },
            "deltas": {
                "row_usage_points": self.row_usage_delta,
                "same_finger_points": self.same_finger_delta,
                "hand_alternation_points": self.hand_alternation_delta,
            },
            "inputs": {
                "baseline": self.baseline.inputs_digest,
                "candidate": self.candidate.inputs_digest,
                "same": self.same_inputs,
            },
        }


def compare(baseline: LayoutMetrics, candidate: LayoutMetrics) -> ComparisonReport:
    """Effort reduction (percent) and fraction deltas in percentage points."""
    if baseline.total_effort == 0:
        raise DomainError("baseline effort is zero; reduction percent undefined")
    reduction = 100.0 * (baseline.total_effort - candidate.total_effort) / baseline.total_effort
    return ComparisonReport(
        baseline=baseline,
        candidate=candidate,
        effort_reduction_percent=reduction,
        row_usage_delta={r: 100.0 * (candidate.row_usage[r] - baseline.row_usage[r]) for r in ROWS},
        same_finger_delta=100.0 * (candidate.same_finger_fraction - baseline.same_finger_fraction),
        hand_alternation_delta=100.0 * (
            candidate.hand_alternation_fraction - baseline.hand_alternation_fraction
        ),
    )


def format_metrics(m: LayoutMetrics) -> str:
    lines = [
        f"layout              {m.layout}",
        f"total effort        {m.total_effort:.1f}",
    ]
    lines += [f"{r + ' row':<20}{100 * m.row_usage[r]:.1f}%" for r in ROWS]
    lines += [
        f"same finger         {100 * m.same_finger_fraction:.1f}%",
        f"hand alternation    {100 * m.hand_alternation_fraction:.1f}%",
        f"unassigned mass     {100 * m.unassigned_mass:.1f}%",
    ]
    return "\n".join(lines)


def format_comparison(report: ComparisonReport) -> str:
    b, c = report.baseline, report.candidate
    width = max(len(b.layout or "baseline"), len(c.layout or "candidate"), 9) + 2
    head = f"{'':<18}{(b.layout or 'baseline'):>{width}}{(c.layout or 'candidate'):>{width}}{'change':>10}"
    lines = [
        head,
        f"{'effort':<18}{b.total_effort:>{width}.1f}{c.total_effort:>{width}.1f}"
        f"{report.effort_change_percent:>+9.1f}%",
    ]
    for r in ROWS:
        lines.append(
            f"{r + ' row':<18}{100 * b.row_usage[r]:>{width - 1}.1f}%{100 * c.row_usage[r]:>{width - 1}.1f}%"
            f"{report.row_usage_delta[r]:>+9.1f}pt"
        )
    lines.append(
        f"{'same finger':<18}{100 * b.same_finger_fraction:>{width - 1}.1f}%"
        f"{100 * c.same_finger_fraction:>{width - 1}.1f}%{report.same_finger_delta:>+9.1f}pt"
    )
    lines.append(
        f"{'hand alternation':<18}{100 * b.hand_alternation_fraction:>{width - 1}.1f}%"
        f"{100 * c.hand_alternation_fraction:>{width - 1}.1f}%{report.hand_alternation_delta:>+9.1f}pt"
    )
    if not report.same_inputs:
        lines.append("warning: metrics were computed from different inputs")
    return "\n".join(lines)
