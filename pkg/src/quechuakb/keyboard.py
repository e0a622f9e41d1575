"""Keyboard geometry, layouts and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping

from .errors import DataIOError, ParseError, UnknownNameError, ValidationError
from .graphemes import LanguageProfile

ROWS = ("top", "home", "bottom")
ROW_INDEX = {r: i for i, r in enumerate(ROWS)}
FINGERS = ("pinky", "ring", "middle", "index")
HANDS = ("left", "right")

_LEFT_FINGERS = {0: "pinky", 1: "ring", 2: "middle", 3: "index", 4: "index"}
_RIGHT_FINGERS = {5: "index", 6: "index", 7: "middle", 8: "ring", 9: "pinky", 10: "pinky", 11: "pinky"}
_RESTING_COLUMNS = frozenset({0, 1, 2, 3, 6, 7, 8, 9})


def hand_of(column: int) -> str:
    return "left" if column <= 4 else "right"


def finger_of(column: int) -> str:
    if column in _LEFT_FINGERS:
        return _LEFT_FINGERS[column]
    if column in _RIGHT_FINGERS:
        return _RIGHT_FINGERS[column]
    raise ValidationError(f"column {column} outside 0-11", field="column")


@dataclass(frozen=True)
class KeySlot:
    id: str
    row: str
    column: int
    finger: str
    hand: str
    is_home_position: bool = False

    def __post_init__(self):
        if self.row not in ROW_INDEX:
            raise ValidationError(f"slot {self.id}: unknown row {self.row!r}", field="row")
        if not 0 <= self.column <= 11:
            raise ValidationError(f"slot {self.id}: column {self.column} outside 0-11", field="column")
        if self.finger != finger_of(self.column) or self.hand != hand_of(self.column):
            raise ValidationError(
                f"slot {self.id}: finger/hand inconsistent with column {self.column}", field="finger"
            )
        if self.is_home_position and not (self.row == "home" and self.column in _RESTING_COLUMNS):
            raise ValidationError(f"slot {self.id}: not a resting key", field="is_home_position")

    @classmethod
    def at(cls, row: str, column: int) -> "KeySlot":
        """Slot with standard touch-typing attributes and the ``<row>-<column>`` id."""
        return cls(
            id=f"{row}-{column}",
            row=row,
            column=column,
            finger=finger_of(column),
            hand=hand_of(column),
            is_home_position=row == "home" and column in _RESTING_COLUMNS,
        )

    @property
    def row_index(self) -> int:
        return ROW_INDEX[self.row]


@dataclass(frozen=True)
class KeyboardGeometry:
    name: str
    slots: tuple[KeySlot, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if not self.slots:
            raise ValidationError("geometry needs at least one slot", field="slots")
        ids = [s.id for s in self.slots]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"geometry {self.name}: duplicate slot ids", field="slots")
        cells = [(s.row, s.column) for s in self.slots]
        if len(set(cells)) != len(cells):
            raise ValidationError(f"geometry {self.name}: duplicate (row, column)", field="slots")

    @property
    def by_id(self) -> dict[str, KeySlot]:
        return {s.id: s for s in self.slots}

    def __getitem__(self, slot_id: str) -> KeySlot:
        for s in self.slots:
            if s.id == slot_id:
                return s
        raise KeyError(slot_id)

    def __contains__(self, slot_id) -> bool:
        return any(s.id == slot_id for s in self.slots)

    def subset(self, slot_ids, name=None) -> "KeyboardGeometry":
        keep = set(slot_ids)
        return KeyboardGeometry(name or f"{self.name}-subset", tuple(s for s in self.slots if s.id in keep))


@dataclass(frozen=True)
class Layout:
    """Injective assignment grapheme -> slot id, with optional pinned slots."""

    name: str
    geometry: str
    assignment: Mapping[str, str] = field(default_factory=dict)
    pinned: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))
        object.__setattr__(self, "pinned", frozenset(self.pinned))
        seen: dict[str, str] = {}
        for g, sid in self.assignment.items():
            if not g:
                raise ValidationError("empty grapheme in layout", field="keys")
            if sid in seen:
                raise ValidationError(
                    f"slot {sid} assigned twice ({seen[sid]!r} and {g!r})", field=sid
                )
            seen[sid] = g

    def slot_of(self, grapheme: str) -> str | None:
        return self.assignment.get(grapheme)

    @property
    def occupants(self) -> dict[str, str]:
        return {sid: g for g, sid in self.assignment.items()}

    def check_geometry(self, geometry: KeyboardGeometry):
        if geometry.name != self.geometry:
            raise ValidationError(
                f"layout {self.name} targets geometry {self.geometry!r}, got {geometry.name!r}",
                field="geometry",
            )
        for g, sid in self.assignment.items():
            if sid not in geometry:
                raise ValidationError(f"slot {sid} (grapheme {g!r}) not in geometry {geometry.name}", field=sid)
        for sid in self.pinned:
            if sid not in geometry:
                raise ValidationError(f"pinned slot {sid} not in geometry {geometry.name}", field=sid)

    def moves_from(self, base: "Layout") -> int:
        """Number of graphemes whose slot differs from ``base``."""
        keys = set(self.assignment) | set(base.assignment)
        return sum(1 for g in keys if self.assignment.get(g) != base.assignment.get(g))


# -- built-ins ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _ansi32() -> KeyboardGeometry:
    slots = [KeySlot.at("top", c) for c in range(10)]
    slots += [KeySlot.at("home", c) for c in range(12)]
    slots += [KeySlot.at("bottom", c) for c in range(10)]
    return KeyboardGeometry("ansi32", tuple(slots))


_GEOMETRIES = {"ansi32": _ansi32}


def builtin_geometry(name: str) -> KeyboardGeometry:
    try:
        return _GEOMETRIES[name]()
    except KeyError:
        raise UnknownNameError(f"unknown geometry {name!r}; expected one of {sorted(_GEOMETRIES)}") from None


def _rows_layout(name, top, home, bottom, extra=()) -> Layout:
    assignment = {}
    for row, keys in (("top", top), ("home", home), ("bottom", bottom)):
        for col, g in enumerate(keys):
            if g != " ":
                assignment[g] = f"{row}-{col}"
    for g, sid in extra:
        assignment[g] = sid
    return Layout(name, "ansi32", assignment)


_LAYOUTS = {
    "qwerty-latam": lambda: _rows_layout(
        "qwerty-latam", "qwertyuiop", "asdfghjkl", "zxcvbnm",
        extra=(("ñ", "home-10"), ("'", "home-11")),
    ),
    "dvorak-en": lambda: _rows_layout(
        "dvorak-en", "',.pyfgcrl", "aoeuidhtns-", ";qjkxbmwvz",
    ),
}


def builtin_layout(name: str) -> Layout:
    try:
        return _LAYOUTS[name]()
    except KeyError:
        raise UnknownNameError(f"unknown layout {name!r}; expected one of {sorted(_LAYOUTS)}") from None


def geometry_for(layout: Layout, geometry: KeyboardGeometry | None = None) -> KeyboardGeometry:
    if geometry is None:
        geometry = builtin_geometry(layout.geometry)
    layout.check_geometry(geometry)
    return geometry


# -- serialization -----------------------------------------------------------

def layout_to_dict(layout: Layout, geometry: KeyboardGeometry | None = None) -> dict:
    occupants = layout.occupants
    if geometry is None and layout.geometry in _GEOMETRIES:
        geometry = builtin_geometry(layout.geometry)
    order = [s.id for s in geometry.slots] if geometry is not None else sorted(occupants)
    return {
        "name": layout.name,
        "geometry": layout.geometry,
        "pinned": [sid for sid in order if sid in layout.pinned],
        "keys": {sid: occupants[sid] for sid in order if sid in occupants},
    }


def serialize_layout(layout: Layout, geometry: KeyboardGeometry | None = None) -> str:
    return json.dumps(layout_to_dict(layout, geometry), ensure_ascii=False, indent=2) + "\n"


def _reject_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValidationError(f"slot {k} assigned twice ({out[k]!r} and {v!r})", field=k)
        out[k] = v
    return out


def parse_layout(document, geometry: KeyboardGeometry | None = None) -> Layout:
    """Parse a layout JSON document (text, dict or path) and validate it.

    The geometry is looked up by name unless given explicitly.
    """
    if isinstance(document, Path):
        try:
            document = document.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"cannot read {document}: {exc.strerror}") from exc
    if isinstance(document, str):
        try:
            doc = json.loads(document, object_pairs_hook=_reject_duplicate_keys)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed layout document: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise ParseError("layout document must be a JSON object")
    for key in ("name", "geometry", "keys"):
        if key not in doc:
            raise ParseError(f"layout is missing field {key!r}")
    keys, pinned = doc["keys"], doc.get("pinned", [])
    if not isinstance(keys, dict) or not isinstance(pinned, list):
        raise ParseError("'keys' must be an object and 'pinned' an array")
    assignment: dict[str, str] = {}
    for sid, g in keys.items():
        if not isinstance(g, str) or not g:
            raise ValidationError(f"slot {sid}: grapheme must be a non-empty string", field=sid)
        if g in assignment:
            raise ValidationError(f"grapheme {g!r} assigned to both {assignment[g]} and {sid}", field=g)
        assignment[g] = sid
    layout = Layout(doc["name"], doc["geometry"], assignment, frozenset(pinned))
    geometry_for(layout, geometry)
    return layout


def resolve_layout(spec: str) -> Layout:
    if spec.startswith("builtin:"):
        return builtin_layout(spec.split(":", 1)[1])
    return parse_layout(Path(spec))


def validate_layout(layout: Layout, profile: LanguageProfile, mode: str = "char") -> list[str]:
    """Coverage issues: one entry per profile unit that has no slot.

    In char mode the units are the single characters spelling the alphabet;
    in grapheme mode they are the alphabet entries themselves.
    """
    units = sorted(profile.units) if mode == "char" else list(profile.alphabet)
    return [f"{u} unassigned" for u in units if u not in layout.assignment]
