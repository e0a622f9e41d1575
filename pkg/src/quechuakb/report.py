"""Heatmap rendering and layout export."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import UnknownNameError, ValidationError
from .frequency import FrequencyTable, relative
from .keyboard import ROWS, KeyboardGeometry, Layout, geometry_for, serialize_layout

STYLES = ("text", "svg")
EXPORT_FORMATS = ("json", "xkb", "text")

KEY = 56
GAP = 6
ROW_STAGGER = {"top": 0, "home": 18, "bottom": 40}


@dataclass(frozen=True)
class HeatmapSpec:
    layout: Layout
    weights: dict
    style: str = "text"

    def __post_init__(self):
        if self.style not in STYLES:
            raise UnknownNameError(f"unknown heatmap style {self.style!r}; expected one of {STYLES}")
        for g, w in self.weights.items():
            if not 0.0 <= w <= 1.0:
                raise ValidationError(f"weight for {g!r} outside [0, 1]", field="weights")

    @classmethod
    def from_table(cls, layout: Layout, freq: FrequencyTable, style: str = "text") -> "HeatmapSpec":
        typed = freq.without(g for g in freq.counts if g.isspace())
        weights = relative(typed) if typed.total else {}
        return cls(layout, weights, style)


def _grid(geometry: KeyboardGeometry):
    return {r: sorted((s for s in geometry.slots if s.row == r), key=lambda s: s.column) for r in ROWS}


def render(spec: HeatmapSpec, geometry: KeyboardGeometry | None = None) -> str:
    geometry = geometry_for(spec.layout, geometry)
    if spec.style == "text":
        return render_text(spec, geometry)
    return render_svg(spec, geometry)


def render_text(spec: HeatmapSpec, geometry: KeyboardGeometry) -> str:
    occupants = spec.layout.occupants
    lines = []
    for row, slots in _grid(geometry).items():
        cells = []
        for s in slots:
            g = occupants.get(s.id)
            if g is None:
                cells.append("[        ]")
            else:
                cells.append(f"[{g:^3}{100 * spec.weights.get(g, 0.0):4.1f}%]")
        indent = " " * (ROW_STAGGER[row] // 9)
        lines.append(f"{row:<7}{indent}{' '.join(cells)}")
    return "\n".join(lines) + "\n"


def render_svg(spec: HeatmapSpec, geometry: KeyboardGeometry) -> str:
    """Self-contained SVG: one rect per slot, opacity proportional to weight."""
    occupants = spec.layout.occupants
    grid = _grid(geometry)
    peak = max((spec.weights.get(g, 0.0) for g in occupants.values()), default=0.0)
    n_cols = max((s.column for s in geometry.slots), default=0) + 1
    width = max(ROW_STAGGER.values()) + n_cols * (KEY + GAP) + GAP
    height = len(ROWS) * (KEY + GAP) + GAP
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" style="fill:#ffffff"/>',
    ]
    for r, row in enumerate(ROWS):
        for s in grid[row]:
            x = GAP + ROW_STAGGER[row] + s.column * (KEY + GAP)
            y = GAP + r * (KEY + GAP)
            g = occupants.get(s.id)
            w = spec.weights.get(g, 0.0) if g is not None else 0.0
            opacity = w / peak if peak > 0 else 0.0
            out.append(
                f'<rect id={quoteattr(s.id)} x="{x}" y="{y}" width="{KEY}" height="{KEY}" rx="6" '
                f'style="fill:#c0392b;fill-opacity:{opacity:.4f};stroke:#444444;stroke-width:1"/>'
            )
            if g is not None:
                cx, cy = x + KEY // 2, y + KEY // 2
                out.append(
                    f'<text x="{cx}" y="{cy}" text-anchor="middle" dominant-baseline="middle" '
                    f'style="font-family:monospace;font-size:20px;fill:#000000">{escape(g)}</text>'
                )
                out.append(
                    f'<text x="{cx}" y="{y + KEY - 6}" text-anchor="middle" '
                    f'style="font-family:monospace;font-size:10px;fill:#000000">{100 * w:.1f}%</text>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# Physical key names for ansi32 slots in XKB symbol files.
def _xkb_keycode(row: str, column: int) -> str:
    if row == "home" and column == 11:
        return "BKSL"
    prefix = {"top": "AD", "home": "AC", "bottom": "AB"}[row]
    return f"{prefix}{column + 1:02d}"


def _xkb_keysym(g: str) -> str:
    if len(g) != 1:
        raise ValidationError(f"multigraph {g!r} cannot be bound to a single XKB key", field=g)
    if g.isascii() and g.isalpha():
        return g
    return f"U{ord(g):04X}"


def export_xkb(layout: Layout, geometry: KeyboardGeometry | None = None) -> str:
    geometry = geometry_for(layout, geometry)
    occupants = layout.occupants
    lines = [
        "default partial alphanumeric_keys",
        f'xkb_symbols "{layout.name}" {{',
        f'    name[Group1] = "{layout.name}";',
    ]
    for s in geometry.slots:
        g = occupants.get(s.id)
        if g is None:
            continue
        shifted = g.upper() if len(g.upper()) == 1 else g
        lines.append(
            f"    key <{_xkb_keycode(s.row, s.column)}> {{ [ {_xkb_keysym(g)}, {_xkb_keysym(shifted)} ] }};"
        )
    lines.append("};")
    return "\n".join(lines) + "\n"


def export_layout(layout: Layout, fmt: str = "json", geometry: KeyboardGeometry | None = None) -> str:
    if fmt == "json":
        return serialize_layout(layout, geometry)
    if fmt == "xkb":
        return export_xkb(layout, geometry)
    if fmt == "text":
        return render_text(HeatmapSpec(layout, {}, "text"), geometry_for(layout, geometry))
    raise UnknownNameError(f"unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")
