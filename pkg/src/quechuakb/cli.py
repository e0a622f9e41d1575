"""Command-line entry point.

Exit codes: 0 success, 2 parse, 3 validation, 4 capacity, 5 I/O, 6 arithmetic
domain (empty table, zero baseline).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .effort import EffortParams, LayoutMetrics, compare, evaluate, format_comparison, format_metrics
from .errors import DataIOError, EncodingError, KeyboardError, ParseError
from .frequency import analyze_text, dumps, resolve_bigrams, resolve_table, sorted_entries
from .graphemes import resolve_profile
from .keyboard import builtin_geometry, builtin_layout, resolve_layout, serialize_layout
from .optimize import OptimizeConfig, greedy_seed, optimize_free, optimize_qwerty_delta
from .report import EXPORT_FORMATS, STYLES, HeatmapSpec, export_layout, render

TOP_N = 20


def _read_corpus(path: Path) -> str:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: invalid UTF-8 at byte offset {exc.start}", exc.start) from exc


def _check_exists(*paths):
    for p in paths:
        if p is None or str(p).startswith("builtin:"):
            continue
        if not Path(p).is_file():
            raise DataIOError(f"no such file: {p}")


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc.strerror}") from exc


def _json(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _params(path):
    return EffortParams() if path is None else EffortParams.load(path)


def cmd_analyze(args, out=sys.stdout):
    _check_exists(args.corpus)
    profile = resolve_profile(args.profile)
    text = _read_corpus(Path(args.corpus))
    unigrams, bigrams = analyze_text(text, profile, args.mode, shard_chars=args.shard_chars)
    outdir = Path(args.out)
    _write(outdir / "unigrams.json", dumps(unigrams))
    _write(outdir / "bigrams.json", dumps(bigrams))
    print(f"{unigrams.total} tokens, {len(unigrams)} distinct, {bigrams.total} bigrams", file=out)
    for g, n in sorted_entries(unigrams)[:TOP_N]:
        print(f"{g!r:>8} {n:>10}", file=out)
    return 0


def cmd_optimize(args, out=sys.stdout):
    _check_exists(args.freq, args.bigrams, args.config, args.params)
    freq = resolve_table(args.freq)
    bigrams = resolve_bigrams(args.bigrams)
    params = _params(args.params)
    config = OptimizeConfig.load(args.config) if args.config else OptimizeConfig()
    overrides = {}
    if args.max_moves is not None:
        overrides["max_moves"] = args.max_moves
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    if args.iterations is not None:
        overrides["iterations"] = args.iterations
    if overrides:
        config = OptimizeConfig(**{**config.to_dict(), **overrides})
    geometry = builtin_geometry("ansi32")
    if args.mode == "qwerty-delta":
        base = builtin_layout("qwerty-latam")
        result = optimize_qwerty_delta(base, freq, bigrams, params, config, geometry,
                                       name="qwerty-delta")
        baseline = result.seed_metrics
    else:
        result = optimize_free(freq, bigrams, params, config, geometry, name="free")
        baseline = result.seed_metrics
    report = compare(baseline, result.metrics)
    outdir = Path(args.out)
    _write(outdir / "layout.json", serialize_layout(result.layout, geometry))
    _write(outdir / "metrics.json", _json(result.metrics.to_dict()))
    _write(outdir / "report.json", _json({**report.to_dict(), "moves_from_base": result.moves_from_base}))
    table = format_comparison(report)
    _write(outdir / "report.txt", table + "\n")
    if result.trace:
        _write(outdir / "trace.csv", result.trace_csv())
    print(table, file=out)
    print(f"moves from base: {result.moves_from_base}", file=out)
    return 0


def cmd_evaluate(args, out=sys.stdout):
    _check_exists(args.layout, args.freq, args.bigrams, args.params)
    layout = resolve_layout(args.layout)
    freq = resolve_table(args.freq)
    metrics = evaluate(layout, freq, resolve_bigrams(args.bigrams), _params(args.params))
    print(format_metrics(metrics), file=out)
    if metrics.unassigned_mass > 0:
        missing = sorted(g for g in freq.counts if not g.isspace() and g not in layout.assignment)
        print(f"warning: {100 * metrics.unassigned_mass:.1f}% of typed mass has no key: "
              f"{' '.join(missing)}", file=out)
    doc = _json(metrics.to_dict())
    if args.out:
        _write(Path(args.out), doc)
    else:
        print(doc, end="", file=out)
    return 0


def _load_metrics(path) -> LayoutMetrics:
    _check_exists(path)
    try:
        return LayoutMetrics.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed metrics document {path}: {exc}") from exc


def cmd_compare(args, out=sys.stdout):
    report = compare(_load_metrics(args.a), _load_metrics(args.b))
    print(format_comparison(report), file=out)
    if args.out:
        _write(Path(args.out), _json(report.to_dict()))
    return 0


def cmd_export(args, out=sys.stdout):
    _check_exists(args.layout)
    text = export_layout(resolve_layout(args.layout), args.format)
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="", file=out)
    return 0


def cmd_heatmap(args, out=sys.stdout):
    _check_exists(args.layout, args.freq)
    spec = HeatmapSpec.from_table(resolve_layout(args.layout), resolve_table(args.freq), args.style)
    text = render(spec)
    if args.out:
        _write(Path(args.out), text)
    else:
        print(text, end="", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quechuakb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="count characters/graphemes and bigrams in a corpus")
    p.add_argument("corpus")
    p.add_argument("--profile", default="quechua", help="built-in profile name or JSON path")
    p.add_argument("--mode", choices=("char", "grapheme"), default="char")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--shard-chars", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("optimize", help="search for a lower-effort layout")
    p.add_argument("--freq", required=True, help="table path or builtin:<language>")
    p.add_argument("--bigrams", default=None, help="bigram table path or builtin:<language>")
    p.add_argument("--mode", choices=("free", "qwerty-delta"), default="free")
    p.add_argument("--max-moves", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("evaluate", help="score a layout")
    p.add_argument("--layout", required=True, help="layout path or builtin:<name>")
    p.add_argument("--freq", required=True)
    p.add_argument("--bigrams", default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--out", default=None, help="write metrics JSON here instead of stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="compare two metrics documents")
    p.add_argument("a", help="baseline metrics")
    p.add_argument("b", help="candidate metrics")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export", help="write a layout in another format")
    p.add_argument("--layout", required=True)
    p.add_argument("--format", choices=EXPORT_FORMATS, default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("heatmap", help="render per-key usage")
    p.add_argument("--layout", required=True)
    p.add_argument("--freq", required=True)
    p.add_argument("--style", choices=STYLES, default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_heatmap)
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out=out or sys.stdout)
    except KeyboardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
