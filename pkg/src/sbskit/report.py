"""Comparison tables, facet heatmaps and deterministic export of run results."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

from . import __version__
from .corpus import Facet, FacetKey
from .errors import ConstructSetMismatch, IoError
from .sbs import COLUMNS as SCORE_COLUMNS
from .sbs import SbsScore, rank
from .topics import TopicPartition, partition_to_dict, to_dot

FORMATS = ("csv", "json", "svg", "dot")
PCT_DIFF_FORMULA = "|a-b| / ((|a|+|b|)/2) * 100"


@dataclass(frozen=True)
class ComparisonRow:
    construct: str
    sbs_a: float
    sbs_b: float
    abs_pct_diff: float


@dataclass(frozen=True)
class HeatmapGrid:
    rows: tuple[str, ...]
    cols: tuple[FacetKey, ...]
    cells: tuple[tuple[float, ...], ...]
    scaled: tuple[tuple[float, ...], ...]

    def cell(self, row: str, col: FacetKey) -> float:
        return self.cells[self.rows.index(row)][self.cols.index(col)]


def abs_pct_diff(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / ((abs(a) + abs(b)) / 2) * 100


def _by_target(scores: Iterable[SbsScore]) -> dict[str, float]:
    return {s.target: s.sbs for s in scores}


def compare(scores_a: Iterable[SbsScore], scores_b: Iterable[SbsScore]) -> list[ComparisonRow]:
    """Row per construct, largest SBS first, with symmetric percent differences."""
    a, b = _by_target(scores_a), _by_target(scores_b)
    if set(a) != set(b):
        diff = sorted(set(a) ^ set(b))
        raise ConstructSetMismatch(f"score sets differ on {diff}")
    rows = [ComparisonRow(c, a[c], b[c], abs_pct_diff(a[c], b[c])) for c in a]
    return sorted(rows, key=lambda r: (-max(r.sbs_a, r.sbs_b), r.construct))


def _minmax(values: Sequence[float]) -> list[float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.5] * len(values)
    return [(v - lo) / (hi - lo) for v in values]


def heatmap(score_tables: Mapping[FacetKey, Iterable[SbsScore]]) -> HeatmapGrid:
    """Constructs as rows, facet values as columns, min-max scaled over the whole grid."""
    if not score_tables:
        raise ConstructSetMismatch("no score tables given")
    cols = tuple(score_tables)
    tables = [[s for s in score_tables[k]] for k in cols]
    rows = tuple(s.target for s in tables[0])
    for key, table in zip(cols, tables):
        if {s.target for s in table} != set(rows):
            raise ConstructSetMismatch(f"constructs for {key} differ from {cols[0]}")
    lookup = [_by_target(t) for t in tables]
    cells = tuple(tuple(lk[r] for lk in lookup) for r in rows)
    return _grid(rows, cols, cells)


def _grid(rows, cols, cells) -> HeatmapGrid:
    flat = [v for row in cells for v in row]
    scaled_flat = _minmax(flat) if flat else []
    width = len(cols)
    scaled = tuple(tuple(scaled_flat[i * width : (i + 1) * width]) for i in range(len(rows)))
    return HeatmapGrid(tuple(rows), tuple(cols), tuple(tuple(r) for r in cells), scaled)


# serialization


def _fixed(x: float) -> str:
    return f"{x:.6f}"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def scores_csv(scores: Iterable[SbsScore]) -> str:
    return _csv_text(SCORE_COLUMNS, ([s.target] + [_fixed(v) for v in s.as_row()[1:]] for s in rank(scores)))


def comparison_csv(rows: Iterable[ComparisonRow], label_a: str = "sbs_a", label_b: str = "sbs_b") -> str:
    return _csv_text(
        ("construct", label_a, label_b, "abs_pct_diff"),
        ([r.construct, _fixed(r.sbs_a), _fixed(r.sbs_b), _fixed(r.abs_pct_diff)] for r in rows),
    )


def heatmap_csv(grid: HeatmapGrid) -> str:
    """Raw cell values written with ``repr`` so they read back bit-exactly."""
    return _csv_text(
        ["construct"] + [str(c) for c in grid.cols],
        ([r] + [repr(float(v)) for v in row] for r, row in zip(grid.rows, grid.cells)),
    )


def _parse_facet_key(text: str) -> FacetKey:
    facet, _, value = text.partition("=")
    f = Facet.parse(facet)
    return FacetKey(f, f.values(value))


def read_heatmap_csv(path) -> HeatmapGrid:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = tuple(_parse_facet_key(h) for h in header[1:])
        rows, cells = [], []
        for rec in reader:
            rows.append(rec[0])
            cells.append(tuple(float(v) for v in rec[1:]))
    return _grid(rows, cols, cells)


def _ramp(t: float) -> str:
    lo, hi = (0xF7, 0xFB, 0xFF), (0x08, 0x30, 0x6B)
    return "#" + "".join(f"{round(a + (b - a) * t):02x}" for a, b in zip(lo, hi))


def heatmap_svg(grid: HeatmapGrid, title: str = "") -> str:
    """SVG 1.1 grid of cells shaded by their scaled value."""
    cw, ch = 110, 22
    left, top = 230, 60 if title else 40
    width = left + cw * len(grid.cols) + 90
    height = top + ch * len(grid.rows) + 20
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        "<defs>",
        '<linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0">',
        f'<stop offset="0" stop-color="{_ramp(0)}"/><stop offset="1" stop-color="{_ramp(1)}"/>',
        "</linearGradient>",
        "</defs>",
    ]
    if title:
        out.append(f'<text x="{left}" y="20" font-size="14">{escape(title)}</text>')
    for j, col in enumerate(grid.cols):
        x = left + j * cw + cw / 2
        out.append(f'<text x="{x:g}" y="{top - 8}" text-anchor="middle">{escape(col.label)}</text>')
    for i, row in enumerate(grid.rows):
        y = top + i * ch
        out.append(f'<text x="{left - 6}" y="{y + 15}" text-anchor="end">{escape(row)}</text>')
        for j in range(len(grid.cols)):
            t = grid.scaled[i][j]
            out.append(
                f'<rect x="{left + j * cw}" y="{y}" width="{cw}" height="{ch}" '
                f'fill="{_ramp(t)}" stroke="#ffffff"><title>{escape(row)} / {escape(grid.cols[j].label)}: '
                f"{grid.cells[i][j]:.4f}</title></rect>"
            )
    # legend bar drawn as a path so that rect elements correspond one-to-one with cells
    lx, ly, lh = left + cw * len(grid.cols) + 20, top, max(ch * len(grid.rows), ch)
    out.append(f'<path d="M{lx},{ly} h16 v{lh} h-16 Z" fill="url(#ramp)" stroke="#999999"/>')
    if grid.cells:
        flat = [v for r in grid.cells for v in r]
        out.append(f'<text x="{lx + 20}" y="{ly + 10}">{max(flat):.3f}</text>')
        out.append(f'<text x="{lx + 20}" y="{ly + lh}">{min(flat):.3f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def config_hash(config: Mapping) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


@dataclass
class RunResults:
    """Everything a run may export. Empty fields produce no files."""

    scores: list[SbsScore] = field(default_factory=list)
    comparison: list[ComparisonRow] = field(default_factory=list)
    comparison_labels: tuple[str, str] = ("sbs_a", "sbs_b")
    heatmaps: dict[str, HeatmapGrid] = field(default_factory=dict)
    network: object | None = None
    partition: TopicPartition | None = None
    config: dict = field(default_factory=dict)
    corpus_digest: str | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)
    # additional files written verbatim, name -> text
    attachments: dict[str, str] = field(default_factory=dict)


def _write(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def emit(results: RunResults, out_dir, formats: Iterable[str] = FORMATS) -> dict:
    """Write result files and ``manifest.json``; returns the manifest.

    File names are fixed, CSV/JSON bytes depend only on the inputs, and the
    manifest is written last via an atomic rename.
    """
    formats = {f.casefold() for f in formats}
    bad = formats - set(FORMATS)
    if bad:
        raise ValueError(f"unknown output formats {sorted(bad)}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {out}: {exc}") from exc

    files: dict[str, str] = {}

    def put(name: str, text: str):
        _write(out / name, text)
        files[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()

    if "csv" in formats and results.scores:
        put("sbs_scores.csv", scores_csv(results.scores))
    if "csv" in formats and results.comparison:
        put("construct_comparison.csv", comparison_csv(results.comparison, *results.comparison_labels))
    for facet, grid in sorted(results.heatmaps.items()):
        if "csv" in formats:
            put(f"heatmap_{facet}.csv", heatmap_csv(grid))
        if "svg" in formats:
            put(f"heatmap_{facet}.svg", heatmap_svg(grid, f"SBS by {facet}"))
    if results.partition is not None:
        if "json" in formats:
            put("topics.json", canonical_json(partition_to_dict(results.partition)))
        if "dot" in formats and results.network is not None:
            put("network.dot", to_dot(results.network, results.partition))
    for name, text in sorted(results.attachments.items()):
        if name == "manifest.json" or Path(name).name != name:
            raise ValueError(f"bad attachment name {name!r}")
        put(name, text)

    manifest = {
        "toolkit": "sbskit",
        "version": __version__,
        "config": results.config,
        "config_hash": config_hash(results.config),
        "corpus_digest": results.corpus_digest,
        "seed": results.seed,
        "percent_difference": PCT_DIFF_FORMULA,
        "heatmap_scaling": "global min-max per grid; constant grid -> 0.5",
        "files": dict(sorted(files.items())),
    }
    manifest.update(results.extra)
    tmp = out / "manifest.json.tmp"
    _write(tmp, canonical_json(manifest))
    os.replace(tmp, out / "manifest.json")
    return manifest
