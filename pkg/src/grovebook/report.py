"""Static reports from a bundle: delimited summaries plus rendered figures.

Figures go to PNG files next to the CSV output: the decade-coloured map
overview, the concentric year-ring timeline, and a span chart of the most
active curators.  The decade palette runs dark green (earliest) to deep red
(latest), with grey reserved for unknown dates.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap, to_hex
from matplotlib.patches import Circle, Patch

from . import chrono
from .archive import ArchiveIndex, map_layer
from .bundle import load_bundle

GREY_HEX = "#9e9e9e"


def decade_palette(steps: int = 15) -> list[str]:
    """Hex colours from dark green to deep red, one per decade bucket."""
    cmap = plt.get_cmap("RdYlGn_r")
    return [to_hex(cmap(i / (steps - 1))) for i in range(steps)]


def write_report(bundle_dir: str | Path, out_dir: str | Path,
                 top_curators: int = 10) -> list[Path]:
    """Render all report artifacts; returns the written paths."""
    index, _ = load_bundle(bundle_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    written = [
        _write_cells_csv(index, out / "cells.csv"),
        _write_curators_csv(index, out / "curators.csv"),
        _write_events_csv(index, out / "events.csv"),
        _write_rings_csv(index, out / "rings.csv"),
        _draw_map_overview(index, out / "map_overview.png"),
        _draw_rings(index, out / "rings.png"),
        _draw_curator_spans(index, out / "curator_spans.png", top_curators),
    ]
    return written


def _bucket_text(bucket: int | None) -> str:
    return chrono.UNKNOWN_TOKEN if bucket is None else str(bucket)


def _write_cells_csv(index: ArchiveIndex, path: Path) -> Path:
    layer = map_layer(index)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["col", "row", "count", "color_index"])
        for cell in layer:
            writer.writerow([cell.cell.col, cell.cell.row, cell.count,
                             _bucket_text(cell.color_index)])
    return path


def _write_curators_csv(index: ArchiveIndex, path: Path) -> Path:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", "canonical", "variants", "first_year", "last_year",
                         "events_total", "distinct_cells"])
        for ident, fp in zip(index.curators, index.footprints):
            writer.writerow([
                ident.id, ident.canonical,
                " | ".join(v.raw for v in ident.variants),
                ident.first_year if ident.first_year is not None else "",
                ident.last_year if ident.last_year is not None else "",
                fp.events_total, len(fp.cells),
            ])
    return path


def _write_events_csv(index: ArchiveIndex, path: Path) -> Path:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", "accession_id", "date", "semantics", "curator",
                         "col", "row", "line", "note"])
        for e in index.events:
            writer.writerow([
                e.event_id, e.accession_id, chrono.format_date(e.event_date.date),
                e.event_date.semantics.value, e.curator or "",
                e.cell.col if e.cell else "", e.cell.row if e.cell else "",
                e.provenance, e.note.source,
            ])
    return path


def _write_rings_csv(index: ArchiveIndex, path: Path) -> Path:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["year", "marks"])
        for ring in index.rings.rings:
            writer.writerow([ring.year, len(ring.marks)])
    return path


def _legend_handles(palette: list[str], scale_start: int) -> list[Patch]:
    handles = [Patch(color=color, label=f"{scale_start + 10 * i}s")
               for i, color in enumerate(palette)]
    handles.append(Patch(color=GREY_HEX, label=chrono.UNKNOWN_TOKEN))
    return handles


def _draw_map_overview(index: ArchiveIndex, path: Path) -> Path:
    palette = decade_palette(chrono.scale_size(index.scale_start, index.scale_end))
    layer = map_layer(index)
    fig, ax = plt.subplots(figsize=(9, 7))

    if layer:
        cols = [c.cell.col for c in layer]
        rows = [c.cell.row for c in layer]
        cmin, rmin = min(cols), min(rows)
        grid = np.full((max(rows) - rmin + 1, max(cols) - cmin + 1), np.nan)
        for cell in layer:
            color = len(palette) if cell.color_index is None else cell.color_index
            grid[cell.cell.row - rmin, cell.cell.col - cmin] = color
        size = index.grid.cell_size
        ox, oy = index.grid.origin
        extent = (ox + cmin * size, ox + (max(cols) + 1) * size,
                  oy + rmin * size, oy + (max(rows) + 1) * size)
        cmap = ListedColormap(palette + [GREY_HEX])
        cmap.set_bad(color="white")
        ax.imshow(grid, origin="lower", extent=extent, cmap=cmap,
                  vmin=-0.5, vmax=len(palette) + 0.5, interpolation="nearest")

    ax.set_title("Curatorial activity by grid cell and decade")
    ax.set_xlabel("map x")
    ax.set_ylabel("map y")
    ax.legend(handles=_legend_handles(palette, index.scale_start),
              loc="center left", bbox_to_anchor=(1.01, 0.5), fontsize=7, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _draw_rings(index: ArchiveIndex, path: Path) -> Path:
    palette = decade_palette(chrono.scale_size(index.scale_start, index.scale_end))
    by_id = {e.event_id: e for e in index.events}
    rings = index.rings.rings

    fig, ax = plt.subplots(figsize=(8, 8))
    ax.set_aspect("equal")
    for i, ring in enumerate(rings):
        radius = i + 1
        ax.add_patch(Circle((0, 0), radius, fill=False, lw=0.4, color="#cccccc"))
        n = len(ring.marks)
        for k, mark in enumerate(ring.marks):
            angle = 2 * math.pi * k / n + 0.1 * i
            event = by_id[mark]
            bucket = chrono.decade_of(event.event_date.date)
            color_index = chrono.decade_color_index(
                bucket, index.scale_start, index.scale_end)
            color = GREY_HEX if color_index is None else palette[color_index]
            ax.plot(radius * math.cos(angle), radius * math.sin(angle),
                    "o", ms=3, color=color)
        if rings and (i == 0 or i == len(rings) - 1):
            ax.annotate(str(ring.year), (0, radius), fontsize=7,
                        ha="center", va="bottom", color="#555555")
    limit = len(rings) + 1.5
    ax.set_xlim(-limit, limit)
    ax.set_ylim(-limit, limit)
    ax.axis("off")
    ax.set_title("One ring per year; marks are recorded events")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _draw_curator_spans(index: ArchiveIndex, path: Path, top: int) -> Path:
    ranked = sorted(zip(index.curators, index.footprints),
                    key=lambda pair: -pair[1].events_total)
    ranked = [(c, fp) for c, fp in ranked if fp.first_year is not None][:top]

    fig, ax = plt.subplots(figsize=(9, 0.5 * max(len(ranked), 4) + 1.5))
    for i, (ident, fp) in enumerate(reversed(ranked)):
        width = max(fp.last_year - fp.first_year, 0.4)
        ax.barh(i, width, left=fp.first_year, height=0.6, color="#4a7c59")
        ax.text(fp.first_year, i + 0.38, f"{ident.canonical} ({fp.events_total})",
                fontsize=7, va="bottom")
    ax.set_yticks([])
    ax.set_xlabel("year")
    ax.set_title(f"Recorded activity spans, top {len(ranked)} curators by events")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
