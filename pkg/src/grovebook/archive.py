"""The immutable spatio-temporal index assembled from harmonized records.

One record can carry several dates (planting, inspection, removal, death) and
a shorthand note with more; each becomes its own event, so the index captures
overlapping timelines rather than one row per tree.  Events without
coordinates stay first-class: the index maps where record-keeping happened,
not where trees necessarily stood.

Everything here is deterministic: identical inputs give an identical index,
sealed by a content hash (``build_stamp``).
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, replace
from typing import Iterable, Literal, Mapping, Sequence, Union

from . import chrono
from .annotations import ParsedAnnotation, link_initials, parse_annotation
from .chrono import EventDate, Semantics
from .diagnostics import Diagnostic
from .entities import CuratorIdentity, NameVariant, canonicalize
from .errors import UnknownCuratorError
from .ingest import RawRecord
from .spatial import CellId, GridSpec, bbox_of, cell_of, coarsen_cell

_INITIALS_FIELD_RE = re.compile(r"^[A-Z]{2,4}$")


@dataclass(frozen=True)
class Event:
    """One dated (or datable) act tied to an accession."""

    event_id: str
    accession_id: str
    event_date: EventDate
    curator: str | None
    cell: CellId | None
    note: ParsedAnnotation
    provenance: int  # source line


@dataclass(frozen=True)
class CuratorFootprint:
    curator: str
    cells: tuple[tuple[CellId, int], ...]  # per-cell event counts, sorted
    first_year: int | None
    last_year: int | None
    events_total: int

    @property
    def located_total(self) -> int:
        return sum(n for _, n in self.cells)


@dataclass(frozen=True, eq=True)
class CellActivity:
    cell: CellId
    histogram: tuple[tuple[int | None, int], ...]  # (decade bucket, count), UNKNOWN last

    @property
    def total(self) -> int:
        return sum(n for _, n in self.histogram)


@dataclass(frozen=True)
class Ring:
    year: int
    marks: tuple[str, ...]  # event ids


@dataclass(frozen=True)
class RingLayout:
    rings: tuple[Ring, ...]  # strictly increasing, contiguous years
    undated_count: int


@dataclass(frozen=True)
class ArchiveIndex:
    grid: GridSpec
    reference_year: int
    pivot_floor: int
    scale_start: int
    scale_end: int
    events: tuple[Event, ...]
    curators: tuple[CuratorIdentity, ...]  # sorted by id, footprints filled in
    footprints: tuple[CuratorFootprint, ...]  # aligned with curators
    cells: tuple[CellActivity, ...]  # sorted by cell
    rings: RingLayout
    build_stamp: str


def build_index(records: Sequence[RawRecord],
                clusters: Iterable[Sequence[NameVariant]],
                grid: GridSpec,
                reference_year: int = chrono.DEFAULT_REFERENCE_YEAR,
                *,
                pivot_floor: int = chrono.PIVOT_FLOOR,
                scale_start: int = chrono.SCALE_START,
                scale_end: int = chrono.SCALE_END,
                diagnostics: list[Diagnostic] | None = None) -> ArchiveIndex:
    """Assemble the index from deduplicated records and curator clusters.

    Emits one event per non-empty date field plus one per dated note token.
    Data irregularities land in ``diagnostics`` (when a sink is given); only
    internal inconsistencies raise.
    """
    diags = diagnostics if diagnostics is not None else []
    roster = tuple(sorted((canonicalize(c) for c in clusters), key=lambda c: c.id))
    raw_to_id = {v.raw: ident.id for ident in roster for v in ident.variants}

    def resolve_checked_by(raw: str, line: int) -> str | None:
        if not raw:
            return None
        if raw in raw_to_id:
            return raw_to_id[raw]
        if _INITIALS_FIELD_RE.match(raw):
            return _link(raw, line)
        diags.append(Diagnostic(
            "CURATOR_UNRESOLVED", f"checked-by value {raw!r} matches no known curator",
            source_line=line))
        return None

    def _link(token: str, line: int) -> str | None:
        result = link_initials(token, roster)
        if result.resolved:
            return result.curator_id
        listed = ", ".join(result.candidates) if result.candidates else "none"
        diags.append(Diagnostic(
            "INITIALS_UNRESOLVED",
            f"initials {token!r} matched {len(result.candidates)} curators ({listed})",
            source_line=line))
        return None

    events: list[Event] = []
    seq = 0

    def next_id() -> str:
        nonlocal seq
        seq += 1
        return f"e{seq:06d}"

    located_points: list[tuple[float, float]] = []

    for record in records:
        line = record.source_line
        cell = None
        if record.coords is not None:
            point = _parse_point(record.coords)
            if point is None:
                diags.append(Diagnostic(
                    "BAD_COORD", f"coordinates {record.coords!r} are not finite numbers",
                    source_line=line))
            else:
                cell = cell_of(point, grid)
                located_points.append(point)

        inspector = resolve_checked_by(record.raw_checked_by, line)
        note = parse_annotation(record.raw_note, reference_year, pivot_floor)
        note_curator = _attribute_note(note, roster, line, diags)

        for role, raw in record.raw_dates:
            date = chrono.parse_date(raw, reference_year, pivot_floor)
            semantics = chrono.infer_semantics(role)
            curator = inspector if semantics is Semantics.INSPECTION else None
            if date.year is None and curator is None and cell is None:
                diags.append(Diagnostic(
                    "EVENT_EMPTY",
                    f"{role} value {raw!r} yields no date and the record has no "
                    "place or curator; event dropped",
                    source_line=line))
                continue
            events.append(Event(next_id(), record.accession_id,
                                EventDate(date, semantics), curator, cell, note, line))

        for year in note.year_tokens:
            date = chrono.PartialDate(year=year, precision=chrono.Precision.YEAR)
            events.append(Event(next_id(), record.accession_id,
                                EventDate(date, Semantics.UNKNOWN),
                                note_curator, cell, note, line))

    for event in events:
        bucket = chrono.decade_of(event.event_date.date)
        if not chrono.decade_in_scale(bucket, scale_start, scale_end):
            diags.append(Diagnostic(
                "SCALE_CLAMP",
                f"decade {bucket} lies outside the {scale_start}-{scale_end} scale",
                source_line=event.provenance))

    grid = GridSpec(grid.origin, grid.cell_size,
                    bbox_of(located_points, grid.origin))
    footprints = _build_footprints(events, roster)
    curators = tuple(
        replace(ident, first_year=fp.first_year, last_year=fp.last_year)
        for ident, fp in zip(roster, footprints)
    )
    index = ArchiveIndex(
        grid=grid,
        reference_year=reference_year,
        pivot_floor=pivot_floor,
        scale_start=scale_start,
        scale_end=scale_end,
        events=tuple(events),
        curators=curators,
        footprints=footprints,
        cells=_build_cells(events),
        rings=_build_rings(events),
        build_stamp="",
    )
    return replace(index, build_stamp=_stamp(index))


def _parse_point(coords: tuple[str, str]) -> tuple[float, float] | None:
    try:
        x, y = float(coords[0]), float(coords[1])
    except ValueError:
        return None
    if not (math.isfinite(x) and math.isfinite(y)):
        return None
    return (x, y)


def _attribute_note(note: ParsedAnnotation, roster: Sequence[CuratorIdentity],
                    line: int, diags: list[Diagnostic]) -> str | None:
    """A dated note is attributed only when its initials are unambiguous."""
    if not note.year_tokens or not note.initial_groups:
        return None
    if len(note.initial_groups) > 1:
        diags.append(Diagnostic(
            "NOTE_ATTRIBUTION_AMBIGUOUS",
            f"note carries {len(note.initial_groups)} initials groups "
            f"({', '.join(note.initial_groups)}); events left unattributed",
            source_line=line))
        return None
    token = note.initial_groups[0]
    result = link_initials(token, roster)
    if result.resolved:
        return result.curator_id
    listed = ", ".join(result.candidates) if result.candidates else "none"
    diags.append(Diagnostic(
        "INITIALS_UNRESOLVED",
        f"initials {token!r} matched {len(result.candidates)} curators ({listed})",
        source_line=line))
    return None


def _build_footprints(events: Sequence[Event],
                      roster: Sequence[CuratorIdentity]) -> tuple[CuratorFootprint, ...]:
    footprints = []
    for ident in roster:
        mine = [e for e in events if e.curator == ident.id]
        per_cell: dict[CellId, int] = {}
        for e in mine:
            if e.cell is not None:
                per_cell[e.cell] = per_cell.get(e.cell, 0) + 1
        years = [e.event_date.date.year for e in mine if e.event_date.date.year is not None]
        footprints.append(CuratorFootprint(
            curator=ident.id,
            cells=tuple(sorted(per_cell.items())),
            first_year=min(years) if years else None,
            last_year=max(years) if years else None,
            events_total=len(mine),
        ))
    return tuple(footprints)


def _build_cells(events: Sequence[Event]) -> tuple[CellActivity, ...]:
    per_cell: dict[CellId, dict[int | None, int]] = {}
    for e in events:
        if e.cell is None:
            continue
        bucket = chrono.decade_of(e.event_date.date)
        hist = per_cell.setdefault(e.cell, {})
        hist[bucket] = hist.get(bucket, 0) + 1
    return tuple(
        CellActivity(cell, _sorted_histogram(hist))
        for cell, hist in sorted(per_cell.items())
    )


def _sorted_histogram(hist: Mapping[int | None, int]) -> tuple[tuple[int | None, int], ...]:
    known = sorted((b, n) for b, n in hist.items() if b is not None)
    unknown = [(None, hist[None])] if None in hist else []
    return tuple(known + unknown)


def _build_rings(events: Sequence[Event]) -> RingLayout:
    dated = [e for e in events if e.event_date.date.year is not None]
    undated = len(events) - len(dated)
    if not dated:
        return RingLayout(rings=(), undated_count=undated)
    years = [e.event_date.date.year for e in dated]
    first, last = min(years), max(years)
    by_year: dict[int, list[Event]] = {y: [] for y in range(first, last + 1)}
    for e in dated:
        by_year[e.event_date.date.year].append(e)
    rings = tuple(
        Ring(year, tuple(e.event_id for e in sorted(
            marks, key=lambda e: (e.accession_id, e.provenance, e.event_id))))
        for year, marks in sorted(by_year.items())
    )
    return RingLayout(rings=rings, undated_count=undated)


def footprint(index: ArchiveIndex, curator_id: str) -> CuratorFootprint:
    """Footprint of one curator; unknown ids raise."""
    for fp in index.footprints:
        if fp.curator == curator_id:
            return fp
    raise UnknownCuratorError(curator_id)


def curator_by_id(index: ArchiveIndex, curator_id: str) -> CuratorIdentity:
    for ident in index.curators:
        if ident.id == curator_id:
            return ident
    raise UnknownCuratorError(curator_id)


@dataclass(frozen=True)
class LayerCell:
    cell: CellId
    count: int
    color_index: int | None  # GREY when the cell's decade is unknown


DecadeFilter = Union[int, None, Literal["unknown"]]


def map_layer(index: ArchiveIndex, decade: DecadeFilter = None,
              grid_mult: int = 1) -> list[LayerCell]:
    """Per-cell counts and colours for the map overview.

    Without a filter, a cell counts all its events and takes its modal
    decade's colour (ties go to the earlier decade; unknown never wins a
    tie).  With a decade filter (a start year, or ``"unknown"``), counts and
    colour are restricted to that bucket.  ``grid_mult`` coarsens the grid by
    an integer factor, conserving totals.
    """
    if not isinstance(grid_mult, int) or grid_mult < 1:
        raise ValueError("grid_mult must be a positive integer")
    if isinstance(decade, int) and decade % 10 != 0:
        raise ValueError("decade filter must be a decade start year")

    merged: dict[CellId, dict[int | None, int]] = {}
    for activity in index.cells:
        target = coarsen_cell(activity.cell, grid_mult)
        hist = merged.setdefault(target, {})
        for bucket, n in activity.histogram:
            hist[bucket] = hist.get(bucket, 0) + n

    wanted: int | None | str = decade
    layer: list[LayerCell] = []
    for cell in sorted(merged):
        hist = merged[cell]
        if wanted is None:
            count = sum(hist.values())
            modal = _modal_decade(hist)
            color = chrono.decade_color_index(modal, index.scale_start, index.scale_end)
        else:
            bucket = None if wanted == "unknown" else wanted
            count = hist.get(bucket, 0)
            color = chrono.decade_color_index(bucket, index.scale_start, index.scale_end)
        if count > 0:
            layer.append(LayerCell(cell, count, color))
    return layer


def _modal_decade(hist: Mapping[int | None, int]) -> int | None:
    best: tuple[int, float] | None = None
    modal: int | None = None
    for bucket, n in hist.items():
        if n <= 0:
            continue
        order = float("inf") if bucket is None else bucket
        key = (-n, order)
        if best is None or key < best:
            best = key
            modal = bucket
    return modal


def ring_layout(index: ArchiveIndex) -> RingLayout:
    return index.rings


# ---------------------------------------------------------------------------
# payload (logical serialization) — the single source for both the content
# hash and the on-disk bundle
# ---------------------------------------------------------------------------

def grid_to_payload(grid: GridSpec) -> dict:
    return {
        "origin": list(grid.origin),
        "cell_size": grid.cell_size,
        "bbox": list(grid.bbox) if grid.bbox is not None else None,
    }


def grid_from_payload(data: Mapping) -> GridSpec:
    return GridSpec(
        origin=tuple(data["origin"]),
        cell_size=data["cell_size"],
        bbox=tuple(data["bbox"]) if data.get("bbox") is not None else None,
    )


def _bucket_key(bucket: int | None) -> str:
    return chrono.UNKNOWN_TOKEN if bucket is None else str(bucket)


def _bucket_from_key(key: str) -> int | None:
    return None if key == chrono.UNKNOWN_TOKEN else int(key)


def event_to_payload(e: Event) -> dict:
    return {
        "id": e.event_id,
        "accession": e.accession_id,
        "date": chrono.format_date(e.event_date.date),
        "semantics": e.event_date.semantics.value,
        "curator": e.curator,
        "cell": [e.cell.col, e.cell.row] if e.cell else None,
        "note": e.note.source,
        "line": e.provenance,
    }


def event_from_payload(data: Mapping, reference_year: int, pivot_floor: int) -> Event:
    cell = data.get("cell")
    return Event(
        event_id=data["id"],
        accession_id=data["accession"],
        event_date=EventDate(
            chrono.parse_date(data["date"], reference_year, pivot_floor),
            Semantics(data["semantics"]),
        ),
        curator=data.get("curator"),
        cell=CellId(cell[0], cell[1]) if cell else None,
        note=parse_annotation(data["note"], reference_year, pivot_floor),
        provenance=data["line"],
    )


def curator_to_payload(ident: CuratorIdentity, fp: CuratorFootprint) -> dict:
    return {
        "id": ident.id,
        "canonical": ident.canonical,
        "variants": [{"raw": v.raw, "occurrences": v.occurrences} for v in ident.variants],
        "first_year": ident.first_year,
        "last_year": ident.last_year,
        "footprint": {
            "cells": [[c.col, c.row, n] for c, n in fp.cells],
            "events_total": fp.events_total,
        },
    }


def curator_from_payload(data: Mapping) -> tuple[CuratorIdentity, CuratorFootprint]:
    from .entities import make_variant
    ident = CuratorIdentity(
        id=data["id"],
        canonical=data["canonical"],
        variants=tuple(make_variant(v["raw"], v["occurrences"]) for v in data["variants"]),
        first_year=data.get("first_year"),
        last_year=data.get("last_year"),
    )
    fp = CuratorFootprint(
        curator=ident.id,
        cells=tuple((CellId(c, r), n) for c, r, n in data["footprint"]["cells"]),
        first_year=ident.first_year,
        last_year=ident.last_year,
        events_total=data["footprint"]["events_total"],
    )
    return ident, fp


def cell_to_payload(activity: CellActivity) -> dict:
    return {
        "cell": [activity.cell.col, activity.cell.row],
        "histogram": {_bucket_key(b): n for b, n in activity.histogram},
    }


def cell_from_payload(data: Mapping) -> CellActivity:
    hist = {_bucket_from_key(k): n for k, n in data["histogram"].items()}
    return CellActivity(CellId(data["cell"][0], data["cell"][1]), _sorted_histogram(hist))


def rings_to_payload(layout: RingLayout) -> dict:
    return {
        "undated": layout.undated_count,
        "rings": [{"year": r.year, "marks": list(r.marks)} for r in layout.rings],
    }


def rings_from_payload(data: Mapping) -> RingLayout:
    return RingLayout(
        rings=tuple(Ring(r["year"], tuple(r["marks"])) for r in data["rings"]),
        undated_count=data["undated"],
    )


def index_to_payload(index: ArchiveIndex) -> dict:
    """Logical content of the index, without the stamp itself."""
    return {
        "grid": grid_to_payload(index.grid),
        "reference_year": index.reference_year,
        "pivot_floor": index.pivot_floor,
        "scale": [index.scale_start, index.scale_end],
        "events": [event_to_payload(e) for e in index.events],
        "curators": [curator_to_payload(c, fp)
                     for c, fp in zip(index.curators, index.footprints)],
        "cells": [cell_to_payload(c) for c in index.cells],
        "rings": rings_to_payload(index.rings),
    }


def index_from_payload(data: Mapping, build_stamp: str) -> ArchiveIndex:
    reference_year = data["reference_year"]
    pivot_floor = data["pivot_floor"]
    pairs = [curator_from_payload(c) for c in data["curators"]]
    return ArchiveIndex(
        grid=grid_from_payload(data["grid"]),
        reference_year=reference_year,
        pivot_floor=pivot_floor,
        scale_start=data["scale"][0],
        scale_end=data["scale"][1],
        events=tuple(event_from_payload(e, reference_year, pivot_floor)
                     for e in data["events"]),
        curators=tuple(ident for ident, _ in pairs),
        footprints=tuple(fp for _, fp in pairs),
        cells=tuple(cell_from_payload(c) for c in data["cells"]),
        rings=rings_from_payload(data["rings"]),
        build_stamp=build_stamp,
    )


def _stamp(index: ArchiveIndex) -> str:
    canonical = json.dumps(index_to_payload(index), sort_keys=True, ensure_ascii=False,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
