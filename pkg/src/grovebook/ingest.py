"""Loading of delimited accession corpora.

Nothing is normalized here: field values are kept byte-for-byte (beyond outer
whitespace) so later stages can inspect exactly what the source said.  Rows
that cannot be read become diagnostics, not crashes; only a missing file or a
header that contradicts the column map aborts the load.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .diagnostics import Diagnostic
from .errors import SourceError

FORMAT_DELIMITED = "delimited"
FORMAT_FIXED_FIXTURE = "fixed-fixture"

#: Canonical field roles a source column can be mapped to.
ROLES = (
    "accession_id", "taxon", "x", "y",
    "date_planted", "date_checked", "date_removed", "date_died",
    "checked_by", "note",
)
DATE_ROLES = ("date_planted", "date_checked", "date_removed", "date_died")


@dataclass(frozen=True)
class SourceDescriptor:
    """Where a corpus lives and how its columns map onto canonical roles."""

    path: str | Path = ""
    format: str = FORMAT_DELIMITED
    delimiter: str = ","
    column_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.format not in (FORMAT_DELIMITED, FORMAT_FIXED_FIXTURE):
            raise ValueError(f"unknown source format: {self.format!r}")
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")
        if self.delimiter in ('"', "'"):
            raise ValueError("delimiter must not be a quote character")
        unknown = set(self.column_map) - set(ROLES)
        if unknown:
            raise ValueError(f"column_map has unknown roles: {sorted(unknown)}")


@dataclass(frozen=True)
class RawRecord:
    """One accession row, unvalidated, with its source line as provenance."""

    source_line: int
    accession_id: str = ""
    taxon: str = ""
    coords: tuple[str, str] | None = None
    raw_dates: tuple[tuple[str, str], ...] = ()  # (role, raw value)
    raw_checked_by: str = ""
    raw_note: str = ""


def load_corpus(source: SourceDescriptor) -> tuple[list[RawRecord], list[Diagnostic]]:
    """Read one source into raw records, in file order.

    Every non-header line yields exactly one record or one error diagnostic.
    """
    if source.format == FORMAT_FIXED_FIXTURE:
        return list(_FIXED_FIXTURE), []

    path = Path(source.path)
    if not path.is_file():
        raise SourceError(f"source file not found: {path}")

    records: list[RawRecord] = []
    diags: list[Diagnostic] = []
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter=source.delimiter)
        header = next(reader, None)
        if header is None:
            raise SourceError(f"source file has no header row: {path}")
        header = [h.strip() for h in header]
        role_index = _map_roles(source.column_map, header, path)

        for row in reader:
            if not row:  # blank line, common at end of file
                continue
            line = reader.line_num
            if len(row) != len(header):
                diags.append(Diagnostic(
                    "ROW_FIELD_COUNT",
                    f"expected {len(header)} fields, found {len(row)}",
                    source_line=line,
                ))
                continue
            records.append(_to_record(row, role_index, line, diags))
    return records, diags


def _map_roles(column_map: Mapping[str, str], header: list[str], path: Path) -> dict[str, int]:
    missing = [col for col in column_map.values() if col not in header]
    if missing:
        raise SourceError(
            f"column map references columns absent from header of {path}: {missing}")
    return {role: header.index(col) for role, col in column_map.items()}


def _to_record(row: list[str], role_index: Mapping[str, int], line: int,
               diags: list[Diagnostic]) -> RawRecord:
    def get(role: str) -> str:
        idx = role_index.get(role)
        return row[idx].strip() if idx is not None else ""

    x, y = get("x"), get("y")
    coords: tuple[str, str] | None = None
    if x and y:
        coords = (x, y)
    elif x or y:
        diags.append(Diagnostic(
            "COORD_INCOMPLETE", f"have {'x' if x else 'y'} but not the other",
            source_line=line))

    return RawRecord(
        source_line=line,
        accession_id=get("accession_id"),
        taxon=get("taxon"),
        coords=coords,
        raw_dates=tuple((role, get(role)) for role in DATE_ROLES if get(role)),
        raw_checked_by=get("checked_by"),
        raw_note=get("note"),
    )


def dedupe_accessions(records: Sequence[RawRecord]) -> tuple[list[RawRecord], list[Diagnostic]]:
    """Merge records that share a non-empty accession id and the same taxon.

    Merges keep the union of dates and concatenate notes; records with empty
    ids never merge, and id collisions across different taxa are reported but
    left apart.  Applying this twice changes nothing.
    """
    diags: list[Diagnostic] = []
    taxa_by_id: dict[str, set[str]] = {}
    groups: dict[tuple[str, str], list[RawRecord]] = {}
    order: list[tuple[str, str] | int] = []  # merge keys or unique indices

    for i, record in enumerate(records):
        if not record.accession_id:
            order.append(i)
            continue
        key = (record.accession_id, record.taxon)
        taxa_by_id.setdefault(record.accession_id, set()).add(record.taxon)
        if key not in groups:
            order.append(key)
        groups.setdefault(key, []).append(record)

    for acc_id, taxa in sorted(taxa_by_id.items()):
        if len(taxa) > 1:
            diags.append(Diagnostic(
                "DUP_ID_CONFLICT",
                f"accession id {acc_id!r} used for {len(taxa)} different taxa; not merged",
            ))

    merged: list[RawRecord] = []
    for slot in order:
        if isinstance(slot, int):
            merged.append(records[slot])
            continue
        members = groups[slot]
        if len(members) == 1:
            merged.append(members[0])
            continue
        merged.append(_merge(members))
        lines = ", ".join(str(m.source_line) for m in members)
        diags.append(Diagnostic(
            "DUP_ACCESSION",
            f"accession id {slot[0]!r} merged from lines {lines}",
            source_line=members[0].source_line,
        ))
    return merged, diags


def _merge(members: Sequence[RawRecord]) -> RawRecord:
    first = members[0]
    dates: list[tuple[str, str]] = []
    for m in members:
        for pair in m.raw_dates:
            if pair not in dates:
                dates.append(pair)
    notes = [m.raw_note for m in members if m.raw_note]
    return RawRecord(
        source_line=first.source_line,
        accession_id=first.accession_id,
        taxon=first.taxon,
        coords=next((m.coords for m in members if m.coords), None),
        raw_dates=tuple(dates),
        raw_checked_by=next((m.raw_checked_by for m in members if m.raw_checked_by), ""),
        raw_note="; ".join(notes),
    )


# Small built-in corpus for demos and smoke runs: two contrasting curator
# patterns (a long broad tenure vs. a short concentrated assignment) plus the
# usual irregularities (name variants, shorthand notes, an unknown date).
_FIXED_FIXTURE = (
    RawRecord(2, "12-88", "Acer griseum", ("12.5", "31.0"),
              (("date_planted", "1912"), ("date_checked", "1954-05")),
              "R. A. Howard", ""),
    RawRecord(3, "12-88-B", "Acer griseum", ("55.0", "8.2"),
              (("date_checked", "1961"),), "Richard Alden Howard", "crown thinned"),
    RawRecord(4, "203-31", "Fagus grandifolia", ("81.3", "64.9"),
              (("date_checked", "1977"),), "Richard A. Howard", ""),
    RawRecord(5, "340-77", "Tsuga canadensis", ("18.0", "77.1"),
              (("date_checked", "1968-09-12"),), "Kathryn Richardson", "KR '68"),
    RawRecord(6, "340-78", "Tsuga canadensis", ("19.5", "78.0"),
              (("date_checked", "1969"),), "K. Richardson", ""),
    RawRecord(7, "501-02", "Quercus alba", ("62.0", "12.0"),
              (("date_planted", "1899"), ("date_died", "1955")),
              "J. Malmstedt", "storm damage noted"),
    RawRecord(8, "501-03", "Quercus alba", None,
              (("date_checked", "'07"),), "Johan M.", "WDS, TM '99"),
    RawRecord(9, "610-11", "Syringa vulgaris", ("40.0", "40.0"),
              (), "", "label missing"),
)
