"""Diagnostic records emitted by every pipeline stage.

A diagnostic never aborts a run by itself; fatal conditions raise exceptions
from :mod:`grovebook.errors` instead.  Codes form a closed enumeration kept in
``CODE_CATALOG`` below, so downstream consumers can pattern-match on them.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, TextIO

WARNING = "warning"
ERROR = "error"

# code -> (severity, short description).  Adding a code here is the only way
# to introduce one; Diagnostic refuses unknown codes.
CODE_CATALOG: dict[str, tuple[str, str]] = {
    # ingest
    "ROW_FIELD_COUNT": (ERROR, "row has a different field count than the header; row skipped"),
    "DUP_ACCESSION": (WARNING, "records sharing an accession id and taxon were merged"),
    "DUP_ID_CONFLICT": (WARNING, "records share an accession id but disagree on taxon; kept apart"),
    "COORD_INCOMPLETE": (WARNING, "only one of the two coordinate fields is present"),
    # index build
    "BAD_COORD": (WARNING, "coordinate fields do not parse to finite numbers"),
    "CURATOR_UNRESOLVED": (WARNING, "checked-by value could not be resolved to a curator"),
    "INITIALS_UNRESOLVED": (
        WARNING,
        "an initials token matched zero or several curators and was left unresolved; "
        "such tokens may also encode actions rather than names, a reading the parser "
        "does not attempt",
    ),
    "NOTE_ATTRIBUTION_AMBIGUOUS": (
        WARNING,
        "a dated note carries several initials groups; its events stay unattributed",
    ),
    "EVENT_EMPTY": (WARNING, "a date field produced no usable date, place, or curator; dropped"),
    "SCALE_CLAMP": (WARNING, "event decade lies outside the colour scale and was clamped"),
    # enrichment
    "GEN_DISABLED": (WARNING, "no generator endpoint configured; template biography used"),
    "GEN_FAILED": (WARNING, "generator endpoint failed; template biography used"),
    # bundle validation
    "MANIFEST_INVALID": (ERROR, "bundle manifest is missing or unreadable"),
    "SCHEMA_VERSION": (ERROR, "bundle schema version is not supported"),
    "FILE_MISSING": (ERROR, "a file listed in the manifest is absent"),
    "CHECKSUM_MISMATCH": (ERROR, "a bundle file does not match its manifest checksum"),
    "FILE_INVALID": (ERROR, "a bundle file exists but cannot be parsed"),
    "REF_DANGLING": (ERROR, "a cross-reference points at a missing object"),
    "CONSERVATION": (ERROR, "event totals do not reconcile across bundle sections"),
    "STAMP_MISMATCH": (ERROR, "build stamps disagree between manifest and meta"),
}


@dataclass(frozen=True)
class Diagnostic:
    """One finding about the data, tied to a source line when one exists."""

    code: str
    message: str
    source_line: int | None = None

    def __post_init__(self) -> None:
        if self.code not in CODE_CATALOG:
            raise ValueError(f"unknown diagnostic code: {self.code!r}")

    @property
    def severity(self) -> str:
        return CODE_CATALOG[self.code][0]

    def format(self) -> str:
        where = f"line {self.source_line} " if self.source_line is not None else ""
        return f"{where}[{self.severity}] {self.code}: {self.message}"


def warnings_of(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == WARNING]


def errors_of(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == ERROR]


def emit(diags: Iterable[Diagnostic], stream: TextIO | None = None) -> None:
    """Write diagnostics one per line, suitable for standard error."""
    out = stream if stream is not None else sys.stderr
    for d in diags:
        print(d.format(), file=out)
