"""Partial dates, date semantics, and the decade colour scale.

Dates in accession archives are often known only down to a year or a decade,
and sometimes not at all.  ``PartialDate`` keeps that partiality first-class:
parsing never raises, and "unknown" is an ordinary value that flows through
bucketing and colouring instead of being coerced to anything.

The decade colour scale runs from ``SCALE_START`` to ``SCALE_END`` inclusive
(15 buckets by default); unknown decades map to ``GREY``, which serializes as
the token ``"unknown"``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Final

DEFAULT_REFERENCE_YEAR: Final = 2019

#: Two-digit years never resolve to anything earlier than this.
PIVOT_FLOOR: Final = 1800

SCALE_START: Final = 1870
SCALE_END: Final = 2010

#: Decade bucket for dates whose decade cannot be determined.  ``None`` on
#: purpose: it can never be mistaken for a start year.
UNKNOWN: Final = None

#: Colour index for unknown decades, distinct from every ordinal.
GREY: Final = None

#: Serialized form of both sentinels.
UNKNOWN_TOKEN: Final = "unknown"


class Precision(str, enum.Enum):
    DAY = "day"
    MONTH = "month"
    YEAR = "year"
    DECADE = "decade"
    UNKNOWN = "unknown"


class Semantics(str, enum.Enum):
    """What a date meant to the person who wrote it down."""

    PLANTING = "planting"
    INSPECTION = "inspection"
    REMOVAL = "removal"
    DEATH = "death"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PartialDate:
    """A date known down to some precision, possibly not at all.

    Invariants (checked at construction): day implies month implies year;
    the precision matches the most specific populated field; decade precision
    stores the decade's start year.
    """

    year: int | None = None
    month: int | None = None
    day: int | None = None
    precision: Precision = Precision.UNKNOWN

    def __post_init__(self) -> None:
        if self.day is not None and self.month is None:
            raise ValueError("day requires month")
        if self.month is not None and self.year is None:
            raise ValueError("month requires year")
        if self.month is not None and not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")
        if self.day is not None and not 1 <= self.day <= 31:
            raise ValueError(f"day out of range: {self.day}")
        expected = _expected_precision(self)
        if self.precision is not expected:
            raise ValueError(f"precision {self.precision.value} inconsistent with fields "
                             f"(expected {expected.value})")
        if self.precision is Precision.DECADE and self.year % 10 != 0:  # type: ignore[operator]
            raise ValueError("decade precision requires a start year that is a multiple of 10")

    @property
    def known(self) -> bool:
        return self.year is not None


def _expected_precision(d: PartialDate) -> Precision:
    if d.day is not None:
        return Precision.DAY
    if d.month is not None:
        return Precision.MONTH
    if d.year is not None:
        # year-known dates are YEAR unless explicitly marked as a decade
        return Precision.DECADE if d.precision is Precision.DECADE else Precision.YEAR
    return Precision.UNKNOWN


@dataclass(frozen=True)
class EventDate:
    date: PartialDate
    semantics: Semantics


_YMD_RE = re.compile(r"^(\d{4})-(\d{1,2})-(\d{1,2})$")
_YM_RE = re.compile(r"^(\d{4})-(\d{1,2})$")
_Y_RE = re.compile(r"^(\d{4})$")
_MDY_RE = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")
_APOS_RE = re.compile(r"^'(\d{2})$")
_DECADE_RE = re.compile(r"^(\d{3}0)s$")

UNKNOWN_DATE = PartialDate()


def resolve_two_digit_year(two_digits: int, reference_year: int = DEFAULT_REFERENCE_YEAR,
                           pivot_floor: int = PIVOT_FLOOR) -> int | None:
    """Resolve a two-digit year to the latest century not exceeding the reference.

    Returns None when no century keeps the result at or above ``pivot_floor``.
    """
    if not 0 <= two_digits <= 99:
        return None
    year = reference_year - reference_year % 100 + two_digits
    if year > reference_year:
        year -= 100
    if year < pivot_floor:
        return None
    return year


def parse_date(raw: str, reference_year: int = DEFAULT_REFERENCE_YEAR,
               pivot_floor: int = PIVOT_FLOOR) -> PartialDate:
    """Parse a raw date string; anything unrecognized becomes the unknown date.

    Recognized forms: ``YYYY``, ``YYYY-MM``, ``YYYY-MM-DD``, ``MM/DD/YYYY``,
    ``'YY`` (two-digit year, resolved against ``reference_year``), and
    ``YYYYs`` (a decade).  This function is total: it never raises on data.
    """
    text = raw.strip()
    if not text:
        return UNKNOWN_DATE

    m = _YMD_RE.match(text)
    if m:
        return _date_or_unknown(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    m = _YM_RE.match(text)
    if m:
        return _date_or_unknown(int(m.group(1)), int(m.group(2)), None)
    m = _Y_RE.match(text)
    if m:
        return PartialDate(year=int(m.group(1)), precision=Precision.YEAR)
    m = _MDY_RE.match(text)
    if m:
        return _date_or_unknown(int(m.group(3)), int(m.group(1)), int(m.group(2)))
    m = _APOS_RE.match(text)
    if m:
        year = resolve_two_digit_year(int(m.group(1)), reference_year, pivot_floor)
        if year is None:
            return UNKNOWN_DATE
        return PartialDate(year=year, precision=Precision.YEAR)
    m = _DECADE_RE.match(text)
    if m:
        return PartialDate(year=int(m.group(1)), precision=Precision.DECADE)
    return UNKNOWN_DATE


def _date_or_unknown(year: int, month: int | None, day: int | None) -> PartialDate:
    if month is not None and not 1 <= month <= 12:
        return UNKNOWN_DATE
    if day is not None and not 1 <= day <= 31:
        return UNKNOWN_DATE
    precision = Precision.DAY if day is not None else Precision.MONTH
    return PartialDate(year=year, month=month, day=day, precision=precision)


def format_date(d: PartialDate) -> str:
    """Canonical textual form: truncated ``YYYY[-MM[-DD]]``, ``YYYYs`` for
    decades, empty string for unknown.  Re-parsing yields an equal value."""
    if d.precision is Precision.UNKNOWN:
        return ""
    if d.precision is Precision.DECADE:
        return f"{d.year}s"
    if d.precision is Precision.YEAR:
        return f"{d.year:04d}"
    if d.precision is Precision.MONTH:
        return f"{d.year:04d}-{d.month:02d}"
    return f"{d.year:04d}-{d.month:02d}-{d.day:02d}"


_ROLE_SEMANTICS = {
    "date_planted": Semantics.PLANTING,
    "date_checked": Semantics.INSPECTION,
    "date_removed": Semantics.REMOVAL,
    "date_died": Semantics.DEATH,
}


def infer_semantics(field_role: str) -> Semantics:
    """Semantics come from the field role alone, never from the date value."""
    return _ROLE_SEMANTICS.get(field_role, Semantics.UNKNOWN)


def decade_of(d: PartialDate) -> int | None:
    """Decade bucket (start year) of a partial date; UNKNOWN when the year is."""
    if d.year is None:
        return UNKNOWN
    return d.year - d.year % 10


def decade_in_scale(bucket: int | None, scale_start: int = SCALE_START,
                    scale_end: int = SCALE_END) -> bool:
    """True when the bucket needs no clamping (UNKNOWN never clamps)."""
    if bucket is UNKNOWN:
        return True
    return scale_start <= bucket <= scale_end


def decade_color_index(bucket: int | None, scale_start: int = SCALE_START,
                       scale_end: int = SCALE_END) -> int | None:
    """Map a decade bucket onto the colour scale.

    Index 0 is the dark-green end (earliest decade), the last index the
    deep-red end; out-of-range decades clamp to the nearest end (callers emit
    the diagnostic), and UNKNOWN maps to GREY.
    """
    if scale_start % 10 or scale_end % 10 or scale_start > scale_end:
        raise ValueError("scale bounds must be decade-aligned and ordered")
    if bucket is UNKNOWN:
        return GREY
    index = (bucket - scale_start) // 10
    return max(0, min(index, (scale_end - scale_start) // 10))


def scale_size(scale_start: int = SCALE_START, scale_end: int = SCALE_END) -> int:
    """Number of decade buckets on the scale (15 for the default 1870-2010)."""
    return (scale_end - scale_start) // 10 + 1
