"""Parsing of curatorial shorthand notes.

Notes like ``WDS, TM '99`` mix initials, two-digit years, and free text.  The
parser splits a note into typed segments without inventing meaning: initials
stay initials (they are linked to curators elsewhere, and only when the link
is unambiguous), years go through the same two-digit pivot as dates, and
everything else is residue.  The original note is always reconstructible from
the segments, byte for byte.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import chrono
from .entities import CuratorIdentity, initials_of

INITIALS = "initials"
YEAR = "year"
RESIDUE = "residue"

# standalone runs: 2-4 capitals for initials, 'YY or YYYY for years, all
# delimited by punctuation/whitespace (never glued to letters or digits)
_TOKEN_RE = re.compile(
    r"(?P<year4>(?<![A-Za-z0-9])\d{4}(?![A-Za-z0-9]))"
    r"|(?P<year2>'\d{2}(?!\d))"
    r"|(?P<initials>(?<![A-Za-z0-9])[A-Z]{2,4}(?![A-Za-z0-9]))"
)

_TRIM = string.whitespace + string.punctuation


@dataclass(frozen=True)
class Segment:
    """One typed span of the note; spans partition the whole input."""

    kind: str  # INITIALS | YEAR | RESIDUE
    start: int
    end: int


@dataclass(frozen=True)
class ParsedAnnotation:
    source: str
    initial_groups: tuple[str, ...]
    year_tokens: tuple[int, ...]
    residue: str
    segments: tuple[Segment, ...]


EMPTY_ANNOTATION = ParsedAnnotation("", (), (), "", ())


def parse_annotation(note: str, reference_year: int = chrono.DEFAULT_REFERENCE_YEAR,
                     pivot_floor: int = chrono.PIVOT_FLOOR) -> ParsedAnnotation:
    """Split a note into initials, resolved years, and residue.  Total.

    Four-digit years outside the pivot range (``pivot_floor``..reference
    year) are not believed and fall back into residue, as do two-digit years
    the pivot cannot place.
    """
    if not note:
        return EMPTY_ANNOTATION

    initials: list[str] = []
    years: list[int] = []
    segments: list[Segment] = []
    cursor = 0

    def push_residue(upto: int) -> None:
        nonlocal cursor
        if upto > cursor:
            # merge with a preceding residue segment so rejected tokens do
            # not fragment the residue
            if segments and segments[-1].kind == RESIDUE and segments[-1].end == cursor:
                segments[-1:] = [Segment(RESIDUE, segments[-1].start, upto)]
            else:
                segments.append(Segment(RESIDUE, cursor, upto))
        cursor = upto

    for m in _TOKEN_RE.finditer(note):
        kind: str | None = None
        if m.lastgroup == "year4":
            year = int(m.group())
            if pivot_floor <= year <= reference_year:
                years.append(year)
                kind = YEAR
        elif m.lastgroup == "year2":
            year = chrono.resolve_two_digit_year(int(m.group()[1:]), reference_year, pivot_floor)
            if year is not None:
                years.append(year)
                kind = YEAR
        else:
            initials.append(m.group())
            kind = INITIALS

        if kind is None:
            push_residue(m.end())  # rejected token stays residue
        else:
            push_residue(m.start())
            segments.append(Segment(kind, m.start(), m.end()))
            cursor = m.end()
    push_residue(len(note))

    residue = " ".join(
        cleaned for seg in segments if seg.kind == RESIDUE
        if (cleaned := note[seg.start:seg.end].strip(_TRIM))
    )
    return ParsedAnnotation(
        source=note,
        initial_groups=tuple(initials),
        year_tokens=tuple(years),
        residue=residue,
        segments=tuple(segments),
    )


def reconstruct(parsed: ParsedAnnotation) -> str:
    """Reassemble the original note from its segments."""
    return "".join(parsed.source[s.start:s.end] for s in parsed.segments)


@dataclass(frozen=True)
class LinkResult:
    """Outcome of resolving an initials token against the curator roster."""

    curator_id: str | None
    candidates: tuple[str, ...]  # curator ids that matched, sorted

    @property
    def resolved(self) -> bool:
        return self.curator_id is not None


UNRESOLVED = LinkResult(None, ())


def link_initials(initials: str, roster: Iterable[CuratorIdentity]) -> LinkResult:
    """Link an initials token to the unique curator whose canonical name's
    initial letters equal it; zero or several candidates stay unresolved."""
    target = initials.upper()
    candidates = sorted(c.id for c in roster if initials_of(c.canonical) == target)
    if len(candidates) == 1:
        return LinkResult(candidates[0], tuple(candidates))
    return LinkResult(None, tuple(candidates))
