"""Evidence dossiers and curator biographies.

A dossier is the only thing a biography may be built from: a short list of
facts, each pointing back at the events that support it.  The in-repo
biography renderer is a deterministic template engine whose every sentence
cites its facts; an external text generator can be plugged in, but its output
is always labelled as generated and kept apart from the empirical record, and
any failure falls back to the template draft.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import chrono
from .archive import ArchiveIndex, curator_by_id, footprint
from .diagnostics import Diagnostic

FACT_SPAN = "span"
FACT_CELL_COUNT = "cell_count"
FACT_EVENT_COUNT = "event_count"
FACT_MODAL_SECTION = "modal_section"
FACT_SAMPLE_NOTE = "sample_note"

TEMPLATE_GENERATOR_ID = "template:v1"

#: Fewer recorded events than this reads as a sparse record.
SPARSE_EVENT_COUNT = 10
#: A span this short (inclusive, in years) reads as a targeted assignment.
SHORT_SPAN_YEARS = 5

#: Evidence lists are capped so a prolific curator does not drag hundreds of
#: line references into every fact.
MAX_EVIDENCE_REFS = 10
MAX_SAMPLE_NOTES = 3


@dataclass(frozen=True)
class Fact:
    fact_id: str
    kind: str
    value: object  # JSON-compatible
    evidence: tuple[str, ...]  # "line:<n>" or "roster:<curator id>"


@dataclass(frozen=True)
class EvidenceDossier:
    curator: str
    facts: tuple[Fact, ...]

    def fact_ids(self) -> set[str]:
        return {f.fact_id for f in self.facts}


@dataclass(frozen=True)
class Sentence:
    text: str
    fact_ids: tuple[str, ...]


@dataclass(frozen=True)
class BiographyDraft:
    curator: str
    paragraphs: tuple[tuple[Sentence, ...], ...]
    generated: bool
    generator_id: str


@dataclass(frozen=True)
class GeneratorConfig:
    url: str | None = None
    timeout: float = 5.0


def _lines(provenances: Sequence[int]) -> tuple[str, ...]:
    unique = sorted(set(provenances))[:MAX_EVIDENCE_REFS]
    return tuple(f"line:{n}" for n in unique)


def assemble_dossier(index: ArchiveIndex, curator_id: str) -> EvidenceDossier:
    """Collect the facts the index holds about one curator.

    A curator with no events gets a single absence fact (event count zero)
    whose evidence is the roster entry itself.
    """
    curator_by_id(index, curator_id)  # raises on unknown ids
    mine = [e for e in index.events if e.curator == curator_id]

    facts: list[Fact] = []

    def add(kind: str, value: object, evidence: tuple[str, ...]) -> None:
        facts.append(Fact(f"f{len(facts) + 1}", kind, value, evidence))

    if not mine:
        add(FACT_EVENT_COUNT, 0, (f"roster:{curator_id}",))
        return EvidenceDossier(curator_id, tuple(facts))

    fp = footprint(index, curator_id)
    if fp.first_year is not None:
        boundary = [e.provenance for e in mine
                    if e.event_date.date.year in (fp.first_year, fp.last_year)]
        add(FACT_SPAN, [fp.first_year, fp.last_year], _lines(boundary))

    add(FACT_EVENT_COUNT, fp.events_total, _lines([e.provenance for e in mine]))

    if fp.cells:
        add(FACT_CELL_COUNT, len(fp.cells),
            _lines([e.provenance for e in mine if e.cell is not None]))

    busiest = _busiest_decade(mine)
    if busiest is not None:
        add(FACT_MODAL_SECTION, busiest,
            _lines([e.provenance for e in mine
                    if chrono.decade_of(e.event_date.date) == busiest]))

    seen_lines: set[int] = set()
    samples = 0
    for e in sorted(mine, key=lambda e: e.provenance):
        if e.note.source and e.provenance not in seen_lines:
            seen_lines.add(e.provenance)
            add(FACT_SAMPLE_NOTE, e.note.source, (f"line:{e.provenance}",))
            samples += 1
            if samples == MAX_SAMPLE_NOTES:
                break

    return EvidenceDossier(curator_id, tuple(facts))


def _busiest_decade(events: Sequence) -> int | None:
    counts: dict[int, int] = {}
    for e in events:
        bucket = chrono.decade_of(e.event_date.date)
        if bucket is not None:
            counts[bucket] = counts.get(bucket, 0) + 1
    if not counts:
        return None
    return min(counts, key=lambda b: (-counts[b], b))


def _find(dossier: EvidenceDossier, kind: str) -> Fact | None:
    for f in dossier.facts:
        if f.kind == kind:
            return f
    return None


def render_template_biography(dossier: EvidenceDossier) -> BiographyDraft:
    """Deterministic biography: every sentence cites at least one fact.

    Sparse records are described as sparse rather than padded out; the wording
    distinguishes a short targeted assignment from a long broad tenure.
    """
    span = _find(dossier, FACT_SPAN)
    cells = _find(dossier, FACT_CELL_COUNT)
    count = _find(dossier, FACT_EVENT_COUNT)
    modal = _find(dossier, FACT_MODAL_SECTION)
    sample = _find(dossier, FACT_SAMPLE_NOTE)

    sentences: list[Sentence] = []

    if count is not None and count.value == 0:
        sentences.append(Sentence(
            "No recorded activity survives in the archive for this curator.",
            (count.fact_id,)))
        return _draft(dossier, sentences)

    if span is not None:
        first, last = span.value  # type: ignore[misc]
        if cells is not None and (last - first) <= SHORT_SPAN_YEARS:
            sentences.append(Sentence(
                f"A short span of recorded work, {first}–{last}, "
                f"concentrated in {cells.value} sections of the grounds.",
                (span.fact_id, cells.fact_id)))
        elif cells is not None:
            sentences.append(Sentence(
                f"Active {first}–{last} across {cells.value} grid cells.",
                (span.fact_id, cells.fact_id)))
        else:
            sentences.append(Sentence(
                f"Active {first}–{last}, with no events placed on the map grid.",
                (span.fact_id,)))

    if count is not None:
        n = count.value
        if isinstance(n, int) and n < SPARSE_EVENT_COUNT:
            sentences.append(Sentence(
                f"The archive records this curator only {n} "
                f"time{'s' if n != 1 else ''}.", (count.fact_id,)))
        else:
            sentences.append(Sentence(
                f"The archive preserves {n} events bearing this curator's mark.",
                (count.fact_id,)))

    if modal is not None:
        sentences.append(Sentence(
            f"Most recorded activity falls in the {modal.value}s.",
            (modal.fact_id,)))

    if sample is not None:
        sentences.append(Sentence(
            f'One note reads: "{sample.value}".', (sample.fact_id,)))

    return _draft(dossier, sentences)


def _draft(dossier: EvidenceDossier, sentences: list[Sentence]) -> BiographyDraft:
    return BiographyDraft(
        curator=dossier.curator,
        paragraphs=(tuple(sentences),),
        generated=False,
        generator_id=TEMPLATE_GENERATOR_ID,
    )


def dossier_to_payload(dossier: EvidenceDossier) -> dict:
    return {
        "curator": dossier.curator,
        "facts": [
            {"id": f.fact_id, "kind": f.kind, "value": f.value, "evidence": list(f.evidence)}
            for f in dossier.facts
        ],
    }


def draft_to_payload(draft: BiographyDraft) -> dict:
    return {
        "curator": draft.curator,
        "paragraphs": [
            [{"text": s.text, "fact_ids": list(s.fact_ids)} for s in paragraph]
            for paragraph in draft.paragraphs
        ],
        "generated": draft.generated,
        "generator_id": draft.generator_id,
    }


def draft_from_payload(data: Mapping) -> BiographyDraft:
    return BiographyDraft(
        curator=data["curator"],
        paragraphs=tuple(
            tuple(Sentence(s["text"], tuple(s["fact_ids"])) for s in paragraph)
            for paragraph in data["paragraphs"]
        ),
        generated=data["generated"],
        generator_id=data["generator_id"],
    )


def external_generate(dossier: EvidenceDossier, config: GeneratorConfig | None,
                      diagnostics: list[Diagnostic] | None = None) -> BiographyDraft:
    """Ask an external endpoint for a narrative draft; never fatal.

    The request carries dossier facts only, never raw corpus rows.  The
    endpoint must answer a JSON object with a non-empty "text" field and may
    name itself in "generator".  Anything else, and the deterministic
    template draft is returned with a diagnostic.
    """
    diags = diagnostics if diagnostics is not None else []
    if config is None or not config.url:
        diags.append(Diagnostic(
            "GEN_DISABLED", f"no generator endpoint configured for {dossier.curator}"))
        return render_template_biography(dossier)

    body = json.dumps(dossier_to_payload(dossier), sort_keys=True).encode("utf-8")
    request = urllib.request.Request(
        config.url, data=body, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(request, timeout=config.timeout) as response:
            payload = json.loads(response.read().decode("utf-8"))
        text = payload["text"]
        if not isinstance(text, str) or not text.strip():
            raise ValueError("generator returned no text")
        generator_id = payload.get("generator", config.url)
    except Exception as exc:  # noqa: BLE001 - fallback must catch everything
        diags.append(Diagnostic(
            "GEN_FAILED", f"generator call for {dossier.curator} failed: {exc}"))
        return render_template_biography(dossier)

    return BiographyDraft(
        curator=dossier.curator,
        paragraphs=((Sentence(text.strip(), ()),),),
        generated=True,
        generator_id=str(generator_id),
    )
