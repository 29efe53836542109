"""Versioned on-disk bundles: writing, loading, validation.

A bundle is a directory of UTF-8 JSON files with stable key order, listed in
a manifest with per-file checksums, so two builds of the same input are
byte-identical and any single flipped byte is detectable.  Generated
biography drafts live under their own key, never mixed into the empirical
sections.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import archive, chrono
from .archive import ArchiveIndex
from .diagnostics import Diagnostic
from .enrich import BiographyDraft, draft_from_payload, draft_to_payload
from .errors import BundleError
from .spatial import GridSpec

SCHEMA_VERSION = "1.0.0"

MANIFEST_FILE = "manifest.v1"
META_FILE = "meta.v1"
CURATORS_FILE = "curators.v1"
CELLS_FILE = "cells.v1"
EVENTS_FILE = "events.v1"
RINGS_FILE = "rings.v1"
BIOGRAPHIES_FILE = "biographies.v1"

#: Above this many events the events file is sharded by decade.
DEFAULT_SHARD_THRESHOLD = 10_000

_SEMVER_RE = re.compile(r"^(\d+)\.(\d+)\.(\d+)$")


@dataclass(frozen=True)
class BiographySet:
    """Biography drafts per curator; generated ones kept strictly apart."""

    template: Mapping[str, BiographyDraft] = field(default_factory=dict)
    generated: Mapping[str, BiographyDraft] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(d.generated for d in self.template.values()):
            raise ValueError("generated drafts may not live under the template key")
        if any(not d.generated for d in self.generated.values()):
            raise ValueError("template drafts may not live under the generated key")


EMPTY_BIOGRAPHIES = BiographySet({}, {})


@dataclass(frozen=True)
class BundleManifest:
    schema_version: str
    build_stamp: str
    files: Mapping[str, str]  # name -> sha256
    grid: GridSpec
    scale: tuple[int, int]
    reference_year: int
    pivot_floor: int
    config: Mapping | None = None


def _dumps(obj: object) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _scale_payload(index: ArchiveIndex) -> dict:
    return {
        "start": index.scale_start,
        "end": index.scale_end,
        "unknown_token": chrono.UNKNOWN_TOKEN,
        "steps": chrono.scale_size(index.scale_start, index.scale_end),
    }


def meta_payload(index: ArchiveIndex) -> dict:
    """The meta document: schema, stamp, grid, scale, and headline counts."""
    dated = sum(len(r.marks) for r in index.rings.rings)
    return {
        "schema_version": SCHEMA_VERSION,
        "build_stamp": index.build_stamp,
        "grid": archive.grid_to_payload(index.grid),
        "scale": _scale_payload(index),
        "reference_year": index.reference_year,
        "pivot_floor": index.pivot_floor,
        "counts": {
            "events": len(index.events),
            "dated_events": dated,
            "undated_events": index.rings.undated_count,
            "curators": len(index.curators),
            "cells": len(index.cells),
        },
    }


def _event_shards(index: ArchiveIndex, threshold: int) -> dict[str, list[dict]]:
    events = [archive.event_to_payload(e) for e in index.events]
    if len(events) <= threshold:
        return {EVENTS_FILE: events}
    shards: dict[str, list[dict]] = {}
    for event, payload in zip(index.events, events):
        bucket = chrono.decade_of(event.event_date.date)
        key = chrono.UNKNOWN_TOKEN if bucket is None else str(bucket)
        shards.setdefault(f"events-{key}.v1", []).append(payload)
    return shards


def write_bundle(index: ArchiveIndex, biographies: BiographySet | None, out_dir: str | Path,
                 *, shard_threshold: int = DEFAULT_SHARD_THRESHOLD,
                 config_echo: Mapping | None = None) -> BundleManifest:
    """Serialize an index (and biography drafts) into ``out_dir``.

    Re-running on identical input produces byte-identical files.  On any I/O
    failure the files written so far are removed before the error surfaces.
    """
    bios = biographies if biographies is not None else EMPTY_BIOGRAPHIES
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    documents: dict[str, str] = {META_FILE: _dumps(meta_payload(index))}
    payload = archive.index_to_payload(index)
    documents[CURATORS_FILE] = _dumps({"curators": payload["curators"]})
    documents[CELLS_FILE] = _dumps({"cells": payload["cells"]})
    documents[RINGS_FILE] = _dumps(payload["rings"])
    for name, events in _event_shards(index, shard_threshold).items():
        documents[name] = _dumps({"events": events})
    documents[BIOGRAPHIES_FILE] = _dumps({
        "template": {cid: draft_to_payload(d) for cid, d in sorted(bios.template.items())},
        "generated": {cid: draft_to_payload(d) for cid, d in sorted(bios.generated.items())},
    })

    manifest = BundleManifest(
        schema_version=SCHEMA_VERSION,
        build_stamp=index.build_stamp,
        files={name: _sha256(text) for name, text in sorted(documents.items())},
        grid=index.grid,
        scale=(index.scale_start, index.scale_end),
        reference_year=index.reference_year,
        pivot_floor=index.pivot_floor,
        config=config_echo,
    )
    documents[MANIFEST_FILE] = _dumps(_manifest_payload(manifest))

    written: list[Path] = []
    try:
        for name in sorted(documents):
            target = out / name
            target.write_text(documents[name], encoding="utf-8")
            written.append(target)
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        raise BundleError(f"failed writing bundle to {out}: {exc}") from exc
    return manifest


def _manifest_payload(manifest: BundleManifest) -> dict:
    return {
        "schema_version": manifest.schema_version,
        "build_stamp": manifest.build_stamp,
        "files": dict(manifest.files),
        "grid": archive.grid_to_payload(manifest.grid),
        "scale": list(manifest.scale),
        "reference_year": manifest.reference_year,
        "pivot_floor": manifest.pivot_floor,
        "config": dict(manifest.config) if manifest.config is not None else None,
    }


def _manifest_from_payload(data: Mapping) -> BundleManifest:
    return BundleManifest(
        schema_version=data["schema_version"],
        build_stamp=data["build_stamp"],
        files=dict(data["files"]),
        grid=archive.grid_from_payload(data["grid"]),
        scale=(data["scale"][0], data["scale"][1]),
        reference_year=data["reference_year"],
        pivot_floor=data["pivot_floor"],
        config=data.get("config"),
    )


def read_manifest(bundle_dir: str | Path) -> BundleManifest:
    path = Path(bundle_dir) / MANIFEST_FILE
    if not path.is_file():
        raise BundleError(f"no manifest at {path}")
    try:
        return _manifest_from_payload(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise BundleError(f"unreadable manifest at {path}: {exc}") from exc


def _read_json(bundle_dir: Path, name: str) -> dict:
    path = bundle_dir / name
    if not path.is_file():
        raise BundleError(f"bundle file missing: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"bundle file unparseable: {path}: {exc}") from exc


def _event_file_names(manifest: BundleManifest) -> list[str]:
    names = [n for n in manifest.files if n == EVENTS_FILE or
             (n.startswith("events-") and n.endswith(".v1"))]
    return sorted(names)


def load_bundle(bundle_dir: str | Path) -> tuple[ArchiveIndex, BiographySet]:
    """Reconstruct the index and biographies from a bundle directory.

    Loading what :func:`write_bundle` wrote yields an index structurally
    equal to the original, including its build stamp.
    """
    root = Path(bundle_dir)
    manifest = read_manifest(root)
    major = _SEMVER_RE.match(manifest.schema_version)
    if major is None or int(major.group(1)) != int(SCHEMA_VERSION.split(".")[0]):
        raise BundleError(
            f"unsupported bundle schema version {manifest.schema_version!r}")

    meta = _read_json(root, META_FILE)
    events: list[dict] = []
    for name in _event_file_names(manifest):
        events.extend(_read_json(root, name)["events"])
    events.sort(key=lambda e: e["id"])  # shards interleave; ids restore build order

    payload = {
        "grid": meta["grid"],
        "reference_year": meta["reference_year"],
        "pivot_floor": meta["pivot_floor"],
        "scale": [meta["scale"]["start"], meta["scale"]["end"]],
        "events": events,
        "curators": _read_json(root, CURATORS_FILE)["curators"],
        "cells": _read_json(root, CELLS_FILE)["cells"],
        "rings": _read_json(root, RINGS_FILE),
    }
    index = archive.index_from_payload(payload, build_stamp=manifest.build_stamp)

    bios_raw = _read_json(root, BIOGRAPHIES_FILE)
    biographies = BiographySet(
        template={cid: draft_from_payload(d) for cid, d in bios_raw["template"].items()},
        generated={cid: draft_from_payload(d) for cid, d in bios_raw["generated"].items()},
    )
    return index, biographies


def rewrite_biographies(bundle_dir: str | Path, biographies: BiographySet) -> BundleManifest:
    """Replace the biographies file in an existing bundle and refresh the manifest."""
    root = Path(bundle_dir)
    manifest = read_manifest(root)
    text = _dumps({
        "template": {cid: draft_to_payload(d) for cid, d in sorted(biographies.template.items())},
        "generated": {cid: draft_to_payload(d) for cid, d in sorted(biographies.generated.items())},
    })
    (root / BIOGRAPHIES_FILE).write_text(text, encoding="utf-8")
    files = dict(manifest.files)
    files[BIOGRAPHIES_FILE] = _sha256(text)
    updated = BundleManifest(
        schema_version=manifest.schema_version,
        build_stamp=manifest.build_stamp,
        files=files,
        grid=manifest.grid,
        scale=manifest.scale,
        reference_year=manifest.reference_year,
        pivot_floor=manifest.pivot_floor,
        config=manifest.config,
    )
    (root / MANIFEST_FILE).write_text(_dumps(_manifest_payload(updated)), encoding="utf-8")
    return updated


def validate_bundle(bundle_dir: str | Path) -> list[Diagnostic]:
    """Check a bundle end to end; an empty result means it is loadable.

    Verifies, in order: manifest readability, schema version, per-file
    checksums, parseability, cross-reference resolvability, conservation
    totals, and that the stored build stamp matches the content.
    """
    root = Path(bundle_dir)
    diags: list[Diagnostic] = []
    try:
        manifest = read_manifest(root)
    except BundleError as exc:
        return [Diagnostic("MANIFEST_INVALID", str(exc))]

    m = _SEMVER_RE.match(manifest.schema_version)
    if m is None:
        diags.append(Diagnostic(
            "SCHEMA_VERSION", f"not semantic versioning: {manifest.schema_version!r}"))
    elif int(m.group(1)) != int(SCHEMA_VERSION.split(".")[0]):
        diags.append(Diagnostic(
            "SCHEMA_VERSION",
            f"bundle is {manifest.schema_version}, supported major is "
            f"{SCHEMA_VERSION.split('.')[0]}"))

    clean = True
    for name, expected in sorted(manifest.files.items()):
        path = root / name
        if not path.is_file():
            diags.append(Diagnostic("FILE_MISSING", name))
            clean = False
            continue
        actual = _sha256(path.read_text(encoding="utf-8"))
        if actual != expected:
            diags.append(Diagnostic("CHECKSUM_MISMATCH", name))
            clean = False
    if not clean or diags:
        return diags

    try:
        index, _ = load_bundle(root)
        meta = _read_json(root, META_FILE)
    except (BundleError, KeyError, TypeError, ValueError) as exc:
        return diags + [Diagnostic("FILE_INVALID", str(exc))]

    diags.extend(_check_references(index))
    diags.extend(_check_conservation(index, meta))

    if meta.get("build_stamp") != manifest.build_stamp:
        diags.append(Diagnostic(
            "STAMP_MISMATCH", "meta build stamp differs from manifest"))
    recomputed = archive._stamp(index)
    if recomputed != manifest.build_stamp:
        diags.append(Diagnostic(
            "STAMP_MISMATCH", "content hash differs from recorded build stamp"))
    return diags


def _check_references(index: ArchiveIndex) -> list[Diagnostic]:
    diags = []
    curator_ids = {c.id for c in index.curators}
    event_ids = {e.event_id for e in index.events}
    for e in index.events:
        if e.curator is not None and e.curator not in curator_ids:
            diags.append(Diagnostic(
                "REF_DANGLING", f"event {e.event_id} references curator {e.curator}"))
    for ring in index.rings.rings:
        for mark in ring.marks:
            if mark not in event_ids:
                diags.append(Diagnostic(
                    "REF_DANGLING", f"ring {ring.year} references event {mark}"))
    for fp in index.footprints:
        if fp.curator not in curator_ids:
            diags.append(Diagnostic(
                "REF_DANGLING", f"footprint references curator {fp.curator}"))
    return diags


def _check_conservation(index: ArchiveIndex, meta: Mapping) -> list[Diagnostic]:
    diags = []
    located = sum(1 for e in index.events if e.cell is not None)
    cell_total = sum(c.total for c in index.cells)
    if located != cell_total:
        diags.append(Diagnostic(
            "CONSERVATION",
            f"cell histograms total {cell_total}, located events {located}"))

    attributed = sum(1 for e in index.events if e.curator is not None)
    footprint_total = sum(fp.events_total for fp in index.footprints)
    if attributed != footprint_total:
        diags.append(Diagnostic(
            "CONSERVATION",
            f"footprints total {footprint_total}, attributed events {attributed}"))

    dated = sum(1 for e in index.events if e.event_date.date.year is not None)
    ring_total = sum(len(r.marks) for r in index.rings.rings)
    if dated != ring_total or index.rings.undated_count != len(index.events) - dated:
        diags.append(Diagnostic(
            "CONSERVATION",
            f"rings hold {ring_total} marks and {index.rings.undated_count} undated, "
            f"events hold {dated} dated of {len(index.events)}"))

    counts = meta.get("counts", {})
    if counts.get("events") != len(index.events):
        diags.append(Diagnostic(
            "CONSERVATION", "meta event count differs from events file"))
    return diags
