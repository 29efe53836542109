#!/usr/bin/env python3
"""Capture API responses from a freshly built bundle into test fixtures.

The explorer's tests run against these frozen wire-format payloads, so the
UI is exercised against exactly what the service emits.  Re-run after any
bundle or API schema change:

    python3 frontend/scripts/capture_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
import threading
import urllib.request
from pathlib import Path

from grovebook.archive import build_index
from grovebook.bundle import BiographySet, write_bundle
from grovebook.enrich import assemble_dossier, render_template_biography
from grovebook.entities import cluster_variants, collect_variants
from grovebook.ingest import RawRecord
from grovebook.service import ServiceConfig, create_server
from grovebook.spatial import GridSpec

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures"

HOWARD = ["R. A. Howard", "Richard Alden Howard", "Richard A. Howard"]
RICHARDSON = ["Kathryn Richardson", "K. Richardson"]


def fixture_records() -> list[RawRecord]:
    records = []
    line = 2
    for i in range(24):
        records.append(RawRecord(
            source_line=line, accession_id=f"h-{i:02d}", taxon="Acer griseum",
            coords=(str(5 * i + 2.5), "52.5"),
            raw_dates=(("date_checked", str(1954 + i)),),
            raw_checked_by=HOWARD[i % 3], raw_note=""))
        line += 1
    for i in range(6):
        records.append(RawRecord(
            source_line=line, accession_id=f"r-{i:02d}", taxon="Tsuga canadensis",
            coords=(str(2.5 + 5 * (i % 3)), "2.5"),
            raw_dates=(("date_checked", str(1968 + i // 3)),),
            raw_checked_by=RICHARDSON[i % 2], raw_note=""))
        line += 1
    records.append(RawRecord(
        source_line=line, accession_id="m-1", taxon="Quercus alba",
        coords=("2.5", "7.5"), raw_dates=(("date_planted", "1899"),),
        raw_checked_by="J. Malmstedt", raw_note="WDS, TM '99"))
    records.append(RawRecord(
        source_line=line + 1, accession_id="m-2", taxon="Quercus alba", coords=None,
        raw_dates=(("date_checked", "n/a"),), raw_checked_by="Johan M.",
        raw_note="moved to peters hill 1905"))
    return records


def main() -> None:
    records = fixture_records()
    clusters = cluster_variants(collect_variants(r.raw_checked_by for r in records))
    index = build_index(records, clusters, GridSpec((0.0, 0.0), 5.0), 2019)
    bios = BiographySet(template={
        c.id: render_template_biography(assemble_dossier(index, c.id))
        for c in index.curators})

    with tempfile.TemporaryDirectory() as tmp:
        bundle_dir = Path(tmp) / "bundle"
        write_bundle(index, bios, bundle_dir)
        server = create_server(ServiceConfig(bundle_dir=bundle_dir, port=0))
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            howard = next(c.id for c in index.curators
                          if c.canonical == "Richard Alden Howard")
            captures = {
                "meta.json": "/api/v1/meta",
                "map.json": "/api/v1/map",
                "map_1870.json": "/api/v1/map?decade=1870",
                "map_unknown.json": "/api/v1/map?decade=unknown",
                "map_mult4.json": "/api/v1/map?grid_mult=4",
                "curators.json": "/api/v1/curators",
                "curator_howard.json": f"/api/v1/curators/{howard}",
                "rings.json": "/api/v1/rings",
            }
            OUT.mkdir(parents=True, exist_ok=True)
            for name, path in captures.items():
                with urllib.request.urlopen(server.url + path) as response:
                    payload = json.loads(response.read())
                target = OUT / name
                target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                  encoding="utf-8")
                print(f"wrote {target}")
        finally:
            server.shutdown()
            thread.join()


if __name__ == "__main__":
    main()
