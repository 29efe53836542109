from __future__ import annotations

import csv

import pytest

from grovebook.archive import map_layer
from grovebook.bundle import write_bundle
from grovebook.report import GREY_HEX, decade_palette, write_report

from helpers import build_rows_index, howard_richardson_rows, pipeline, row


@pytest.fixture(scope="module")
def report_dir(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("report")
    rows = howard_richardson_rows() + [
        row(acc="u-1", taxon="Quercus", x="2.5", y="7.5", checked="n/a"),
    ]
    index, _ = build_rows_index(tmp, rows)
    bundle_dir = tmp / "bundle"
    write_bundle(index, None, bundle_dir)
    out = tmp / "out"
    written = write_report(bundle_dir, out)
    return index, out, written


class TestPalette:
    def test_fifteen_steps(self):
        palette = decade_palette()
        assert len(palette) == 15
        assert len(set(palette)) == 15

    def test_ends_are_dark_green_and_deep_red(self):
        palette = decade_palette()
        first, last = palette[0], palette[-1]
        # dark green: green channel dominates; deep red: red channel dominates
        r0, g0 = int(first[1:3], 16), int(first[3:5], 16)
        r1, g1 = int(last[1:3], 16), int(last[3:5], 16)
        assert g0 > r0
        assert r1 > g1

    def test_grey_is_not_in_the_gradient(self):
        assert GREY_HEX not in decade_palette()


class TestWriteReport:
    def test_all_artifacts_written(self, report_dir):
        _, out, written = report_dir
        assert sorted(p.name for p in written) == [
            "cells.csv", "curator_spans.png", "curators.csv", "events.csv",
            "map_overview.png", "rings.csv", "rings.png"]
        for path in written:
            assert path.stat().st_size > 0

    def test_cells_csv_matches_layer(self, report_dir):
        index, out, _ = report_dir
        with (out / "cells.csv").open() as handle:
            rows = list(csv.DictReader(handle))
        layer = map_layer(index)
        assert len(rows) == len(layer)
        assert sum(int(r["count"]) for r in rows) == sum(c.count for c in layer)
        assert any(r["color_index"] == "unknown" for r in rows)

    def test_events_csv_has_one_row_per_event(self, report_dir):
        index, out, _ = report_dir
        with (out / "events.csv").open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == len(index.events)

    def test_rings_csv_counts(self, report_dir):
        index, out, _ = report_dir
        with (out / "rings.csv").open() as handle:
            rows = list(csv.DictReader(handle))
        assert [(int(r["year"]), int(r["marks"])) for r in rows] == \
               [(r.year, len(r.marks)) for r in index.rings.rings]

    def test_pngs_have_magic_bytes(self, report_dir):
        _, out, _ = report_dir
        for name in ("map_overview.png", "rings.png", "curator_spans.png"):
            assert (out / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_empty_bundle_renders(self, tmp_path):
        index, _ = pipeline([])
        bundle_dir = tmp_path / "bundle"
        write_bundle(index, None, bundle_dir)
        written = write_report(bundle_dir, tmp_path / "out")
        assert len(written) == 7
