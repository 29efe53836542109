"""Read-only HTTP API over a validated bundle.

The bundle is validated and loaded once at startup; after that every worker
thread reads the same immutable index, so responses depend only on the bundle
and the query string.  No endpoint writes anything.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import archive, chrono
from .archive import ArchiveIndex, curator_by_id, footprint, map_layer
from .bundle import BiographySet, load_bundle, meta_payload, validate_bundle
from .enrich import assemble_dossier, dossier_to_payload, draft_to_payload
from .errors import BundleError, UnknownCuratorError

log = logging.getLogger(__name__)

API_PREFIX = "/api/v1"


@dataclass(frozen=True)
class ServiceConfig:
    bundle_dir: str | Path
    bind: str = "127.0.0.1"
    port: int = 8045
    allowed_origins: tuple[str, ...] = ("*",)


class _BadQuery(ValueError):
    pass


class BundleService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, config: ServiceConfig, index: ArchiveIndex,
                 biographies: BiographySet) -> None:
        super().__init__((config.bind, config.port), _Handler)
        self.config = config
        self.index = index
        self.biographies = biographies
        self.meta = meta_payload(index)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def create_server(config: ServiceConfig) -> BundleService:
    """Validate the bundle and prepare a server; refuses invalid bundles."""
    diags = validate_bundle(config.bundle_dir)
    if diags:
        details = "; ".join(d.format() for d in diags[:5])
        raise BundleError(f"bundle failed validation, not serving: {details}")
    index, biographies = load_bundle(config.bundle_dir)
    return BundleService(config, index, biographies)


def serve(config: ServiceConfig) -> None:
    """Run the service in the foreground until interrupted."""
    server = create_server(config)
    log.info("serving %s on %s", config.bundle_dir, server.url)
    try:
        server.serve_forever()
    finally:
        server.server_close()


class _Handler(BaseHTTPRequestHandler):
    server: BundleService

    def log_message(self, fmt: str, *args) -> None:  # keep stdout/stderr quiet
        log.debug("%s %s", self.address_string(), fmt % args)

    def do_GET(self) -> None:
        parsed = urlparse(self.path)
        query = parse_qs(parsed.query)
        try:
            payload = self._route(parsed.path.rstrip("/") or "/", query)
        except _BadQuery as exc:
            self._send(400, {"error": {"code": "BAD_QUERY", "message": str(exc)}})
            return
        except (UnknownCuratorError, KeyError):
            self._send(404, {"error": {"code": "NOT_FOUND", "message": parsed.path}})
            return
        if payload is None:
            self._send(404, {"error": {"code": "NOT_FOUND", "message": parsed.path}})
        else:
            self._send(200, payload)

    def _route(self, path: str, query: dict) -> dict | None:
        index = self.server.index
        if path == "/healthz":
            return {"status": "ok", "build_stamp": index.build_stamp}
        if path == f"{API_PREFIX}/meta":
            return self.server.meta
        if path == f"{API_PREFIX}/map":
            return self._map(query)
        if path == f"{API_PREFIX}/curators":
            return self._curators()
        if path.startswith(f"{API_PREFIX}/curators/"):
            return self._curator(path.removeprefix(f"{API_PREFIX}/curators/"))
        if path.startswith(f"{API_PREFIX}/cells/"):
            return self._cell(path.removeprefix(f"{API_PREFIX}/cells/"))
        if path == f"{API_PREFIX}/rings":
            return self._rings()
        return None

    def _map(self, query: dict) -> dict:
        index = self.server.index
        decade = _decade_param(query)
        grid_mult = _int_param(query, "grid_mult", default=1, minimum=1)
        try:
            layer = map_layer(index, decade=decade, grid_mult=grid_mult)
        except ValueError as exc:
            raise _BadQuery(str(exc)) from exc
        effective = index.grid.cell_size * grid_mult
        return {
            "decade": chrono.UNKNOWN_TOKEN if decade == "unknown" else decade,
            "grid_mult": grid_mult,
            "cell_size": effective,
            "total": sum(c.count for c in layer),
            "cells": [{
                "col": c.cell.col,
                "row": c.cell.row,
                "count": c.count,
                "color": chrono.UNKNOWN_TOKEN if c.color_index is None else c.color_index,
            } for c in layer],
        }

    def _curators(self) -> dict:
        index = self.server.index
        return {"curators": [{
            "id": ident.id,
            "canonical": ident.canonical,
            "first_year": ident.first_year,
            "last_year": ident.last_year,
            "events_total": fp.events_total,
        } for ident, fp in zip(index.curators, index.footprints)]}

    def _curator(self, curator_id: str) -> dict:
        index = self.server.index
        ident = curator_by_id(index, curator_id)
        fp = footprint(index, curator_id)
        dossier = assemble_dossier(index, curator_id)
        template = self.server.biographies.template.get(curator_id)
        generated = self.server.biographies.generated.get(curator_id)
        return {
            "curator": archive.curator_to_payload(ident, fp),
            "dossier": dossier_to_payload(dossier),
            "biography": {
                "template": draft_to_payload(template) if template else None,
                "generated": draft_to_payload(generated) if generated else None,
            },
        }

    def _rings(self) -> dict:
        # marks carry their event context so clients can link a mark to the
        # curator or cell involved without a per-event endpoint
        index = self.server.index
        by_id = {e.event_id: e for e in index.events}
        rings = []
        for ring in index.rings.rings:
            marks = []
            for mark in ring.marks:
                event = by_id[mark]
                marks.append({
                    "id": event.event_id,
                    "accession": event.accession_id,
                    "date": chrono.format_date(event.event_date.date),
                    "semantics": event.event_date.semantics.value,
                    "curator": event.curator,
                    "cell": [event.cell.col, event.cell.row] if event.cell else None,
                })
            rings.append({"year": ring.year, "marks": marks})
        return {"undated": index.rings.undated_count, "rings": rings}

    def _cell(self, rest: str) -> dict | None:
        parts = rest.split("/")
        if len(parts) != 2:
            return None
        try:
            col, row = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise _BadQuery(f"cell coordinates must be integers: {rest!r}") from exc
        index = self.server.index
        for activity in index.cells:
            if activity.cell.col == col and activity.cell.row == row:
                events = [e.event_id for e in index.events
                          if e.cell is not None and e.cell == activity.cell]
                return dict(archive.cell_to_payload(activity), events=events)
        return None

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        origin = self._cors_origin()
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
        self.end_headers()
        self.wfile.write(body)

    def _cors_origin(self) -> str | None:
        allowed = self.server.config.allowed_origins
        if "*" in allowed:
            return "*"
        origin = self.headers.get("Origin")
        if origin and origin in allowed:
            return origin
        return None


def _decade_param(query: dict) -> archive.DecadeFilter:
    values = query.get("decade")
    if not values:
        return None
    raw = values[0]
    if raw == chrono.UNKNOWN_TOKEN:
        return "unknown"
    try:
        return int(raw)
    except ValueError as exc:
        raise _BadQuery(f"decade must be a start year or 'unknown': {raw!r}") from exc


def _int_param(query: dict, name: str, default: int, minimum: int) -> int:
    values = query.get(name)
    if not values:
        return default
    try:
        value = int(values[0])
    except ValueError as exc:
        raise _BadQuery(f"{name} must be an integer: {values[0]!r}") from exc
    if value < minimum:
        raise _BadQuery(f"{name} must be >= {minimum}")
    return value
