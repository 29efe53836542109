"""Command-line pipeline: ingest, build, validate, serve, enrich, report.

Data irregularities never abort a run; they are summarized on standard error
and recorded as diagnostics.  Only structural problems (missing file, invalid
config, broken bundle) are fatal.  Exit codes: 0 success, 1 fatal, 2 config
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from . import chrono
from .archive import build_index
from .bundle import (
    DEFAULT_SHARD_THRESHOLD,
    BiographySet,
    BundleManifest,
    load_bundle,
    rewrite_biographies,
    validate_bundle,
    write_bundle,
)
from .diagnostics import Diagnostic, emit, errors_of, warnings_of
from .enrich import (
    GeneratorConfig,
    assemble_dossier,
    external_generate,
    render_template_biography,
)
from .entities import cluster_variants, collect_variants
from .errors import ConfigError, GrovebookError
from .ingest import ROLES, SourceDescriptor, dedupe_accessions, load_corpus
from .report import write_report
from .service import ServiceConfig, serve
from .spatial import GridSpec


@dataclass
class PipelineConfig:
    """Everything one build needs; echoed into the bundle manifest."""

    sources: list[SourceDescriptor] = field(default_factory=list)
    out_dir: str = "bundle"
    grid_size: float = 5.0
    origin: tuple[float, float] = (0.0, 0.0)
    reference_year: int = chrono.DEFAULT_REFERENCE_YEAR
    pivot_floor: int = chrono.PIVOT_FLOOR
    scale_start: int = chrono.SCALE_START
    scale_end: int = chrono.SCALE_END
    generator_url: str | None = None
    generator_timeout: float = 5.0
    shard_threshold: int = DEFAULT_SHARD_THRESHOLD

    def echo(self) -> dict:
        return {
            "sources": [{
                "path": str(s.path),
                "format": s.format,
                "delimiter": s.delimiter,
                "column_map": dict(s.column_map),
            } for s in self.sources],
            "out_dir": self.out_dir,
            "grid_size": self.grid_size,
            "origin": list(self.origin),
            "reference_year": self.reference_year,
            "pivot_floor": self.pivot_floor,
            "scale": [self.scale_start, self.scale_end],
            "generator_url": self.generator_url,
            "generator_timeout": self.generator_timeout,
            "shard_threshold": self.shard_threshold,
        }


_CONFIG_KEYS = {"sources", "out", "grid_size", "origin", "reference_year", "pivot_floor",
                "scale", "generator_url", "generator_timeout", "shard_threshold"}


def load_config(path: str | Path) -> PipelineConfig:
    """Parse a JSON config file; unknown keys are config errors, not typos to guess at."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    config = PipelineConfig()
    try:
        for src in raw.get("sources", []):
            config.sources.append(SourceDescriptor(
                path=src["path"],
                format=src.get("format", "delimited"),
                delimiter=src.get("delimiter", ","),
                column_map=src.get("column_map", {}),
            ))
        config.out_dir = raw.get("out", config.out_dir)
        config.grid_size = float(raw.get("grid_size", config.grid_size))
        origin = raw.get("origin", list(config.origin))
        config.origin = (float(origin[0]), float(origin[1]))
        config.reference_year = int(raw.get("reference_year", config.reference_year))
        config.pivot_floor = int(raw.get("pivot_floor", config.pivot_floor))
        scale = raw.get("scale", [config.scale_start, config.scale_end])
        config.scale_start, config.scale_end = int(scale[0]), int(scale[1])
        config.generator_url = raw.get("generator_url", config.generator_url)
        config.generator_timeout = float(raw.get("generator_timeout",
                                                 config.generator_timeout))
        config.shard_threshold = int(raw.get("shard_threshold", config.shard_threshold))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc
    return config


def default_descriptor(path: str | Path, delimiter: str = ",") -> SourceDescriptor:
    """Descriptor for a file whose header already uses the canonical role names."""
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"input file not found: {path}")
    with file_path.open("r", encoding="utf-8", newline="") as handle:
        header = next(csv.reader(handle, delimiter=delimiter), [])
    column_map = {col.strip().lower(): col for col in header
                  if col.strip().lower() in ROLES}
    if not column_map:
        raise ConfigError(
            f"no canonical column names found in header of {path}; "
            "provide a config file with an explicit column_map")
    return SourceDescriptor(path=file_path, delimiter=delimiter, column_map=column_map)


def run_build(config: PipelineConfig,
              diagnostics: list[Diagnostic]) -> tuple[BundleManifest, int]:
    """The full pipeline: sources to bundle.  Returns the manifest and event count."""
    records = []
    for source in config.sources:
        loaded, diags = load_corpus(source)
        records.extend(loaded)
        diagnostics.extend(diags)
    records, dedupe_diags = dedupe_accessions(records)
    diagnostics.extend(dedupe_diags)

    clusters = cluster_variants(collect_variants(r.raw_checked_by for r in records))
    index = build_index(
        records, clusters,
        GridSpec(config.origin, config.grid_size),
        config.reference_year,
        pivot_floor=config.pivot_floor,
        scale_start=config.scale_start,
        scale_end=config.scale_end,
        diagnostics=diagnostics,
    )

    generator = (GeneratorConfig(config.generator_url, config.generator_timeout)
                 if config.generator_url else None)
    template = {}
    generated = {}
    for curator in index.curators:
        dossier = assemble_dossier(index, curator.id)
        template[curator.id] = render_template_biography(dossier)
        if generator is not None:
            draft = external_generate(dossier, generator, diagnostics)
            if draft.generated:
                generated[curator.id] = draft

    manifest = write_bundle(
        index, BiographySet(template, generated), config.out_dir,
        shard_threshold=config.shard_threshold, config_echo=config.echo())
    return manifest, len(index.events)


def _summarize(diagnostics: list[Diagnostic], stream: TextIO) -> None:
    if not diagnostics:
        return
    emit(diagnostics, stream)
    print(f"{len(diagnostics)} diagnostics "
          f"({len(errors_of(diagnostics))} errors, "
          f"{len(warnings_of(diagnostics))} warnings)", file=stream)


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    if getattr(args, "input", None):
        config.sources.append(default_descriptor(args.input, args.delimiter))
    if getattr(args, "out", None):
        config.out_dir = args.out
    if getattr(args, "grid_size", None) is not None:
        config.grid_size = args.grid_size
    if getattr(args, "reference_year", None) is not None:
        config.reference_year = args.reference_year
    if getattr(args, "generator_url", None):
        config.generator_url = args.generator_url
    return config


def _cmd_ingest(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    if not config.sources:
        raise ConfigError("no sources given; use --input or a config file")
    diagnostics: list[Diagnostic] = []
    records = []
    for source in config.sources:
        loaded, diags = load_corpus(source)
        records.extend(loaded)
        diagnostics.extend(diags)
    before = len(records)
    records, dedupe_diags = dedupe_accessions(records)
    diagnostics.extend(dedupe_diags)
    _summarize(diagnostics, sys.stderr)
    print(f"{before} records ingested, {len(records)} after merging, "
          f"{len(diagnostics)} diagnostics")
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    diagnostics: list[Diagnostic] = []
    manifest, n_events = run_build(config, diagnostics)
    _summarize(diagnostics, sys.stderr)
    print(f"bundle written to {config.out_dir}")
    print(f"build stamp {manifest.build_stamp}")
    print(f"{n_events} events, {len(manifest.files)} files")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    diagnostics = validate_bundle(args.bundle)
    if diagnostics:
        emit(diagnostics, sys.stderr)
        print(f"bundle at {args.bundle} failed validation "
              f"({len(diagnostics)} diagnostics)")
        return 1
    print(f"bundle at {args.bundle} is valid")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    config = ServiceConfig(
        bundle_dir=args.bundle,
        bind=args.bind,
        port=args.serve_port,
        allowed_origins=tuple(args.origin) if args.origin else ("*",),
    )
    try:
        serve(config)
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_enrich(args: argparse.Namespace) -> int:
    index, bios = load_bundle(args.bundle)
    generator = GeneratorConfig(args.generator_url, args.timeout) \
        if args.generator_url else None
    diagnostics: list[Diagnostic] = []
    template = {}
    generated = dict(bios.generated)
    for curator in index.curators:
        dossier = assemble_dossier(index, curator.id)
        template[curator.id] = render_template_biography(dossier)
        if generator is not None:
            draft = external_generate(dossier, generator, diagnostics)
            if draft.generated:
                generated[curator.id] = draft
    rewrite_biographies(args.bundle, BiographySet(template, generated))
    _summarize(diagnostics, sys.stderr)
    print(f"biographies regenerated for {len(template)} curators "
          f"({len(generated)} generated drafts)")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    written = write_report(args.bundle, args.out, top_curators=args.top)
    for path in written:
        print(path)
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grovebook",
        description="Harmonize botanical accession archives and explore them.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON pipeline config file")
        p.add_argument("--input", help="delimited source file with canonical column names")
        p.add_argument("--delimiter", default=",", help="delimiter for --input (default ,)")

    p_ingest = sub.add_parser("ingest", help="load sources and report diagnostics")
    add_common(p_ingest)
    p_ingest.set_defaults(func=_cmd_ingest)

    p_build = sub.add_parser("build", help="run the full pipeline into a bundle")
    add_common(p_build)
    p_build.add_argument("--out", help="bundle output directory")
    p_build.add_argument("--grid-size", type=float, dest="grid_size")
    p_build.add_argument("--reference-year", type=int, dest="reference_year")
    p_build.add_argument("--generator-url", dest="generator_url")
    p_build.set_defaults(func=_cmd_build)

    p_validate = sub.add_parser("validate", help="check a bundle")
    p_validate.add_argument("bundle", help="bundle directory")
    p_validate.set_defaults(func=_cmd_validate)

    p_serve = sub.add_parser("serve", help="serve a bundle read-only over HTTP")
    p_serve.add_argument("bundle", help="bundle directory")
    p_serve.add_argument("--serve-port", type=int, default=8045)
    p_serve.add_argument("--bind", default="127.0.0.1")
    p_serve.add_argument("--origin", action="append",
                         help="allowed CORS origin (repeatable; default *)")
    p_serve.set_defaults(func=_cmd_serve)

    p_enrich = sub.add_parser("enrich", help="regenerate biographies in a bundle")
    p_enrich.add_argument("bundle", help="bundle directory")
    p_enrich.add_argument("--generator-url", dest="generator_url")
    p_enrich.add_argument("--timeout", type=float, default=5.0)
    p_enrich.set_defaults(func=_cmd_enrich)

    p_report = sub.add_parser("report", help="write CSV summaries and figures")
    p_report.add_argument("bundle", help="bundle directory")
    p_report.add_argument("--out", required=True, help="report output directory")
    p_report.add_argument("--top", type=int, default=10,
                          help="curators on the span chart")
    p_report.set_defaults(func=_cmd_report)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except GrovebookError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
