"""grovebook: harmonization engine and explorer service for botanical accession archives.

The pipeline runs ingest -> chronology/annotation/name harmonization ->
spatial gridding -> an immutable archive index -> enrichment -> a versioned
bundle, which a read-only HTTP service and the report renderer consume.
"""

from .archive import ArchiveIndex, Event, build_index, footprint, map_layer, ring_layout
from .bundle import BiographySet, load_bundle, validate_bundle, write_bundle
from .chrono import PartialDate, Semantics, parse_date
from .entities import CuratorIdentity, cluster_variants, collect_variants, compatible
from .ingest import RawRecord, SourceDescriptor, dedupe_accessions, load_corpus
from .spatial import CellId, GridSpec, cell_of, regrid

__version__ = "0.1.0"

__all__ = [
    "ArchiveIndex",
    "BiographySet",
    "CellId",
    "CuratorIdentity",
    "Event",
    "GridSpec",
    "PartialDate",
    "RawRecord",
    "Semantics",
    "SourceDescriptor",
    "build_index",
    "cell_of",
    "cluster_variants",
    "collect_variants",
    "compatible",
    "dedupe_accessions",
    "footprint",
    "load_bundle",
    "load_corpus",
    "map_layer",
    "parse_date",
    "regrid",
    "ring_layout",
    "validate_bundle",
    "write_bundle",
]
