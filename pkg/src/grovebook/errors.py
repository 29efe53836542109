"""Exception types for conditions that abort an operation."""

from __future__ import annotations


class GrovebookError(Exception):
    """Base class for all fatal pipeline errors."""


class ConfigError(GrovebookError):
    """Configuration file or flags are structurally invalid."""


class SourceError(GrovebookError):
    """A source file is missing or its header does not match the column map."""


class BundleError(GrovebookError):
    """A bundle cannot be written, read, or fails validation."""


class UnknownCuratorError(GrovebookError, KeyError):
    """Lookup of a curator id that does not exist in the index."""


class CorruptCoordinateError(GrovebookError, ValueError):
    """A coordinate is non-finite; signals a corrupt record upstream."""
