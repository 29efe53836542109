"""Grid discretization of planar coordinates.

Coordinates are assumed to be already projected onto the site map; the grid
is a partition of the plane into half-open square cells, so every finite
point lands in exactly one cell and boundary points belong to the higher
cell.  "Grid size" means the cell edge length in map units (5 is the fine
default, 20 the coarse comparison).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CorruptCoordinateError

Point = tuple[float, float]


@dataclass(frozen=True, order=True)
class CellId:
    col: int
    row: int


@dataclass(frozen=True)
class GridSpec:
    origin: Point = (0.0, 0.0)
    cell_size: float = 5.0
    bbox: tuple[float, float, float, float] | None = None  # minx, miny, maxx, maxy

    def __post_init__(self) -> None:
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        if self.bbox is not None:
            minx, miny, maxx, maxy = self.bbox
            if not (minx <= self.origin[0] <= maxx and miny <= self.origin[1] <= maxy):
                raise ValueError("bbox must contain the origin")


def cell_of(point: Point, grid: GridSpec) -> CellId:
    """Cell containing a point; raises on non-finite coordinates."""
    x, y = point
    if not (math.isfinite(x) and math.isfinite(y)):
        raise CorruptCoordinateError(f"non-finite coordinate: {point!r}")
    return CellId(
        col=math.floor((x - grid.origin[0]) / grid.cell_size),
        row=math.floor((y - grid.origin[1]) / grid.cell_size),
    )


def bin_points(points: Iterable[Point], grid: GridSpec) -> dict[CellId, int]:
    """Histogram of points per cell."""
    counts: dict[CellId, int] = {}
    for p in points:
        cell = cell_of(p, grid)
        counts[cell] = counts.get(cell, 0) + 1
    return counts


def grid_multiple(source_size: float, target_size: float) -> int:
    """The integer factor between two grid sizes; refuses lossy ratios."""
    ratio = target_size / source_size
    k = round(ratio)
    if k < 1 or abs(ratio - k) > 1e-9:
        raise ValueError(
            f"target size {target_size} is not an integer multiple of {source_size}")
    return k


def coarsen_cell(cell: CellId, k: int) -> CellId:
    # floor division keeps negative indices consistent with cell_of geometry
    return CellId(cell.col // k, cell.row // k)


def regrid(counts: Mapping[CellId, int], source_size: float,
           target_size: float) -> dict[CellId, int]:
    """Aggregate per-cell counts onto a coarser grid with the same origin.

    The target size must be an exact integer multiple of the source size;
    totals are conserved exactly.
    """
    k = grid_multiple(source_size, target_size)
    coarse: dict[CellId, int] = {}
    for cell, n in counts.items():
        target = coarsen_cell(cell, k)
        coarse[target] = coarse.get(target, 0) + n
    return coarse


def bbox_of(points: Iterable[Point], origin: Point) -> tuple[float, float, float, float]:
    """Bounding box of the points, widened to contain the grid origin."""
    minx, miny = origin
    maxx, maxy = origin
    for x, y in points:
        minx, maxx = min(minx, x), max(maxx, x)
        miny, maxy = min(miny, y), max(maxy, y)
    return (minx, miny, maxx, maxy)
