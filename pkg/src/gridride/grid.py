"""Road lattice and the spatial primitives everything else runs on.

A grid is a rectangle of unit cells, each either road or not, with some road
cells marked as intersections.  Agents live at continuous (x, y) positions in
cell units; the cell containing a point is found by flooring each coordinate.
Headings are degrees counterclockwise from the +x axis, normalized to
[0, 360).  Row 0 of a grid document is y = 0, so y grows downward on the page
but nothing in the model cares about that.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field


# Document characters.
CHAR_EMPTY = "."
CHAR_ROAD = "#"
CHAR_INTERSECTION = "+"
CHAR_COMMENT = "!"

# Intersections needed for the rider origin/destination machinery to work.
MIN_INTERSECTIONS = 2


class GridError(ValueError):
    """Base class for grid construction and parsing failures."""


class EmptyDocumentError(GridError):
    """Grid document contained no raster rows."""


class RaggedRowsError(GridError):
    """Grid document rows are not all the same width."""


class UnknownCharacterError(GridError):
    """Grid document used a character outside the format."""


class TooFewIntersectionsError(GridError):
    """Usable grids need at least two intersections."""


class NoIntersectionsError(GridError):
    """Asked for a random intersection on a grid without any."""


class InvalidSpacingError(GridError):
    """Synthetic grid parameters cannot produce a lattice."""


class DegenerateGridError(GridError):
    """Grid cannot support the operation (e.g. only one usable intersection)."""


@dataclass(frozen=True)
class RoadGrid:
    """Immutable road lattice.

    ``roads`` is a row-major bytearray of 0/1 road flags and
    ``intersection_flags`` the same for intersections (every intersection is
    also a road).  ``intersections`` lists intersection cells in row-major
    order; its indexing order is what makes intersection sampling
    reproducible.
    """

    width: int
    height: int
    roads: bytes
    intersection_flags: bytes
    intersections: tuple[tuple[int, int], ...] = field(repr=False)

    def is_road(self, cx: int, cy: int) -> bool:
        """Road flag of cell (cx, cy); off-grid cells are not road."""
        if cx < 0 or cy < 0 or cx >= self.width or cy >= self.height:
            return False
        return bool(self.roads[cy * self.width + cx])

    def is_intersection(self, cx: int, cy: int) -> bool:
        if cx < 0 or cy < 0 or cx >= self.width or cy >= self.height:
            return False
        return bool(self.intersection_flags[cy * self.width + cx])

    def is_road_at(self, x: float, y: float) -> bool:
        """Road flag of the cell containing continuous point (x, y)."""
        if x < 0.0 or y < 0.0 or x >= self.width or y >= self.height:
            return False
        return bool(self.roads[int(y) * self.width + int(x)])

    @classmethod
    def from_cells(
        cls,
        width: int,
        height: int,
        road_cells: set[tuple[int, int]],
        intersection_cells: set[tuple[int, int]] = frozenset(),
    ) -> "RoadGrid":
        """Low-level constructor from explicit cell sets.

        Does not enforce the two-intersection minimum; the document parser and
        the synthetic generator do.  Intersection cells are implicitly road.
        """
        if width <= 0 or height <= 0:
            raise GridError(f"grid dimensions must be positive, got {width}x{height}")
        roads = bytearray(width * height)
        inter = bytearray(width * height)
        for (cx, cy) in road_cells | set(intersection_cells):
            if not (0 <= cx < width and 0 <= cy < height):
                raise GridError(f"cell ({cx}, {cy}) outside {width}x{height} grid")
            roads[cy * width + cx] = 1
        for (cx, cy) in intersection_cells:
            inter[cy * width + cx] = 1
        intersections = tuple(
            (cx, cy)
            for cy in range(height)
            for cx in range(width)
            if inter[cy * width + cx]
        )
        return cls(width, height, bytes(roads), bytes(inter), intersections)


def load_grid(document: str) -> RoadGrid:
    """Parse a grid document into a RoadGrid.

    Format: one raster row per line, top row first; ``.`` empty, ``#`` road,
    ``+`` intersection (which is also road); lines starting with ``!`` are
    comments and ignored.  A single trailing newline is tolerated.
    """
    lines = document.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # trailing newline
    rows = [line for line in lines if not line.startswith(CHAR_COMMENT)]
    if not rows:
        raise EmptyDocumentError("grid document has no raster rows")
    width = len(rows[0])
    if width == 0:
        raise EmptyDocumentError("grid document rows are empty")
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRowsError(
                f"row {i} has width {len(row)}, expected {width}"
            )
    height = len(rows)
    roads = bytearray(width * height)
    inter = bytearray(width * height)
    intersections: list[tuple[int, int]] = []
    for cy, row in enumerate(rows):
        base = cy * width
        for cx, ch in enumerate(row):
            if ch == CHAR_EMPTY:
                continue
            if ch == CHAR_ROAD:
                roads[base + cx] = 1
            elif ch == CHAR_INTERSECTION:
                roads[base + cx] = 1
                inter[base + cx] = 1
                intersections.append((cx, cy))
            else:
                raise UnknownCharacterError(
                    f"unknown character {ch!r} at row {cy}, column {cx}"
                )
    if len(intersections) < MIN_INTERSECTIONS:
        raise TooFewIntersectionsError(
            f"grid has {len(intersections)} intersections, "
            f"need at least {MIN_INTERSECTIONS}"
        )
    return RoadGrid(width, height, bytes(roads), bytes(inter), tuple(intersections))


def serialize_grid(grid: RoadGrid) -> str:
    """Canonical document for a grid: no comments, one trailing newline.

    ``load_grid(serialize_grid(g))`` reproduces g exactly, and serializing
    again yields the byte-identical document.
    """
    out: list[str] = []
    for cy in range(grid.height):
        base = cy * grid.width
        row = []
        for cx in range(grid.width):
            if grid.intersection_flags[base + cx]:
                row.append(CHAR_INTERSECTION)
            elif grid.roads[base + cx]:
                row.append(CHAR_ROAD)
            else:
                row.append(CHAR_EMPTY)
        out.append("".join(row))
    return "\n".join(out) + "\n"


def generate_street_grid(width: int, height: int, spacing: int) -> RoadGrid:
    """Synthetic street lattice: road rows/columns every ``spacing`` cells.

    Cells with x % spacing == 0 or y % spacing == 0 are road; cells where both
    hold are intersections.  Needs spacing >= 2 and both dimensions big
    enough for at least two road lines each way.
    """
    if spacing < 2:
        raise InvalidSpacingError(f"spacing must be >= 2, got {spacing}")
    if width < spacing + 1 or height < spacing + 1:
        raise InvalidSpacingError(
            f"{width}x{height} grid too small for spacing {spacing}; "
            f"need at least {spacing + 1} cells each way"
        )
    roads = bytearray(width * height)
    inter = bytearray(width * height)
    intersections: list[tuple[int, int]] = []
    for cy in range(height):
        base = cy * width
        on_row = cy % spacing == 0
        for cx in range(width):
            on_col = cx % spacing == 0
            if on_row or on_col:
                roads[base + cx] = 1
                if on_row and on_col:
                    inter[base + cx] = 1
                    intersections.append((cx, cy))
    return RoadGrid(width, height, bytes(roads), bytes(inter), tuple(intersections))


def random_intersection(grid: RoadGrid, rng) -> tuple[float, float]:
    """Center point of a uniformly chosen intersection (one RNG draw)."""
    n = len(grid.intersections)
    if n == 0:
        raise NoIntersectionsError("grid has no intersections")
    cx, cy = grid.intersections[rng.randrange(n)]
    return (cx + 0.5, cy + 0.5)


# ---------------------------------------------------------------------------
# headings and bearings
# ---------------------------------------------------------------------------

def normalize_heading(degrees: float) -> float:
    """Fold a heading into [0, 360)."""
    h = math.fmod(degrees, 360.0)
    if h < 0.0:
        h += 360.0
    return h


def bearing(from_x: float, from_y: float, to_x: float, to_y: float) -> float:
    """Heading in [0, 360) pointing from one point toward another.

    Undefined (returns 0.0) when the points coincide; callers that care check
    for coincidence first.
    """
    if from_x == to_x and from_y == to_y:
        return 0.0
    return normalize_heading(math.degrees(math.atan2(to_y - from_y, to_x - from_x)))


def cell_ahead_is_road(grid: RoadGrid, x: float, y: float, heading: float) -> bool:
    """Whether the point exactly 1.0 ahead on ``heading`` is in a road cell."""
    rad = math.radians(heading)
    return grid.is_road_at(x + math.cos(rad), y + math.sin(rad))


# ---------------------------------------------------------------------------
# nearest-agent queries
# ---------------------------------------------------------------------------

def nearest_agent(
    x: float,
    y: float,
    candidates,
    radius: float,
    exclude=frozenset(),
) -> tuple[int, float, float] | None:
    """Linear-scan nearest candidate within ``radius`` of (x, y).

    ``candidates`` is an iterable of (id, x, y).  Distance is Euclidean,
    compared as squared distance; exact ties go to the lowest id.  Returns
    (id, x, y) or None.  This is the reference form of the query; the bucket
    index below must match it answer-for-answer.
    """
    r2 = radius * radius
    best: tuple[float, int, float, float] | None = None
    for cid, cx, cy in candidates:
        if cid in exclude:
            continue
        dx = cx - x
        dy = cy - y
        d2 = dx * dx + dy * dy
        if d2 <= r2 and (best is None or (d2, cid) < (best[0], best[1])):
            best = (d2, cid, cx, cy)
    if best is None:
        return None
    return (best[1], best[2], best[3])


class NeighborIndex:
    """Uniform-bucket spatial hash for fixed-radius nearest queries.

    Bucket size equals the query radius, so any point within that radius of a
    query lies in the 3x3 block of buckets around it.  Results are exactly
    the linear scan's: same squared-distance comparison, same lowest-id
    tie-break.
    """

    __slots__ = ("radius", "_r2", "_buckets")

    def __init__(self, entries, radius: float):
        if radius <= 0.0:
            raise ValueError(f"radius must be positive, got {radius}")
        self.radius = radius
        self._r2 = radius * radius
        buckets: dict[tuple[int, int], list[tuple[int, float, float]]] = defaultdict(list)
        for cid, cx, cy in entries:
            buckets[(math.floor(cx / radius), math.floor(cy / radius))].append(
                (cid, cx, cy)
            )
        self._buckets = dict(buckets)

    def nearest(
        self, x: float, y: float, exclude=frozenset()
    ) -> tuple[int, float, float] | None:
        """Nearest entry within the index radius of (x, y), or None."""
        # Bucket bounds derived from the acceptance test itself: any entry
        # with rounded squared distance <= r^2 lies within r*(1+eps) per
        # axis, so scanning the buckets covering [coord - reach, coord +
        # reach] can never miss one — including entries at exactly the
        # radius across a bucket boundary, where a fixed 3x3 scan can.
        radius = self.radius
        reach = radius * (1.0 + 1e-12)
        x_lo = math.floor((x - reach) / radius)
        x_hi = math.floor((x + reach) / radius)
        y_lo = math.floor((y - reach) / radius)
        y_hi = math.floor((y + reach) / radius)
        buckets = self._buckets
        r2 = self._r2
        best_d2 = r2
        best_id = -1
        best_x = 0.0
        best_y = 0.0
        found = False
        for gy in range(y_lo, y_hi + 1):
            for gx in range(x_lo, x_hi + 1):
                cell = buckets.get((gx, gy))
                if not cell:
                    continue
                for cid, cx, cy in cell:
                    if cid in exclude:
                        continue
                    dx = cx - x
                    dy = cy - y
                    d2 = dx * dx + dy * dy
                    if d2 > r2:
                        continue
                    if not found or d2 < best_d2 or (d2 == best_d2 and cid < best_id):
                        found = True
                        best_d2 = d2
                        best_id = cid
                        best_x = cx
                        best_y = cy
        if not found:
            return None
        return (best_id, best_x, best_y)
