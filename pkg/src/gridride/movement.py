"""Per-tick movement: random search, repulsion search, destination steering.

All three share one accept rule: a heading is usable only if the probe point
1.0 ahead AND the landing point one step ahead are both in road cells.  With
a full-cell step the two points coincide; with shorter steps the extra
landing check is what keeps drivers from cutting corners off the road.
Drivers that find no usable heading stay put for the tick and keep the last
heading they drew.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .grid import NeighborIndex, RoadGrid, bearing, normalize_heading

# Attempt budgets.  Random search redraws a full-circle heading up to 36
# times; repulsion search first tries 8 nudges around the away heading before
# falling back to the full-circle draw; destination steering perturbs the
# desired bearing up to 36 times.
FULL_CIRCLE_ATTEMPTS = 36
AWAY_NUDGE_ATTEMPTS = 8
PERTURB_HALF_RANGE = 45.0


class PolicyKind(str, Enum):
    RANDOM = "random"
    VORONOI = "voronoi"


@dataclass(frozen=True)
class MovementPolicy:
    """Which idle-search policy a run uses, plus its vision radius."""

    kind: PolicyKind
    voronoi_vision: float = 3.0

    def __post_init__(self) -> None:
        if self.kind is PolicyKind.VORONOI and not self.voronoi_vision > 0.0:
            raise ValueError(
                f"voronoi_vision must be positive, got {self.voronoi_vision}"
            )


@dataclass(frozen=True)
class StepParams:
    """Per-tick advance distance, in cells."""

    step_length: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 < self.step_length <= 1.0):
            raise ValueError(
                f"step_length must be in (0, 1], got {self.step_length}"
            )


def _landing(
    grid: RoadGrid, x: float, y: float, heading: float, step_length: float
) -> tuple[float, float] | None:
    """Landing point for a heading, or None if the heading is blocked."""
    rad = math.radians(heading)
    c = math.cos(rad)
    s = math.sin(rad)
    if not grid.is_road_at(x + c, y + s):
        return None
    lx = x + c * step_length
    ly = y + s * step_length
    if not grid.is_road_at(lx, ly):
        return None
    return (lx, ly)


def random_search_step(
    driver, grid: RoadGrid, params: StepParams, rng: random.Random
) -> None:
    """Advance on the current heading, redrawing it while blocked.

    Keeps the current heading when it works (no draw); otherwise draws fresh
    uniform headings until one works or the budget runs out, in which case
    the driver stays put with the last drawn heading.
    """
    step = params.step_length
    landing = _landing(grid, driver.x, driver.y, driver.heading, step)
    if landing is None:
        for _ in range(FULL_CIRCLE_ATTEMPTS):
            driver.heading = rng.uniform(0.0, 360.0)
            landing = _landing(grid, driver.x, driver.y, driver.heading, step)
            if landing is not None:
                break
        else:
            return
    driver.x, driver.y = landing


def voronoi_search_step(
    driver,
    neighbors: NeighborIndex,
    grid: RoadGrid,
    params: StepParams,
    rng: random.Random,
) -> None:
    """Move directly away from the nearest visible driver.

    No visible neighbor means plain random search (identical draws, so the
    two policies coincide on a lone driver).  With a neighbor, the desired
    heading points away from it — a fresh uniform draw if the neighbor sits
    at exactly zero distance.  Blocked recovery: nudge the away heading
    within +/-45 degrees a few times, then fall back to full-circle redraws,
    then stay put.
    """
    found = neighbors.nearest(driver.x, driver.y, exclude={driver.id})
    if found is None:
        random_search_step(driver, grid, params, rng)
        return
    _, nx, ny = found
    if nx == driver.x and ny == driver.y:
        desired = rng.uniform(0.0, 360.0)
    else:
        desired = bearing(nx, ny, driver.x, driver.y)
    step = params.step_length
    driver.heading = desired
    landing = _landing(grid, driver.x, driver.y, desired, step)
    if landing is None:
        for _ in range(AWAY_NUDGE_ATTEMPTS):
            driver.heading = normalize_heading(
                desired + rng.uniform(-PERTURB_HALF_RANGE, PERTURB_HALF_RANGE)
            )
            landing = _landing(grid, driver.x, driver.y, driver.heading, step)
            if landing is not None:
                break
        else:
            for _ in range(FULL_CIRCLE_ATTEMPTS):
                driver.heading = rng.uniform(0.0, 360.0)
                landing = _landing(grid, driver.x, driver.y, driver.heading, step)
                if landing is not None:
                    break
            else:
                return
    driver.x, driver.y = landing


def destination_step(
    driver,
    grid: RoadGrid,
    params: StepParams,
    rng: random.Random,
    dropoff_radius: float,
) -> bool:
    """One carrying-phase step toward the trip destination.

    Returns True (without moving) once the driver is within the drop-off
    radius.  Otherwise steers along the bearing to the destination; while
    blocked, each retry rotates a further +/-45 degrees from the previous
    attempt.  Composing the rotations matters: around a fixed bearing the
    +/-45 cone can be permanently wall-facing on a street grid (destination
    straight across a block), whereas the accumulated walk always finds the
    cross street.  A driver whose whole budget fails waits out the tick.
    """
    dest_x, dest_y = driver.trip_destination
    dx = dest_x - driver.x
    dy = dest_y - driver.y
    if dx * dx + dy * dy <= dropoff_radius * dropoff_radius:
        return True
    step = params.step_length
    driver.heading = bearing(driver.x, driver.y, dest_x, dest_y)
    landing = _landing(grid, driver.x, driver.y, driver.heading, step)
    if landing is None:
        for _ in range(FULL_CIRCLE_ATTEMPTS):
            driver.heading = normalize_heading(
                driver.heading + rng.uniform(-PERTURB_HALF_RANGE, PERTURB_HALF_RANGE)
            )
            landing = _landing(grid, driver.x, driver.y, driver.heading, step)
            if landing is not None:
                break
        else:
            return False
    driver.x, driver.y = landing
    return False
