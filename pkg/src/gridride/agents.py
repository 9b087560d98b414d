"""Driver and rider agents, spawning rules, and per-tick accounting.

Money is integer cents throughout the core (the CSV layer converts to
dollars), so cash totals are exact no matter how long a run gets.  Energy is
a float drained by a binary-exact 0.75 per tick.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .grid import DegenerateGridError, RoadGrid, random_intersection

# Spawn gate: one normal draw per attempt, success iff it clears the bar.
PLACEMENT_MEAN = 1.0
PLACEMENT_SD = 1.0
PLACEMENT_BAR = 0.5

# Driver endowment and per-tick rates.
ENERGY_MEAN = 360.0
ENERGY_SD = 120.0
ENERGY_MIN = 1.0
ENERGY_PER_TICK = 0.75

PICKUP_FARE_CENTS = 200  # flat bonus on pickup
CARRY_RATE_CENTS = 60    # per tick while carrying
IDLE_COST_CENTS = 10     # per tick while idle

# Rider destination draws: 1 initial + up to this many redraws.
DESTINATION_REDRAWS = 100


@dataclass(slots=True)
class DriverAgent:
    """A mobile driver: position, heading, energy, cash, and trip state."""

    id: int
    x: float
    y: float
    heading: float
    energy: float
    cash_cents: int = 0
    time_driven: int = 0
    passenger_id: int | None = None
    trip_destination: tuple[float, float] | None = None
    trip_time: int = 0
    pickup_count: int = 0
    dropoff_count: int = 0

    @property
    def has_passenger(self) -> bool:
        return self.passenger_id is not None


@dataclass(slots=True)
class RiderAgent:
    """A rider waiting at an intersection for a pickup."""

    id: int
    x: float
    y: float
    destination: tuple[float, float]
    wait_time: int = 0


@dataclass(slots=True)
class BankLedger:
    """Cash and exit accounting that outlives individual agents."""

    banked_cash_cents: int = 0
    departed_driver_count: int = 0         # all exits: exhaustion + random
    departed_driver_random_count: int = 0  # random exits only
    departed_rider_random_count: int = 0
    gave_up_rider_count: int = 0


def spawn_driver(grid: RoadGrid, rng: random.Random, agent_id: int) -> DriverAgent | None:
    """One spawn attempt; None when the placement gate fails.

    Draw order is part of the reproducibility contract: gate, position,
    energy, heading.  A failed gate consumes exactly the one gate draw.
    """
    if not rng.gauss(PLACEMENT_MEAN, PLACEMENT_SD) > PLACEMENT_BAR:
        return None
    x, y = random_intersection(grid, rng)
    energy = max(rng.gauss(ENERGY_MEAN, ENERGY_SD), ENERGY_MIN)
    heading = rng.uniform(0.0, 360.0)
    return DriverAgent(id=agent_id, x=x, y=y, heading=heading, energy=energy)


def spawn_rider(grid: RoadGrid, rng: random.Random, agent_id: int) -> RiderAgent | None:
    """One spawn attempt; None when the placement gate fails.

    Draw order: gate, origin, then destination redrawn until it differs from
    the origin (bounded; a grid that can't produce two distinct intersections
    is broken).
    """
    if not rng.gauss(PLACEMENT_MEAN, PLACEMENT_SD) > PLACEMENT_BAR:
        return None
    origin = random_intersection(grid, rng)
    for _ in range(1 + DESTINATION_REDRAWS):
        destination = random_intersection(grid, rng)
        if destination != origin:
            return RiderAgent(
                id=agent_id, x=origin[0], y=origin[1], destination=destination
            )
    raise DegenerateGridError(
        f"could not draw a destination distinct from {origin} "
        f"after {1 + DESTINATION_REDRAWS} attempts"
    )


def accrue_tick(driver: DriverAgent) -> None:
    """Apply one tick of earnings/costs and energy drain to a driver."""
    if driver.passenger_id is not None:
        driver.cash_cents += CARRY_RATE_CENTS
        driver.trip_time += 1
    else:
        driver.cash_cents -= IDLE_COST_CENTS
    driver.energy -= ENERGY_PER_TICK
    driver.time_driven += 1
