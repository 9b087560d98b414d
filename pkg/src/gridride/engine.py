"""The simulation loop: spawning, movement dispatch, pickups, drop-offs,
accounting, and departures, in a fixed phase order.

Everything random flows through one seeded stream, and every phase iterates
agents in ascending id, so a run is a pure function of (config, seed).  The
phase order within a tick:

  1. scenario lookup           7. cash/energy accrual, wait clocks
  2. driver replenishment      8. rider wait-limit departures
  3. rider arrivals            9. driver energy exhaustion
  4. movement                 10. random exits (if enabled)
  5. pickups                  11. tick counter advances
  6. drop-offs
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .agents import BankLedger, DriverAgent, RiderAgent, accrue_tick, spawn_driver, spawn_rider
from .grid import NeighborIndex, RoadGrid, generate_street_grid, load_grid
from .metrics import EmptySeriesError, MetricsFrame, SummaryStats, collect, summarize
from .movement import (
    MovementPolicy,
    PolicyKind,
    StepParams,
    destination_step,
    random_search_step,
    voronoi_search_step,
)
from .scenario import ScenarioSchedule

PICKUP_RADIUS_DEFAULT = 3.0
DROPOFF_RADIUS_DEFAULT = 3.0
MAX_WAIT_DEFAULT = 20
RUN_LENGTH_DEFAULT = 1440


class ConfigurationError(ValueError):
    """A SimConfig field combination that cannot run."""


@dataclass(frozen=True)
class GridSource:
    """Where a run's grid comes from; exactly one alternative is set.

    Holding the source rather than a grid object keeps configs small,
    comparable, and serializable; the grid is materialized at init time.
    """

    path: str | None = None
    document: str | None = None
    synthetic: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        set_count = sum(v is not None for v in (self.path, self.document, self.synthetic))
        if set_count != 1:
            raise ConfigurationError(
                "grid source needs exactly one of path/document/synthetic"
            )

    @classmethod
    def from_file(cls, path) -> "GridSource":
        return cls(path=str(path))

    @classmethod
    def from_document(cls, document: str) -> "GridSource":
        return cls(document=document)

    @classmethod
    def lattice(cls, width: int, height: int, spacing: int) -> "GridSource":
        return cls(synthetic=(width, height, spacing))

    def resolve(self) -> RoadGrid:
        if self.path is not None:
            return load_grid(Path(self.path).read_text())
        if self.document is not None:
            return load_grid(self.document)
        return generate_street_grid(*self.synthetic)


@dataclass(frozen=True)
class SimConfig:
    """Everything a run depends on.  Two equal configs give equal runs."""

    grid: GridSource
    policy: MovementPolicy
    driver_capacity: int = 100
    riders_per_tick: int = 30
    step_params: StepParams = StepParams()
    pickup_radius: float = PICKUP_RADIUS_DEFAULT
    dropoff_radius: float = DROPOFF_RADIUS_DEFAULT
    max_wait: float = MAX_WAIT_DEFAULT
    random_exit_enabled: bool = True
    schedule: ScenarioSchedule | None = None  # None: constant capacity/rate
    run_length: int = RUN_LENGTH_DEFAULT
    seed: int = 1

    def __post_init__(self) -> None:
        if not self.pickup_radius > 0.0:
            raise ConfigurationError(f"pickup_radius must be > 0, got {self.pickup_radius}")
        if not self.dropoff_radius > 0.0:
            raise ConfigurationError(f"dropoff_radius must be > 0, got {self.dropoff_radius}")
        if not self.max_wait >= 0:
            raise ConfigurationError(f"max_wait must be >= 0, got {self.max_wait}")
        if self.driver_capacity < 0 or self.riders_per_tick < 0:
            raise ConfigurationError("capacity and rate must be >= 0")
        if self.run_length < 0:
            raise ConfigurationError(f"run_length must be >= 0, got {self.run_length}")

    def effective_schedule(self) -> ScenarioSchedule:
        if self.schedule is not None:
            return self.schedule
        return ScenarioSchedule.stationary(self.driver_capacity, self.riders_per_tick)


@dataclass
class RunTotals:
    """Monotone counters accumulated over a whole run."""

    drivers_spawned: int = 0
    riders_spawned: int = 0
    pickups: int = 0
    dropoffs: int = 0
    carry_ticks: int = 0
    idle_ticks: int = 0


@dataclass
class WorldState:
    """Mutable world: agents keyed by id (insertion = ascending id order)."""

    tick: int
    grid: RoadGrid
    schedule: ScenarioSchedule
    drivers: dict[int, DriverAgent]
    riders: dict[int, RiderAgent]
    bank: BankLedger
    rng: random.Random
    next_driver_id: int = 0
    next_rider_id: int = 0
    totals: RunTotals = field(default_factory=RunTotals)


def init(config: SimConfig) -> WorldState:
    """Materialize the grid and run the tick-0 spawn attempts."""
    grid = config.grid.resolve()
    state = WorldState(
        tick=0,
        grid=grid,
        schedule=config.effective_schedule(),
        drivers={},
        riders={},
        bank=BankLedger(),
        rng=random.Random(config.seed),
    )
    capacity, rate = state.schedule.rates_at(0)
    _replenish_drivers(state, capacity)
    _spawn_riders(state, rate)
    return state


def _replenish_drivers(state: WorldState, capacity: int) -> None:
    # One attempt per deficit slot; gate failures are not retried this tick.
    for _ in range(capacity - len(state.drivers)):
        driver = spawn_driver(state.grid, state.rng, state.next_driver_id)
        if driver is not None:
            state.drivers[driver.id] = driver
            state.next_driver_id += 1
            state.totals.drivers_spawned += 1


def _spawn_riders(state: WorldState, rate: int) -> None:
    for _ in range(rate):
        rider = spawn_rider(state.grid, state.rng, state.next_rider_id)
        if rider is not None:
            state.riders[rider.id] = rider
            state.next_rider_id += 1
            state.totals.riders_spawned += 1


def _round_half_up(x: float) -> int:
    # Half-up rounding for non-negative x (int() truncates toward zero).
    return int(x + 0.5)


def tick(state: WorldState, config: SimConfig) -> WorldState:
    """Advance the world one tick through the eleven phases."""
    rng = state.rng
    grid = state.grid
    drivers = state.drivers
    riders = state.riders
    totals = state.totals
    params = config.step_params

    # 1-3: scenario lookup, replenishment, arrivals
    capacity, rate = state.schedule.rates_at(state.tick)
    _replenish_drivers(state, capacity)
    _spawn_riders(state, rate)

    # 4: movement (carrying drivers steer; idle drivers search)
    use_voronoi = config.policy.kind is PolicyKind.VORONOI
    neighbor_index = None
    if use_voronoi and drivers:
        neighbor_index = NeighborIndex(
            [(d.id, d.x, d.y) for d in drivers.values()],
            config.policy.voronoi_vision,
        )
    arrived: list[int] = []
    for d in drivers.values():
        if d.passenger_id is not None:
            if destination_step(d, grid, params, rng, config.dropoff_radius):
                arrived.append(d.id)
        elif use_voronoi:
            voronoi_search_step(d, neighbor_index, grid, params, rng)
        else:
            random_search_step(d, grid, params, rng)

    # 5: pickups — idle drivers in ascending id claim nearest unclaimed rider
    if riders:
        rider_index = NeighborIndex(
            [(r.id, r.x, r.y) for r in riders.values()], config.pickup_radius
        )
        claimed: set[int] = set()
        for d in drivers.values():
            if d.passenger_id is not None:
                continue
            found = rider_index.nearest(d.x, d.y, exclude=claimed)
            if found is None:
                continue
            rider_id = found[0]
            rider = riders.pop(rider_id)
            claimed.add(rider_id)
            d.passenger_id = rider_id
            d.trip_destination = rider.destination
            d.cash_cents += 200
            d.pickup_count += 1
            totals.pickups += 1

    # 6: drop-offs for drivers that reached their destination in phase 4
    for driver_id in arrived:
        d = drivers[driver_id]
        d.dropoff_count += 1
        d.passenger_id = None
        d.trip_destination = None
        d.trip_time = 0
        totals.dropoffs += 1

    # 7: accrual and wait clocks
    for d in drivers.values():
        if d.passenger_id is not None:
            totals.carry_ticks += 1
        else:
            totals.idle_ticks += 1
        accrue_tick(d)
    for r in riders.values():
        r.wait_time += 1

    # 8: wait-limit departures
    max_wait = config.max_wait
    gave_up = [rider_id for rider_id, r in riders.items() if r.wait_time >= max_wait]
    for rider_id in gave_up:
        del riders[rider_id]
        state.bank.gave_up_rider_count += 1

    # 9: energy exhaustion (mid-trip exits strand their passenger)
    exhausted = [driver_id for driver_id, d in drivers.items() if d.energy <= 0.0]
    for driver_id in exhausted:
        d = drivers.pop(driver_id)
        state.bank.banked_cash_cents += d.cash_cents
        state.bank.departed_driver_count += 1

    # 10: random exits — idle drivers first, then waiting riders
    if config.random_exit_enabled:
        kill_drivers = _round_half_up(abs(rng.gauss(0.0, 1.0)))
        if kill_drivers:
            idle_ids = [i for i, d in drivers.items() if d.passenger_id is None]
            for driver_id in rng.sample(idle_ids, min(kill_drivers, len(idle_ids))):
                d = drivers.pop(driver_id)
                state.bank.banked_cash_cents += d.cash_cents
                state.bank.departed_driver_count += 1
                state.bank.departed_driver_random_count += 1
        kill_riders = _round_half_up(abs(rng.gauss(0.0, 1.0)))
        if kill_riders:
            rider_ids = list(riders)
            for rider_id in rng.sample(rider_ids, min(kill_riders, len(rider_ids))):
                del riders[rider_id]
                state.bank.departed_rider_random_count += 1

    # 11
    state.tick += 1
    return state


@dataclass
class RunResult:
    """A finished run: per-tick frames plus the final world."""

    config: SimConfig
    frames: list[MetricsFrame]
    state: WorldState

    def profit_series(self) -> list[float]:
        return [f.total_profit for f in self.frames]

    def profit_summary(self) -> SummaryStats:
        return summarize(self.profit_series())

    @property
    def final_profit(self) -> float:
        if not self.frames:
            raise EmptySeriesError("run produced no frames")
        return self.frames[-1].total_profit


def run(config: SimConfig) -> RunResult:
    """Run run_length ticks from a fresh world, collecting one frame each."""
    state = init(config)
    frames: list[MetricsFrame] = []
    for _ in range(config.run_length):
        tick(state, config)
        frames.append(collect(state))
    return RunResult(config=config, frames=frames, state=state)
