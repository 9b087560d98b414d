"""Tests for agent dataclasses, spawn rules, and per-tick accounting."""

from __future__ import annotations

import random

import pytest

from gridride.agents import (
    CARRY_RATE_CENTS,
    ENERGY_MIN,
    ENERGY_PER_TICK,
    IDLE_COST_CENTS,
    PICKUP_FARE_CENTS,
    BankLedger,
    DriverAgent,
    RiderAgent,
    accrue_tick,
    spawn_driver,
    spawn_rider,
)
from gridride.grid import DegenerateGridError, RoadGrid, load_grid


class ScriptedRng(random.Random):
    """Random with gauss/randrange optionally replaced by scripted values."""

    def __init__(self, gauss_values=(), randrange_values=None, seed=0):
        super().__init__(seed)
        self.gauss_script = list(gauss_values)
        self.randrange_script = (
            None if randrange_values is None else list(randrange_values)
        )

    def gauss(self, mu=0.0, sigma=1.0):
        return self.gauss_script.pop(0)

    def randrange(self, start, stop=None, step=1):
        if self.randrange_script is None:
            return super().randrange(start, stop, step)
        return self.randrange_script.pop(0)


def two_intersection_grid() -> RoadGrid:
    return load_grid("+.+\n")


def single_intersection_grid() -> RoadGrid:
    return RoadGrid.from_cells(1, 1, set(), {(0, 0)})


def make_driver(**overrides) -> DriverAgent:
    fields = dict(id=1, x=0.5, y=0.5, heading=0.0, energy=360.0)
    fields.update(overrides)
    return DriverAgent(**fields)


def test_economic_constants():
    """The money rules: $2.00 pickup, 60c/tick carrying, 10c/tick idle."""
    assert PICKUP_FARE_CENTS == 200
    assert CARRY_RATE_CENTS == 60
    assert IDLE_COST_CENTS == 10
    assert ENERGY_PER_TICK == 0.75


def test_spawn_driver_gate_pass_uses_scripted_energy():
    grid = two_intersection_grid()
    rng = ScriptedRng(gauss_values=[0.6, 350.0])
    driver = spawn_driver(grid, rng, agent_id=7)
    assert driver is not None
    assert driver.id == 7
    assert driver.energy == 350.0
    assert (driver.x, driver.y) in {(0.5, 0.5), (2.5, 0.5)}
    assert 0.0 <= driver.heading < 360.0
    assert driver.cash_cents == 0
    assert driver.passenger_id is None


def test_spawn_driver_gate_is_strictly_greater_than_bar():
    grid = two_intersection_grid()
    assert spawn_driver(grid, ScriptedRng(gauss_values=[0.5, 999.0]), 1) is None
    assert spawn_driver(grid, ScriptedRng(gauss_values=[0.5000001, 400.0]), 1) is not None


def test_spawn_driver_failed_gate_consumes_exactly_one_draw():
    """A failed gate must not touch the position/energy/heading streams."""
    grid = two_intersection_grid()
    rng = ScriptedRng(gauss_values=[0.5, 999.0])
    state_before = rng.getstate()
    assert spawn_driver(grid, rng, 1) is None
    assert rng.gauss_script == [999.0]  # only the gate value was popped
    assert rng.getstate() == state_before  # no randrange/uniform draws


def test_spawn_driver_draw_order_matches_mirror():
    """Pin the stream layout: gate, position, energy, heading."""
    grid = two_intersection_grid()
    for seed in range(10):
        rng = random.Random(seed)
        mirror = random.Random(seed)
        driver = spawn_driver(grid, rng, agent_id=seed)
        gate = mirror.gauss(1.0, 1.0)
        if gate > 0.5:
            idx = mirror.randrange(len(grid.intersections))
            cx, cy = grid.intersections[idx]
            energy = max(mirror.gauss(360.0, 120.0), 1.0)
            heading = mirror.uniform(0.0, 360.0)
            assert driver is not None
            assert (driver.x, driver.y) == (cx + 0.5, cy + 0.5)
            assert driver.energy == energy
            assert driver.heading == heading
        else:
            assert driver is None
        assert rng.getstate() == mirror.getstate()


def test_spawn_driver_success_rate():
    """The Normal(1,1) > 0.5 gate passes about 69.15% of attempts."""
    grid = two_intersection_grid()
    rng = random.Random(42)
    attempts = 100_000
    created = sum(
        spawn_driver(grid, rng, i) is not None for i in range(attempts)
    )
    assert abs(created / attempts - 0.6915) < 0.01


def test_spawn_driver_energy_clamped_to_minimum():
    grid = two_intersection_grid()
    low = spawn_driver(grid, ScriptedRng(gauss_values=[5.0, -200.0]), 1)
    assert low is not None and low.energy == ENERGY_MIN
    fractional = spawn_driver(grid, ScriptedRng(gauss_values=[5.0, 0.5]), 2)
    assert fractional is not None and fractional.energy == ENERGY_MIN
    above = spawn_driver(grid, ScriptedRng(gauss_values=[5.0, 1.5]), 3)
    assert above is not None and above.energy == 1.5


def test_spawn_rider_destination_differs_from_origin():
    grid = two_intersection_grid()
    rng = random.Random(3)
    riders = [spawn_rider(grid, rng, i) for i in range(200)]
    riders = [r for r in riders if r is not None]
    assert riders
    for rider in riders:
        assert (rider.x, rider.y) != rider.destination
        assert (rider.x, rider.y) in {(0.5, 0.5), (2.5, 0.5)}
        assert rider.destination in {(0.5, 0.5), (2.5, 0.5)}
        assert rider.wait_time == 0


def test_spawn_rider_failed_gate_consumes_exactly_one_draw():
    grid = two_intersection_grid()
    rng = ScriptedRng(gauss_values=[-0.2])
    state_before = rng.getstate()
    assert spawn_rider(grid, rng, 1) is None
    assert rng.gauss_script == []
    assert rng.getstate() == state_before


def test_spawn_rider_redraws_destination_until_distinct():
    """Destination draws matching the origin are discarded and retried."""
    grid = two_intersection_grid()
    rng = ScriptedRng(gauss_values=[2.0], randrange_values=[0, 0, 0, 1])
    rider = spawn_rider(grid, rng, agent_id=9)
    assert rider is not None
    assert (rider.x, rider.y) == (0.5, 0.5)  # intersections[0]
    assert rider.destination == (2.5, 0.5)  # intersections[1], third redraw
    assert rng.randrange_script == []  # all four draws consumed


def test_spawn_rider_single_intersection_grid_raises():
    grid = single_intersection_grid()
    rng = ScriptedRng(
        gauss_values=[2.0], randrange_values=[0] * 102, seed=1
    )
    with pytest.raises(DegenerateGridError):
        spawn_rider(grid, rng, 1)


def test_accrue_tick_idle_driver_pays_and_drains():
    driver = make_driver(energy=360.0)
    for _ in range(10):
        accrue_tick(driver)
    assert driver.cash_cents == -10 * IDLE_COST_CENTS
    assert driver.energy == 360.0 - 10 * ENERGY_PER_TICK
    assert driver.time_driven == 10
    assert driver.trip_time == 0


def test_accrue_tick_carrying_driver_earns():
    driver = make_driver(energy=100.0, passenger_id=5)
    for _ in range(10):
        accrue_tick(driver)
    assert driver.cash_cents == 10 * CARRY_RATE_CENTS
    assert driver.trip_time == 10
    assert driver.time_driven == 10
    assert driver.energy == 100.0 - 7.5


def test_accrue_tick_energy_can_cross_zero():
    driver = make_driver(energy=0.5)
    accrue_tick(driver)
    assert driver.energy == -0.25  # exact in binary floats


def test_has_passenger_property():
    driver = make_driver()
    assert not driver.has_passenger
    driver.passenger_id = 3
    assert driver.has_passenger
    driver.passenger_id = 0  # id zero is a real passenger
    assert driver.has_passenger


def test_bank_ledger_defaults():
    ledger = BankLedger()
    assert ledger.banked_cash_cents == 0
    assert ledger.departed_driver_count == 0
    assert ledger.departed_driver_random_count == 0
    assert ledger.departed_rider_random_count == 0
    assert ledger.gave_up_rider_count == 0


def test_rider_agent_fields():
    rider = RiderAgent(id=4, x=2.5, y=0.5, destination=(0.5, 0.5))
    assert rider.wait_time == 0
    rider.wait_time += 1
    assert rider.wait_time == 1
