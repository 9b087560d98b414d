"""Tests for the three movement rules: random, repulsion, destination."""

from __future__ import annotations

import math
import random

import pytest

from gridride.agents import DriverAgent
from gridride.grid import NeighborIndex, RoadGrid, bearing, generate_street_grid
from gridride.movement import (
    AWAY_NUDGE_ATTEMPTS,
    MovementPolicy,
    PolicyKind,
    StepParams,
    destination_step,
    random_search_step,
    voronoi_search_step,
)


class ScriptedUniform(random.Random):
    """Random with uniform() popping scripted values and recording calls."""

    def __new__(cls, *args, **kwargs):
        return super().__new__(cls)  # Random.__new__ would hash args as a seed

    def __init__(self, values, seed=0):
        super().__init__(seed)
        self.values = list(values)
        self.calls = []

    def uniform(self, a, b):
        self.calls.append((a, b))
        return self.values.pop(0)


def all_road_grid(size: int = 21) -> RoadGrid:
    cells = {(x, y) for x in range(size) for y in range(size)}
    return RoadGrid.from_cells(size, size, cells)


def corridor_grid(length: int = 21) -> RoadGrid:
    return RoadGrid.from_cells(length, 1, {(x, 0) for x in range(length)})


def sealed_cell_grid() -> RoadGrid:
    return RoadGrid.from_cells(11, 11, {(5, 5)})


def make_driver(x: float, y: float, heading: float = 0.0, **overrides) -> DriverAgent:
    fields = dict(id=1, x=x, y=y, heading=heading, energy=360.0)
    fields.update(overrides)
    return DriverAgent(**fields)


def displacement(driver: DriverAgent, x0: float, y0: float) -> float:
    return math.hypot(driver.x - x0, driver.y - y0)


def test_policy_and_step_validation():
    MovementPolicy(PolicyKind.RANDOM)
    MovementPolicy(PolicyKind.VORONOI, voronoi_vision=3.0)
    with pytest.raises(ValueError):
        MovementPolicy(PolicyKind.VORONOI, voronoi_vision=0.0)
    StepParams(0.5)
    StepParams(1.0)
    with pytest.raises(ValueError):
        StepParams(0.0)
    with pytest.raises(ValueError):
        StepParams(1.5)


def test_random_step_working_heading_moves_step_without_draw():
    """An unblocked heading is kept and advanced along; the rng is untouched."""
    grid = all_road_grid()
    driver = make_driver(10.0, 10.0, heading=0.0)
    random_search_step(driver, grid, StepParams(0.5), rng=None)  # None: no draw
    assert driver.x == 10.5
    assert driver.y == 10.0
    assert driver.heading == 0.0

    driver = make_driver(10.0, 10.0, heading=90.0)
    random_search_step(driver, grid, StepParams(0.5), rng=None)
    assert abs(driver.y - 10.5) < 1e-12
    assert abs(driver.x - 10.0) < 1e-12
    assert driver.heading == 90.0


def test_random_step_displacement_equals_step_length():
    grid = all_road_grid()
    for heading in (0.0, 37.0, 90.0, 133.3, 245.0, 359.9):
        driver = make_driver(10.0, 10.0, heading=heading)
        random_search_step(driver, grid, StepParams(0.5), rng=None)
        assert abs(displacement(driver, 10.0, 10.0) - 0.5) < 1e-12


def test_random_step_redraws_when_blocked():
    """A blocked heading is redrawn until one lands on road."""
    grid = corridor_grid()
    rng = random.Random(11)
    driver = make_driver(10.5, 0.5, heading=90.0)  # north: off the corridor
    random_search_step(driver, grid, StepParams(0.5), rng)
    assert (driver.x, driver.y) != (10.5, 0.5)
    assert 0.0 <= driver.y < 1.0  # stayed in the corridor row
    assert grid.is_road_at(driver.x, driver.y)
    assert driver.heading != 90.0


def test_random_step_boxed_in_stays_with_last_drawn_heading():
    """No usable heading: stay put, keep the 36th (final) drawn heading."""
    grid = sealed_cell_grid()
    driver = make_driver(5.5, 5.5, heading=0.0)
    rng = random.Random(4)
    mirror = random.Random(4)
    random_search_step(driver, grid, StepParams(0.5), rng)
    last = [mirror.uniform(0.0, 360.0) for _ in range(36)][-1]
    assert (driver.x, driver.y) == (5.5, 5.5)
    assert driver.heading == last
    assert rng.getstate() == mirror.getstate()


def test_random_step_same_seed_same_trajectory():
    grid = generate_street_grid(13, 13, 4)
    a = make_driver(0.5, 0.5, heading=123.0)
    b = make_driver(0.5, 0.5, heading=123.0)
    rng_a = random.Random(9)
    rng_b = random.Random(9)
    for _ in range(200):
        random_search_step(a, grid, StepParams(0.5), rng_a)
        random_search_step(b, grid, StepParams(0.5), rng_b)
        assert (a.x, a.y, a.heading) == (b.x, b.y, b.heading)


def test_voronoi_moves_directly_away_from_neighbor():
    grid = all_road_grid()
    driver = make_driver(10.0, 10.0, heading=37.0)
    index = NeighborIndex([(2, 12.0, 10.0)], 3.0)  # neighbor due east
    voronoi_search_step(driver, index, grid, StepParams(0.5), random.Random(0))
    assert driver.heading == 180.0  # due west, away
    assert abs(driver.x - 9.5) < 1e-12
    assert abs(driver.y - 10.0) < 1e-12
    assert abs(math.hypot(driver.x - 12.0, driver.y - 10.0) - 2.5) < 1e-12


def test_voronoi_without_neighbor_matches_random_search():
    """A lone driver under repulsion consumes the same draws as random."""
    grid = generate_street_grid(13, 13, 4)
    empty = NeighborIndex([], 3.0)
    a = make_driver(4.5, 8.5, heading=77.0)
    b = make_driver(4.5, 8.5, heading=77.0)
    rng_a = random.Random(21)
    rng_b = random.Random(21)
    for _ in range(500):
        voronoi_search_step(a, empty, grid, StepParams(0.5), rng_a)
        random_search_step(b, grid, StepParams(0.5), rng_b)
        assert (a.x, a.y, a.heading) == (b.x, b.y, b.heading)
    assert rng_a.getstate() == rng_b.getstate()


def test_voronoi_zero_distance_neighbor_draws_uniform_heading():
    grid = all_road_grid()
    driver = make_driver(10.0, 10.0)
    index = NeighborIndex([(2, 10.0, 10.0)], 3.0)  # exactly underfoot
    rng = random.Random(7)
    expected = random.Random(7).uniform(0.0, 360.0)
    voronoi_search_step(driver, index, grid, StepParams(0.5), rng)
    assert driver.heading == expected
    assert abs(displacement(driver, 10.0, 10.0) - 0.5) < 1e-12


def test_voronoi_blocked_away_heading_nudges_then_full_circle():
    """Recovery order: 8 nudges around the away heading, then full circle."""
    grid = corridor_grid()
    driver = make_driver(10.5, 0.5)
    index = NeighborIndex([(2, 9.9, 0.0)], 3.0)  # away bearing ~39.8deg: wall
    rng = ScriptedUniform([40.0] * 8 + [350.0])  # 8 failing nudges, then 350
    voronoi_search_step(driver, index, grid, StepParams(0.5), rng)
    assert rng.calls == [(-45.0, 45.0)] * AWAY_NUDGE_ATTEMPTS + [(0.0, 360.0)]
    assert driver.heading == 350.0
    assert abs(driver.x - (10.5 + math.cos(math.radians(350.0)) * 0.5)) < 1e-12
    assert abs(driver.y - (0.5 + math.sin(math.radians(350.0)) * 0.5)) < 1e-12


def test_voronoi_pair_separates_by_two_steps_per_tick():
    """Mutual repulsion on a corridor: gap grows 2 * step each tick,
    and keeps growing by heading inertia after they lose sight."""
    grid = corridor_grid(41)
    a = make_driver(19.5, 0.5, id=1)
    b = make_driver(20.5, 0.5, id=2)
    rng = random.Random(0)
    params = StepParams(0.5)
    for tick in range(1, 7):
        index = NeighborIndex(
            [(a.id, a.x, a.y), (b.id, b.x, b.y)], 3.0
        )  # snapshot before either moves
        voronoi_search_step(a, index, grid, params, rng)
        voronoi_search_step(b, index, grid, params, rng)
        assert abs((b.x - a.x) - (1.0 + tick)) < 1e-9
        assert abs(a.y - 0.5) < 1e-9 and abs(b.y - 0.5) < 1e-9


def test_destination_step_decreases_distance_by_step():
    grid = all_road_grid()
    driver = make_driver(10.0, 10.0, trip_destination=(10.0, 18.0))
    arrived = destination_step(driver, grid, StepParams(0.5), None, 3.0)
    assert arrived is False
    assert abs(driver.y - 10.5) < 1e-12
    assert abs(driver.x - 10.0) < 1e-12
    assert driver.heading == 90.0

    driver = make_driver(10.0, 10.0, trip_destination=(14.3, 6.2))
    before = math.hypot(14.3 - 10.0, 6.2 - 10.0)
    destination_step(driver, grid, StepParams(0.5), None, 3.0)
    after = math.hypot(14.3 - driver.x, 6.2 - driver.y)
    assert abs((before - after) - 0.5) < 1e-9


def test_destination_step_within_radius_arrives_without_moving():
    grid = all_road_grid()
    driver = make_driver(10.0, 10.0, heading=55.0, trip_destination=(13.0, 10.0))
    arrived = destination_step(driver, grid, StepParams(0.5), None, 3.0)
    assert arrived is True
    assert (driver.x, driver.y) == (10.0, 10.0)  # boundary counts: d == radius
    assert driver.heading == 55.0  # untouched

    driver = make_driver(10.0, 10.0, trip_destination=(13.01, 10.0))
    assert destination_step(driver, grid, StepParams(0.5), None, 3.0) is False
    assert driver.x > 10.0


def test_destination_step_across_corridor_wall_advances():
    """Destination straight across the wall: composed rotations must walk
    the heading around to the corridor axis within a few ticks."""
    grid = corridor_grid()
    for seed in range(100):
        driver = make_driver(10.5, 0.5, trip_destination=(10.5, 5.5))
        rng = random.Random(seed)
        for _ in range(10):
            destination_step(driver, grid, StepParams(0.5), rng, 0.5)
        assert abs(driver.x - 10.5) > 0.0, f"seed {seed} never advanced"
        assert grid.is_road_at(driver.x, driver.y)


def test_destination_step_sealed_cell_waits():
    grid = sealed_cell_grid()
    driver = make_driver(5.5, 5.5, trip_destination=(9.5, 9.5))
    arrived = destination_step(driver, grid, StepParams(0.5), random.Random(3), 0.5)
    assert arrived is False
    assert (driver.x, driver.y) == (5.5, 5.5)


def test_all_rules_keep_drivers_on_road():
    """Fuzz: every rule, every tick, lands on road with a legal step size."""
    grid = generate_street_grid(13, 13, 4)
    params = StepParams(0.5)
    rng = random.Random(99)
    searcher = make_driver(0.5, 4.5, id=1, heading=10.0)
    repulsed = make_driver(4.5, 4.5, id=2, heading=200.0)
    carrier = make_driver(8.5, 8.5, id=3, trip_destination=(0.5, 0.5))
    for _ in range(2000):
        index = NeighborIndex(
            [(d.id, d.x, d.y) for d in (searcher, repulsed, carrier)], 3.0
        )
        moves = []
        for d, before in ((searcher, (searcher.x, searcher.y)),):
            random_search_step(d, grid, params, rng)
            moves.append((d, before))
        before_r = (repulsed.x, repulsed.y)
        voronoi_search_step(repulsed, index, grid, params, rng)
        moves.append((repulsed, before_r))
        before_c = (carrier.x, carrier.y)
        if destination_step(carrier, grid, params, rng, 0.5):
            carrier.trip_destination = (
                rng.choice(grid.intersections)[0] + 0.5,
                rng.choice(grid.intersections)[1] + 0.5,
            )
        moves.append((carrier, before_c))
        for d, (x0, y0) in moves:
            assert grid.is_road_at(d.x, d.y)
            assert 0.0 <= d.heading < 360.0
            dist = displacement(d, x0, y0)
            assert dist == 0.0 or abs(dist - 0.5) < 1e-9
