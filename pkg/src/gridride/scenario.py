"""Arrival-rate scenarios: how driver capacity and rider demand vary in time.

A schedule is a sorted list of (start_minute, driver_capacity, rider_rate)
entries; each entry's values hold from its start minute until the next
entry's (zero-order hold).  One simulation tick is one minute, so lookups
take the tick index directly.  A stationary scenario is just a one-entry
schedule.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass


class ScheduleError(ValueError):
    """Schedule construction or parsing failure."""


@dataclass(frozen=True)
class ScheduleEntry:
    start_minute: int
    driver_capacity: int
    rider_rate: int

    def __post_init__(self) -> None:
        if self.start_minute < 0:
            raise ScheduleError(f"start_minute must be >= 0, got {self.start_minute}")
        if self.driver_capacity < 0 or self.rider_rate < 0:
            raise ScheduleError(
                f"capacity and rate must be >= 0, got "
                f"({self.driver_capacity}, {self.rider_rate})"
            )


@dataclass(frozen=True)
class ScenarioSchedule:
    """Piecewise-constant (capacity, rate) over minutes since run start."""

    entries: tuple[ScheduleEntry, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ScheduleError("schedule needs at least one entry")
        if self.entries[0].start_minute != 0:
            raise ScheduleError(
                f"first entry must start at minute 0, "
                f"got {self.entries[0].start_minute}"
            )
        starts = [e.start_minute for e in self.entries]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ScheduleError(f"start minutes must strictly increase, got {starts}")
        object.__setattr__(self, "_starts", tuple(starts))

    @classmethod
    def stationary(cls, driver_capacity: int, rider_rate: int) -> "ScenarioSchedule":
        return cls((ScheduleEntry(0, driver_capacity, rider_rate),))

    @property
    def is_stationary(self) -> bool:
        return len(self.entries) == 1

    def rates_at(self, tick: int) -> tuple[int, int]:
        """(driver_capacity, rider_rate) in force at a tick (>= 0)."""
        if tick < 0:
            raise ScheduleError(f"tick must be >= 0, got {tick}")
        entry = self.entries[bisect_right(self._starts, tick) - 1]
        return (entry.driver_capacity, entry.rider_rate)


def rates_at(schedule: ScenarioSchedule, tick: int) -> tuple[int, int]:
    """Function form of ScenarioSchedule.rates_at."""
    return schedule.rates_at(tick)


def saturday_schedule() -> ScenarioSchedule:
    """The built-in variable-demand day: a downtown Saturday, 24 h from 5 AM.

    Minutes count from 5 AM.  Demand climbs through the morning, dips in the
    late afternoon, peaks around the 9-11 PM bar rush, and falls off after
    midnight; driver capacity roughly tracks it with an evening oversupply.
    """
    rows = (
        (0, 10, 5),       # 5 AM
        (180, 20, 10),    # 8 AM
        (360, 50, 20),    # 11 AM
        (420, 5, 10),     # 12 PM
        (510, 45, 25),    # 1:30 PM
        (570, 50, 15),    # 2:30 PM
        (630, 25, 10),    # 3:30 PM
        (750, 40, 5),     # 5:30 PM
        (810, 45, 5),     # 6:30 PM
        (870, 60, 30),    # 7:30 PM
        (930, 80, 40),    # 8:30 PM
        (990, 100, 40),   # 9:30 PM
        (1050, 90, 10),   # 10:30 PM
        (1110, 80, 10),   # 11:30 PM
        (1170, 75, 30),   # 12:30 AM
        (1260, 65, 30),   # 2 AM
        (1380, 35, 10),   # 4 AM
    )
    return ScenarioSchedule(tuple(ScheduleEntry(*row) for row in rows))


def parse_schedule(text: str) -> ScenarioSchedule:
    """Parse a schedule document: ``start_minute capacity rate`` per line.

    Blank lines and ``#`` comments (full-line or trailing) are ignored.
    """
    entries: list[ScheduleEntry] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ScheduleError(
                f"line {lineno}: expected 'start_minute capacity rate', got {raw!r}"
            )
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ScheduleError(
                f"line {lineno}: entries must be integers, got {raw!r}"
            ) from None
        entries.append(ScheduleEntry(*values))
    if not entries:
        raise ScheduleError("schedule document has no entries")
    return ScenarioSchedule(tuple(entries))


def serialize_schedule(schedule: ScenarioSchedule) -> str:
    """Canonical document form; parse_schedule round-trips it exactly."""
    return "".join(
        f"{e.start_minute} {e.driver_capacity} {e.rider_rate}\n"
        for e in schedule.entries
    )
