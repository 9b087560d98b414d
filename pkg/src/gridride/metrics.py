"""Per-tick output frames, run summaries, CSV serialization, and the
Welch test used to compare experiment arms.

Frames are quantized at collection time (currency to 2 decimals, averages
to 4), so writing and re-parsing the CSV reproduces frames exactly.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, fields
from pathlib import Path


class MetricsError(ValueError):
    """Base class for metrics/statistics failures."""


class EmptySeriesError(MetricsError):
    """Asked to summarize an empty series."""


class DegenerateSampleError(MetricsError):
    """Sample too small or too flat for the requested test."""


class CsvFormatError(MetricsError):
    """Frame CSV text did not match the expected layout."""


@dataclass(frozen=True, slots=True)
class MetricsFrame:
    """One tick's outputs.  Field order here is the CSV column order."""

    tick: int
    active_drivers: int
    active_riders: int
    total_riders_gave_up: int
    avg_pickups_per_tick: float
    total_pickups: int
    total_dropoffs: int
    idle_drivers: int
    working_drivers: int
    avg_cash_active: float
    randomly_left_count: int
    passengers_in_trips: int
    avg_rider_wait: float
    avg_driver_energy: float
    total_cash_active: float
    avg_fare_per_ride: float
    total_profit: float


FIELD_NAMES: tuple[str, ...] = tuple(f.name for f in fields(MetricsFrame))

# Column formatting: counts plain, currency 2 decimals, other averages 4.
CURRENCY_FIELDS = frozenset(
    {"avg_cash_active", "total_cash_active", "avg_fare_per_ride", "total_profit"}
)
AVERAGE_FIELDS = frozenset(
    {"avg_pickups_per_tick", "avg_rider_wait", "avg_driver_energy"}
)


def collect(state) -> MetricsFrame:
    """Snapshot a world state into a frame.  Pure read, no mutation.

    Averages over empty sets are 0; the average fare divides total fare
    revenue (pickup bonuses plus carry accrual) by completed rides.
    """
    drivers = state.drivers
    riders = state.riders
    totals = state.totals
    bank = state.bank

    active = len(drivers)
    working = 0
    cash_cents = 0
    energy_sum = 0.0
    for d in drivers.values():
        if d.passenger_id is not None:
            working += 1
        cash_cents += d.cash_cents
        energy_sum += d.energy
    idle = active - working

    wait_sum = 0
    for r in riders.values():
        wait_sum += r.wait_time

    ticks = state.tick
    fare_cents = 200 * totals.pickups + 60 * totals.carry_ticks
    return MetricsFrame(
        tick=ticks,
        active_drivers=active,
        active_riders=len(riders),
        total_riders_gave_up=bank.gave_up_rider_count,
        avg_pickups_per_tick=round(totals.pickups / ticks, 4) if ticks else 0.0,
        total_pickups=totals.pickups,
        total_dropoffs=totals.dropoffs,
        idle_drivers=idle,
        working_drivers=working,
        avg_cash_active=round(cash_cents / active / 100.0, 2) if active else 0.0,
        randomly_left_count=(
            bank.departed_driver_random_count + bank.departed_rider_random_count
        ),
        passengers_in_trips=working,
        avg_rider_wait=round(wait_sum / len(riders), 4) if riders else 0.0,
        avg_driver_energy=round(energy_sum / active, 4) if active else 0.0,
        total_cash_active=cash_cents / 100.0,
        avg_fare_per_ride=round(fare_cents / max(totals.dropoffs, 1) / 100.0, 2),
        total_profit=(cash_cents + bank.banked_cash_cents) / 100.0,
    )


@dataclass(frozen=True, slots=True)
class SummaryStats:
    """Sample statistics of a profit series."""

    mean: float
    standard_error: float
    median: float
    standard_deviation: float
    maximum: float


def summarize(series) -> SummaryStats:
    """Sample statistics (n-1 standard deviation, midpoint median)."""
    values = [float(v) for v in series]
    if not values:
        raise EmptySeriesError("cannot summarize an empty series")
    n = len(values)
    sd = statistics.stdev(values) if n > 1 else 0.0
    return SummaryStats(
        mean=statistics.fmean(values),
        standard_error=sd / math.sqrt(n),
        median=statistics.median(values),
        standard_deviation=sd,
        maximum=max(values),
    )


def welch_test(sample_a, sample_b) -> tuple[float, float, float]:
    """Welch's unequal-variance t test, two-sided.

    Returns (t statistic, Welch-Satterthwaite degrees of freedom, p value).
    The t statistic and dof are computed here; the p value comes from the
    Student-t survival function.
    """
    a = [float(v) for v in sample_a]
    b = [float(v) for v in sample_b]
    if len(a) < 2 or len(b) < 2:
        raise DegenerateSampleError(
            f"need at least 2 values per sample, got {len(a)} and {len(b)}"
        )
    var_a = statistics.variance(a)
    var_b = statistics.variance(b)
    if var_a == 0.0 or var_b == 0.0:
        raise DegenerateSampleError("zero-variance sample")
    na = len(a)
    nb = len(b)
    qa = var_a / na
    qb = var_b / nb
    se2 = qa + qb
    t_stat = (statistics.fmean(a) - statistics.fmean(b)) / math.sqrt(se2)
    dof = se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1))
    from scipy.stats import t as student_t  # deferred: keeps import light

    p_value = 2.0 * float(student_t.sf(abs(t_stat), dof))
    return (t_stat, dof, p_value)


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------

def _format_value(name: str, value) -> str:
    if name in CURRENCY_FIELDS:
        return f"{value:.2f}"
    if name in AVERAGE_FIELDS:
        return f"{value:.4f}"
    return str(value)


def format_csv(frames) -> str:
    """Frames as CSV text: header plus one row per tick, '\\n' endings."""
    lines = [",".join(FIELD_NAMES)]
    for frame in frames:
        lines.append(
            ",".join(
                _format_value(name, getattr(frame, name)) for name in FIELD_NAMES
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(frames, destination) -> None:
    """Write frames to a CSV file; bytes are a pure function of the frames."""
    Path(destination).write_text(format_csv(frames), newline="")


def parse_csv(text: str) -> list[MetricsFrame]:
    """Inverse of format_csv; round-trips frames exactly."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].split(",") != list(FIELD_NAMES):
        raise CsvFormatError("missing or wrong header row")
    int_fields = frozenset(FIELD_NAMES) - CURRENCY_FIELDS - AVERAGE_FIELDS
    frames: list[MetricsFrame] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(FIELD_NAMES):
            raise CsvFormatError(
                f"line {lineno}: expected {len(FIELD_NAMES)} columns, got {len(cells)}"
            )
        kwargs = {}
        for name, cell in zip(FIELD_NAMES, cells):
            try:
                kwargs[name] = int(cell) if name in int_fields else float(cell)
            except ValueError:
                raise CsvFormatError(
                    f"line {lineno}: bad value {cell!r} for {name}"
                ) from None
        frames.append(MetricsFrame(**kwargs))
    return frames
