"""gridride: a deterministic agent-based ridesharing market on a road lattice.

Drivers cruise a road grid looking for riders, earn fares, burn energy, and
leave; riders appear at intersections, wait, and give up.  Two idle-search
policies (uniform random walk vs. repulsion from the nearest visible driver)
can be compared under constant or scheduled demand, with every run a pure
function of its config and seed.
"""

from .agents import BankLedger, DriverAgent, RiderAgent
from .config import ConfigError, parse_config
from .engine import (
    ConfigurationError,
    GridSource,
    RunResult,
    SimConfig,
    WorldState,
    init,
    run,
    tick,
)
from .grid import (
    GridError,
    NeighborIndex,
    RoadGrid,
    generate_street_grid,
    load_grid,
    nearest_agent,
    serialize_grid,
)
from .metrics import (
    MetricsFrame,
    SummaryStats,
    collect,
    parse_csv,
    summarize,
    welch_test,
    write_csv,
)
from .movement import MovementPolicy, PolicyKind, StepParams
from .scenario import (
    ScenarioSchedule,
    ScheduleEntry,
    ScheduleError,
    parse_schedule,
    saturday_schedule,
    serialize_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "BankLedger",
    "ConfigError",
    "ConfigurationError",
    "DriverAgent",
    "GridError",
    "GridSource",
    "MetricsFrame",
    "MovementPolicy",
    "NeighborIndex",
    "PolicyKind",
    "RiderAgent",
    "RoadGrid",
    "RunResult",
    "ScenarioSchedule",
    "ScheduleEntry",
    "ScheduleError",
    "SimConfig",
    "StepParams",
    "SummaryStats",
    "WorldState",
    "collect",
    "generate_street_grid",
    "init",
    "load_grid",
    "nearest_agent",
    "parse_config",
    "parse_csv",
    "parse_schedule",
    "run",
    "saturday_schedule",
    "serialize_grid",
    "serialize_schedule",
    "summarize",
    "tick",
    "welch_test",
    "write_csv",
]
