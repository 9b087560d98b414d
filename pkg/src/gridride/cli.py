"""Command-line front end.

Three commands: ``run`` executes one simulation, ``compare`` reproduces the
four-cell policy-by-scenario experiment with paired seeds, ``sweep`` varies
one numeric config key.  Exit codes: 0 success, 1 configuration problem,
2 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .config import (
    ConfigError,
    echo_text,
    effective_pairs,
    parse_pairs,
    resolve_config,
)
from .engine import ConfigurationError, RunResult, run
from .grid import GridError
from .metrics import MetricsError, SummaryStats, summarize, welch_test, write_csv
from .scenario import ScheduleError

ALPHA = 0.05

# The standard experiment: both scenarios crossed with both policies.
STANDARD_CELLS: tuple[tuple[str, str], ...] = (
    ("stationary", "random"),
    ("stationary", "voronoi"),
    ("saturday", "random"),
    ("saturday", "voronoi"),
)

VERDICT_TIE = "no significant difference"
VERDICT_VORONOI = "Voronoi outperforms"
VERDICT_RANDOM = "random outperforms"

# CLI flag name -> config key, applied over the config file's pairs.
_OVERRIDE_FLAGS = {
    "grid": "grid",
    "policy": "policy",
    "scenario": "scenario",
    "drivers_count": "drivers_count",
    "riders_per_tick": "riders_per_tick",
    "voronoi_vision": "voronoi_vision",
    "step_length": "step_length",
    "max_wait": "max_wait",
    "random_exit": "random_exit",
    "run_length": "run_length",
    "seed": "seed",
}


@dataclass(frozen=True)
class ExperimentPlan:
    """A grid of (scenario, policy) cells crossed with shared seeds."""

    cells: tuple[tuple[str, str], ...]
    seeds: tuple[int, ...]
    base_pairs: dict

    def __post_init__(self) -> None:
        if not self.cells:
            raise ConfigError("experiment needs at least one cell")
        if not self.seeds:
            raise ConfigError("experiment needs at least one seed")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError(f"seeds must be distinct, got {list(self.seeds)}")


@dataclass
class CellResult:
    scenario: str
    policy: str
    profits: list[float]
    summary: SummaryStats


@dataclass
class ComparisonResult:
    scenario: str
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    mean_voronoi: float
    mean_random: float
    verdict: str


@dataclass
class ExperimentResult:
    seeds: tuple[int, ...]
    cells: dict[str, CellResult]           # keyed "scenario-policy"
    comparisons: dict[str, ComparisonResult]  # keyed by scenario


def cell_name(scenario: str, policy: str) -> str:
    raw = f"{scenario}-{policy}"
    return raw.replace("/", "_").replace(":", "_")


def run_experiment(
    plan: ExperimentPlan,
    base_dir: Path | None = None,
    out_root: Path | None = None,
) -> ExperimentResult:
    """Run every cell with every seed (paired across cells) and compare.

    Runs are independent; results are keyed and reported in (cell, seed)
    order so the output never depends on execution order.
    """
    cells: dict[str, CellResult] = {}
    for scenario, policy in plan.cells:
        profits: list[float] = []
        for seed in plan.seeds:
            pairs = dict(plan.base_pairs)
            pairs["scenario"] = scenario
            pairs["policy"] = policy
            pairs["seed"] = str(seed)
            eff = effective_pairs(pairs, base_dir)
            result = run(resolve_config(eff))
            profits.append(result.final_profit)
            if out_root is not None:
                run_dir = out_root / cell_name(scenario, policy) / str(seed)
                _write_run_artifacts(result, eff, run_dir)
        cells[cell_name(scenario, policy)] = CellResult(
            scenario=scenario,
            policy=policy,
            profits=profits,
            summary=summarize(profits),
        )

    comparisons: dict[str, ComparisonResult] = {}
    by_scenario: dict[str, dict[str, CellResult]] = {}
    for cell in cells.values():
        by_scenario.setdefault(cell.scenario, {})[cell.policy] = cell
    for scenario, arms in by_scenario.items():
        if "voronoi" not in arms or "random" not in arms:
            continue
        voronoi = arms["voronoi"]
        rand = arms["random"]
        t_stat, dof, p_value = welch_test(voronoi.profits, rand.profits)
        if p_value < ALPHA:
            verdict = VERDICT_VORONOI if t_stat > 0 else VERDICT_RANDOM
        else:
            verdict = VERDICT_TIE
        comparisons[scenario] = ComparisonResult(
            scenario=scenario,
            t_statistic=t_stat,
            degrees_of_freedom=dof,
            p_value=p_value,
            mean_voronoi=voronoi.summary.mean,
            mean_random=rand.summary.mean,
            verdict=verdict,
        )
    return ExperimentResult(seeds=plan.seeds, cells=cells, comparisons=comparisons)


# ---------------------------------------------------------------------------
# report formatting
# ---------------------------------------------------------------------------

def _summary_lines(result: RunResult) -> list[str]:
    last = result.frames[-1]
    stats = result.profit_summary()
    return [
        f"ticks = {last.tick}",
        f"final_profit = {last.total_profit:.2f}",
        f"mean = {stats.mean:.2f}",
        f"standard_error = {stats.standard_error:.2f}",
        f"median = {stats.median:.2f}",
        f"standard_deviation = {stats.standard_deviation:.2f}",
        f"maximum = {stats.maximum:.2f}",
        f"total_pickups = {last.total_pickups}",
        f"total_dropoffs = {last.total_dropoffs}",
        f"riders_gave_up = {last.total_riders_gave_up}",
    ]


def _summary_json(result: RunResult) -> dict:
    last = result.frames[-1]
    stats = result.profit_summary()
    return {
        "ticks": last.tick,
        "final_profit": round(last.total_profit, 2),
        "mean": round(stats.mean, 2),
        "standard_error": round(stats.standard_error, 2),
        "median": round(stats.median, 2),
        "standard_deviation": round(stats.standard_deviation, 2),
        "maximum": round(stats.maximum, 2),
        "total_pickups": last.total_pickups,
        "total_dropoffs": last.total_dropoffs,
        "riders_gave_up": last.total_riders_gave_up,
    }


def _write_run_artifacts(result: RunResult, eff_pairs: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(result.frames, out_dir / "frames.csv")
    (out_dir / "summary.txt").write_text("\n".join(_summary_lines(result)) + "\n")
    (out_dir / "config.echo").write_text(echo_text(eff_pairs))


def _stats_cells(stats: SummaryStats) -> str:
    return (
        f"mean={stats.mean:.2f} se={stats.standard_error:.2f} "
        f"median={stats.median:.2f} sd={stats.standard_deviation:.2f} "
        f"max={stats.maximum:.2f}"
    )


def _comparison_line(comp: ComparisonResult) -> str:
    return (
        f"{comp.scenario}: voronoi vs random "
        f"t={comp.t_statistic:+.4f} dof={comp.degrees_of_freedom:.2f} "
        f"p={comp.p_value:.4g} -> {comp.verdict}"
    )


def _experiment_report(result: ExperimentResult) -> list[str]:
    lines = [f"seeds: n={len(result.seeds)} [{', '.join(map(str, result.seeds))}]"]
    for name, cell in result.cells.items():
        lines.append(f"cell {name}: n={len(cell.profits)} {_stats_cells(cell.summary)}")
    for scenario in sorted(result.comparisons):
        lines.append(_comparison_line(result.comparisons[scenario]))
    return lines


def _experiment_json(result: ExperimentResult) -> dict:
    return {
        "seeds": list(result.seeds),
        "cells": {
            name: {
                "scenario": cell.scenario,
                "policy": cell.policy,
                "final_profits": [round(p, 2) for p in cell.profits],
                "mean": round(cell.summary.mean, 2),
                "standard_error": round(cell.summary.standard_error, 2),
                "median": round(cell.summary.median, 2),
                "standard_deviation": round(cell.summary.standard_deviation, 2),
                "maximum": round(cell.summary.maximum, 2),
            }
            for name, cell in result.cells.items()
        },
        "comparisons": {
            scenario: {
                "t_statistic": comp.t_statistic,
                "degrees_of_freedom": comp.degrees_of_freedom,
                "p_value": comp.p_value,
                "mean_voronoi": round(comp.mean_voronoi, 2),
                "mean_random": round(comp.mean_random, 2),
                "verdict": comp.verdict,
            }
            for scenario, comp in result.comparisons.items()
        },
    }


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # Bad usage is a configuration problem: exit 1, not argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_override_flags(parser: argparse.ArgumentParser, include_cell_keys: bool) -> None:
    parser.add_argument("--config", metavar="FILE", help="config file of key = value lines")
    parser.add_argument("--grid", help="grid source: file:PATH or synthetic:W,H,SPACING")
    if include_cell_keys:
        parser.add_argument("--policy", help="movement policy: random or voronoi")
        parser.add_argument(
            "--scenario", help="stationary, saturday, or file:PATH schedule"
        )
    parser.add_argument("--drivers-count", dest="drivers_count", help="driver capacity")
    parser.add_argument(
        "--riders-per-tick", dest="riders_per_tick", help="rider arrival attempts per tick"
    )
    parser.add_argument("--voronoi-vision", dest="voronoi_vision", help="repulsion vision radius")
    parser.add_argument("--step-length", dest="step_length", help="advance per tick, in (0, 1]")
    parser.add_argument("--max-wait", dest="max_wait", help="rider patience in ticks, or inf")
    parser.add_argument("--random-exit", dest="random_exit", help="true/false random departures")
    parser.add_argument("--run-length", dest="run_length", help="ticks per run")
    if include_cell_keys:
        parser.add_argument("--seed", help="random seed")


def _add_seed_flags(parser: argparse.ArgumentParser, default_count: int) -> None:
    parser.add_argument("--seeds", help="explicit comma-separated seed list")
    parser.add_argument(
        "--seed-count", dest="seed_count", type=int, default=default_count,
        help=f"number of consecutive seeds (default {default_count})",
    )
    parser.add_argument(
        "--seed-base", dest="seed_base", type=int, default=1,
        help="first seed when using --seed-count (default 1)",
    )


def _gather_pairs(args) -> tuple[dict, Path | None]:
    base_dir: Path | None = None
    pairs: dict = {}
    if args.config:
        path = Path(args.config)
        pairs = parse_pairs(path.read_text())
        base_dir = path.parent
    for attr, key in _OVERRIDE_FLAGS.items():
        value = getattr(args, attr, None)
        if value is not None:
            pairs[key] = value
    return pairs, base_dir


def _gather_seeds(args) -> list[int]:
    if args.seeds:
        try:
            return [int(s) for s in args.seeds.split(",")]
        except ValueError:
            raise ConfigError(f"seeds must be integers, got {args.seeds!r}") from None
    return list(range(args.seed_base, args.seed_base + args.seed_count))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    pairs, base_dir = _gather_pairs(args)
    eff = effective_pairs(pairs, base_dir)
    result = run(resolve_config(eff))
    lines = _summary_lines(result)
    if args.out:
        out_dir = Path(args.out)
        _write_run_artifacts(result, eff, out_dir)
        (out_dir / "summary.json").write_text(
            json.dumps(_summary_json(result), indent=2) + "\n"
        )
        lines.append(f"artifacts written to {out_dir}")
    print("\n".join(lines))
    return 0


def cmd_compare(args) -> int:
    pairs, base_dir = _gather_pairs(args)
    seeds = _gather_seeds(args)
    if len(set(seeds)) < 2:
        raise ConfigError(f"compare needs at least 2 distinct seeds, got {seeds}")
    plan = ExperimentPlan(cells=STANDARD_CELLS, seeds=tuple(seeds), base_pairs=pairs)
    out_root = Path(args.out) if args.out else None
    result = run_experiment(plan, base_dir, out_root)
    lines = _experiment_report(result)
    if out_root is not None:
        out_root.mkdir(parents=True, exist_ok=True)
        (out_root / "compare.txt").write_text("\n".join(lines) + "\n")
        (out_root / "compare.json").write_text(
            json.dumps(_experiment_json(result), indent=2) + "\n"
        )
        lines.append(f"artifacts written to {out_root}")
    print("\n".join(lines))
    return 0


SWEEPABLE_KEYS = (
    "drivers_count",
    "riders_per_tick",
    "voronoi_vision",
    "step_length",
    "max_wait",
    "run_length",
)


def cmd_sweep(args) -> int:
    pairs, base_dir = _gather_pairs(args)
    if args.key not in SWEEPABLE_KEYS:
        raise ConfigError(
            f"--key must be one of {', '.join(SWEEPABLE_KEYS)}, got {args.key!r}"
        )
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("--values must list at least one value")
    seeds = _gather_seeds(args)

    header = f"{args.key:>14}  {'n':>3}  {'mean':>12} {'se':>10} {'median':>12} {'sd':>10} {'max':>12}"
    lines = [header]
    csv_rows = ["value,n,mean,standard_error,median,standard_deviation,maximum"]
    for value in values:
        profits: list[float] = []
        for seed in seeds:
            run_pairs = dict(pairs)
            run_pairs[args.key] = value
            run_pairs["seed"] = str(seed)
            eff = effective_pairs(run_pairs, base_dir)
            profits.append(run(resolve_config(eff)).final_profit)
        stats = summarize(profits)
        lines.append(
            f"{value:>14}  {len(profits):>3}  {stats.mean:>12.2f} {stats.standard_error:>10.2f} "
            f"{stats.median:>12.2f} {stats.standard_deviation:>10.2f} {stats.maximum:>12.2f}"
        )
        csv_rows.append(
            f"{value},{len(profits)},{stats.mean:.2f},{stats.standard_error:.2f},"
            f"{stats.median:.2f},{stats.standard_deviation:.2f},{stats.maximum:.2f}"
        )
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep.csv").write_text("\n".join(csv_rows) + "\n")
        lines.append(f"artifacts written to {out_dir}")
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridride", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation")
    _add_override_flags(p_run, include_cell_keys=True)
    p_run.add_argument("--out", help="directory for frames.csv/summary/config echo")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser(
        "compare", help="run the 2x2 scenario-by-policy experiment with paired seeds"
    )
    _add_override_flags(p_cmp, include_cell_keys=False)
    _add_seed_flags(p_cmp, default_count=10)
    p_cmp.add_argument("--out", help="root directory for per-run and comparison artifacts")
    p_cmp.set_defaults(func=cmd_compare)

    p_swp = sub.add_parser("sweep", help="vary one numeric config key")
    _add_override_flags(p_swp, include_cell_keys=True)
    _add_seed_flags(p_swp, default_count=5)
    p_swp.add_argument("--key", required=True, help="config key to vary")
    p_swp.add_argument("--values", required=True, help="comma-separated values")
    p_swp.add_argument("--out", help="directory for sweep.csv")
    p_swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConfigurationError, GridError, ScheduleError, MetricsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 — last-resort boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
