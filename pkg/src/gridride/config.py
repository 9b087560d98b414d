"""Flat ``key = value`` run configuration: parsing, validation, echoing.

The textual config is the reproducibility boundary: the CLI echoes the
effective pairs (defaults filled in, paths absolutized) next to every run's
output, and feeding that echo back reproduces the run bit for bit.
"""

from __future__ import annotations

import math
from pathlib import Path

from .engine import GridSource, SimConfig
from .movement import MovementPolicy, PolicyKind, StepParams
from .scenario import ScenarioSchedule, parse_schedule, saturday_schedule


class ConfigError(ValueError):
    """Base class for config-file problems."""


class UnknownKeyError(ConfigError):
    pass


class MissingKeyError(ConfigError):
    pass


class InvalidValueError(ConfigError):
    pass


# Declaration order doubles as the echo order.
KEY_ORDER: tuple[str, ...] = (
    "grid",
    "policy",
    "scenario",
    "drivers_count",
    "riders_per_tick",
    "voronoi_vision",
    "step_length",
    "max_wait",
    "random_exit",
    "run_length",
    "seed",
)

DEFAULTS: dict[str, str] = {
    "scenario": "stationary",
    "drivers_count": "100",
    "riders_per_tick": "30",
    "voronoi_vision": "3.0",
    "step_length": "0.5",
    "max_wait": "20",
    "random_exit": "true",
    "run_length": "1440",
    "seed": "1",
}

REQUIRED_KEYS = ("grid", "policy")

_TRUE_WORDS = frozenset({"true", "yes", "on", "1"})
_FALSE_WORDS = frozenset({"false", "no", "off", "0"})


def parse_pairs(text: str) -> dict[str, str]:
    """Parse config text into raw key/value strings.

    One ``key = value`` per line; ``#`` starts a comment; blank lines are
    skipped; a repeated key keeps its last value.
    """
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_ORDER:
            raise UnknownKeyError(
                f"line {lineno}: unknown key {key!r} (known: {', '.join(KEY_ORDER)})"
            )
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        pairs[key] = value
    return pairs


def _parse_int(key: str, value: str, minimum: int | None = None) -> int:
    try:
        result = int(value)
    except ValueError:
        raise InvalidValueError(f"{key} must be an integer, got {value!r}") from None
    if minimum is not None and result < minimum:
        raise InvalidValueError(f"{key} must be >= {minimum}, got {result}")
    return result


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise InvalidValueError(f"{key} must be a number, got {value!r}") from None


def _parse_bool(key: str, value: str) -> bool:
    word = value.lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise InvalidValueError(
        f"{key} must be one of true/false/yes/no/on/off/1/0, got {value!r}"
    )


def _resolve_path(value: str, base_dir: Path | None) -> Path:
    path = Path(value)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return path


def _parse_grid_source(value: str, base_dir: Path | None) -> GridSource:
    if value.startswith("file:"):
        path = _resolve_path(value[len("file:"):], base_dir)
        if not path.is_file():
            raise InvalidValueError(f"grid file not found: {path}")
        return GridSource.from_file(path)
    if value.startswith("synthetic:"):
        parts = value[len("synthetic:"):].split(",")
        if len(parts) != 3:
            raise InvalidValueError(
                f"synthetic grid needs width,height,spacing, got {value!r}"
            )
        width = _parse_int("grid width", parts[0].strip(), minimum=1)
        height = _parse_int("grid height", parts[1].strip(), minimum=1)
        spacing = _parse_int("grid spacing", parts[2].strip(), minimum=2)
        return GridSource.lattice(width, height, spacing)
    raise InvalidValueError(
        f"grid must be 'file:PATH' or 'synthetic:W,H,SPACING', got {value!r}"
    )


def _parse_scenario(value: str, base_dir: Path | None) -> ScenarioSchedule | None:
    # None means stationary: the engine builds the constant schedule from
    # drivers_count/riders_per_tick.
    if value == "stationary":
        return None
    if value == "saturday":
        return saturday_schedule()
    if value.startswith("file:"):
        path = _resolve_path(value[len("file:"):], base_dir)
        try:
            return parse_schedule(path.read_text())
        except OSError as exc:
            raise InvalidValueError(f"cannot read scenario file {path}: {exc}") from None
    raise InvalidValueError(
        f"scenario must be 'stationary', 'saturday', or 'file:PATH', got {value!r}"
    )


def resolve_config(pairs: dict[str, str], base_dir: Path | None = None) -> SimConfig:
    """Turn raw pairs into a validated SimConfig.

    ``grid`` and ``policy`` are required; everything else defaults.  File
    paths are taken relative to ``base_dir`` (normally the config file's
    directory).
    """
    for key in pairs:
        if key not in KEY_ORDER:
            raise UnknownKeyError(f"unknown key {key!r}")
    merged = {**DEFAULTS, **pairs}
    for key in REQUIRED_KEYS:
        if key not in merged:
            raise MissingKeyError(f"missing required key {key!r}")

    grid = _parse_grid_source(merged["grid"], base_dir)

    policy_word = merged["policy"]
    if policy_word not in (PolicyKind.RANDOM.value, PolicyKind.VORONOI.value):
        raise InvalidValueError(
            f"policy must be 'random' or 'voronoi', got {policy_word!r}"
        )
    vision = _parse_float("voronoi_vision", merged["voronoi_vision"])
    if not vision > 0.0:
        raise InvalidValueError(f"voronoi_vision must be > 0, got {vision}")
    policy = MovementPolicy(PolicyKind(policy_word), voronoi_vision=vision)

    step_length = _parse_float("step_length", merged["step_length"])
    if not (0.0 < step_length <= 1.0):
        raise InvalidValueError(f"step_length must be in (0, 1], got {step_length}")

    if merged["max_wait"].lower() == "inf":
        max_wait: float = math.inf
    else:
        max_wait = _parse_int("max_wait", merged["max_wait"], minimum=0)

    return SimConfig(
        grid=grid,
        policy=policy,
        driver_capacity=_parse_int("drivers_count", merged["drivers_count"], minimum=0),
        riders_per_tick=_parse_int("riders_per_tick", merged["riders_per_tick"], minimum=0),
        step_params=StepParams(step_length),
        max_wait=max_wait,
        random_exit_enabled=_parse_bool("random_exit", merged["random_exit"]),
        schedule=_parse_scenario(merged["scenario"], base_dir),
        run_length=_parse_int("run_length", merged["run_length"], minimum=1),
        seed=_parse_int("seed", merged["seed"]),
    )


def parse_config(text: str, base_dir: Path | None = None) -> SimConfig:
    """Parse config text straight to a SimConfig."""
    return resolve_config(parse_pairs(text), base_dir)


def effective_pairs(pairs: dict[str, str], base_dir: Path | None = None) -> dict[str, str]:
    """Pairs with defaults filled in and file paths absolutized.

    This is what gets echoed next to run output; re-parsing it (from any
    directory) reproduces the same SimConfig.
    """
    merged = {**DEFAULTS, **pairs}
    for key in ("grid", "scenario"):
        value = merged.get(key, "")
        if value.startswith("file:"):
            path = _resolve_path(value[len("file:"):], base_dir)
            merged[key] = f"file:{path.resolve()}"
    return merged


def echo_text(pairs: dict[str, str]) -> str:
    """Canonical config document for a pair set, keys in declaration order."""
    lines = [f"{key} = {pairs[key]}" for key in KEY_ORDER if key in pairs]
    return "\n".join(lines) + "\n"
