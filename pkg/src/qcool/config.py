"""Flat ``key = value`` scenario files.

Example::

    # driven chiller, cold bath at half the hot temperature
    levels.delta31 = 1.0
    levels.delta21 = 0.3
    drive.epsilon = 0.001
    bath.hot.temperature = 0.2
    bath.hot.coupling = 0.001
    bath.cold.model = power_law
    bath.cold.temperature = 0.1
    bath.cold.coupling = 0.001
    bath.cold.exponent = 1
    bath.env.temperature = 0.2
    bath.env.coupling = 0.001

``bath.*.model`` defaults to ``white``.  ``analysis.grid`` and
``analysis.tol`` are optional defaults for the matching CLI flags.  Unknown
or repeated keys are errors.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .model import (
    BATH_LABELS,
    BathSpec,
    DriveSpec,
    LevelStructure,
    Scenario,
    ScenarioError,
    validate_scenario,
)

REQUIRED_KEYS = (
    "levels.delta31",
    "levels.delta21",
    "drive.epsilon",
    *(f"bath.{b}.{f}" for b in BATH_LABELS for f in ("temperature", "coupling")),
)
OPTIONAL_KEYS = (
    *(f"bath.{b}.{f}" for b in BATH_LABELS for f in ("model", "exponent")),
    "analysis.grid",
    "analysis.tol",
)
KNOWN_KEYS = frozenset(REQUIRED_KEYS + OPTIONAL_KEYS)


class ConfigError(ScenarioError):
    """Malformed scenario file; the message carries the source and line."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario
    grid: Optional[int] = None
    tol: Optional[float] = None


def _number(text: str, where: str, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{where}: {key}: expected a number, got {text!r}") from None


def parse_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r} (first set on line {lines[key]})")
        if not value:
            raise ConfigError(f"{where}: {key}: missing value")
        values[key] = value
        lines[key] = lineno

    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing required key(s): {', '.join(missing)}")

    def num(key: str) -> float:
        return _number(values[key], f"{source}:{lines[key]}", key)

    baths = {}
    for label in BATH_LABELS:
        p = f"bath.{label}"
        exponent = num(f"{p}.exponent") if f"{p}.exponent" in values else None
        try:
            baths[label] = BathSpec(
                label=label,
                temperature=num(f"{p}.temperature"),
                coupling=num(f"{p}.coupling"),
                model=values.get(f"{p}.model", "white"),
                exponent=exponent,
            )
        except ConfigError:
            raise
        except ScenarioError as exc:
            raise ConfigError(f"{source}: {exc}") from None
    try:
        scenario = Scenario(
            levels=LevelStructure(num("levels.delta31"), num("levels.delta21")),
            drive=DriveSpec(num("drive.epsilon")),
            **baths,
        )
    except ConfigError:
        raise
    except ScenarioError as exc:
        raise ConfigError(f"{source}: {exc}") from None

    grid = None
    if "analysis.grid" in values:
        g = num("analysis.grid")
        if g != int(g) or g < 2:
            raise ConfigError(f"{source}:{lines['analysis.grid']}: analysis.grid: "
                              f"expected an integer >= 2, got {values['analysis.grid']!r}")
        grid = int(g)
    tol = None
    if "analysis.tol" in values:
        tol = num("analysis.tol")
        if not tol > 0:
            raise ConfigError(f"{source}:{lines['analysis.tol']}: analysis.tol: must be positive")
    return ScenarioConfig(validate_scenario(scenario), grid, tol)


def parse_config(path) -> ScenarioConfig:
    path = Path(path)
    return parse_config_text(path.read_text(), str(path))


def scenario_items(scenario: Scenario) -> list[tuple[str, object]]:
    """Canonical ``(key, value)`` pairs describing a scenario."""
    items: list[tuple[str, object]] = [
        ("levels.delta31", scenario.levels.delta31),
        ("levels.delta21", scenario.levels.delta21),
        ("drive.epsilon", scenario.drive.epsilon),
    ]
    for label in BATH_LABELS:
        bath = getattr(scenario, label)
        p = f"bath.{label}"
        items += [(f"{p}.model", bath.model), (f"{p}.temperature", bath.temperature),
                  (f"{p}.coupling", bath.coupling)]
        if bath.exponent is not None:
            items.append((f"{p}.exponent", bath.exponent))
    return items


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, (int, float)) else str(value)


def format_config(config: ScenarioConfig) -> str:
    """Canonical file text; ``parse_config_text(format_config(c)) == c``."""
    items = scenario_items(config.scenario)
    if config.grid is not None:
        items.append(("analysis.grid", config.grid))
    if config.tol is not None:
        items.append(("analysis.tol", config.tol))
    lines = [f"{k} = {v if k == 'analysis.grid' else _fmt(v)}" for k, v in items]
    return "\n".join(lines) + "\n"


def write_config(config: ScenarioConfig, path) -> None:
    Path(path).write_text(format_config(config))
