"""Engine identifiers, tunable defaults and the per-engine parameter files."""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from pathlib import Path

from ..errors import ConfigurationError
from ..keyvalue import format_lines, parse_lines


class EngineId(enum.IntEnum):
    SGA = 0
    UMDA = 1
    ECGA = 2


CROSSOVER_KINDS = ("uniform", "onePoint")


@dataclass(frozen=True)
class EngineConfig:
    tournament_size: int = 4
    crossover_probability: float = 0.5
    crossover_kind: str = "uniform"
    selected_set_fraction: float = 0.5
    max_ecga_group_size: int = 8

    def __post_init__(self):
        if self.tournament_size < 1:
            raise ConfigurationError("tournamentSize must be >= 1")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ConfigurationError("crossoverProbability must lie in [0, 1]")
        if self.crossover_kind not in CROSSOVER_KINDS:
            raise ConfigurationError(
                f"crossoverKind must be one of {', '.join(CROSSOVER_KINDS)}"
            )
        if not 0.0 < self.selected_set_fraction <= 1.0:
            raise ConfigurationError("selectedSetFraction must lie in (0, 1]")
        if self.max_ecga_group_size < 1:
            raise ConfigurationError("maxEcgaGroupSize must be >= 1")


# file key -> (field name, parser)
ENGINE_KEYS = {
    "tournamentSize": ("tournament_size", int),
    "crossoverProbability": ("crossover_probability", float),
    "crossoverKind": ("crossover_kind", str),
    "selectedSetFraction": ("selected_set_fraction", float),
    "maxEcgaGroupSize": ("max_ecga_group_size", int),
}


def parse_engine_config(text: str, source: str = "<string>") -> EngineConfig:
    values = {}
    for lineno, key, raw in parse_lines(text, source):
        if key not in ENGINE_KEYS:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        name, conv = ENGINE_KEYS[key]
        try:
            values[name] = conv(raw)
        except ValueError:
            raise ConfigurationError(
                f"{source}:{lineno}: invalid value {raw!r} for {key}"
            ) from None
    try:
        return EngineConfig(**values)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{source}: {exc}") from None


def load_engine_config(path: str | Path) -> EngineConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read engine parameters {path}: {exc}") from None
    return parse_engine_config(text, str(path))


def format_engine_config(config: EngineConfig) -> str:
    by_field = {name: key for key, (name, _) in ENGINE_KEYS.items()}
    return format_lines((by_field[f.name], getattr(config, f.name)) for f in fields(config))
