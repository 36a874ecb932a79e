"""
Experiment specification and its resolution from presets, a YAML file and CLI overrides.

Precedence, highest first: CLI flags, the experiment file, the preset, model defaults.
"""

from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import (
    BaseModel,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from mahbf.channel import ChannelConfig
from mahbf.config import Preset, environment
from mahbf.config.file_management import DEFAULT_EXPERIMENT_FILE
from mahbf.lib.exceptions import ConfigError
from mahbf.log import logger
from mahbf.madrl import AblationCase, TrainerConfig
from mahbf.precoding import SystemConfig


class EmitFlags(BaseModel):
    rates_csv: bool = True
    trace_csv: bool = True
    timing_json: bool = True
    episodes_json: bool = True


class ExperimentSpec(BaseModel):
    channel: ChannelConfig = Field(default_factory=ChannelConfig)
    system: SystemConfig = Field(default_factory=SystemConfig)
    trainer: TrainerConfig = Field(default_factory=TrainerConfig)
    snr_grid: list[float] = Field(default_factory=lambda: [5.0])
    agent_counts: list[int] = Field(default_factory=lambda: [2])
    seeds: list[int] = Field(default_factory=lambda: [0])
    realizations: int = Field(default=1, ge=1)
    output_dir: Path = Path(environment.OUTPUT_DIR)
    emit: EmitFlags = Field(default_factory=EmitFlags)
    workers: int = Field(default=environment.WORKERS, ge=1)
    timing_snr_db: float = 5.0
    baseline_draws: int = Field(default=20, ge=1)
    cases: list[AblationCase] = Field(default_factory=lambda: list(AblationCase))
    sweep_cases: list[AblationCase] = Field(
        default_factory=lambda: [
            AblationCase.CASE1,
            AblationCase.CASE2,
            AblationCase.CASE3,
        ]
    )

    @field_validator("snr_grid", "agent_counts", "cases", "sweep_cases")
    @classmethod
    def _non_empty(cls, value: list) -> list:
        if not value:
            raise ValueError("must not be empty")
        return value

    @field_validator("agent_counts")
    @classmethod
    def _positive_agents(cls, value: list[int]) -> list[int]:
        if any(y < 1 for y in value):
            raise ValueError("agent counts must be positive")
        return value

    @field_validator("sweep_cases")
    @classmethod
    def _multi_agent_cases(cls, value: list[AblationCase]) -> list[AblationCase]:
        if AblationCase.SINGLE in value:
            raise ValueError("the sweep covers one agent through agent_counts")
        return value

    @field_validator("seeds")
    @classmethod
    def _distinct_seeds(cls, value: list[int]) -> list[int]:
        if not value:
            raise ValueError("must not be empty")
        if len(set(value)) != len(value):
            raise ValueError("seeds must be distinct")
        return value

    @model_validator(mode="after")
    def _check_dimensions(self) -> "ExperimentSpec":
        k, n_rf, n_tx = self.channel.n_users, self.system.n_rf, self.channel.n_tx
        if not k <= n_rf <= n_tx:
            raise ValueError(
                f"need users ({k}) <= RF chains ({n_rf}) <= antennas ({n_tx})"
            )
        if max(self.agent_counts + [self.trainer.n_agents]) > n_tx * n_rf:
            raise ValueError("more agents than orthogonal initial states")
        return self


PRESETS: dict[Preset, dict[str, Any]] = {
    Preset.DESK: {
        "channel": {"n_tx": 16, "n_users": 4, "n_clusters": 10, "n_rays": 8},
        "system": {"n_rf": 4},
        "trainer": {"max_iters": 300},
        "snr_grid": [0.0, 5.0, 10.0],
        "agent_counts": [1, 2, 3],
        "seeds": list(range(10)),
    },
    Preset.PAPER: {
        "channel": {"n_tx": 64, "n_users": 8, "n_clusters": 10, "n_rays": 8},
        "system": {"n_rf": 8},
        "trainer": {"max_iters": 300},
        "snr_grid": [-10.0, -5.0, 0.0, 5.0, 10.0],
        "agent_counts": [1, 2, 3],
        "seeds": list(range(10)),
    },
}


def merge(base: dict[str, Any], update: dict[str, Any]) -> dict[str, Any]:
    """Recursive dict merge; values in ``update`` win, nested mappings merge."""
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_experiment_file(path: Path | str) -> dict[str, Any]:
    try:
        with open(path, "r") as file:
            data = yaml.safe_load(file)
    except FileNotFoundError as e:
        raise ConfigError(f"Experiment file '{path}' was not found.") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Experiment file '{path}' is not valid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Experiment file '{path}' must hold a mapping")
    return data


def resolve_spec(
    preset: Optional[Preset | str] = None,
    config_path: Optional[Path | str] = None,
    overrides: Optional[dict[str, Any]] = None,
) -> ExperimentSpec:
    """
    Build an ``ExperimentSpec``.

    :param preset: Preset name; defaults to ``MAHBF_PRESET``.
    :param config_path: YAML experiment file; ``<CONFIG_DIR>/experiment.yaml`` is used
        when omitted and present.
    :param overrides: Values from the command line, in the file's key layout.
    :raises ConfigError: on unknown presets, unreadable files or invalid values.
    """
    try:
        preset = Preset(preset) if preset is not None else environment.PRESET
    except ValueError as e:
        raise ConfigError(f"Unknown preset '{preset}'") from e

    data = PRESETS[preset]
    if config_path is None and DEFAULT_EXPERIMENT_FILE.exists():
        config_path = DEFAULT_EXPERIMENT_FILE
    if config_path is not None:
        logger.debug(f"Reading experiment file {config_path}")
        data = merge(data, load_experiment_file(config_path))
    if overrides:
        data = merge(data, {k: v for k, v in overrides.items() if v is not None})

    try:
        return ExperimentSpec.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment configuration:\n{e}") from e


def resolved_dict(spec: ExperimentSpec) -> dict[str, Any]:
    """JSON-ready dump of a resolved spec."""
    return spec.model_dump(mode="json")
