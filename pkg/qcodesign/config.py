"""
Configuration management for qcodesign runs
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import psutil
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from qcodesign.constraints import ConstraintSet
from qcodesign.control_plane import CPHASE_SWITCH_LINES, ClockConfig, LineBudget, StagePower, default_stages
from qcodesign.error_budget import (
    DEFAULT_Q_LIST,
    M_CONSTRAINED_REF,
    M_UNCONSTRAINED_REF,
    N_BS9,
    T2_BULK,
    T2_OXIDE,
)
from qcodesign.exceptions import ConfigError
from qcodesign.layout import DIRECT_LINES_PER_QUBIT, EFFECTIVE_LINES_PER_QUBIT, ArchModel
from qcodesign.scheduling import SEARCH_PARTITIONS, IdleWindowPolicy, default_budget_nodes

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "qcodesign.yaml"


def physical_cores() -> int:
    return psutil.cpu_count(logical=False) or 1


class ConstraintFlags(BaseModel):
    """Optional electronics predicates (precedence is always on)"""

    block_same_protocol: bool = True
    one_measurement_per_block: bool = True
    park_crosstalk: bool = True

    def to_constraint_set(self, arch: ArchModel) -> ConstraintSet:
        return ConstraintSet(
            arch,
            block_same_protocol=self.block_same_protocol,
            one_measurement_per_block=self.one_measurement_per_block,
            park_crosstalk=self.park_crosstalk,
        )


class LayoutSettings(BaseModel):
    """Direct-wiring baseline and pulse-protocol counts"""

    n_qubits: int = Field(default=21, ge=0)
    direct_lines_per_qubit: int = Field(default=DIRECT_LINES_PER_QUBIT, ge=0)
    effective_lines_per_qubit: int = Field(default=EFFECTIVE_LINES_PER_QUBIT, ge=1)
    switch_lines: int = Field(default=CPHASE_SWITCH_LINES, ge=0)
    cphase_protocols: int = Field(default=3, ge=1)


class BudgetParameters(BaseModel):
    """Inputs of the circuit failure bound and its sweep"""

    n_gates: int = Field(default=N_BS9, ge=0)
    m_unconstrained: int = Field(default=M_UNCONSTRAINED_REF, ge=0)
    m_constrained: int = Field(default=M_CONSTRAINED_REF, ge=0)
    q_list: List[float] = Field(default_factory=lambda: list(DEFAULT_Q_LIST))
    p_min: float = Field(default=1e-7, gt=0, le=1)
    p_max: float = Field(default=1e-2, gt=0, le=1)
    p_points: int = Field(default=51, ge=1)
    t2_values: List[float] = Field(default_factory=lambda: [T2_OXIDE, T2_BULK])

    @field_validator("q_list")
    @classmethod
    def validate_q(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= q <= 1.0 for q in v):
            raise ValueError("idle error rates must lie in [0, 1]")
        return v

    @field_validator("t2_values")
    @classmethod
    def validate_t2(cls, v: List[float]) -> List[float]:
        if any(t2 <= 0 for t2 in v):
            raise ValueError("coherence times must be positive")
        return v

    def p_grid(self) -> np.ndarray:
        if self.p_points == 1:
            return np.array([self.p_min])
        return np.logspace(np.log10(self.p_min), np.log10(self.p_max), self.p_points)


class SearchSettings(BaseModel):
    """Exact scheduler knobs"""

    budget_nodes: Optional[int] = Field(
        default=None, ge=1, description="None scales with workers up to 10^7"
    )
    workers: int = Field(default_factory=physical_cores, ge=1)
    partitions: int = Field(default=SEARCH_PARTITIONS, ge=1)
    time_limit: Optional[float] = Field(default=None, gt=0, description="Seconds per partition")

    @property
    def resolved_budget_nodes(self) -> int:
        if self.budget_nodes is not None:
            return self.budget_nodes
        return default_budget_nodes(self.workers)


class SweepSettings(BaseModel):
    """Dataset ranges for the clock, routing and gate-accuracy sweeps"""

    fig5_max_ratio: int = Field(default=60, ge=1)
    noise_levels_uv: List[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0, 1000.0])
    j_targets_uev: List[float] = Field(default_factory=lambda: [0.069, 0.5, 1.0, 2.0])
    phi_max: float = Field(default=1e-2, gt=0)
    jitter: float = Field(default=10e-12, ge=0, description="Pulse-edge timing jitter (s)")


class RunConfig(BaseModel):
    """
    Configuration of a qcodesign run

    Loaded from YAML or JSON; `${VAR}` strings are expanded from the
    environment. CLI flags override fields after loading.
    """

    model_config = ConfigDict(extra="forbid")

    circuit: Optional[str] = Field(default=None, description="Circuit JSON; None = BS9(21) generator")
    arch: Optional[str] = Field(default=None, description="Arch JSON; None = bundled default")
    calibration: Optional[str] = Field(default=None, description="Exchange calibration CSV")
    routing_nodes: Optional[str] = Field(default=None, description="Routing node CSV")

    constraints: ConstraintFlags = Field(default_factory=ConstraintFlags)
    policy: IdleWindowPolicy = IdleWindowPolicy.FIRST_TO_LAST_OP
    clock: ClockConfig = Field(default_factory=ClockConfig)
    lines: LineBudget = Field(default_factory=LineBudget)
    stages: List[StagePower] = Field(default_factory=default_stages)
    layout: LayoutSettings = Field(default_factory=LayoutSettings)
    budget: BudgetParameters = Field(default_factory=BudgetParameters)
    search: SearchSettings = Field(default_factory=SearchSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)

    output_dir: str = "qcodesign-out"
    log_level: str = "WARNING"

    @field_validator("circuit", "arch", "calibration", "routing_nodes")
    @classmethod
    def validate_file(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and not Path(v).is_file():
            raise ValueError(f"file not found: {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level: {v}")
        return level

    @classmethod
    def load(cls, config_path: Union[str, Path] = DEFAULT_CONFIG_FILE) -> "RunConfig":
        """
        Load configuration from file

        Args:
            config_path: Path to configuration file (YAML or JSON)

        Returns:
            RunConfig instance

        Raises:
            ConfigError: If config file not found or invalid

        Example:
            >>> config = RunConfig.load("qcodesign.yaml")
            >>> config.clock.t_qclk
            3e-08
        """
        path = Path(config_path)

        if not path.exists():
            raise ConfigError(f"Config file not found: {config_path}")

        try:
            with open(path, "r", encoding="utf-8") as f:
                if path.suffix in [".yaml", ".yml"]:
                    data = yaml.safe_load(f)
                elif path.suffix == ".json":
                    data = json.load(f)
                else:
                    raise ConfigError(f"Unsupported config format: {path.suffix}")
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in config file: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in config file: {e}") from e

        data = cls._expand_env_vars(data or {})
        try:
            config = cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid config in {config_path}: {e}") from e

        logger.info(f"✅ Loaded config from: {config_path}")
        return config

    def save(self, config_path: Union[str, Path] = DEFAULT_CONFIG_FILE) -> Path:
        """
        Save configuration to file

        Args:
            config_path: Path to save configuration

        Raises:
            ConfigError: If the format is unsupported
        """
        path = Path(config_path)
        data = self.model_dump(mode="json")

        if path.suffix not in [".yaml", ".yml", ".json"]:
            raise ConfigError(f"Unsupported config format: {path.suffix}")

        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            if path.suffix == ".json":
                json.dump(data, f, indent=2, sort_keys=True)
                f.write("\n")
            else:
                yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)

        logger.info(f"💾 Saved config to: {config_path}")
        return path

    @staticmethod
    def _expand_env_vars(data: Any) -> Any:
        """
        Recursively expand environment variables in configuration

        Supports ${VAR_NAME} syntax; unknown variables are left as-is.
        """
        if isinstance(data, dict):
            return {k: RunConfig._expand_env_vars(v) for k, v in data.items()}
        elif isinstance(data, list):
            return [RunConfig._expand_env_vars(item) for item in data]
        elif isinstance(data, str):
            if data.startswith("${") and data.endswith("}"):
                return os.getenv(data[2:-1], data)
        return data

    @classmethod
    def create_default(cls) -> "RunConfig":
        """
        Create default configuration

        Example:
            >>> RunConfig.create_default().save("qcodesign.yaml")
        """
        return cls()

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """
        Re-validate the config with dotted-path overrides; None values are skipped

        Example:
            >>> config.with_overrides(**{"clock.t_qclk": 45e-9, "policy": "makespan"})

        Raises:
            ConfigError: If the result is invalid
        """
        data: Dict[str, Any] = self.model_dump()
        for key, value in overrides.items():
            if value is None:
                continue
            target = data
            *parents, leaf = key.split(".")
            for part in parents:
                target = target[part]
            target[leaf] = value
        try:
            return type(self).model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid option: {e}") from e

    def __repr__(self) -> str:
        return f"RunConfig(policy='{self.policy.value}', constraints={self.constraints.model_dump()})"


__all__ = [
    "DEFAULT_CONFIG_FILE",
    "ConstraintFlags",
    "LayoutSettings",
    "BudgetParameters",
    "SearchSettings",
    "SweepSettings",
    "RunConfig",
    "physical_cores",
]
