"""Run configuration: models, file loading and precedence."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, ClassVar

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from isofactor.exceptions import ParameterError
from isofactor.spectral.eigensolve import DEFAULT_LEVEL_CAP
from isofactor.spectral.families import Scheme, System, default_grid
from isofactor.spectral.grid import Grid

# Handle tomllib/tomli imports for TOML support
try:
    import tomllib  # type: ignore[import-not-found]
except ImportError:
    # Python < 3.11
    try:
        import tomli as tomllib
    except ImportError:
        tomllib = None

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "ISOFACTOR_OUT_DIR"
DEFAULT_OUT_DIR = "isofactor-out"

SYSTEM_SPECTRUM_TOL = {System.OSCILLATOR: 2e-3, System.HYDROGEN: 5e-3}
# Checks whose tolerance follows the spectral tolerance unless configured.
SPECTRAL_CHECKS = ("isospectral", "analytic_spectrum", "missing_state")


class GridSpec(BaseModel):
    """Optional overrides of the system's default grid."""

    x_min: float | None = None
    x_max: float | None = None
    n: int | None = Field(default=None, ge=3)

    def resolve(self, system: System, l: int) -> Grid:
        base = default_grid(system, l)
        if self.x_min is None and self.x_max is None and self.n is None:
            return base
        if system is System.HYDROGEN and self.x_min is None:
            r_max = self.x_max if self.x_max is not None else base.x_max
            n = self.n if self.n is not None else round(r_max / base.spacing)
            return Grid.radial(r_max, n)
        return Grid(
            self.x_min if self.x_min is not None else base.x_min,
            self.x_max if self.x_max is not None else base.x_max,
            self.n if self.n is not None else base.n_points,
        )


class OutputSpec(BaseModel):
    csv: bool = True
    json_report: bool = Field(default=True, alias="json")
    plot: bool = True

    model_config = ConfigDict(populate_by_name=True)


class CheckConfig(BaseModel):
    """Configuration for a single check."""

    enabled: bool = True
    tolerance: float | None = Field(default=None, gt=0)


class RunConfig(BaseModel):
    """Everything a family, spectrum, chain or verify run needs."""

    model_config = ConfigDict(populate_by_name=True)

    system: System = System.OSCILLATOR
    scheme: Scheme = Scheme.MIELNIK
    l: int = Field(default=1, ge=1)
    k: int = 0
    gamma: float = 2.0
    lambda_: float = Field(default=0.3, alias="lambda")
    nu: float = 0.0
    epsilon: float | None = None
    epsilons: list[float] = Field(default_factory=lambda: [-1.0, -3.0])
    levels: int = Field(default=5, ge=1, le=DEFAULT_LEVEL_CAP)
    tol: float | None = Field(default=None, gt=0)
    grid: GridSpec = Field(default_factory=GridSpec)
    out_dir: Path = Path(DEFAULT_OUT_DIR)
    outputs: OutputSpec = Field(default_factory=OutputSpec)
    checks: dict[str, CheckConfig] = Field(default_factory=dict)
    categories: dict[str, bool] = Field(default_factory=dict)
    perturb_beta: float = 0.0
    workers: int = Field(default=1, ge=1)

    @field_validator("epsilons", mode="before")
    @classmethod
    def split_epsilons(cls, v: Any) -> Any:
        """Accept ``"-1, -3"`` as well as a list."""
        if isinstance(v, str):
            return [item.strip() for item in v.split(",") if item.strip()]
        if isinstance(v, (int, float)):
            return [v]
        return v

    @field_validator("checks", mode="before")
    @classmethod
    def normalize_checks(cls, v: Any) -> dict[str, Any]:
        """Validate and normalize check configurations."""
        if not isinstance(v, dict):
            return {}
        normalized: dict[str, Any] = {}
        for check_id, config in v.items():
            if isinstance(config, dict):
                normalized[check_id] = config
            elif isinstance(config, (bool, str)):
                normalized[check_id] = {"enabled": config}
            else:
                logger.warning("Invalid config for check %s: %s", check_id, config)
                normalized[check_id] = {}
        return normalized

    @model_validator(mode="after")
    def check_scheme(self) -> RunConfig:
        if self.scheme is Scheme.CHAIN and self.system is not System.OSCILLATOR:
            raise ValueError("chains are built on the oscillator system")
        return self

    def resolved_grid(self) -> Grid:
        return self.grid.resolve(self.system, self.l)

    def spectrum_tolerance(self) -> float:
        return self.tol if self.tol is not None else SYSTEM_SPECTRUM_TOL[self.system]

    def tolerance_for(self, check_id: str, default: float) -> float:
        configured = self.checks.get(check_id)
        if configured is not None and configured.tolerance is not None:
            return configured.tolerance
        if check_id in SPECTRAL_CHECKS:
            return self.spectrum_tolerance()
        return default

    def report_dict(self) -> dict[str, Any]:
        """Parameters echoed into reports, without output locations or worker counts."""
        return self.model_dump(mode="json", by_alias=True, exclude={"out_dir", "outputs", "workers"})


def parse_key_value(text: str) -> dict[str, Any]:
    """Parse ``key = value`` lines; dotted keys build nested tables, ``#`` starts a comment."""
    data: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"Line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        target = data
        *parents, leaf = key.replace("-", "_").split(".")
        for parent in parents:
            target = target.setdefault(parent, {})
        target[leaf] = value
    return data


class ConfigLoader:
    """Loads and manages run configuration."""

    DEFAULT_CONFIG_FILES: ClassVar[list[str]] = [
        "isofactor.cfg",
        ".isofactor.yml",
        ".isofactor.yaml",
        ".isofactor.json",
        "pyproject.toml",  # [tool.isofactor] section
    ]
    KEY_VALUE_SUFFIXES: ClassVar[set[str]] = {".cfg", ".conf", ".txt", ".ini"}

    def __init__(self) -> None:
        self.config: RunConfig | None = None
        self._config_path: Path | None = None

    @property
    def config_path(self) -> Path | None:
        return self._config_path

    def load_config(self, config_path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
        """
        Load configuration with precedence defaults < environment < file < overrides.

        Args:
            config_path: Explicit path to config file, or None to auto-discover
            overrides: Values from command-line flags; None entries are ignored

        Returns:
            Loaded configuration
        """
        data: dict[str, Any] = {}
        env_out = os.environ.get(OUT_DIR_ENV)
        if env_out:
            data["out_dir"] = env_out

        if config_path:
            path = Path(config_path)
            if not path.exists():
                raise FileNotFoundError(f"Config file not found: {path}")
            data.update(self._load_from_file(path))
            self._config_path = path
        else:
            discovered = self._auto_discover_config()
            if discovered is None:
                logger.info("No configuration file found, using defaults")
            else:
                data.update(discovered)

        if overrides:
            data.update(_merge_overrides(data, overrides))

        self.config = RunConfig.model_validate(data)
        logger.info(
            "Loaded configuration: system=%s scheme=%s",
            self.config.system.value,
            self.config.scheme.value,
            extra={"config_path": str(self._config_path) if self._config_path else None},
        )
        return self.config

    def _auto_discover_config(self) -> dict[str, Any] | None:
        """Auto-discover configuration file in current directory."""
        current_dir = Path.cwd()

        for config_file in self.DEFAULT_CONFIG_FILES:
            config_path = current_dir / config_file
            if config_path.exists():
                data = self._load_from_file(config_path)
                if config_path.name == "pyproject.toml" and not data:
                    continue
                logger.info("Found configuration file: %s", config_path)
                self._config_path = config_path
                return data

        return None

    def _load_from_file(self, config_path: Path) -> dict[str, Any]:
        """Load raw configuration data from a specific file."""
        try:
            if config_path.name == "pyproject.toml":
                if tomllib is None:
                    raise ImportError("TOML support requires 'tomli' package for Python < 3.11")
                with config_path.open("rb") as toml_file:
                    toml_data = tomllib.load(toml_file)
                data = toml_data.get("tool", {}).get("isofactor", {})
            else:
                with config_path.open(encoding="utf-8") as f:
                    if config_path.suffix in [".yml", ".yaml"]:
                        data = yaml.safe_load(f) or {}
                    elif config_path.suffix == ".json":
                        data = json.load(f)
                    elif config_path.suffix in self.KEY_VALUE_SUFFIXES:
                        data = parse_key_value(f.read())
                    else:
                        raise ParameterError(f"Unsupported config file format: {config_path.suffix}")
        except Exception as e:
            logger.error("Failed to load config from %s: %s", config_path, e)
            raise

        if not isinstance(data, dict):
            raise ParameterError(f"Configuration in {config_path} must be a table of settings")
        return data

    def is_check_enabled(self, check_id: str, category: str | None = None) -> bool:
        """
        Check if a check is enabled based on configuration.

        Args:
            check_id: Check identifier
            category: Check category (optional)

        Returns:
            True if the check should run
        """
        if not self.config:
            return True

        if category and category in self.config.categories and not self.config.categories[category]:
            return False

        check_config = self.config.checks.get(check_id)
        return check_config.enabled if check_config is not None else True


def _merge_overrides(data: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Flag values win over file values; nested tables are merged key by key."""
    merged: dict[str, Any] = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            base = dict(data.get(key) or {})
            base.update({k: v for k, v in value.items() if v is not None})
            merged[key] = base
        else:
            merged[key] = value
    return merged


def create_default_config() -> str:
    """Create the content of a documented default key=value configuration file."""
    return """\
# isofactor run configuration
# Precedence: built-in defaults < ISOFACTOR_OUT_DIR < this file < command-line flags

# oscillator | hydrogen
system = oscillator
# sdih | mielnik | generalized | chain
scheme = mielnik

# family parameters
l = 1
k = 0
gamma = 2.0
lambda = 0.3
nu = 0.0
# free seed energy of the generalized oscillator (leave unset to use -2k-1)
# epsilon = -1.0
epsilons = -1, -3

# number of levels compared
levels = 5
# spectral tolerance (default: 2e-3 oscillator, 5e-3 hydrogen)
# tol = 2e-3

# grid overrides (default: [-8, 8] with 4001 nodes; radial (h, max(40 l, 60)] with h = 0.005)
# grid.x_min = -8
# grid.x_max = 8
# grid.n = 4001

out_dir = isofactor-out
outputs.csv = true
outputs.json = true
outputs.plot = true
workers = 1

# checks can be switched off or given their own tolerance
checks.riccati_residual.enabled = true
checks.intertwining.tolerance = 1e-3
categories.oracle = true
"""
