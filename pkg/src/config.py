"""Configuration management for numerical tolerances, grids and search brackets."""

from __future__ import annotations

import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml
from pydantic import (
    BaseModel,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
)


logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = "RENYI_CI_CONFIG_DIR"
THREADS_ENV = "RENYI_CI_THREADS"
_DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


class Tolerances(BaseModel):
    """Numerical tolerances shared by every module."""

    equality: float = 1e-9
    probability_clamp: float = 1e-12
    kappa_series: float = 1e-8
    proven_slack: float = 1e-10
    lemma_slack: float = 1e-8
    fd_relative: float = 1e-5
    fd_absolute: float = 1e-6
    root_residual: float = 1e-12
    omega_refine: float = 1e-10
    singleton_width: float = 1e-14
    boundary_layer: float = 1e-7

    @field_validator("*")
    @classmethod
    def ensure_positive(cls, value: float, info: ValidationInfo) -> float:
        if not value > 0:
            raise ValueError(f"{info.field_name} must be positive")
        if value >= 1:
            raise ValueError(f"{info.field_name} must be below 1")
        return value


class GridSettings(BaseModel):
    """Default grid sizes for scans and sweeps."""

    step: float = 1e-4
    omega_points: int = 10_000
    r_points: int = 10_000
    root_scan: int = 64
    epsilon_scan: int = 91
    chain_points: int = 2_000
    curve_points: int = 41

    @field_validator("step")
    @classmethod
    def validate_step(cls, value: float) -> float:
        if not 0 < value <= 0.1:
            raise ValueError("step must lie in (0, 0.1]")
        return value

    @field_validator("omega_points", "r_points", "root_scan", "epsilon_scan", "chain_points", "curve_points")
    @classmethod
    def ensure_count(cls, value: int, info: ValidationInfo) -> int:
        if value < 2:
            raise ValueError(f"{info.field_name} must be at least 2")
        return value


class SearchSettings(BaseModel):
    """Brackets and stopping rules for one-dimensional searches."""

    epsilon0_low: float = 0.01
    epsilon0_high: float = 0.10
    golden_width: float = 1e-12
    root_xtol: float = 1e-15
    seed: int = 0

    @field_validator("epsilon0_low", "epsilon0_high")
    @classmethod
    def validate_bracket_end(cls, value: float, info: ValidationInfo) -> float:
        if not 0 < value < 0.5:
            raise ValueError(f"{info.field_name} must lie in (0, 0.5)")
        return value

    @field_validator("epsilon0_high")
    @classmethod
    def validate_bracket_order(cls, value: float, info: ValidationInfo) -> float:
        low = info.data.get("epsilon0_low")
        if isinstance(low, float) and value <= low:
            raise ValueError("epsilon0_high must exceed epsilon0_low")
        return value

    @field_validator("golden_width", "root_xtol")
    @classmethod
    def ensure_positive(cls, value: float, info: ValidationInfo) -> float:
        if not value > 0:
            raise ValueError(f"{info.field_name} must be positive")
        return value


class Settings(BaseModel):
    """All tunable numerical settings."""

    tolerances: Tolerances = Field(default_factory=Tolerances)
    grid: GridSettings = Field(default_factory=GridSettings)
    search: SearchSettings = Field(default_factory=SearchSettings)


class ConfigManager:
    """Loads and persists the settings file with validation and atomic writes."""

    def __init__(self, base_dir: Path | str = _DEFAULT_CONFIG_DIR) -> None:
        self.base_dir = Path(base_dir)
        self.settings_path = self.base_dir / "settings.yaml"
        self._lock = threading.RLock()
        self._settings: Optional[Settings] = None

    # Public API -----------------------------------------------------------
    def get_settings(self) -> Settings:
        """Return validated settings, loading them from disk on first use."""

        with self._lock:
            if self._settings is None:
                self._settings = self._load_settings()
            return self._settings

    def save_settings(self, settings: Settings) -> None:
        """Persist settings to disk with atomic replace."""

        with self._lock:
            self._write_yaml(self.settings_path, settings.model_dump(mode="json"))
            self._settings = settings

    def reload(self) -> Settings:
        with self._lock:
            self._settings = None
            return self.get_settings()

    # Internal helpers ----------------------------------------------------
    def _load_settings(self) -> Settings:
        if not self.settings_path.exists():
            logger.debug(
                "Settings file missing, using defaults",
                extra={"event": "config_load", "path": str(self.settings_path)},
            )
            return Settings()

        raw_data = self._read_yaml(self.settings_path)
        try:
            settings = Settings.model_validate(raw_data)
        except ValidationError as exc:
            raise ValueError(f"Invalid data in {self.settings_path}: {exc}") from exc
        logger.debug(
            "Loaded settings",
            extra={"event": "config_load", "path": str(self.settings_path)},
        )
        return settings

    def _read_yaml(self, path: Path) -> dict[str, Any]:
        with path.open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
        if not isinstance(data, dict):
            raise ValueError(f"Configuration file {path} must contain a mapping at the top level")
        return data

    def _write_yaml(self, path: Path, data: dict[str, Any]) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(
            dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as tmp_file:
                yaml.safe_dump(data, tmp_file, sort_keys=False)
                tmp_file.flush()
                os.fsync(tmp_file.fileno())
            os.replace(tmp_path, path)
        finally:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)


_config_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """Provide a singleton ConfigManager, honouring RENYI_CI_CONFIG_DIR."""

    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager(os.environ.get(CONFIG_DIR_ENV, _DEFAULT_CONFIG_DIR))
    return _config_manager


def get_settings() -> Settings:
    return get_config_manager().get_settings()


def resolve_workers(environ: Optional[Mapping[str, str]] = None) -> int:
    """Worker count for grid scans from RENYI_CI_THREADS (default 1)."""

    env = os.environ if environ is None else environ
    raw = env.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return 1
    try:
        workers = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if workers < 1:
        raise ValueError(f"{THREADS_ENV} must be at least 1")
    return workers


__all__ = [
    "ConfigManager",
    "GridSettings",
    "SearchSettings",
    "Settings",
    "Tolerances",
    "get_config_manager",
    "get_settings",
    "resolve_workers",
]
