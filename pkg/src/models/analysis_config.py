"""
Analysis configuration data models
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Optional

from src.constants import (
    CONSISTENCY_DIVERGENCE_TOLERANCE, DEFAULT_ABS_TOL, DEFAULT_CONFIG_FILE, DEFAULT_CS_DEPTH,
    DEFAULT_FIT_TOLERANCE, DEFAULT_GRID_RESOLUTION, DEFAULT_KS_LEVEL, DEFAULT_MERGE_SAMPLE_SIZE,
    DEFAULT_PARTITIONS, DEFAULT_REFINE_ITERATIONS, DEFAULT_REL_TOL, DEFAULT_SAMPLE_SIZE, DEFAULT_SEED,
    DEFAULT_WORKERS, EMBED_RATIO_CAP, POISSON_MIN_TERMS, POISSON_SD_MULTIPLE, QUANTILE_LEVELS,
    QUANTILE_LOG_TOLERANCE, SELF_CHECK_SAMPLE_SIZE, SHANNON_EXTENSION_CAP,
)
from src.models.errors import ConfigError
from src.models.structure import Tolerance

logger = logging.getLogger(__name__)


@dataclass
class AnalysisSettings:
    """Tolerances, sample sizes, seeds and caps shared by every processor."""
    # Floating comparisons
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL

    # Sampling
    seed: int = DEFAULT_SEED
    sample_size: int = DEFAULT_SAMPLE_SIZE
    self_check_sample_size: int = SELF_CHECK_SAMPLE_SIZE
    partitions: int = DEFAULT_PARTITIONS
    workers: int = DEFAULT_WORKERS

    # Statistical models
    ks_level: float = DEFAULT_KS_LEVEL
    merge_sample_size: int = DEFAULT_MERGE_SAMPLE_SIZE
    quantile_levels: List[float] = field(default_factory=lambda: list(QUANTILE_LEVELS))
    quantile_log_tolerance: float = QUANTILE_LOG_TOLERANCE

    # Comparison and construction
    cs_depth: int = DEFAULT_CS_DEPTH
    consistency_tolerance: float = CONSISTENCY_DIVERGENCE_TOLERANCE
    embed_ratio_cap: float = EMBED_RATIO_CAP

    # Instances
    shannon_extension_cap: int = SHANNON_EXTENSION_CAP
    poisson_min_terms: int = POISSON_MIN_TERMS
    poisson_sd_multiple: float = POISSON_SD_MULTIPLE

    # Risk fitting
    fit_grid_resolution: int = DEFAULT_GRID_RESOLUTION
    fit_refine_iterations: int = DEFAULT_REFINE_ITERATIONS
    fit_tolerance: float = DEFAULT_FIT_TOLERANCE

    instance_defaults: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self):
        if self.rel_tol < 0 or self.abs_tol < 0:
            raise ConfigError("Tolerances must be nonnegative")
        if self.sample_size < 1 or self.self_check_sample_size < 1:
            raise ConfigError("Sample sizes must be positive")
        if self.partitions < 1 or self.workers < 1:
            raise ConfigError("partitions and workers must be positive")
        if not (0.0 < self.ks_level < 1.0):
            raise ConfigError(f"ks_level must lie in (0, 1), got {self.ks_level}")

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def with_overrides(self, seed: Optional[int] = None, rel_tol: Optional[float] = None,
                       ks_level: Optional[float] = None) -> "AnalysisSettings":
        """Copy with CLI flag values applied on top of the loaded file."""
        changes: Dict[str, Any] = {}
        if seed is not None:
            changes["seed"] = seed
        if rel_tol is not None:
            changes["rel_tol"] = rel_tol
        if ks_level is not None:
            changes["ks_level"] = ks_level
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class ConfigManager:
    """Manager for the analysis configuration file."""

    def __init__(self, config_file: str = DEFAULT_CONFIG_FILE):
        self.config_file = config_file
        self.settings = AnalysisSettings()
        self.load_config()

    def load_config(self):
        """Load settings from JSON; a missing file keeps the defaults."""
        if not os.path.exists(self.config_file):
            logger.debug("No configuration at %s, using defaults", self.config_file)
            self.settings = AnalysisSettings()
            return

        with open(self.config_file, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{self.config_file}: line {e.lineno}: {e.msg}") from e
        self.settings = self._dict_to_settings(data)

    def save_config(self):
        """Save the current settings to JSON."""
        directory = os.path.dirname(self.config_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.config_file, "w", encoding="utf-8") as f:
            json.dump(self._settings_to_dict(self.settings), f, indent=2, sort_keys=True)

    def get_settings(self) -> AnalysisSettings:
        return self.settings

    def get_instance_defaults(self, name: str) -> Dict[str, Any]:
        """Default constructor parameters for a catalog instance."""
        return dict(self.settings.instance_defaults.get(name, {}))

    def _dict_to_settings(self, data: Dict[str, Any]) -> AnalysisSettings:
        """Convert a JSON dictionary to AnalysisSettings; unknown keys are rejected."""
        known = {f.name for f in fields(AnalysisSettings)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"{self.config_file}: unknown settings {unknown}")
        return AnalysisSettings(**data)

    def _settings_to_dict(self, settings: AnalysisSettings) -> Dict[str, Any]:
        """Convert AnalysisSettings to a dictionary for JSON serialization."""
        return settings.to_dict()
