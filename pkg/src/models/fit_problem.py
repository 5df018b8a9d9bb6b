"""
Risk-fitting problem and result data models
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.constants import DEFAULT_FIT_TOLERANCE, DEFAULT_GRID_RESOLUTION, DEFAULT_REFINE_ITERATIONS
from src.models.errors import ConfigError
from src.models.structure import EntropyStructure
from src.utils.export_utils import to_jsonable


def box_grid(bounds: Sequence[Tuple[float, float]], resolution: int) -> List[np.ndarray]:
    """Grid points of a box in lexicographic order."""
    axes = [np.linspace(lo, hi, resolution) for lo, hi in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    return [np.array(point) for point in zip(*(m.ravel() for m in mesh))]


@dataclass
class FitProblem:
    """Minimize θ ↦ ρ_a(η(θ), ξ) over a box or a finite candidate list.

    a = None selects the canonical hemi-metric ρ_ca.
    """
    structure: EntropyStructure
    data: Any
    family: Callable[[np.ndarray], Any]
    bounds: Optional[List[Tuple[float, float]]] = None
    candidates: Optional[Sequence[Any]] = None
    a: Optional[float] = None
    exploration: bool = False
    grid_resolution: int = DEFAULT_GRID_RESOLUTION
    refine_iterations: int = DEFAULT_REFINE_ITERATIONS
    tolerance: float = DEFAULT_FIT_TOLERANCE
    name: str = "fit"

    def __post_init__(self):
        if (self.bounds is None) == (self.candidates is None):
            raise ConfigError("Give either a box domain or a candidate list")
        if self.bounds is not None:
            self.bounds = [(float(lo), float(hi)) for lo, hi in self.bounds]
            if not self.bounds:
                raise ConfigError("The box domain needs at least one dimension")
            for lo, hi in self.bounds:
                if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                    raise ConfigError(f"Degenerate box side [{lo}, {hi}]")
        elif len(self.candidates) == 0:
            raise ConfigError("The candidate list is empty")
        if self.grid_resolution < 2:
            raise ConfigError("grid_resolution must be at least 2")
        if self.refine_iterations < 0:
            raise ConfigError("refine_iterations must be nonnegative")

    @property
    def dimension(self) -> int:
        return len(self.bounds) if self.bounds is not None else 0

    def grid(self) -> List[np.ndarray]:
        return box_grid(self.bounds, self.grid_resolution)


@dataclass
class FitResult:
    """Optimum of a FitProblem with its search history."""
    theta: Any
    objective: float
    boundary: bool
    evaluations: int
    method: str
    grid_theta: Any = None
    grid_objective: Optional[float] = None
    nonnegative: Optional[bool] = None
    trajectory: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def trajectory_frame(self) -> pd.DataFrame:
        rows = []
        for step, entry in enumerate(self.trajectory):
            row = {"step": step, "objective": entry["objective"]}
            theta = np.atleast_1d(np.asarray(entry["theta"], dtype=float))
            row.update({f"theta_{i}": float(v) for i, v in enumerate(theta)})
            rows.append(row)
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta": to_jsonable(self.theta),
            "objective": self.objective,
            "boundary": self.boundary,
            "evaluations": self.evaluations,
            "method": self.method,
            "grid_theta": to_jsonable(self.grid_theta),
            "grid_objective": self.grid_objective,
            "nonnegative": self.nonnegative,
            "details": to_jsonable(self.details),
        }
