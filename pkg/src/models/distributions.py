"""
Discrete distribution data models: joint tables and dependable pairs
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.errors import DomainError

JOINT_TOTAL_TOLERANCE = 1e-12
PMF_TOTAL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class JointTable:
    """Joint pmf of two discrete random variables X (rows) and Y (columns)."""
    p: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.p, dtype=float)
        if table.ndim != 2 or table.size == 0:
            raise DomainError("A joint table must be a non-empty matrix")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise DomainError("Joint probabilities must be finite and nonnegative")
        if abs(table.sum() - 1.0) > JOINT_TOTAL_TOLERANCE:
            raise DomainError(f"Joint probabilities sum to {table.sum()!r}, not 1")
        object.__setattr__(self, "p", table)

    @property
    def p_x(self) -> np.ndarray:
        return self.p.sum(axis=1)

    @property
    def p_y(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def atoms(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Probabilities, row labels and column labels of the cells with positive mass."""
        rows, cols = np.nonzero(self.p > 0)
        return self.p[rows, cols], rows, cols

    @classmethod
    def from_list(cls, values: Sequence[Sequence[float]]) -> "JointTable":
        return cls(np.asarray(values, dtype=float))

    def to_dict(self) -> Dict[str, Any]:
        return {"joint": self.p.tolist()}


@dataclass(frozen=True, eq=False)
class DependablePair:
    """A pmf p with reliabilities q; weight q_x p_x unless an update supplies it."""
    p: np.ndarray
    q: np.ndarray
    weight: Optional[np.ndarray] = None

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if p.ndim != 1 or p.shape != q.shape:
            raise DomainError("p and q must be vectors of equal length")
        if np.any(p < 0) or abs(p.sum() - 1.0) > PMF_TOTAL_TOLERANCE:
            raise DomainError("p must be a probability vector")
        if np.any(q < 0) or not np.all(np.isfinite(q)):
            raise DomainError("q must be finite and nonnegative")
        weight = q * p if self.weight is None else np.asarray(self.weight, dtype=float)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "weight", weight)

    @property
    def total_weight(self) -> float:
        """Σ q_x p_x."""
        return float(self.weight.sum())

    @property
    def unreliable(self) -> bool:
        """q ≡ 0."""
        return not np.any(self.q)

    def conditional(self) -> np.ndarray:
        """r_x = q_x p_x / Σ q_y p_y, the law of a value given it is dependable."""
        total = self.total_weight
        if total == 0.0:
            raise DomainError("r is undefined when Σ q_x p_x = 0")
        return self.weight / total

    def to_dict(self) -> Dict[str, List[float]]:
        return {"p": self.p.tolist(), "q": self.q.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DependablePair":
        return cls(p=data["p"], q=data["q"])
