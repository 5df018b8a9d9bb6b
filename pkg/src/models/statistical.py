"""
Entropy-driven statistical model data models
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from src.constants import CARRIER_DOMAINS, DEFAULT_SEED, MODEL_FAMILIES
from src.models.errors import ConfigError, DomainError


@dataclass
class ModelSpec:
    """Scale family ξ ↦ law of ξX₀ with X₀ ~ ℙ₀.

    stable: symmetric α-stable S_α(σ, 0, 0), merged by +.
    max_stable: Fréchet(α, λ), merged by ∨.
    min_stable: reflected Fréchet on (−∞, 0], merged by ∧.
    """
    family: str
    alpha: float
    base_scale: float = 1.0
    carrier_domain: str = CARRIER_DOMAINS["nonneg"]
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.family not in MODEL_FAMILIES:
            raise ConfigError(f"Unknown model family: {self.family}")
        if self.carrier_domain not in CARRIER_DOMAINS:
            raise ConfigError(f"Unknown carrier domain: {self.carrier_domain}")
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.family == MODEL_FAMILIES["stable"] and self.alpha > 2:
            raise ConfigError(f"stable laws need alpha in (0, 2], got {self.alpha}")
        if not (self.base_scale > 0 and math.isfinite(self.base_scale)):
            raise ConfigError(f"base_scale must be positive, got {self.base_scale}")
        if self.family != MODEL_FAMILIES["stable"] and self.carrier_domain != CARRIER_DOMAINS["nonneg"]:
            raise ConfigError(f"{self.family} scales live on [0, ∞)")

    def check_scale(self, xi: float) -> float:
        xi = float(xi)
        if not math.isfinite(xi):
            raise DomainError(f"scale {xi} is not finite")
        if xi < 0 and self.carrier_domain == CARRIER_DOMAINS["nonneg"]:
            raise DomainError(f"scale {xi} is outside [0, ∞)")
        return xi

    def merge_scale(self, xi: float, nu: float) -> float:
        """ξ∘ν = (|ξ|^α + |ν|^α)^{1/α}."""
        return (abs(xi) ** self.alpha + abs(nu) ** self.alpha) ** (1.0 / self.alpha)

    def entropy(self, xi: float) -> float:
        return abs(xi) ** self.alpha

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "scale": self.base_scale,
            "carrier_domain": self.carrier_domain,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelSpec":
        family = data.get("family", MODEL_FAMILIES["stable"])
        default_domain = CARRIER_DOMAINS["full"] if family == MODEL_FAMILIES["stable"] else CARRIER_DOMAINS["nonneg"]
        return cls(
            family=family,
            alpha=float(data.get("alpha", 2.0)),
            base_scale=float(data.get("scale", 1.0)),
            carrier_domain=data.get("carrier_domain", default_domain),
            seed=int(data.get("seed", DEFAULT_SEED)),
        )


@dataclass
class MergeTestResult:
    """Two-sample comparison of ξX₀ ∔̈ νY₀ against (ξ∘ν)X₀."""
    xi: float
    nu: float
    n: int
    statistic: float
    p_value: float
    passed: bool
    level: float
    merged_scale: float
    seed: int
    quantile_check: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ConfigError(f"p-value {self.p_value} outside [0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "xi": self.xi,
            "nu": self.nu,
            "n": self.n,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "passed": self.passed,
            "level": self.level,
            "merged_scale": self.merged_scale,
            "seed": self.seed,
        }
        if self.quantile_check is not None:
            data["quantile_check"] = self.quantile_check
        return data


@dataclass
class CalibrationReport:
    """Estimated scale ratio of ξX₀ against ⟦ξ⟧ = |ξ|^α."""
    xi: float
    n: int
    estimator: str
    estimate: float
    expected: float
    standard_error: float
    passed: bool
    seed: int
    sign_invariance: Optional[bool] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def z_score(self) -> float:
        if self.standard_error == 0.0:
            return 0.0 if self.estimate == self.expected else math.inf
        return (self.estimate - self.expected) / self.standard_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "xi": self.xi,
            "n": self.n,
            "estimator": self.estimator,
            "estimate": self.estimate,
            "expected": self.expected,
            "standard_error": self.standard_error,
            "z_score": self.z_score,
            "passed": self.passed,
            "sign_invariance": self.sign_invariance,
            "seed": self.seed,
            "details": dict(self.details),
        }
