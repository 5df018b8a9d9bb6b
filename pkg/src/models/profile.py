"""
Comparison profile data models: m_G, M_G, the interval Ξ and the canonical coefficient
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from src.constants import (
    PROVENANCE_CLOSED_FORM, PROVENANCE_ESTIMATED, SIGN_NEGATIVE, SIGN_POSITIVE,
)
from src.models.errors import RangeError


def _reciprocal_one_minus(value: float) -> float:
    """(1 − value)⁻¹ with the limits the interval Ξ needs."""
    if math.isinf(value):
        return 0.0
    if value == 1.0:
        return math.inf
    result = 1.0 / (1.0 - value)
    return 0.0 if result == 0.0 else result


@dataclass(frozen=True)
class XiInterval:
    """The interval Ξ = [(1−M_G)⁻¹, (1−m_G)⁻¹], infinite endpoints excluded."""
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    @classmethod
    def from_bounds(cls, m_G: float, M_G: float) -> "XiInterval":
        """Build Ξ from the relative noise content bounds."""
        if not (0.0 <= m_G <= 1.0):
            raise RangeError(f"m_G must lie in [0, 1], got {m_G}")
        if not (M_G >= 1.0):
            raise RangeError(f"M_G must lie in [1, ∞], got {M_G}")
        lo = -_reciprocal_one_minus(M_G) if M_G == 1.0 else _reciprocal_one_minus(M_G)
        hi = _reciprocal_one_minus(m_G)
        return cls(lo=lo, hi=hi, lo_closed=math.isfinite(lo), hi_closed=math.isfinite(hi))

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, a: float, slack: float = 0.0) -> bool:
        """Membership test with an optional absolute slack at closed ends."""
        if math.isnan(a):
            return False
        lower_ok = a >= self.lo - slack if self.lo_closed else a > self.lo
        upper_ok = a <= self.hi + slack if self.hi_closed else a < self.hi
        return lower_ok and upper_ok

    def to_list(self) -> List[Any]:
        return [
            _encode_extended(self.lo),
            _encode_extended(self.hi),
            "closed" if self.lo_closed else "open",
            "closed" if self.hi_closed else "open",
        ]


@dataclass(frozen=True)
class ComparisonProfile:
    """Derived comparison constants of an entropy-driven hemi-group."""
    m_G: float
    M_G: float
    sign: int
    provenance: str = PROVENANCE_CLOSED_FORM
    sign_source: str = "observed"
    sample_size: Optional[int] = None
    seed: Optional[int] = None
    e_entropy: Optional[float] = None

    def __post_init__(self):
        if self.sign not in (SIGN_NEGATIVE, SIGN_POSITIVE):
            raise RangeError(f"Profile sign must be resolved to ±1, got {self.sign}")
        if self.provenance not in (PROVENANCE_CLOSED_FORM, PROVENANCE_ESTIMATED):
            raise RangeError(f"Unknown provenance: {self.provenance}")
        # validates m_G ≤ 1 ≤ M_G
        XiInterval.from_bounds(self.m_G, self.M_G)

    @property
    def xi(self) -> XiInterval:
        return XiInterval.from_bounds(self.m_G, self.M_G)

    @property
    def a_sigma(self) -> float:
        """a_{sign⟦·⟧}: 1/(1−m_G) for sign −1, 1/(1−M_G) for sign +1."""
        if self.sign == SIGN_NEGATIVE:
            return self.xi.hi
        return self.xi.lo

    @property
    def a_sigma_finite(self) -> bool:
        return math.isfinite(self.a_sigma)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the documented profile JSON layout."""
        provenance: Any = self.provenance
        if self.provenance == PROVENANCE_ESTIMATED:
            provenance = {"estimated": {"sample_size": self.sample_size, "seed": self.seed}}
        data = {
            "m_G": _encode_extended(self.m_G),
            "M_G": _encode_extended(self.M_G),
            "xi": self.xi.to_list(),
            "sign": self.sign,
            "sign_source": self.sign_source,
            "a_sigma": _encode_extended(self.a_sigma),
            "provenance": provenance,
        }
        if self.e_entropy is not None:
            data["e_entropy"] = self.e_entropy
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ComparisonProfile":
        provenance = data.get("provenance", PROVENANCE_CLOSED_FORM)
        sample_size = seed = None
        if isinstance(provenance, dict):
            estimated = provenance.get("estimated", {})
            sample_size = estimated.get("sample_size")
            seed = estimated.get("seed")
            provenance = PROVENANCE_ESTIMATED
        return cls(
            m_G=_decode_extended(data["m_G"]),
            M_G=_decode_extended(data["M_G"]),
            sign=int(data["sign"]),
            provenance=provenance,
            sign_source=data.get("sign_source", "observed"),
            sample_size=sample_size,
            seed=seed,
            e_entropy=data.get("e_entropy"),
        )


def _encode_extended(value: float) -> Any:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _decode_extended(value: Any) -> float:
    # "inf" and "-inf" parse directly
    return float(value)
