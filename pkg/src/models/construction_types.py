"""
Data models for entropy construction: kernel presentations, scoring rules and obstructions
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.constants import SIGN_NEGATIVE, SIGN_POSITIVE
from src.models.errors import ConfigError
from src.models.structure import EntropyStructure
from src.utils.export_utils import to_jsonable


@dataclass
class Relation:
    """m·η = n·ξ for the element η; series optionally lists ⟨kη, η⟩ for k = 1, 2, …"""
    m: int
    n: int
    label: str
    value: Any = None
    series: Optional[List[float]] = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ConfigError(f"Relation {self.label}: m and n must be positive integers")

    @classmethod
    def from_list(cls, entry: Sequence[Any]) -> "Relation":
        """[m, n, label] or [m, n, label, [⟨kη,η⟩, …]]."""
        if len(entry) not in (3, 4):
            raise ConfigError(f"A relation is [m, n, label] with an optional series, got {entry!r}")
        series = [float(v) for v in entry[3]] if len(entry) == 4 else None
        return cls(m=int(entry[0]), n=int(entry[1]), label=str(entry[2]),
                   value=Fraction(int(entry[1]), int(entry[0])), series=series)

    def to_list(self) -> List[Any]:
        entry: List[Any] = [self.m, self.n, self.label]
        if self.series is not None:
            entry.append(list(self.series))
        return entry


@dataclass
class KernelSpec:
    """One-generator presentation of a kernel ⟨·,·⟩ with base element ξ.

    series[k−1] = ⟨kξ, ξ⟩. A kernel callable on elements extends the series on demand;
    multiply(k, η) is the k-fold ∔-multiple used for ⟨kη, η⟩; fraction_of(r, ξ) names the
    element rξ of a rational relation. An idempotent ∔ has kη = η for every k.
    """
    series: List[float] = field(default_factory=list)
    relations: List[Relation] = field(default_factory=list)
    kernel_sign: int = SIGN_POSITIVE
    base: Any = Fraction(1)
    kernel: Optional[Callable[[Any, Any], float]] = None
    multiply: Optional[Callable[[int, Any], Any]] = None
    fraction_of: Optional[Callable[[Fraction, Any], Any]] = None
    dotplus: Optional[Callable[[Any, Any], Any]] = None
    idempotent: bool = False
    name: str = "kernel"

    def __post_init__(self):
        if self.kernel_sign not in (SIGN_NEGATIVE, SIGN_POSITIVE):
            raise ConfigError(f"kernel sign must be ±1, got {self.kernel_sign}")

    def k_multiple(self, k: int, element: Any) -> Any:
        if self.multiply is not None:
            return self.multiply(k, element)
        return k * element

    def element_at(self, r: Fraction) -> Any:
        """rξ for the base element ξ."""
        if self.fraction_of is not None:
            return self.fraction_of(r, self.base)
        if isinstance(self.base, (Fraction, int)):
            return r * self.base
        return float(r) * self.base

    def combine(self, x: Any, y: Any) -> Any:
        """x ∔ y in the presentation."""
        return self.dotplus(x, y) if self.dotplus is not None else x + y

    def pair(self, x: Any, y: Any) -> float:
        if self.kernel is None:
            raise ConfigError(f"{self.name} has no kernel callable")
        return float(self.kernel(x, y))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "series": [float(v) for v in self.series],
            "relations": [r.to_list() for r in self.relations],
            "sign": self.kernel_sign,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: str = "kernel") -> "KernelSpec":
        return cls(
            series=[float(v) for v in data.get("series", [])],
            relations=[Relation.from_list(entry) for entry in data.get("relations", [])],
            kernel_sign=int(data.get("sign", SIGN_POSITIVE)),
            name=data.get("name", name),
        )


@dataclass
class ConsistencyResult:
    """M_ξ per sign over the available relations, with the signs keeping it in (0, ∞).

    For a generated lattice, bounds holds the extrapolated limit and sup_at_depth the raw
    supremum over m, n ≤ depth.
    """
    bounds: Dict[int, float]
    feasible_signs: List[int]
    kernel_sign: int
    relations_used: int
    depth: Optional[int] = None
    sup_at_depth: Dict[int, float] = field(default_factory=dict)

    @property
    def M_xi(self) -> float:
        return self.bounds[self.kernel_sign]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M_xi": to_jsonable(self.M_xi),
            "bounds": {str(sign): to_jsonable(value) for sign, value in sorted(self.bounds.items())},
            "feasible_signs": list(self.feasible_signs),
            "kernel_sign": self.kernel_sign,
            "relations_used": self.relations_used,
            "depth": self.depth,
            "sup_at_depth": {str(sign): to_jsonable(value) for sign, value in sorted(self.sup_at_depth.items())},
        }


@dataclass
class LatticePresentation:
    """Bilinear kernel ⟨x, y⟩ = xᵀGy on ℤ^k_{≥0}, generated by the unit vectors.

    Each generator class holds the multiples c·e_i for c = 1, …, class_size.
    """
    gram: np.ndarray
    kernel_sign: int = SIGN_POSITIVE
    max_length: int = 3
    class_size: int = 2
    base_entropies: Optional[List[float]] = None

    def __post_init__(self):
        gram = np.asarray(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.size == 0:
            raise ConfigError("gram must be a non-empty square matrix")
        if self.kernel_sign not in (SIGN_NEGATIVE, SIGN_POSITIVE):
            raise ConfigError(f"kernel sign must be ±1, got {self.kernel_sign}")
        if self.max_length < 1 or self.class_size < 1:
            raise ConfigError("max_length and class_size must be positive")
        if self.base_entropies is not None and len(self.base_entropies) != gram.shape[0]:
            raise ConfigError("base_entropies needs one value per generator")
        self.gram = gram

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def generator(self, i: int) -> Tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def zero(self) -> Tuple[int, ...]:
        return tuple(0 for _ in range(self.rank))

    def kernel(self, x: Sequence[int], y: Sequence[int]) -> float:
        return float(np.asarray(x, dtype=float) @ self.gram @ np.asarray(y, dtype=float))

    @staticmethod
    def add(x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
        return tuple(int(a) + int(b) for a, b in zip(x, y))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LatticePresentation":
        return cls(
            gram=np.asarray(data["gram"], dtype=float),
            kernel_sign=int(data.get("sign", SIGN_POSITIVE)),
            max_length=int(data.get("max_length", 3)),
            class_size=int(data.get("class_size", 2)),
            base_entropies=data.get("base_entropies"),
        )


@dataclass
class ObstructionReport:
    """A violated extension condition together with the witnessing words."""
    condition: str
    message: str
    witnesses: List[List[Any]] = field(default_factory=list)
    values: List[float] = field(default_factory=list)

    passed = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "obstruction": self.condition,
            "message": self.message,
            "witnesses": to_jsonable(self.witnesses),
            "values": to_jsonable(self.values),
        }


@dataclass
class ExtensionResult:
    """Entropy table on the elements reached by the enumerated words."""
    table: Dict[Any, float]
    words_checked: int
    verified_pairs: int
    kernel_sign: int

    passed = True

    def entropy(self, element: Any) -> float:
        return self.table[tuple(element)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "entropy": [{"element": to_jsonable(k), "value": v} for k, v in sorted(self.table.items())],
            "words_checked": self.words_checked,
            "verified_pairs": self.verified_pairs,
            "sign": self.kernel_sign,
        }


@dataclass
class ScoringRule:
    """Nonnegative kernel S(η, ξ) with S(ξ, ξ) = 0 and a distinguished element ω."""
    name: str
    evaluator: Callable[[Any, Any], float]
    omega: Any
    sampler: Callable[[np.random.Generator, int], List[Any]]
    pair_sampler: Optional[Callable[[np.random.Generator, int], List[Tuple[Any, Any]]]] = None
    domain: str = ""
    equals: Optional[Callable[[Any, Any], bool]] = None

    def __call__(self, eta: Any, xi: Any) -> float:
        return float(self.evaluator(eta, xi))

    def same(self, x: Any, y: Any) -> bool:
        if self.equals is not None:
            return bool(self.equals(x, y))
        if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
            return bool(np.array_equal(x, y))
        return x == y


@dataclass
class EmbeddedStructure:
    """A scoring rule realized as ρ_a on G×G with ι(ξ) = (ω, ξ)."""
    structure: EntropyStructure
    a: float
    ratio_sup: float
    rule: ScoringRule
    verification: Dict[str, Any] = field(default_factory=dict)

    def iota(self, xi: Any) -> Tuple[Any, Any]:
        return (self.rule.omega, xi)

    def rho(self, x: Any, y: Any) -> float:
        """ρ_a(x, y) = a⟦x∔y⟧ + (1−a)(⟦x⟧ + ⟦y⟧) on G×G."""
        S = self.structure
        return self.a * S.entropy(S.dotplus(x, y)) + (1.0 - self.a) * S.entropy(S.circ(x, y))

    @property
    def passed(self) -> bool:
        return bool(self.verification.get("recovers_rule", False) and self.verification.get("nonnegative", False))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rule": self.rule.name,
            "domain": self.rule.domain,
            "omega": to_jsonable(self.rule.omega),
            "a": self.a,
            "ratio_sup": self.ratio_sup,
            "verification": to_jsonable(self.verification),
        }
