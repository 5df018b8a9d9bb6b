"""
Entropy-driven structure data models
"""

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.constants import (
    CHECK_MODES, DEFAULT_ABS_TOL, DEFAULT_REL_TOL, DEFAULT_SIGN_CONVENTION, FORMAL_PAIR_MARKER,
)
from src.models.errors import ConfigError, DomainError, NotApplicable
from src.models.profile import ComparisonProfile
from src.utils.export_utils import to_jsonable


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance with an absolute floor."""
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL

    def slack(self, *scales: float) -> float:
        finite = [abs(s) for s in scales if math.isfinite(s)]
        return max(self.abs_tol, self.rel_tol * max(finite, default=0.0))

    def close(self, x: float, y: float) -> bool:
        if math.isinf(x) or math.isinf(y):
            return x == y
        return abs(x - y) <= self.slack(x, y)

    def leq(self, x: float, y: float) -> bool:
        """x ≤ y up to tolerance."""
        if math.isinf(y) and y > 0:
            return True
        return x <= y + self.slack(x, y)


@dataclass(frozen=True)
class FormalPair:
    """Value of ∘ lying in the bin G*∖G; its entropy is the sum of the component entropies."""
    left: Any
    right: Any

    @property
    def tag(self) -> str:
        return FORMAL_PAIR_MARKER


@dataclass(frozen=True, eq=False)
class EntropyStructure:
    """Carrier description with entropy ⟦·⟧ and the operators ∘, ∔ and ·."""
    name: str
    entropy_fn: Callable[[Any], float]
    dotplus_fn: Optional[Callable[[Any, Any], Any]] = None
    circ_fn: Optional[Callable[[Any, Any], Any]] = None
    scale_fn: Optional[Callable[[Any, Any], Any]] = None
    contains_fn: Optional[Callable[[Any], bool]] = None
    is_zero_fn: Optional[Callable[[Any], bool]] = None
    is_deterministic_fn: Optional[Callable[[Any], bool]] = None
    neutral_fn: Optional[Callable[[Any], Any]] = None
    sampler: Optional[Callable[[np.random.Generator, int], List[Any]]] = None
    pair_sampler: Optional[Callable[[np.random.Generator, int], List[Tuple[Any, Any]]]] = None
    enumerate_fn: Optional[Callable[[], List[Any]]] = None
    diagonal_fn: Optional[Callable[[Any], Tuple[Any, Any]]] = None
    negate_fn: Optional[Callable[[Any], Any]] = None
    transformation_fn: Optional[Callable[[Any], bool]] = None
    invariant_element: Any = None
    decode_fn: Optional[Callable[[Any], Any]] = None
    profile: Optional[ComparisonProfile] = None
    sign_convention: int = DEFAULT_SIGN_CONVENTION
    hemi_associative: bool = False
    finite_entropy: bool = True
    tolerance: Tolerance = field(default_factory=Tolerance)
    named: Dict[str, Any] = field(default_factory=dict)
    parameters: Dict[str, Any] = field(default_factory=dict)

    # Entropy and operators

    def entropy(self, xi: Any) -> float:
        """⟦ξ⟧; FormalPair values add their component entropies."""
        if isinstance(xi, FormalPair):
            return self.entropy(xi.left) + self.entropy(xi.right)
        if not self.contains(xi):
            raise DomainError(f"Element {to_jsonable(xi)!r} is outside the carrier of {self.name}")
        value = float(self.entropy_fn(xi))
        if math.isnan(value):
            raise DomainError(f"Entropy of {to_jsonable(xi)!r} is undefined in {self.name}")
        if value < 0.0:
            if value < -self.tolerance.slack(value):
                raise DomainError(f"Negative entropy {value} in {self.name}")
            value = 0.0
        return value

    def contains(self, xi: Any) -> bool:
        if isinstance(xi, FormalPair):
            return self.contains(xi.left) and self.contains(xi.right)
        return True if self.contains_fn is None else bool(self.contains_fn(xi))

    def circ(self, xi: Any, nu: Any) -> Any:
        """ξ∘ν; a FormalPair unless the structure has a natural merge."""
        if self.circ_fn is None or isinstance(xi, FormalPair) or isinstance(nu, FormalPair):
            return FormalPair(xi, nu)
        return self.circ_fn(xi, nu)

    def dotplus(self, xi: Any, nu: Any) -> Any:
        if self.dotplus_fn is None:
            raise NotApplicable(f"{self.name} has no ∔ operator")
        return self.dotplus_fn(xi, nu)

    def scale(self, xi: Any, nu: Any) -> Any:
        """ξ·ν, distributed over the components of a FormalPair."""
        if self.scale_fn is None:
            raise NotApplicable(f"{self.name} has no scale operator")
        if isinstance(nu, FormalPair):
            return FormalPair(self.scale(xi, nu.left), self.scale(xi, nu.right))
        return self.scale_fn(xi, nu)

    def is_zero(self, xi: Any) -> bool:
        if self.is_zero_fn is not None:
            return bool(self.is_zero_fn(xi))
        return self.entropy(xi) <= self.tolerance.abs_tol

    def is_deterministic(self, xi: Any) -> bool:
        if self.is_deterministic_fn is None:
            return False
        return bool(self.is_deterministic_fn(xi))

    def neutral(self, xi: Any = None) -> Any:
        """The designated element of G_s paired with ξ (also 0·ξ in n-fold multiples)."""
        if self.neutral_fn is None:
            return None
        return self.neutral_fn(xi)

    def diagonal(self, xi: Any) -> Tuple[Any, Any]:
        """Pair entering ξ ↦ ⟦ξ∔ξ⟧ − 2⟦ξ⟧; restricted structures pair differently typed copies."""
        if self.diagonal_fn is None:
            return xi, xi
        return self.diagonal_fn(xi)

    def is_transformation(self, xi: Any) -> bool:
        return True if self.transformation_fn is None else bool(self.transformation_fn(xi))

    def multiple(self, n: int, xi: Any) -> Any:
        """nξ = ξ∔…∔ξ, folded from the left; 0ξ is the designated neutral element."""
        if n < 0:
            raise DomainError(f"Multiple must be non-negative, got {n}")
        if n == 0:
            return self.neutral(xi)
        result = xi
        for _ in range(n - 1):
            result = self.dotplus(result, xi)
        return result

    def decode(self, value: Any) -> Any:
        """JSON value → element; strings name registered elements."""
        if isinstance(value, str) and value in self.named:
            return self.named[value]
        if self.decode_fn is None:
            return value
        return self.decode_fn(value)

    # Capabilities

    @property
    def has_dotplus(self) -> bool:
        return self.dotplus_fn is not None

    @property
    def has_scale(self) -> bool:
        return self.scale_fn is not None

    @property
    def is_finite(self) -> bool:
        return self.enumerate_fn is not None

    def elements(self) -> List[Any]:
        if self.enumerate_fn is None:
            raise NotApplicable(f"{self.name} has no finite enumeration")
        return list(self.enumerate_fn())

    def with_profile(self, profile: ComparisonProfile) -> "EntropyStructure":
        return replace(self, profile=profile)

    def with_tolerance(self, tolerance: Tolerance) -> "EntropyStructure":
        return replace(self, tolerance=tolerance)


@dataclass
class AxiomReport:
    """Outcome of one structural law check."""
    law: str
    passed: bool
    cases_checked: int
    mode: str
    counterexample: Optional[Tuple[Any, ...]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    skipped: bool = False
    reason: str = ""

    def __post_init__(self):
        if self.mode not in CHECK_MODES.values():
            raise ConfigError(f"Unknown check mode: {self.mode}")
        if not self.passed and not self.skipped and self.counterexample is None:
            raise ConfigError(f"Failing report for {self.law} needs a counterexample")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "law": self.law,
            "passed": self.passed,
            "cases_checked": self.cases_checked,
            "mode": self.mode,
            "counterexample": to_jsonable(self.counterexample),
            "details": to_jsonable(self.details),
        }
        if self.skipped:
            data["skipped"] = True
            data["reason"] = self.reason
        return data


class SkippedReport(AxiomReport):
    """A law that could not be checked because an operator is absent."""

    def __init__(self, law: str, reason: str, mode: str = CHECK_MODES["exhaustive"]):
        super().__init__(law=law, passed=True, cases_checked=0, mode=mode,
                         skipped=True, reason=reason)


@dataclass
class ReportBundle:
    """Named collection of AxiomReports."""
    name: str
    reports: Dict[str, AxiomReport] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports.values())

    def add(self, report: AxiomReport):
        self.reports[report.law] = report

    def failures(self) -> List[AxiomReport]:
        return [r for r in self.reports.values() if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "reports": {law: report.to_dict() for law, report in sorted(self.reports.items())},
            "details": to_jsonable(self.details),
        }


@dataclass
class FiniteStructure:
    """Explicit finite carrier with full operation tables."""
    elements: List[str]
    entropy: List[float]
    dotplus_table: Optional[List[List[int]]] = None
    circ_table: Optional[List[List[Union[int, str]]]] = None
    scale_table: Optional[List[List[int]]] = None
    zero_indices: List[int] = field(default_factory=list)
    deterministic_indices: List[int] = field(default_factory=list)
    name: str = "finite"

    def __post_init__(self):
        n = len(self.elements)
        if len(self.entropy) != n:
            raise ConfigError(f"Entropy vector has {len(self.entropy)} entries for {n} elements")
        for label, table in (("dotplus", self.dotplus_table), ("circ", self.circ_table),
                             ("scale", self.scale_table)):
            if table is None:
                continue
            if len(table) != n or any(len(row) != n for row in table):
                raise ConfigError(f"{label} table must be {n}×{n}")
            for row in table:
                for cell in row:
                    if cell == FORMAL_PAIR_MARKER and label == "circ":
                        continue
                    if not isinstance(cell, (int, np.integer)) or not (0 <= int(cell) < n):
                        raise ConfigError(f"Invalid {label} table entry: {cell!r}")
        if not set(self.deterministic_indices) <= set(self.zero_indices):
            raise ConfigError("deterministic indices must be a subset of zero indices")
        if any(not (0 <= i < n) for i in list(self.zero_indices) + list(self.deterministic_indices)):
            raise ConfigError("zero/deterministic indices out of range")

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_structure(self, tolerance: Optional[Tolerance] = None,
                     sign_convention: int = DEFAULT_SIGN_CONVENTION) -> EntropyStructure:
        """Index-based EntropyStructure over range(n)."""
        n = self.size
        zero = frozenset(int(i) for i in self.zero_indices)
        deterministic = frozenset(int(i) for i in self.deterministic_indices)
        designated = min(deterministic) if deterministic else None
        entropy = [float(v) for v in self.entropy]

        def circ(i, j):
            cell = self.circ_table[i][j]
            return FormalPair(i, j) if cell == FORMAL_PAIR_MARKER else int(cell)

        def decode(value):
            if isinstance(value, str) and value in self.elements:
                return self.elements.index(value)
            return int(value)

        associative = False
        if self.dotplus_table is not None:
            table = self.dotplus_table
            associative = all(
                math.isclose(entropy[table[table[i][j]][k]], entropy[table[i][table[j][k]]],
                             rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL)
                for i in range(n) for j in range(n) for k in range(n)
            )

        return EntropyStructure(
            name=self.name,
            entropy_fn=lambda i: entropy[i],
            dotplus_fn=(lambda i, j: int(self.dotplus_table[i][j])) if self.dotplus_table else None,
            circ_fn=circ if self.circ_table else None,
            scale_fn=(lambda i, j: int(self.scale_table[i][j])) if self.scale_table else None,
            contains_fn=lambda i: isinstance(i, (int, np.integer)) and 0 <= int(i) < n,
            is_zero_fn=lambda i: int(i) in zero,
            is_deterministic_fn=lambda i: int(i) in deterministic,
            neutral_fn=lambda _xi: designated,
            enumerate_fn=lambda: list(range(n)),
            decode_fn=decode,
            sign_convention=sign_convention,
            hemi_associative=associative,
            tolerance=tolerance or Tolerance(),
            parameters={"size": n},
        )

    @classmethod
    def from_structure(cls, structure: EntropyStructure, elements: Sequence[Any],
                       labels: Optional[Sequence[str]] = None,
                       key_fn: Optional[Callable[[Any], str]] = None) -> "FiniteStructure":
        """Tabulate a structure over a finite element list closed under its operators."""
        key_fn = key_fn or (lambda e: json.dumps(to_jsonable(e), sort_keys=True))
        keys = [key_fn(e) for e in elements]
        index = {k: i for i, k in enumerate(keys)}

        def lookup(value):
            k = key_fn(value)
            if k not in index:
                raise DomainError(f"Element list is not closed: {k} missing")
            return index[k]

        n = len(elements)
        dotplus = None
        if structure.has_dotplus:
            dotplus = [[lookup(structure.dotplus(a, b)) for b in elements] for a in elements]
        scale = None
        if structure.has_scale:
            scale = [[lookup(structure.scale(a, b)) for b in elements] for a in elements]
        circ = None
        if structure.circ_fn is not None:
            circ = [[lookup(structure.circ(a, b)) for b in elements] for a in elements]
        entropy = [structure.entropy(e) for e in elements]
        return cls(
            elements=list(labels) if labels is not None else keys,
            entropy=entropy,
            dotplus_table=dotplus,
            circ_table=circ,
            scale_table=scale,
            zero_indices=[i for i in range(n) if structure.is_zero(elements[i])],
            deterministic_indices=[i for i in range(n) if structure.is_deterministic(elements[i])],
            name=structure.name,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the FiniteStructure JSON schema."""
        return {
            "elements": list(self.elements),
            "entropy": [float(v) for v in self.entropy],
            "circ": self.circ_table if self.circ_table is not None else "formal",
            "dotplus": self.dotplus_table,
            "scale": self.scale_table,
            "zero": sorted(int(i) for i in self.zero_indices),
            "deterministic": sorted(int(i) for i in self.deterministic_indices),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: str = "finite") -> "FiniteStructure":
        circ = data.get("circ", "formal")
        return cls(
            elements=[str(e) for e in data["elements"]],
            entropy=[float(v) for v in data["entropy"]],
            dotplus_table=data.get("dotplus"),
            circ_table=None if circ in (None, "formal") else circ,
            scale_table=data.get("scale"),
            zero_indices=list(data.get("zero", [])),
            deterministic_indices=list(data.get("deterministic", [])),
            name=data.get("name", name),
        )
