"""
Command schemas for the command-line front end

Every payload rejects unknown fields so that typos surface as input errors.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.constants import (
    DEFAULT_CONFIG_FILE, DEFAULT_PRESENTATION_LENGTH, MODEL_FAMILIES, OUTPUT_FORMATS, SUBCOMMANDS,
)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Command(StrictModel):
    """Parsed command line."""
    subcommand: Literal[SUBCOMMANDS]
    input: Optional[str] = None
    output: Optional[str] = None
    seed: Optional[int] = None
    tol: Optional[float] = Field(default=None, gt=0)
    level: Optional[float] = Field(default=None, gt=0, lt=1)
    exploration: bool = False
    format: Literal[OUTPUT_FORMATS] = "json"
    trajectory: Optional[str] = None
    verbose: bool = False
    config: str = DEFAULT_CONFIG_FILE


class StructureInput(StrictModel):
    """A catalog instance by name, its constructor parameters and an optional profile override."""
    instance: str
    params: Dict[str, Any] = Field(default_factory=dict)
    profile: Optional[Dict[str, Any]] = None


class CheckPayload(StrictModel):
    structure: StructureInput
    comparison: bool = True


class ProfilePayload(StrictModel):
    structure: StructureInput
    mode: Literal["closed_form", "sampled"] = "closed_form"
    sample_size: Optional[int] = Field(default=None, ge=1)


class ComparePayload(StrictModel):
    structure: StructureInput
    pairs: List[Tuple[Any, Any]] = Field(min_length=1)
    a: Optional[float] = None


class KernelInput(StrictModel):
    """A registered kernel family, or an explicit series with relations."""
    builtin: Optional[Literal["euclidean", "max"]] = None
    norm_sq: float = Field(default=1.0, gt=0)
    alpha: float = Field(default=1.0, gt=0)
    xi: float = Field(default=1.0, gt=0)
    series: List[float] = Field(default_factory=list)
    relations: List[List[Any]] = Field(default_factory=list)
    sign: Optional[Literal[-1, 1]] = None

    @model_validator(mode="after")
    def _needs_content(self):
        if self.builtin is None and not self.series and not self.relations:
            raise ValueError("give a builtin kernel or a series with relations")
        return self


class PresentationInput(StrictModel):
    gram: List[List[float]] = Field(min_length=1)
    sign: Literal[-1, 1] = 1
    max_length: int = Field(default=DEFAULT_PRESENTATION_LENGTH, ge=1)
    class_size: int = Field(default=2, ge=1)
    base_entropies: Optional[List[float]] = None


class ReconstructPayload(StrictModel):
    kernel: Optional[KernelInput] = None
    presentation: Optional[PresentationInput] = None
    base_entropy: Optional[float] = Field(default=None, ge=0)
    fractions: List[str] = Field(default_factory=list)
    depth: Optional[int] = Field(default=None, ge=2)

    @field_validator("fractions")
    @classmethod
    def _rationals(cls, values: List[str]) -> List[str]:
        for value in values:
            try:
                r = Fraction(value)
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"{value!r} is not a rational number") from e
            if r <= 0:
                raise ValueError(f"{value!r} must be positive")
        return values

    @model_validator(mode="after")
    def _one_source(self):
        if (self.kernel is None) == (self.presentation is None):
            raise ValueError("give exactly one of kernel or presentation")
        if self.kernel is not None and self.base_entropy is None:
            raise ValueError("a kernel reconstruction needs base_entropy")
        return self


class SquaredErrorInput(StrictModel):
    low: float = -1.0
    high: float = 1.0
    omega: float = 0.0


class EmbedPayload(StrictModel):
    """Embed the squared-error rule, or round-trip a catalog structure through its rule."""
    rule: Optional[SquaredErrorInput] = None
    structure: Optional[StructureInput] = None
    a: Optional[float] = None
    sample_size: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.rule is None) == (self.structure is None):
            raise ValueError("give exactly one of rule or structure")
        return self


class ModelInput(StrictModel):
    family: Literal[tuple(MODEL_FAMILIES)]
    alpha: float = Field(gt=0)
    scale: float = Field(default=1.0, gt=0)
    carrier_domain: Optional[Literal["nonneg", "full"]] = None


class SimulatePayload(StrictModel):
    model: ModelInput
    xis: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0], min_length=1)
    nus: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0], min_length=1)
    n: Optional[int] = Field(default=None, ge=2)
    repetitions: int = Field(default=1, ge=1)
    min_pass_rate: float = Field(default=0.9, ge=0, le=1)
    calibrate: List[float] = Field(default_factory=list)


class FitPayload(StrictModel):
    """mle: p_tilde under a Bernoulli or categorical family; tichonov: X, y, lam; min_rho: candidates."""
    kind: Literal["mle", "tichonov", "min_rho"]
    p_tilde: Optional[List[float]] = None
    family: Literal["bernoulli", "categorical"] = "categorical"
    reliability_scale: float = Field(default=1.0, gt=0)
    X: Optional[List[List[float]]] = None
    y: Optional[List[float]] = None
    lam: Optional[float] = Field(default=None, gt=0)
    structure: Optional[StructureInput] = None
    data: Any = None
    candidates: Optional[List[Any]] = None
    a: Optional[float] = None

    @model_validator(mode="after")
    def _fields_for_kind(self):
        required = {
            "mle": ("p_tilde",),
            "tichonov": ("X", "y", "lam"),
            "min_rho": ("structure", "data", "candidates"),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} fit needs {', '.join(missing)}")
        if self.kind == "mle" and self.family == "bernoulli" and len(self.p_tilde) != 2:
            raise ValueError("a Bernoulli fit needs p_tilde of length 2")
        return self


class ReportPayload(StrictModel):
    instances: Optional[List[str]] = None
    sample_size: Optional[int] = Field(default=None, ge=1)


PAYLOADS = {
    "check": CheckPayload,
    "profile": ProfilePayload,
    "compare": ComparePayload,
    "reconstruct": ReconstructPayload,
    "embed": EmbedPayload,
    "simulate": SimulatePayload,
    "fit": FitPayload,
    "report": ReportPayload,
}
