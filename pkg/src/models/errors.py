"""
Exception hierarchy for the Entropy Algebra Toolkit

Law violations are reported through AxiomReport results, never raised.
"""

from typing import Any, Optional, Tuple


class EntropyAlgebraError(ValueError):
    """Base class for all toolkit errors."""


class InputError(EntropyAlgebraError):
    """Caller supplied something outside the documented domain."""


class AnalysisError(EntropyAlgebraError):
    """A derived quantity is undefined for the given structure."""


# Input errors

class DomainError(InputError):
    """Element outside the carrier."""


class RangeError(InputError):
    """Numeric parameter outside its admissible range."""


class ConfigError(InputError):
    """Unsupported parameter combination."""


class DesignNotOrthogonal(InputError):
    """Design matrix does not satisfy XᵀX = I."""


class SupportMismatch(InputError):
    """Model assigns zero probability where the data does not."""


class ZeroReliability(InputError):
    """Σ q_x p_x = 0 in a dependable-Shannon entropy evaluation."""


class NoRelations(InputError):
    """Kernel presentation carries no commensurability relations."""


class InsufficientSeries(InputError):
    """Kernel series too short for the requested sum."""


class BaseBelowM(InputError):
    """Base entropy below the consistency constant M_ξ."""


class NotInA(InputError):
    """Coefficient a violates the scoring-rule membership inequality."""

    def __init__(self, message: str, witness: Optional[Tuple[Any, Any]] = None):
        super().__init__(message)
        self.witness = witness


# Analysis errors

class NotComparable(AnalysisError):
    """⟦ξ∔ξ⟧ − 2⟦ξ⟧ takes both strict signs."""

    def __init__(self, message: str, positive_witness: Any = None, negative_witness: Any = None):
        super().__init__(message)
        self.positive_witness = positive_witness
        self.negative_witness = negative_witness


class NoValidPairs(AnalysisError):
    """Every sampled pair has ⟦ξ∘ν⟧ = 0."""


class OutOfXi(AnalysisError):
    """Coefficient a outside the interval Ξ."""


class CanonicalUndefined(AnalysisError):
    """Canonical coefficient a_σ is infinite."""


class NotApplicable(AnalysisError):
    """Operation requires an unbounded Ξ."""


class DivisionByZeroEntropy(AnalysisError):
    """Normalizing entropy is zero."""


class DepthInsufficient(AnalysisError):
    """c_m series has not stabilized within the computed prefix."""


class SupUnbounded(AnalysisError):
    """Scoring-rule ratio grows past the configured cap."""


class NonFiniteObjective(AnalysisError):
    """Risk objective is NaN or infinite on the whole domain."""
