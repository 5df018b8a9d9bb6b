"""
Catalog of geometric, real-axis and lattice entropy-driven structures
"""

import itertools
import logging
import math
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.constants import (
    CARRIER_DOMAINS, EXHAUSTIVE_CARRIER_LIMIT, PROVENANCE_CLOSED_FORM, SIGN_NEGATIVE, SIGN_POSITIVE,
    VARIOGRAM_MODELS,
)
from src.models.errors import ConfigError, DesignNotOrthogonal, DomainError
from src.models.profile import ComparisonProfile
from src.models.structure import EntropyStructure, Tolerance

logger = logging.getLogger(__name__)

SATURATED = "saturated"


def closed_form_profile(m_G: float, M_G: float, sign: int, sign_source: str = "observed",
                        e_entropy: Optional[float] = None) -> ComparisonProfile:
    return ComparisonProfile(m_G=m_G, M_G=M_G, sign=sign, provenance=PROVENANCE_CLOSED_FORM,
                             sign_source=sign_source, e_entropy=e_entropy)


def _vector(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=float)


def _vector_contains(d: int):
    def contains(x):
        return isinstance(x, np.ndarray) and x.shape == (d,) and bool(np.all(np.isfinite(x)))
    return contains


def _normal_rows(d: int):
    def sampler(rng: np.random.Generator, n: int) -> List[np.ndarray]:
        return list(rng.standard_normal((n, d)))
    return sampler


# Normed spaces

def euclidean(d: int = 2, scalar_action: bool = False, tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """⟦x⟧ = ‖x‖² on ℝ^d with ∔ = vector addition and formal ∘.

    With scalar_action the coordinatewise product acts as the scale operator; it is a
    rescaling only for d = 1.
    """
    if d < 1:
        raise ConfigError(f"Dimension must be at least 1, got {d}")
    zero = np.zeros(d)
    return EntropyStructure(
        name="euclidean",
        entropy_fn=lambda x: float(np.dot(x, x)),
        dotplus_fn=lambda x, y: x + y,
        scale_fn=(lambda x, y: x * y) if scalar_action else None,
        contains_fn=_vector_contains(d),
        is_zero_fn=lambda x: not np.any(x),
        is_deterministic_fn=lambda x: not np.any(x),
        neutral_fn=lambda _x: zero,
        sampler=_normal_rows(d),
        negate_fn=lambda x: -x,
        invariant_element=-np.ones(d) if scalar_action else None,
        decode_fn=_vector,
        profile=closed_form_profile(0.0, 2.0, SIGN_POSITIVE),
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"zero": zero},
        parameters={"d": d, "scalar_action": scalar_action},
    )


def bivariate_gaussian() -> EntropyStructure:
    """Loadings of a standard Gaussian X on ℝ²; the vector entropy sums the component variances.

    u = (1, −1) and v = (1, 1) are fully dependent yet orthogonal.
    """
    base = euclidean(2)
    named = dict(base.named)
    named.update({"u": np.array([1.0, -1.0]), "v": np.array([1.0, 1.0])})
    return replace(base, name="bivariate_gaussian", named=named)


def lp_space(d: int = 2, p: float = 3.0, tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """⟦x⟧ = ‖x‖_p^p with ∔ = vector addition; M_G = 2^{p−1}."""
    if p <= 1:
        raise ConfigError(f"lp_space needs p > 1, got {p}")
    if p == 2:
        return euclidean(d, tolerance=tolerance)
    zero = np.zeros(d)
    return EntropyStructure(
        name="lp_space",
        entropy_fn=lambda x: float(np.sum(np.abs(x) ** p)),
        dotplus_fn=lambda x, y: x + y,
        contains_fn=_vector_contains(d),
        is_zero_fn=lambda x: not np.any(x),
        is_deterministic_fn=lambda x: not np.any(x),
        neutral_fn=lambda _x: zero,
        sampler=_normal_rows(d),
        negate_fn=lambda x: -x,
        decode_fn=_vector,
        profile=closed_form_profile(0.0, 2.0 ** (p - 1.0), SIGN_POSITIVE),
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"zero": zero},
        parameters={"d": d, "p": p},
    )


def gateaux_derivative(x: Sequence[float], y: Sequence[float], p: float) -> float:
    """lim t⁻¹⟨tx, y⟩_a = p Σ x_j y_j |y_j|^{p−2} for ⟦·⟧ = ‖·‖_p^p."""
    x, y = _vector(x), _vector(y)
    magnitude = np.abs(y)
    weights = np.where(magnitude > 0, magnitude ** (p - 2.0), 0.0) if p < 2 else magnitude ** (p - 2.0)
    return float(p * np.sum(x * y * weights))


def semi_inner_product(x: Sequence[float], y: Sequence[float], p: float) -> float:
    """[x, y] = p⁻¹⟨x,y⟩'_a / ‖y‖_p^{p−2}."""
    norm = float(np.sum(np.abs(_vector(y)) ** p) ** (1.0 / p))
    if norm == 0.0:
        raise DomainError("The semi-inner product needs y ≠ 0")
    return gateaux_derivative(x, y, p) / p / norm ** (p - 2.0)


# Variograms

def variogram_function(model: str, params: Dict[str, float]):
    """γ(h) for a registered variogram model without nugget."""
    if params.get("nugget", 0.0) != 0.0:
        raise ConfigError("A variogram entropy needs γ(0) = 0, drop the nugget")
    if model == "power":
        scale, exponent = params.get("scale", 1.0), params.get("exponent", 1.0)
        if not (0.0 < exponent <= 2.0) or scale <= 0.0:
            raise ConfigError("power variogram needs scale > 0 and exponent in (0, 2]")
        return lambda h: scale * h ** exponent
    if model == "linear":
        slope = params.get("slope", 1.0)
        if slope <= 0.0:
            raise ConfigError("linear variogram needs slope > 0")
        return lambda h: slope * h
    psill, range_ = params.get("psill", 1.0), params.get("range", 1.0)
    if psill <= 0.0 or range_ <= 0.0:
        raise ConfigError(f"{model} variogram needs psill > 0 and range > 0")
    if model == "gaussian":
        return lambda h: psill * (1.0 - np.exp(-(h ** 2.0) / (range_ * 4.0 / 7.0) ** 2.0))
    if model == "exponential":
        return lambda h: psill * (1.0 - np.exp(-h / (range_ / 3.0)))
    if model == "spherical":
        return lambda h: psill * ((3.0 * h) / (2.0 * range_) - (h ** 3.0) / (2.0 * range_ ** 3.0)) \
            if h <= range_ else psill
    raise ConfigError(f"Unknown variogram model: {model}")


def variogram_structure(model: str = "power", d: int = 1, tolerance: Optional[Tolerance] = None,
                        **params: float) -> EntropyStructure:
    """⟦x⟧ = γ(‖x‖) on ℝ^d with x ∔ y = x − y; ρ_ca(x, y) = γ(x − y)."""
    if model not in VARIOGRAM_MODELS:
        raise ConfigError(f"Unknown variogram model: {model}")
    gamma = variogram_function(model, params)
    if model == "power":
        M_G = max(1.0, 2.0 ** (params.get("exponent", 1.0) - 1.0))
    elif model == "linear":
        M_G = 1.0
    else:
        # Cauchy-Schwarz for the positive definite kernel bounds the ratio by 2
        M_G = 2.0
    zero = np.zeros(d)
    return EntropyStructure(
        name="variogram",
        entropy_fn=lambda x: float(gamma(float(np.linalg.norm(x)))),
        dotplus_fn=lambda x, y: x - y,
        contains_fn=_vector_contains(d),
        is_zero_fn=lambda x: not np.any(x),
        is_deterministic_fn=lambda x: not np.any(x),
        neutral_fn=lambda _x: zero,
        sampler=_normal_rows(d),
        negate_fn=lambda x: -x,
        decode_fn=_vector,
        profile=closed_form_profile(0.0, M_G, SIGN_NEGATIVE),
        hemi_associative=False,
        tolerance=tolerance or Tolerance(),
        named={"zero": zero},
        parameters={"model": model, "d": d, **params},
    )


# Measures

def finite_measure_sets(weights: Sequence[float], ground: Optional[Sequence[Any]] = None,
                        tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Subsets of a finite ground set with ⟦A⟧ = μ(A) and ∔ = ∪."""
    weights = [float(w) for w in weights]
    ground = list(ground) if ground is not None else list(range(len(weights)))
    if len(ground) != len(weights):
        raise ConfigError("ground and weights must have equal length")
    if any(w < 0 for w in weights) or sum(weights) <= 0:
        raise ConfigError("weights must be nonnegative and not all zero")
    mass = dict(zip(ground, weights))
    empty = frozenset()
    finite = 2 ** len(ground) <= EXHAUSTIVE_CARRIER_LIMIT

    def enumerate_subsets():
        return [frozenset(c) for r in range(len(ground) + 1) for c in itertools.combinations(ground, r)]

    def sampler(rng, n):
        masks = rng.random((n, len(ground))) < 0.5
        return [frozenset(g for g, keep in zip(ground, row) if keep) for row in masks]

    def decode(value):
        return frozenset(value)

    return EntropyStructure(
        name="finite_measure_sets",
        entropy_fn=lambda A: sum(mass[g] for g in A),
        dotplus_fn=lambda A, B: A | B,
        contains_fn=lambda A: isinstance(A, frozenset) and A <= mass.keys(),
        is_deterministic_fn=lambda A: len(A) == 0,
        neutral_fn=lambda _A: empty,
        sampler=sampler,
        enumerate_fn=enumerate_subsets if finite else None,
        decode_fn=decode,
        profile=closed_form_profile(0.5, 1.0, SIGN_NEGATIVE),
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"empty": empty, "ground": frozenset(ground)},
        parameters={"weights": weights, "ground": ground},
    )


# Real axis

_REAL_AXIS_PLUS = ("add", "max", "signed_max")


def _real_axis_profile(alpha: float, domain: str, plus: str, sign_convention: int) -> ComparisonProfile:
    if plus == "add":
        if alpha == 1.0:
            return closed_form_profile(0.0 if domain == "full" else 1.0, 1.0, sign_convention, "convention")
        if alpha > 1.0:
            return closed_form_profile(0.0 if domain == "full" else 1.0, 2.0 ** (alpha - 1.0), SIGN_POSITIVE)
        return closed_form_profile(0.0 if domain == "full" else 2.0 ** (alpha - 1.0), 1.0, SIGN_NEGATIVE)
    if plus == "max":
        return closed_form_profile(0.5 if domain == "nonneg" else 0.0, 1.0, SIGN_NEGATIVE)
    return closed_form_profile(0.5, 1.0, SIGN_NEGATIVE)


def real_axis(alpha: float = 1.0, domain: str = "nonneg", plus: str = "add",
              sign_convention: int = SIGN_POSITIVE, name: str = "real_axis",
              tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """⟦ξ⟧ = |ξ|^α on ℝ or [0, ∞) with ∔ = +, ∨ or the signed maximum.

    ∘ is the natural merge (|ξ|^α + |ν|^α)^{1/α} and · is multiplication with e = 1.
    """
    if alpha <= 0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if domain not in CARRIER_DOMAINS:
        raise ConfigError(f"Unknown domain: {domain}")
    if plus not in _REAL_AXIS_PLUS:
        raise ConfigError(f"Unknown ∔ for the real axis: {plus}")
    if plus == "signed_max" and domain != "full":
        raise ConfigError("signed_max is defined on the full real axis only")
    nonneg = domain == "nonneg"

    if plus == "add":
        dotplus = lambda x, y: x + y  # noqa: E731
    elif plus == "max":
        dotplus = max
    else:
        def dotplus(x, y):
            return y if abs(y) > abs(x) else x

    def contains(x):
        if isinstance(x, bool) or not isinstance(x, (int, float, np.integer, np.floating)):
            return False
        return math.isfinite(x) and (x >= 0 or not nonneg)

    def sampler(rng, n):
        values = np.where(rng.random(n) < 0.05, 0.0, rng.standard_exponential(n))
        if not nonneg:
            values = values * rng.choice([-1.0, 1.0], size=n)
        return [float(v) for v in values]

    return EntropyStructure(
        name=name,
        entropy_fn=lambda x: abs(x) ** alpha,
        dotplus_fn=dotplus,
        circ_fn=lambda x, y: (abs(x) ** alpha + abs(y) ** alpha) ** (1.0 / alpha),
        scale_fn=lambda x, y: x * y,
        contains_fn=contains,
        is_zero_fn=lambda x: x == 0,
        is_deterministic_fn=lambda x: x == 0,
        # on (max, full) the deterministic 0 does not absorb negative arguments
        neutral_fn=None if (plus == "max" and not nonneg) else (lambda _x: 0.0),
        sampler=sampler,
        negate_fn=None if nonneg else (lambda x: -x),
        invariant_element=1.0,
        decode_fn=float,
        profile=_real_axis_profile(alpha, domain, plus, sign_convention),
        sign_convention=sign_convention,
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"zero": 0.0, "one": 1.0},
        parameters={"alpha": alpha, "domain": domain, "plus": plus},
    )


def cauchy(tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Cauchy(λ) scales: ⟦λ⟧ = |λ| under addition, sign fixed to −1 so that a_σ = 1."""
    return real_axis(1.0, "full", "add", sign_convention=SIGN_NEGATIVE, name="cauchy", tolerance=tolerance)


def gaussian_scale(tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Gaussian standard deviations: ⟦s⟧ = s², s∘t = √(s²+t²), fully dependent sums add."""
    return real_axis(2.0, "nonneg", "add", name="gaussian_scale", tolerance=tolerance)


def frechet_scale(alpha: float = 1.0, tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Fréchet scales: ⟦λ⟧ = λ^α, λ∘μ = (λ^α+μ^α)^{1/α}, fully dependent maxima give λ∨μ."""
    return real_axis(alpha, "nonneg", "max", name="frechet_scale", tolerance=tolerance)


# Tropical

def tropical(mode: str = "sup", grid_size: int = 8, tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Nonnegative functions on a finite grid; ⟦f⟧ = sup f or inf f, ∔ = pointwise addition."""
    if mode not in ("sup", "inf"):
        raise ConfigError(f"Unknown tropical mode: {mode}")
    if grid_size < 1:
        raise ConfigError("grid_size must be positive")
    reduce_fn = np.max if mode == "sup" else np.min
    zero = np.zeros(grid_size)

    def sampler(rng, n):
        values = rng.standard_exponential((n, grid_size))
        if mode == "inf":
            values = np.where(rng.random((n, grid_size)) < 0.2, 0.0, values)
        return list(values)

    def contains(f):
        return _vector_contains(grid_size)(f) and bool(np.all(f >= 0))

    profile = (closed_form_profile(0.5, 1.0, SIGN_POSITIVE, "convention") if mode == "sup"
               else closed_form_profile(1.0, math.inf, SIGN_POSITIVE, "convention"))
    return EntropyStructure(
        name=f"tropical_{mode}",
        entropy_fn=lambda f: float(reduce_fn(f)),
        dotplus_fn=lambda f, g: f + g,
        contains_fn=contains,
        is_deterministic_fn=lambda f: not np.any(f),
        neutral_fn=lambda _f: zero,
        sampler=sampler,
        decode_fn=_vector,
        profile=profile,
        sign_convention=SIGN_POSITIVE,
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"zero": zero},
        parameters={"mode": mode, "grid_size": grid_size},
    )


# Linear models

def _residual_sum_of_squares(X: np.ndarray, y: np.ndarray, columns: frozenset) -> float:
    if not columns:
        return float(y @ y)
    design = X[:, sorted(columns)]
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ beta
    return float(residual @ residual)


def linear_model(X: Sequence[Sequence[float]], y: Sequence[float],
                 tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Column subsets A with ⟦A⟧ = ‖y − H_A y‖² and A ∔ B = A ∩ B.

    The saturated model (residual 0) is the deterministic element; intersecting with it
    leaves A unchanged. M_G is the maximum ratio over the enumerated carrier.
    """
    X, y = np.asarray(X, dtype=float), np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ConfigError("X must be n×p and y of length n")
    n, p = X.shape
    if np.linalg.matrix_rank(X) < p:
        raise ConfigError("X must have full column rank")
    subsets = [frozenset(c) for r in range(p + 1) for c in itertools.combinations(range(p), r)]
    if len(subsets) > 2 ** 12:
        raise ConfigError("Too many columns to tabulate every submodel")
    rss: Dict[Any, float] = {A: _residual_sum_of_squares(X, y, A) for A in subsets}
    rss[SATURATED] = 0.0
    carrier = subsets + [SATURATED]

    def dotplus(A, B):
        if A == SATURATED:
            return B
        if B == SATURATED:
            return A
        return A & B

    ratios = [rss[dotplus(A, B)] / (rss[A] + rss[B]) for A in carrier for B in carrier if rss[A] + rss[B] > 0]
    M_G = max(1.0, max(ratios, default=1.0))

    def sampler(rng, count):
        picks = rng.integers(0, len(carrier), size=count)
        return [carrier[i] for i in picks]

    def decode(value):
        return SATURATED if value == SATURATED else frozenset(int(v) for v in value)

    return EntropyStructure(
        name="linear_model",
        entropy_fn=lambda A: rss[A],
        dotplus_fn=dotplus,
        contains_fn=lambda A: A in rss,
        is_deterministic_fn=lambda A: A == SATURATED,
        neutral_fn=lambda _A: SATURATED,
        sampler=sampler,
        enumerate_fn=(lambda: list(carrier)) if len(carrier) <= EXHAUSTIVE_CARRIER_LIMIT else None,
        decode_fn=decode,
        profile=closed_form_profile(0.5, M_G, SIGN_NEGATIVE),
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"saturated": SATURATED, "empty": frozenset(), "full": frozenset(range(p))},
        parameters={"n": n, "p": p},
    )


def r_squared(S: EntropyStructure, A: Any, B: Any) -> float:
    """R²_{A,B} = 1 − ⟦A⟧/⟦B⟧ for a submodel B ⊂ A with ⟦B⟧ ≠ 0."""
    if B == SATURATED or (A != SATURATED and not B <= A):
        raise DomainError("R²_{A,B} needs B ⊂ A")
    denominator = S.entropy(B)
    if denominator <= S.tolerance.abs_tol:
        raise DomainError("R²_{A,B} needs ⟦B⟧ ≠ 0")
    return 1.0 - S.entropy(A) / denominator


def tichonov_model(X: Sequence[Sequence[float]], y: Sequence[float],
                   tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Euclidean structure on ℝ^n carrying an orthonormal design and a response."""
    X, y = np.asarray(X, dtype=float), np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ConfigError("X must be n×p and y of length n")
    if not np.allclose(X.T @ X, np.eye(X.shape[1]), atol=1e-8):
        raise DesignNotOrthogonal("XᵀX must be the identity")
    base = euclidean(X.shape[0], tolerance=tolerance)
    named = dict(base.named)
    named["y"] = y
    return replace(base, name="tichonov", named=named,
                   parameters={"design": X, "response": y, "d": X.shape[0]})


def tichonov_coefficient(lam: float) -> float:
    """a = −1/(1+λ): minimizing ρ_a(y, Xβ) is ridge regression with penalty λ."""
    if lam < 0:
        raise DomainError(f"λ must be nonnegative, got {lam}")
    return -1.0 / (1.0 + lam)


# Product probability space

def product_space(max_factors: int = 3, tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Truncated cylinders A₁×…×A_m×Ω^∞, each recorded by the tuple (P(A₁), …, P(A_m)).

    ⟦·⟧ = −Σ log P(A_i) (∞ for null sets) and ∘ concatenates the factors.
    """
    def entropy(cylinder):
        if any(p == 0.0 for p in cylinder):
            return math.inf
        return float(-np.sum(np.log(cylinder))) if cylinder else 0.0

    def sampler(rng, n):
        lengths = rng.integers(1, max_factors + 1, size=n)
        return [tuple(float(v) for v in rng.uniform(0.05, 1.0, size=k)) for k in lengths]

    def contains(cylinder):
        return isinstance(cylinder, tuple) and all(0.0 <= p <= 1.0 for p in cylinder)

    return EntropyStructure(
        name="product_space",
        entropy_fn=entropy,
        circ_fn=lambda a, b: a + b,
        contains_fn=contains,
        is_deterministic_fn=lambda c: all(p == 1.0 for p in c),
        neutral_fn=lambda _c: (),
        sampler=sampler,
        decode_fn=lambda value: tuple(float(v) for v in value),
        finite_entropy=False,
        tolerance=tolerance or Tolerance(),
        named={"omega": ()},
        parameters={"max_factors": max_factors},
    )
