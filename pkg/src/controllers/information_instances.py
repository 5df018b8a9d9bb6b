"""
Catalog of information-theoretic entropy-driven structures
"""

import logging
import math
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.special import xlogy
from scipy.stats import entropy as scipy_entropy
from scipy.stats import poisson

from src.constants import (
    POISSON_MIN_TERMS, POISSON_SD_MULTIPLE, SHANNON_EXTENSION_CAP, SIGN_NEGATIVE, SIGN_POSITIVE,
)
from src.controllers.instances import closed_form_profile
from src.models.distributions import PMF_TOTAL_TOLERANCE, DependablePair, JointTable
from src.models.errors import ConfigError, DomainError, RangeError, SupportMismatch, ZeroReliability
from src.models.profile import ComparisonProfile
from src.models.structure import EntropyStructure, FormalPair, Tolerance

logger = logging.getLogger(__name__)

DETERMINISTIC_PMF = np.array([1.0])


# Information measures

def shannon_entropy(p: Sequence[float]) -> float:
    """−Σ p log p in nats."""
    return float(scipy_entropy(np.asarray(p, dtype=float)))


def renyi_entropy(p: Sequence[float], order: float) -> float:
    """log(Σ p^order)/(1 − order); order 1 is Shannon, order ∞ is −log max p."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    if order < 0:
        raise RangeError(f"Rényi order must be nonnegative, got {order}")
    if order == 1.0:
        return shannon_entropy(p)
    if math.isinf(order):
        return float(-np.log(p.max()))
    return float(np.log(np.sum(p ** order)) / (1.0 - order))


def kl_divergence(p_tilde: Sequence[float], p: Sequence[float]) -> float:
    """d_KL(p̃, p) = Σ p̃ log(p̃/p); ∞ when p̃ charges a null cell of p."""
    return float(scipy_entropy(np.asarray(p_tilde, dtype=float), np.asarray(p, dtype=float)))


def mutual_information_value(joint: JointTable) -> float:
    """I(X, Y) = ⟦p_X⟧ + ⟦p_Y⟧ − ⟦p_XY⟧."""
    return shannon_entropy(joint.p_x) + shannon_entropy(joint.p_y) - shannon_entropy(joint.p.ravel())


def variation_of_information(joint: JointTable) -> float:
    return 2.0 * shannon_entropy(joint.p.ravel()) - shannon_entropy(joint.p_x) - shannon_entropy(joint.p_y)


# Probability vectors

def _is_pmf(p: Any) -> bool:
    return (isinstance(p, np.ndarray) and p.ndim == 1 and p.size > 0 and bool(np.all(p >= 0))
            and abs(float(p.sum()) - 1.0) <= PMF_TOTAL_TOLERANCE)


def product_pmf(p: np.ndarray, r: np.ndarray, cap: int = SHANNON_EXTENSION_CAP) -> np.ndarray:
    """p × r on the extended alphabet of letter pairs."""
    if p.size * r.size > cap:
        raise RangeError(f"Alphabet extension to {p.size * r.size} letters exceeds the cap of {cap}")
    return np.outer(p, r).ravel()


def power_pmf(p: Sequence[float], n: int, cap: int = SHANNON_EXTENSION_CAP) -> np.ndarray:
    """pⁿ, the law of n independent letters."""
    p = np.asarray(p, dtype=float)
    result = DETERMINISTIC_PMF
    for _ in range(n):
        result = product_pmf(result, p, cap)
    return result


def _pmf_sampler(max_alphabet: int):
    def sampler(rng: np.random.Generator, n: int) -> List[np.ndarray]:
        drawn = []
        for size in rng.integers(2, max_alphabet + 1, size=n):
            if rng.random() < 0.05:
                drawn.append(DETERMINISTIC_PMF.copy())
            else:
                drawn.append(rng.dirichlet(np.ones(size)))
        return drawn
    return sampler


def _pmf_structure(name: str, entropy_fn: Callable[[np.ndarray], float], profile: Optional[ComparisonProfile],
                   parameters: Dict[str, Any], cap: int, tolerance: Optional[Tolerance],
                   with_dotplus: bool = True, sign_convention: int = SIGN_POSITIVE,
                   max_alphabet: int = 4) -> EntropyStructure:
    """pmfs on finite alphabets; ∔ (or ∘ for the concatenation semigroup) is the product pmf."""
    joined = lambda p, r: product_pmf(p, r, cap)  # noqa: E731
    return EntropyStructure(
        name=name,
        entropy_fn=entropy_fn,
        dotplus_fn=joined if with_dotplus else None,
        circ_fn=None if with_dotplus else joined,
        contains_fn=_is_pmf,
        is_deterministic_fn=lambda p: bool(np.isclose(p.max(), 1.0)),
        neutral_fn=lambda _p: DETERMINISTIC_PMF,
        sampler=_pmf_sampler(max_alphabet),
        decode_fn=lambda value: np.asarray(value, dtype=float),
        profile=profile,
        sign_convention=sign_convention,
        hemi_associative=with_dotplus,
        tolerance=tolerance or Tolerance(),
        named={"deterministic": DETERMINISTIC_PMF},
        parameters={**parameters, "extension_cap": cap},
    )


def shannon_concat(p: Optional[Sequence[float]] = None, cap: int = SHANNON_EXTENSION_CAP,
                   tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Concatenation of independent messages: ∘ is the product pmf and ⟦pⁿ⟧ = n⟦p⟧."""
    structure = _pmf_structure("shannon_concat", shannon_entropy, None, {}, cap, tolerance, with_dotplus=False)
    if p is not None:
        base = np.asarray(p, dtype=float)
        if not _is_pmf(base):
            raise DomainError("p must be a probability vector")
        structure.named["p"] = base
    return structure


def tsallis(q: float = 2.0, k: float = 1.0, cap: int = SHANNON_EXTENSION_CAP,
            tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """⟦p⟧ = k/(q−1)·(1 − Σ p^q) with ∔ = product pmf."""
    if k <= 0:
        raise ConfigError(f"Tsallis needs k > 0, got {k}")
    return sharma_mittal(q, k, cap, tolerance, name="tsallis", exponent=1.0)


def sharma_mittal(q: float = 2.0, k: float = 1.0, cap: int = SHANNON_EXTENSION_CAP,
                  tolerance: Optional[Tolerance] = None, name: str = "sharma_mittal",
                  exponent: Optional[float] = None) -> EntropyStructure:
    """⟦p⟧ = k/(q−1)·(1 − (Σ p^q)^{1/k}); joining interacts through −((q−1)/k)⟦p⟧⟦p'⟧."""
    if q == 1.0:
        raise ConfigError("q = 1 is the Shannon limit, use tsallis_limit")
    if k == 0:
        raise ConfigError("Sharma-Mittal needs k ≠ 0")
    power = 1.0 / k if exponent is None else exponent
    factor = k / (q - 1.0)

    def entropy(p):
        return factor * (1.0 - np.sum(p[p > 0] ** q) ** power)

    interaction = (q - 1.0) / k
    profile = (closed_form_profile(0.5, 1.0, SIGN_NEGATIVE) if interaction > 0
               else closed_form_profile(1.0, math.inf, SIGN_POSITIVE))
    return _pmf_structure(name, entropy, profile, {"q": q, "k": k, "interaction": interaction}, cap, tolerance)


def tsallis_limit(k: float = 1.0, cap: int = SHANNON_EXTENSION_CAP,
                  tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """The q → 1 limit: ⟦p⟧ = k·H(p), additive under the product pmf."""
    if k <= 0:
        raise ConfigError(f"k must be positive, got {k}")
    return _pmf_structure("shannon_product", lambda p: k * shannon_entropy(p),
                          closed_form_profile(1.0, 1.0, SIGN_POSITIVE, "convention"), {"k": k}, cap, tolerance)


def renyi(order: float = 2.0, cap: int = SHANNON_EXTENSION_CAP,
          tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Rényi entropy of the given order, additive under the product pmf."""
    if order <= 0:
        raise ConfigError(f"Rényi order must be positive, got {order}")
    return _pmf_structure("renyi", lambda p: renyi_entropy(p, order),
                          closed_form_profile(1.0, 1.0, SIGN_POSITIVE, "convention"), {"order": order}, cap, tolerance)


# Mutual information

def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(np.asarray(labels), return_inverse=True)
    return inverse.ravel().astype(int)


def mutual_information(joint: Union[JointTable, Sequence[Sequence[float]]],
                       tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Random variables on the atoms of a joint table; ∔ pairs them and ⟦·⟧ is Shannon.

    ⟨X, Y⟩₂ is the mutual information and ρ_ca the variation of information.
    """
    table = joint if isinstance(joint, JointTable) else JointTable.from_list(joint)
    probs, rows, cols = table.atoms()
    atoms = probs.size
    x_labels, y_labels = _canonical_labels(rows), _canonical_labels(cols)
    constant = np.zeros(atoms, dtype=int)

    def entropy(labels):
        return shannon_entropy(np.bincount(labels, weights=probs))

    def dotplus(a, b):
        _, inverse = np.unique(np.stack([a, b], axis=1), axis=0, return_inverse=True)
        return inverse.ravel().astype(int)

    def contains(labels):
        return (isinstance(labels, np.ndarray) and labels.shape == (atoms,)
                and np.issubdtype(labels.dtype, np.integer) and bool(np.all(labels >= 0)))

    def sampler(rng, n):
        drawn = []
        for choice in rng.integers(0, 4, size=n):
            if choice == 0:
                drawn.append(x_labels)
            elif choice == 1:
                drawn.append(y_labels)
            else:
                drawn.append(_canonical_labels(rng.integers(0, rng.integers(1, 5), size=atoms)))
        return drawn

    return EntropyStructure(
        name="mutual_information",
        entropy_fn=entropy,
        dotplus_fn=dotplus,
        contains_fn=contains,
        is_deterministic_fn=lambda labels: np.unique(labels).size == 1,
        neutral_fn=lambda _labels: constant,
        sampler=sampler,
        decode_fn=lambda value: _canonical_labels(np.asarray(value, dtype=int)),
        profile=closed_form_profile(0.5, 1.0, SIGN_NEGATIVE),
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        named={"X": x_labels, "Y": y_labels, "constant": constant},
        parameters={"joint": table.p.tolist(), "atoms": atoms},
    )


# Dependable systems

def dependable_entropy(pair: DependablePair) -> float:
    """⟦(p,q)⟧ = −Σ q_x p_x log p_x / Σ q_x p_x, and 0 for q ≡ 0."""
    total = pair.total_weight
    if total == 0.0:
        if not pair.unreliable:
            raise ZeroReliability("Σ q_x p_x = 0 although q is not identically 0")
        return 0.0
    return float(-np.sum(xlogy(pair.weight, pair.p)) / total)


def dependable_update(model: DependablePair, data: DependablePair) -> DependablePair:
    """(p, q) ∔ (p̃, q̃) = (p, q + q̃ p̃ / p)."""
    if model.p.shape != data.p.shape:
        raise SupportMismatch("model and data live on different alphabets")
    if np.any((data.weight > 0) & (model.p == 0)):
        raise SupportMismatch("data charges letters the model excludes")
    weight = model.weight + data.weight
    q = np.divide(weight, model.p, out=np.zeros_like(weight), where=model.p > 0)
    return DependablePair(p=model.p, q=q, weight=weight)


def _dependable_cross(left: DependablePair, right: DependablePair, cap: int) -> Any:
    if left.unreliable or right.unreliable:
        return FormalPair(left, right)
    if left.p.size * right.p.size > cap:
        raise RangeError(f"Cross product of {left.p.size}×{right.p.size} letters exceeds the cap of {cap}")
    return DependablePair(p=np.outer(left.p, right.p).ravel(), q=np.outer(left.q, right.q).ravel(),
                          weight=np.outer(left.weight, right.weight).ravel())


def _decode_pair(value: Any) -> DependablePair:
    if isinstance(value, DependablePair):
        return value
    if isinstance(value, dict):
        if "model" in value:
            return model_pair(value["model"])
        if "data" in value:
            return data_pair(value["data"])
        return DependablePair.from_dict(value)
    raise DomainError(f"Cannot decode a dependable pair from {value!r}")


def model_pair(p: Sequence[float]) -> DependablePair:
    """(p, 0): a model with maximal uncertainty."""
    p = np.asarray(p, dtype=float)
    return DependablePair(p=p, q=np.zeros_like(p))


def data_pair(p: Sequence[float]) -> DependablePair:
    """(p̃, 1): fully dependable data."""
    p = np.asarray(p, dtype=float)
    return DependablePair(p=p, q=np.ones_like(p))


def dependable_shannon(alphabet: int = 3, cap: int = SHANNON_EXTENSION_CAP,
                       tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Pairs (p, q) with ⟦(p,q)⟧_u = −u Σ q p log p, u = 1/Σ q p; ∔ updates a model by data."""
    if alphabet < 2:
        raise ConfigError("alphabet must have at least two letters")

    def sampler(rng, n):
        drawn = []
        for _ in range(n):
            p = rng.dirichlet(np.ones(alphabet))
            q = np.zeros(alphabet) if rng.random() < 0.05 else rng.uniform(0.0, 1.0, size=alphabet)
            drawn.append(DependablePair(p=p, q=q))
        return drawn

    return EntropyStructure(
        name="dependable_shannon",
        entropy_fn=dependable_entropy,
        dotplus_fn=dependable_update,
        circ_fn=lambda a, b: _dependable_cross(a, b, cap),
        contains_fn=lambda pair: isinstance(pair, DependablePair),
        is_deterministic_fn=lambda pair: pair.unreliable,
        neutral_fn=lambda pair: model_pair(pair.p),
        sampler=sampler,
        decode_fn=_decode_pair,
        profile=closed_form_profile(0.0, math.inf, SIGN_NEGATIVE),
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        parameters={"alphabet": alphabet},
    )


def kl_structure(alphabet: int = 3, tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Models (p, 0) on the left and data (p̃, 1) on the right; ⟨p, p̃⟩_a = d_KL(p̃, p).

    The comparability map is identically 0 and its sign is set to +1.
    """
    if alphabet < 2:
        raise ConfigError("alphabet must have at least two letters")

    def sampler(rng, n):
        return [model_pair(rng.dirichlet(np.ones(alphabet))) if rng.random() < 0.5
                else data_pair(rng.dirichlet(np.ones(alphabet))) for _ in range(n)]

    def pair_sampler(rng, n):
        return [(model_pair(rng.dirichlet(np.ones(alphabet))), data_pair(rng.dirichlet(np.ones(alphabet))))
                for _ in range(n)]

    return EntropyStructure(
        name="kl",
        entropy_fn=dependable_entropy,
        dotplus_fn=dependable_update,
        contains_fn=lambda pair: isinstance(pair, DependablePair),
        is_deterministic_fn=lambda pair: pair.unreliable,
        neutral_fn=lambda pair: model_pair(pair.p),
        sampler=sampler,
        pair_sampler=pair_sampler,
        diagonal_fn=lambda pair: (model_pair(pair.p), data_pair(pair.p)),
        decode_fn=_decode_pair,
        profile=closed_form_profile(1.0, math.inf, SIGN_POSITIVE, "convention"),
        sign_convention=SIGN_POSITIVE,
        hemi_associative=True,
        tolerance=tolerance or Tolerance(),
        parameters={"alphabet": alphabet},
    )


# Poisson

def poisson_profile(a: float, b: float, sign_convention: int = SIGN_NEGATIVE) -> ComparisonProfile:
    """m_G = 1 − ab/(a+b), the infimum of (λ+μ−ν)/(λ+μ); M_G = 1."""
    m_G = 1.0 if a + b == 0 else 1.0 - a * b / (a + b)
    if min(a, b) > 0:
        return closed_form_profile(m_G, 1.0, SIGN_NEGATIVE)
    return closed_form_profile(m_G, 1.0, sign_convention, "convention")


def poisson_canonical_coefficient(a: float, b: float) -> float:
    """a_σ = (a+b)/(ab), which is 2/min{a,b} when a = b."""
    if a * b == 0:
        raise ConfigError("a_σ is infinite when ab = 0")
    return (a + b) / (a * b)


def poisson_bivariate(a: float = 1.0, b: float = 1.0, lam: Optional[float] = None, mu: Optional[float] = None,
                      tolerance: Optional[Tolerance] = None) -> EntropyStructure:
    """Poisson intensities with ⟦λ⟧ = λ and λ ∔ μ = λ + μ − min{aλ, bμ}.

    The shared component Z ~ Poiss(min{aλ, bμ}) couples X = X₀ + Z and Y = Y₀ + Z.
    """
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ConfigError("a and b must lie in [0, 1]")
    named: Dict[str, float] = {"zero": 0.0}
    for label, value in (("X", lam), ("Y", mu)):
        if value is not None:
            if value <= 0:
                raise ConfigError(f"Intensity {label} must be positive")
            named[label] = float(value)

    def contains(x):
        return isinstance(x, (int, float, np.floating)) and math.isfinite(x) and x >= 0

    def sampler(rng, n):
        values = np.where(rng.random(n) < 0.05, 0.0, rng.gamma(2.0, 2.0, size=n))
        return [float(v) for v in values]

    return EntropyStructure(
        name="poisson_bivariate",
        entropy_fn=float,
        dotplus_fn=lambda x, y: x + y - min(a * x, b * y),
        circ_fn=lambda x, y: x + y,
        contains_fn=contains,
        is_deterministic_fn=lambda x: x == 0,
        neutral_fn=lambda _x: 0.0,
        sampler=sampler,
        decode_fn=float,
        profile=poisson_profile(a, b),
        sign_convention=SIGN_NEGATIVE,
        hemi_associative=False,
        tolerance=tolerance or Tolerance(),
        named=named,
        parameters={"a": a, "b": b},
    )


def _poisson_pmf(k: np.ndarray, mean: float) -> np.ndarray:
    if mean == 0.0:
        return (k == 0).astype(float)
    return poisson.pmf(k, mean)


def poisson_terms(mean: float, min_terms: int = POISSON_MIN_TERMS, sd_multiple: float = POISSON_SD_MULTIPLE) -> int:
    return max(min_terms, int(math.ceil(mean + sd_multiple * math.sqrt(mean))))


def bivariate_poisson_pmf(lam: float, mu: float, nu: float, terms: int) -> np.ndarray:
    """Joint pmf of (X₀ + Z, Y₀ + Z) on {0, …, terms}²."""
    k = np.arange(terms + 1)
    f_z, f_x, f_y = _poisson_pmf(k, nu), _poisson_pmf(k, lam - nu), _poisson_pmf(k, mu - nu)
    joint = np.zeros((terms + 1, terms + 1))
    for z in range(terms + 1):
        if f_z[z] == 0.0:
            continue
        joint[z:, z:] += f_z[z] * np.outer(f_x[:terms + 1 - z], f_y[:terms + 1 - z])
    return joint


def poisson_shannon_sign_scan(a_values: Sequence[float], b_values: Sequence[float],
                              intensities: Sequence[float], min_terms: int = POISSON_MIN_TERMS,
                              sd_multiple: float = POISSON_SD_MULTIPLE,
                              tolerance: Optional[Tolerance] = None) -> pd.DataFrame:
    """Shannon-mode ⟦X∔Y⟧ − ⟦X⟧ − ⟦Y⟧ over a parameter grid, one row per (a, b, λ, μ).

    Truncation keeps the neglected mass far below the reported tolerance; the sign
    column is observational.
    """
    tol = tolerance or Tolerance()
    rows = []
    for a, b, lam, mu in product(a_values, b_values, intensities, intensities):
        nu = min(a * lam, b * mu)
        terms = poisson_terms(max(lam, mu), min_terms, sd_multiple)
        joint = bivariate_poisson_pmf(lam, mu, nu, terms)
        k = np.arange(terms + 1)
        h_x, h_y = shannon_entropy(_poisson_pmf(k, lam)), shannon_entropy(_poisson_pmf(k, mu))
        h_xy = float(-np.sum(xlogy(joint, joint)))
        deviation = h_xy - h_x - h_y
        slack = tol.slack(h_xy, h_x + h_y)
        rows.append({
            "a": a, "b": b, "lam": lam, "mu": mu, "nu": nu, "terms": terms,
            "h_x": h_x, "h_y": h_y, "h_xy": h_xy, "deviation": deviation,
            "tail_mass": float(1.0 - joint.sum()),
            "sign": 0 if abs(deviation) <= slack else int(np.sign(deviation)),
        })
    frame = pd.DataFrame(rows)
    logger.info("Poisson Shannon scan: %d grid points, %d with positive deviation",
                len(frame), int((frame["sign"] > 0).sum()) if len(frame) else 0)
    return frame
