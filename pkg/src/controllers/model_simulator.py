"""
Entropy-driven statistical models: sampling, merge laws and entropy calibration
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from src.constants import (
    CALIBRATION_SIGMAS, DEFAULT_KS_LEVEL, DEFAULT_MERGE_SAMPLE_SIZE, DEFAULT_PARTITIONS,
    DEFAULT_WORKERS, MODEL_FAMILIES, QUANTILE_LEVELS, QUANTILE_LOG_TOLERANCE,
)
from src.models.errors import ConfigError, DomainError
from src.models.statistical import CalibrationReport, MergeTestResult, ModelSpec
from src.utils.sampling import map_partitioned

logger = logging.getLogger(__name__)


def stable_standard(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric S_α(1, 0, 0) draws by the Chambers–Mallows–Stuck transform."""
    if not 0 < alpha <= 2:
        raise ConfigError(f"alpha must lie in (0, 2], got {alpha}")
    phi = (rng.uniform(size=size) - 0.5) * np.pi
    if alpha == 1.0:
        return np.tan(phi)
    w = rng.standard_exponential(size)
    if alpha == 2.0:
        return 2.0 * np.sqrt(w) * np.sin(phi)
    return ((np.cos((1.0 - alpha) * phi) / w) ** (1.0 / alpha - 1.0)
            * np.sin(alpha * phi) / np.cos(phi) ** (1.0 / alpha))


def frechet_standard(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Fréchet(α, 1) draws by inversion, F(x) = exp(−x^{−α})."""
    return frechet_quantile(rng.uniform(size=size), alpha)


def frechet_quantile(u, alpha: float, scale: float = 1.0):
    """λ(−log u)^{−1/α}."""
    return scale * (-np.log(u)) ** (-1.0 / alpha)


class ModelSimulator:
    """Processor for the α-stable, max-stable and min-stable scale models."""

    def __init__(self, ks_level: float = DEFAULT_KS_LEVEL,
                 quantile_levels: Sequence[float] = QUANTILE_LEVELS,
                 quantile_tolerance: float = QUANTILE_LOG_TOLERANCE,
                 workers: int = DEFAULT_WORKERS, partitions: int = DEFAULT_PARTITIONS):
        self.ks_level = ks_level
        self.quantile_levels = np.asarray(quantile_levels, dtype=float)
        self.quantile_tolerance = quantile_tolerance
        self.workers = workers
        self.partitions = partitions

    # Sampling

    def _base_draws(self, model: ModelSpec, n: int, rng: np.random.Generator) -> np.ndarray:
        """n draws of X₀ ~ ℙ₀."""
        if model.family == MODEL_FAMILIES["stable"]:
            return model.base_scale * stable_standard(model.alpha, n, rng)
        draws = model.base_scale * frechet_standard(model.alpha, n, rng)
        if model.family == MODEL_FAMILIES["min_stable"]:
            return -draws
        return draws

    def sample(self, model: ModelSpec, xi: float, n: int, seed: Optional[int] = None) -> np.ndarray:
        """n draws of ξX₀."""
        if n < 1:
            raise DomainError(f"sample size must be positive, got {n}")
        xi = model.check_scale(xi)
        rng = np.random.default_rng(model.seed if seed is None else seed)
        return xi * self._base_draws(model, n, rng)

    def merge(self, model: ModelSpec, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Sample-wise ∔̈: + for stable, ∨ for max-stable, ∧ for min-stable."""
        if model.family == MODEL_FAMILIES["stable"]:
            return left + right
        if model.family == MODEL_FAMILIES["max_stable"]:
            return np.maximum(left, right)
        return np.minimum(left, right)

    # Merge law

    def _quantile_check(self, merged: np.ndarray, reference: np.ndarray) -> Dict[str, float]:
        """Largest log-ratio of the central quantiles of |X|; symmetric laws put the median of X at 0."""
        q_merged = np.quantile(np.abs(merged), self.quantile_levels)
        q_reference = np.quantile(np.abs(reference), self.quantile_levels)
        positive = (q_merged > 0) & (q_reference > 0)
        if not positive.any():
            return {"max_log_ratio": 0.0, "passed": True}
        gap = float(np.max(np.abs(np.log(q_merged[positive]) - np.log(q_reference[positive]))))
        return {"max_log_ratio": gap, "passed": gap <= self.quantile_tolerance}

    def verify_merge_law(self, model: ModelSpec, xi: float, nu: float,
                         n: int = DEFAULT_MERGE_SAMPLE_SIZE, level: Optional[float] = None,
                         seed: Optional[int] = None) -> MergeTestResult:
        """Two-sample KS test of ξX₀ ∔̈ νY₀ against (ξ∘ν)X₀; pass iff p ≥ level."""
        level = self.ks_level if level is None else level
        seed = model.seed if seed is None else seed
        xi, nu = model.check_scale(xi), model.check_scale(nu)
        rng_x, rng_y, rng_ref = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3))
        merged = self.merge(model, xi * self._base_draws(model, n, rng_x), nu * self._base_draws(model, n, rng_y))
        scale = model.merge_scale(xi, nu)
        reference = scale * self._base_draws(model, n, rng_ref)

        statistic, p_value = stats.ks_2samp(merged, reference)
        passed = bool(p_value >= level)
        quantile_check = None
        if model.alpha < 1.0:
            quantile_check = self._quantile_check(merged, reference)
            passed = passed and quantile_check["passed"]
        logger.debug("merge law %s α=%g ξ=%g ν=%g: D=%.4g p=%.4g", model.family, model.alpha, xi, nu,
                     statistic, p_value)
        return MergeTestResult(xi=xi, nu=nu, n=n, statistic=float(statistic),
                               p_value=float(min(max(p_value, 0.0), 1.0)), passed=passed, level=level,
                               merged_scale=scale, seed=seed, quantile_check=quantile_check)

    def merge_law_grid(self, model: ModelSpec, xis: Sequence[float], nus: Sequence[float],
                       n: int = DEFAULT_MERGE_SAMPLE_SIZE, level: Optional[float] = None,
                       seeds: Sequence[int] = (0,)) -> pd.DataFrame:
        """Pass rate of the merge law per (ξ, ν) cell over the given seeds."""
        cells: List[Tuple[float, float]] = [(float(x), float(v)) for x in xis for v in nus]

        def run(cell):
            xi, nu = cell
            outcomes = [self.verify_merge_law(model, xi, nu, n, level, seed) for seed in seeds]
            passes = sum(result.passed for result in outcomes)
            return {"xi": xi, "nu": nu, "passes": passes, "repetitions": len(outcomes),
                    "pass_rate": passes / len(outcomes),
                    "min_p_value": min(result.p_value for result in outcomes)}

        rows = map_partitioned(run, cells, self.workers, self.partitions)
        frame = pd.DataFrame(rows, columns=["xi", "nu", "passes", "repetitions", "pass_rate", "min_p_value"])
        logger.info("merge-law grid %s α=%g: lowest pass rate %.2f over %d cells", model.family, model.alpha,
                    frame["pass_rate"].min(), len(frame))
        return frame

    # Entropy calibration

    def _estimate(self, model: ModelSpec, draws: np.ndarray) -> Tuple[str, float, float]:
        """(estimator, scale-ratio estimate, standard error per unit ratio)."""
        n = draws.size
        sigma = model.base_scale
        if model.family == MODEL_FAMILIES["stable"]:
            if model.alpha == 2.0:
                ratio = float(np.var(draws, ddof=1)) / (2.0 * sigma ** 2)
                return "variance", ratio, math.sqrt(2.0 / (n - 1))
            if model.alpha == 1.0:
                ratio = float(np.median(np.abs(draws))) / sigma
                return "median_abs", ratio, math.pi / (2.0 * math.sqrt(n))
            raise ConfigError(f"No scale estimator registered for stable α={model.alpha}")
        values = np.abs(draws)
        if np.any(values == 0):
            return "frechet_mle", 0.0, 0.0
        rate = n / float(np.sum(values ** -model.alpha))
        return "frechet_mle", rate / sigma ** model.alpha, 1.0 / math.sqrt(n)

    def verify_entropy_calibration(self, model: ModelSpec, xi: float, n: int = DEFAULT_MERGE_SAMPLE_SIZE,
                                   seed: Optional[int] = None) -> CalibrationReport:
        """The estimated scale ratio of ξX₀ matches ⟦ξ⟧ = |ξ|^α within CALIBRATION_SIGMAS SE."""
        seed = model.seed if seed is None else seed
        if n < 2:
            raise DomainError("calibration needs at least two draws")
        expected = model.entropy(xi)
        estimator, estimate, unit_se = self._estimate(model, self.sample(model, xi, n, seed))
        if xi == 0:
            estimate, unit_se = 0.0, 0.0
        standard_error = unit_se * expected
        passed = abs(estimate - expected) <= CALIBRATION_SIGMAS * standard_error + 1e-12

        sign_invariance = None
        details: Dict[str, float] = {}
        if model.carrier_domain == "full" and xi != 0:
            _, mirrored, _ = self._estimate(model, self.sample(model, -xi, n, seed))
            details["mirrored_estimate"] = mirrored
            sign_invariance = abs(mirrored - estimate) <= CALIBRATION_SIGMAS * standard_error * math.sqrt(2.0)
            passed = passed and sign_invariance
        logger.info("calibration %s α=%g ξ=%g: %.6g vs %.6g (SE %.3g)", model.family, model.alpha, xi,
                    estimate, expected, standard_error)
        return CalibrationReport(xi=float(xi), n=n, estimator=estimator, estimate=estimate, expected=expected,
                                 standard_error=standard_error, passed=bool(passed), seed=seed,
                                 sign_invariance=sign_invariance, details=details)

    def calibration_convergence(self, model: ModelSpec, xi: float, sizes: Sequence[int] = (1000, 10_000, 100_000),
                                repetitions: int = 20) -> Dict[str, object]:
        """Root-mean-square calibration error per sample size and its log-log slope."""
        rows = []
        for n in sizes:
            errors = [self.verify_entropy_calibration(model, xi, n, seed=model.seed + rep).estimate
                      - model.entropy(xi) for rep in range(repetitions)]
            rows.append({"n": n, "rmse": float(np.sqrt(np.mean(np.square(errors))))})
        table = pd.DataFrame(rows)
        slope = float(np.polyfit(np.log(table["n"]), np.log(table["rmse"]), 1)[0])
        logger.info("calibration error slope %.3f over n=%s", slope, list(sizes))
        return {"slope": slope, "table": table}

    def cauchy_consistency(self, model: ModelSpec, xi: float, n: int = DEFAULT_MERGE_SAMPLE_SIZE,
                           seed: Optional[int] = None) -> Tuple[float, float]:
        """KS statistic and p-value of ξX₀ against the Cauchy law of scale |ξ|σ (α = 1)."""
        if model.family != MODEL_FAMILIES["stable"] or model.alpha != 1.0:
            raise ConfigError("the Cauchy comparison needs the stable family at α = 1")
        draws = self.sample(model, xi, n, seed)
        statistic, p_value = stats.kstest(draws, stats.cauchy(scale=abs(xi) * model.base_scale).cdf)
        return float(statistic), float(p_value)
