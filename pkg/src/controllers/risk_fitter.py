"""
Model adaptation by minimizing hemi-metrics ρ_a
"""

import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize
from scipy.special import xlogy

from src.constants import (
    BOUNDARY_TOLERANCE, DEFAULT_GRID_RESOLUTION, DEFAULT_PARTITIONS, DEFAULT_REFINE_ITERATIONS,
    DEFAULT_WORKERS,
)
from src.controllers.comparison import ComparisonProcessor
from src.controllers.information_instances import dependable_entropy, dependable_update
from src.controllers.instances import tichonov_coefficient, tichonov_model
from src.models.distributions import DependablePair
from src.models.errors import (
    ConfigError, DesignNotOrthogonal, DomainError, NonFiniteObjective, OutOfXi, SupportMismatch,
)
from src.models.fit_problem import FitProblem, FitResult, box_grid
from src.utils.sampling import map_partitioned

logger = logging.getLogger(__name__)

Objective = Callable[[Any], float]

LIKELIHOOD_AGREEMENT = 1e-6
TICHONOV_AGREEMENT = 1e-8


def bernoulli_family(theta) -> np.ndarray:
    """θ ↦ (θ, 1 − θ)."""
    t = float(np.atleast_1d(theta)[0])
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"Bernoulli parameter {t} outside [0, 1]")
    return np.array([t, 1.0 - t])


def categorical_family(theta) -> np.ndarray:
    """(θ₁, …, θ_{k−1}) ↦ (θ₁, …, θ_{k−1}, 1 − Σθ)."""
    head = np.atleast_1d(np.asarray(theta, dtype=float))
    last = 1.0 - float(head.sum())
    if np.any(head < 0.0) or last < -1e-12:
        raise DomainError(f"{head.tolist()} is not a point of the probability simplex")
    return np.append(head, max(last, 0.0))


class RiskFitter:
    """Processor for ρ_a minimization, maximum likelihood and Tichonov fits."""

    def __init__(self, comparison: Optional[ComparisonProcessor] = None,
                 workers: int = DEFAULT_WORKERS, partitions: int = DEFAULT_PARTITIONS):
        self.comparison = comparison or ComparisonProcessor()
        self.workers = workers
        self.partitions = partitions

    # Search

    def _best_index(self, values: Sequence[float], tolerance: float) -> int:
        """First index within tolerance of the minimum, i.e. the lexicographically smallest θ."""
        array = np.asarray(values, dtype=float)
        if np.any(np.isnan(array)):
            raise NonFiniteObjective(f"objective is NaN at grid point {int(np.flatnonzero(np.isnan(array))[0])}")
        if not np.any(np.isfinite(array)):
            raise NonFiniteObjective("objective is infinite on the whole grid")
        best = float(np.min(array))
        slack = tolerance * max(1.0, abs(best))
        return int(np.flatnonzero(array <= best + slack)[0])

    def _on_boundary(self, theta: np.ndarray, bounds: List[Tuple[float, float]]) -> bool:
        return any(min(t - lo, hi - t) <= BOUNDARY_TOLERANCE * (hi - lo) for t, (lo, hi) in zip(theta, bounds))

    def search(self, objective: Objective, bounds: List[Tuple[float, float]],
               grid_resolution: int = DEFAULT_GRID_RESOLUTION,
               refine_iterations: int = DEFAULT_REFINE_ITERATIONS,
               tolerance: float = 1e-10, name: str = "fit") -> FitResult:
        """Coarse grid with lexicographic tie-break, then bounded Nelder–Mead from the best point."""
        grid = box_grid(bounds, grid_resolution)
        values = map_partitioned(objective, grid, self.workers, self.partitions)
        index = self._best_index(values, tolerance)
        grid_theta, grid_value = grid[index], float(values[index])
        theta, value, evaluations = grid_theta, grid_value, len(grid)
        trajectory: List[Dict[str, Any]] = [{"theta": grid_theta.tolist(), "objective": grid_value}]

        if refine_iterations > 0:
            def record(xk):
                trajectory.append({"theta": np.asarray(xk).tolist(), "objective": objective(xk)})

            refined = optimize.minimize(
                objective, grid_theta, method="Nelder-Mead", bounds=bounds, callback=record,
                options={"maxiter": refine_iterations, "xatol": tolerance, "fatol": tolerance},
            )
            evaluations += int(refined.nfev)
            if math.isfinite(refined.fun) and refined.fun <= grid_value:
                theta, value = np.asarray(refined.x), float(refined.fun)
            logger.debug("%s: Nelder-Mead stopped after %d evaluations: %s", name, refined.nfev, refined.message)

        boundary = self._on_boundary(theta, bounds)
        if boundary:
            logger.info("%s: boundary solution θ*=%s", name, theta)
        return FitResult(theta=theta, objective=value, boundary=boundary, evaluations=evaluations,
                         method="grid+nelder-mead", grid_theta=grid_theta, grid_objective=grid_value,
                         trajectory=trajectory)

    # Generic ρ_a minimization

    def objective(self, problem: FitProblem) -> Objective:
        """θ ↦ ρ_a(η(θ), ξ); elements outside the carrier evaluate to +∞."""
        S = problem.structure
        profile = self.comparison.get_profile(S)
        if problem.a is not None and not profile.xi.contains(problem.a, S.tolerance.slack(problem.a)):
            if not problem.exploration:
                raise OutOfXi(f"a={problem.a} lies outside Ξ={profile.xi.to_list()} for {S.name}")
            logger.warning("exploration mode: fitting with a=%s outside Ξ for %s", problem.a, S.name)

        def evaluate(theta):
            try:
                model = problem.family(theta)
                if problem.a is None:
                    return float(self.comparison.canonical_rho(S, profile, model, problem.data))
                return float(self.comparison.rho(S, problem.a, model, problem.data, profile, exploration=True))
            except (DomainError, SupportMismatch):
                return math.inf

        return evaluate

    def fit_min_rho(self, problem: FitProblem) -> FitResult:
        """Minimizer of ρ_a(η(θ), ξ): exhaustive over candidates, grid plus refinement over a box."""
        evaluate = self.objective(problem)
        if problem.candidates is None:
            result = self.search(evaluate, problem.bounds, problem.grid_resolution, problem.refine_iterations,
                                 problem.tolerance, problem.name)
        else:
            candidates = list(problem.candidates)
            values = map_partitioned(evaluate, candidates, self.workers, self.partitions)
            index = self._best_index(values, problem.tolerance)
            # trajectory θ is the candidate index
            result = FitResult(theta=candidates[index], objective=float(values[index]), boundary=False,
                               evaluations=len(values), method="exhaustive", grid_theta=candidates[index],
                               grid_objective=float(values[index]),
                               trajectory=[{"theta": [i], "objective": float(v)} for i, v in enumerate(values)],
                               details={"candidate_index": index})

        if not problem.exploration:
            S = problem.structure
            finite = [entry["objective"] for entry in result.trajectory if math.isfinite(entry["objective"])]
            result.nonnegative = all(v >= -S.tolerance.slack(v) for v in finite)
            if not result.nonnegative:
                logger.warning("%s: negative objective along the trajectory although a ∈ Ξ", problem.name)
        logger.info("%s: θ*=%s ρ*=%.6g", problem.name, result.theta, result.objective)
        return result

    # Maximum likelihood

    def mle_fit(self, p_tilde: Sequence[float], family: Callable[[np.ndarray], Sequence[float]],
                bounds: List[Tuple[float, float]], reliability_scale: float = 1.0,
                grid_resolution: int = DEFAULT_GRID_RESOLUTION,
                refine_iterations: int = DEFAULT_REFINE_ITERATIONS, tolerance: float = 1e-12) -> FitResult:
        """Minimize ⟦(p^θ, 0) ∔ (p̃, c·1)⟧ = −Σ p̃_x log p^θ_x and compare with the likelihood argmax.

        The reliability scale c leaves the objective unchanged.
        """
        p_tilde = np.asarray(p_tilde, dtype=float)
        if reliability_scale <= 0:
            raise ConfigError("reliability_scale must be positive")
        data = DependablePair(p=p_tilde, q=np.full_like(p_tilde, reliability_scale))

        def cross_entropy(theta):
            try:
                model = DependablePair(p=np.asarray(family(theta), dtype=float), q=np.zeros_like(p_tilde))
                return dependable_entropy(dependable_update(model, data))
            except (DomainError, SupportMismatch):
                return math.inf

        def negative_log_likelihood(theta):
            try:
                p = np.asarray(family(theta), dtype=float)
            except DomainError:
                return math.inf
            if p.shape != p_tilde.shape or np.any(p < 0) or np.any((p == 0) & (p_tilde > 0)):
                return math.inf
            return float(-np.sum(xlogy(p_tilde, p)))

        try:
            result = self.search(cross_entropy, bounds, grid_resolution, refine_iterations, tolerance,
                                 "mle_cross_entropy")
        except NonFiniteObjective as e:
            raise SupportMismatch(f"every model in the family misses the data support: {e}") from e
        likelihood = self.search(negative_log_likelihood, bounds, grid_resolution, refine_iterations,
                                 tolerance, "likelihood")
        gap = float(np.max(np.abs(np.atleast_1d(result.theta) - np.atleast_1d(likelihood.theta))))
        result.details.update({
            "likelihood_theta": np.atleast_1d(likelihood.theta).tolist(),
            "max_theta_difference": gap,
            "agrees_with_likelihood": gap <= LIKELIHOOD_AGREEMENT,
            "reliability_scale": reliability_scale,
        })
        if gap > LIKELIHOOD_AGREEMENT:
            logger.warning("cross-entropy and likelihood argmax differ by %.3g", gap)
        return result

    # Tichonov regularization

    def tichonov_fit(self, X: Sequence[Sequence[float]], y: Sequence[float], lam: float) -> Dict[str, Any]:
        """Ridge estimate Xᵀy/(1+λ) against the minimizer of ρ_a(y, Xβ) with a = −1/(1+λ)."""
        X, y = np.asarray(X, dtype=float), np.asarray(y, dtype=float)
        if lam <= 0:
            raise DomainError(f"λ must be positive, got {lam}")
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ConfigError("X must be n×p and y of length n")
        if not np.allclose(X.T @ X, np.eye(X.shape[1]), atol=1e-8):
            raise DesignNotOrthogonal("XᵀX must be the identity")
        a = tichonov_coefficient(lam)
        beta_ridge = X.T @ y / (1.0 + lam)

        def rho(beta):
            fitted = X @ beta
            joined = y + fitted
            return a * (joined @ joined) + (1.0 - a) * (y @ y + fitted @ fitted)

        def gradient(beta):
            return 2.0 * a * X.T @ (y + X @ beta) + 2.0 * (1.0 - a) * X.T @ (X @ beta)

        result = optimize.minimize(rho, np.zeros(X.shape[1]), jac=gradient, method="BFGS",
                                   options={"gtol": 1e-12})
        beta_rho = np.asarray(result.x)
        difference = float(np.max(np.abs(beta_rho - beta_ridge)))
        objective = self.comparison.rho(tichonov_model(X, y), a, y, X @ beta_rho)
        logger.info("Tichonov λ=%g: a=%.6g, max |β_ρ − β_ridge| = %.3g", lam, a, difference)
        return {
            "lambda": lam,
            "a": a,
            "beta_ridge": beta_ridge,
            "beta_rho": beta_rho,
            "max_abs_difference": difference,
            "agrees": difference <= TICHONOV_AGREEMENT,
            "objective": objective,
        }
