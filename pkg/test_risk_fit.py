"""
Tests for ρ_a minimization, maximum likelihood and Tichonov fits
"""

import math

import numpy as np
import pytest

from src.controllers.comparison import ComparisonProcessor
from src.controllers.instances import euclidean, finite_measure_sets
from src.controllers.risk_fitter import RiskFitter, bernoulli_family, categorical_family
from src.models.errors import ConfigError, DesignNotOrthogonal, DomainError, OutOfXi
from src.models.fit_problem import FitProblem, box_grid

ROOT_HALF = 1.0 / math.sqrt(2.0)
DESIGN = [[ROOT_HALF, 0.0], [ROOT_HALF, 0.0], [0.0, ROOT_HALF], [0.0, ROOT_HALF]]
RESPONSE = [1.0, 2.0, 3.0, 4.0]


@pytest.fixture
def fitter():
    return RiskFitter(ComparisonProcessor(sample_size=200, seed=3))


def _identity(theta):
    return np.asarray(theta, dtype=float)


class TestFamilies:
    def test_bernoulli(self):
        assert bernoulli_family([0.25]).tolist() == [0.25, 0.75]
        with pytest.raises(DomainError):
            bernoulli_family([1.5])

    def test_categorical(self):
        assert categorical_family([0.2, 0.3]) == pytest.approx([0.2, 0.3, 0.5])
        with pytest.raises(DomainError):
            categorical_family([0.7, 0.6])

    def test_box_grid_order(self):
        grid = box_grid([(0.0, 1.0), (0.0, 2.0)], 3)
        assert len(grid) == 9
        assert grid[0].tolist() == [0.0, 0.0]
        assert grid[1].tolist() == [0.0, 1.0]


class TestMinRho:
    def test_box_recovers_data(self, fitter):
        data = np.array([0.3, -0.2])
        problem = FitProblem(structure=euclidean(), data=data, family=_identity, bounds=[(-1.0, 1.0)] * 2)
        result = fitter.fit_min_rho(problem)
        assert np.asarray(result.theta) == pytest.approx(data, abs=1e-6)
        assert result.objective == pytest.approx(0.0, abs=1e-10)
        assert result.nonnegative is True
        assert not result.boundary

    def test_candidates_are_exhaustive(self, fitter):
        S = finite_measure_sets([1.0, 2.0, 0.5, 1.5, 3.0])
        target = frozenset({0, 2})
        problem = FitProblem(structure=S, data=target, family=lambda A: A, candidates=S.elements())
        result = fitter.fit_min_rho(problem)
        assert result.theta == target
        assert result.method == "exhaustive"
        assert result.evaluations == 32
        assert len(result.trajectory_frame()) == 32

    def test_a_outside_xi(self, fitter):
        problem = FitProblem(structure=euclidean(), data=np.zeros(2), family=_identity,
                             bounds=[(-1.0, 1.0)] * 2, a=5.0)
        with pytest.raises(OutOfXi):
            fitter.fit_min_rho(problem)

    def test_exploration(self, fitter):
        problem = FitProblem(structure=euclidean(), data=np.zeros(2), family=_identity,
                             bounds=[(-1.0, 1.0)] * 2, a=5.0, exploration=True, refine_iterations=0)
        result = fitter.fit_min_rho(problem)
        assert result.nonnegative is None

    def test_problem_validation(self):
        with pytest.raises(ConfigError):
            FitProblem(structure=euclidean(), data=np.zeros(2), family=_identity)
        with pytest.raises(ConfigError):
            FitProblem(structure=euclidean(), data=np.zeros(2), family=_identity, bounds=[(1.0, 1.0)])


class TestLikelihood:
    def test_bernoulli(self, fitter):
        result = fitter.mle_fit([0.3, 0.7], bernoulli_family, [(0.0, 1.0)])
        assert float(np.atleast_1d(result.theta)[0]) == pytest.approx(0.3, abs=1e-6)
        assert result.details["agrees_with_likelihood"]

    def test_categorical(self, fitter):
        result = fitter.mle_fit([0.2, 0.3, 0.5], categorical_family, [(0.0, 1.0)] * 2)
        assert np.asarray(result.theta) == pytest.approx([0.2, 0.3], abs=1e-6)
        assert result.details["agrees_with_likelihood"]

    def test_reliability_scale_is_irrelevant(self, fitter):
        first = fitter.mle_fit([0.3, 0.7], bernoulli_family, [(0.0, 1.0)], refine_iterations=0)
        second = fitter.mle_fit([0.3, 0.7], bernoulli_family, [(0.0, 1.0)], reliability_scale=3.0,
                                refine_iterations=0)
        assert np.asarray(first.theta) == pytest.approx(np.asarray(second.theta))
        assert first.objective == pytest.approx(second.objective)


class TestTichonov:
    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_ridge_agreement(self, fitter, lam):
        result = fitter.tichonov_fit(DESIGN, RESPONSE, lam)
        expected = np.asarray(DESIGN).T @ np.asarray(RESPONSE) / (1.0 + lam)
        assert result["a"] == pytest.approx(-1.0 / (1.0 + lam))
        assert result["beta_ridge"] == pytest.approx(expected)
        assert result["beta_rho"] == pytest.approx(expected, abs=1e-6)

    def test_design_must_be_orthonormal(self, fitter):
        with pytest.raises(DesignNotOrthogonal):
            fitter.tichonov_fit([[1.0, 1.0], [0.0, 1.0]], [1.0, 2.0], 1.0)

    def test_positive_penalty(self, fitter):
        with pytest.raises(DomainError):
            fitter.tichonov_fit(DESIGN, RESPONSE, 0.0)
