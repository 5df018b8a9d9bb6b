"""
Tests for the stable, max-stable and min-stable scale models
"""

import numpy as np
import pytest

from src.controllers.model_simulator import ModelSimulator, frechet_quantile, stable_standard
from src.models.errors import ConfigError, DomainError
from src.models.statistical import MergeTestResult, ModelSpec

SEEDS = list(range(20))


@pytest.fixture
def simulator():
    return ModelSimulator()


class TestModelSpec:
    def test_merge_scale(self):
        model = ModelSpec("stable", alpha=2.0, carrier_domain="full")
        assert model.merge_scale(3.0, 4.0) == pytest.approx(5.0)
        assert model.entropy(-3.0) == pytest.approx(9.0)

    def test_from_dict_defaults(self):
        model = ModelSpec.from_dict({"family": "stable", "alpha": 1.0})
        assert model.carrier_domain == "full"
        assert ModelSpec.from_dict({"family": "max_stable", "alpha": 2.0}).carrier_domain == "nonneg"

    def test_invalid_specs(self):
        with pytest.raises(ConfigError):
            ModelSpec("stable", alpha=2.5)
        with pytest.raises(ConfigError):
            ModelSpec("max_stable", alpha=1.0, carrier_domain="full")
        with pytest.raises(ConfigError):
            ModelSpec("gumbel", alpha=1.0)

    def test_negative_scale_outside_nonneg(self, simulator):
        with pytest.raises(DomainError):
            simulator.sample(ModelSpec("max_stable", alpha=1.0), -1.0, 10)

    def test_p_value_range(self):
        with pytest.raises(ConfigError):
            MergeTestResult(xi=1.0, nu=1.0, n=10, statistic=0.1, p_value=1.5, passed=True, level=0.01,
                            merged_scale=1.0, seed=0)


class TestSampling:
    def test_cauchy_draws(self):
        draws = stable_standard(1.0, 20000, np.random.default_rng(3))
        assert np.median(np.abs(draws)) == pytest.approx(1.0, abs=0.05)

    def test_gaussian_draws(self):
        draws = stable_standard(2.0, 20000, np.random.default_rng(3))
        assert np.var(draws) == pytest.approx(2.0, rel=0.05)

    def test_frechet_quantile(self):
        assert frechet_quantile(np.exp(-1.0), 2.0, scale=3.0) == pytest.approx(3.0)

    def test_seeded_samples_repeat(self, simulator):
        model = ModelSpec("stable", alpha=1.5, carrier_domain="full", seed=8)
        assert np.array_equal(simulator.sample(model, 2.0, 50), simulator.sample(model, 2.0, 50))

    def test_min_stable_is_nonpositive(self, simulator):
        draws = simulator.sample(ModelSpec("min_stable", alpha=1.0), 2.0, 100)
        assert np.all(draws <= 0)


class TestMergeLaw:
    @pytest.mark.parametrize("family,alpha,domain", [
        ("stable", 2.0, "full"),
        ("stable", 1.5, "full"),
        ("stable", 0.7, "full"),
        ("max_stable", 1.0, "nonneg"),
        ("min_stable", 2.0, "nonneg"),
    ])
    def test_pass_rate(self, simulator, family, alpha, domain):
        model = ModelSpec(family, alpha=alpha, carrier_domain=domain)
        grid = simulator.merge_law_grid(model, [1.0, 3.0], [2.0], n=2000, seeds=SEEDS)
        assert len(grid) == 2
        assert grid["pass_rate"].min() >= 0.9

    def test_merge_operators(self, simulator):
        model = ModelSpec("max_stable", alpha=1.0)
        left = simulator.sample(model, 1.0, 4000, seed=1)
        right = simulator.sample(model, 1.0, 4000, seed=2)
        added = ModelSpec("stable", alpha=1.0, carrier_domain="full")
        assert np.median(simulator.merge(added, left, right)) > np.median(simulator.merge(model, left, right))
        result = simulator.verify_merge_law(model, 1.0, 1.0, n=4000, seed=5)
        assert result.merged_scale == pytest.approx(2.0)


class TestCalibration:
    def test_gaussian_uses_variance(self, simulator):
        report = simulator.verify_entropy_calibration(ModelSpec("stable", alpha=2.0, carrier_domain="full"), 1.5)
        assert report.estimator == "variance"
        assert report.expected == pytest.approx(2.25)
        assert report.passed

    def test_cauchy_uses_median(self, simulator):
        report = simulator.verify_entropy_calibration(ModelSpec("stable", alpha=1.0, carrier_domain="full"), 2.0)
        assert report.estimator == "median_abs"
        assert report.sign_invariance is True
        assert report.passed

    def test_frechet_uses_mle(self, simulator):
        report = simulator.verify_entropy_calibration(ModelSpec("max_stable", alpha=2.0, base_scale=0.5), 3.0)
        assert report.estimator == "frechet_mle"
        assert report.expected == pytest.approx(9.0)
        assert report.passed

    def test_zero_scale(self, simulator):
        report = simulator.verify_entropy_calibration(ModelSpec("max_stable", alpha=1.0), 0.0)
        assert report.estimate == 0.0
        assert report.passed

    def test_no_estimator_for_other_stable_index(self, simulator):
        with pytest.raises(ConfigError):
            simulator.verify_entropy_calibration(ModelSpec("stable", alpha=1.5, carrier_domain="full"), 1.0)

    def test_cauchy_consistency(self, simulator):
        model = ModelSpec("stable", alpha=1.0, carrier_domain="full", base_scale=2.0)
        _, p_value = simulator.cauchy_consistency(model, 1.5, n=5000)
        assert p_value > 1e-4
        with pytest.raises(ConfigError):
            simulator.cauchy_consistency(ModelSpec("stable", alpha=2.0, carrier_domain="full"), 1.0)

    def test_calibration_error_shrinks_like_root_n(self, simulator):
        model = ModelSpec("stable", alpha=2.0, carrier_domain="full")
        result = simulator.calibration_convergence(model, 1.5, sizes=(500, 5000, 50_000), repetitions=10)
        assert len(result["table"]) == 3
        assert -0.8 < result["slope"] < -0.2
        assert result["table"]["rmse"].is_monotonic_decreasing
