"""
Tests for the instance catalog and the instance registry
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from src.constants import SIGN_NEGATIVE
from src.controllers.algebra_core import AxiomChecker
from src.controllers.comparison import ComparisonProcessor
from src.controllers.information_instances import (
    data_pair, dependable_entropy, dependable_update, kl_divergence, kl_structure, model_pair,
    poisson_bivariate, poisson_canonical_coefficient, poisson_profile, poisson_shannon_sign_scan,
    renyi_entropy, shannon_entropy, sharma_mittal, tsallis,
)
from src.controllers.instance_registry import InstanceRegistry
from src.controllers.instances import (
    SATURATED, gaussian_scale, linear_model, product_space, r_squared, tichonov_coefficient, tropical,
    variogram_structure,
)
from src.models.distributions import DependablePair
from src.models.errors import ConfigError, DomainError, SupportMismatch


@pytest.fixture
def comparison():
    return ComparisonProcessor(sample_size=200, seed=17)


class TestTsallis:
    @pytest.mark.parametrize("q,k", [(2.0, 1.0), (0.5, 1.0), (3.0, 2.0)])
    def test_product_interaction(self, q, k):
        S = tsallis(q, k)
        p, r = np.array([0.2, 0.8]), np.array([0.5, 0.3, 0.2])
        e_p, e_r = S.entropy(p), S.entropy(r)
        joined = S.entropy(S.dotplus(p, r))
        assert joined == pytest.approx(e_p + e_r - (q - 1.0) / k * e_p * e_r, abs=1e-10)

    def test_sharma_mittal_reduces_to_tsallis(self):
        p = np.array([0.1, 0.6, 0.3])
        assert sharma_mittal(2.5, 1.0).entropy(p) == pytest.approx(tsallis(2.5, 1.0).entropy(p))

    def test_sharma_mittal_interaction(self):
        q, k = 2.0, 3.0
        S = sharma_mittal(q, k)
        p, r = np.array([0.4, 0.6]), np.array([0.7, 0.3])
        e_p, e_r = S.entropy(p), S.entropy(r)
        assert S.entropy(S.dotplus(p, r)) == pytest.approx(e_p + e_r - (q - 1.0) / k * e_p * e_r, abs=1e-10)

    def test_profile_follows_interaction(self):
        assert tsallis(2.0).profile.sign == SIGN_NEGATIVE
        assert tsallis(0.5).profile.sign == 1

    def test_shannon_limit_rejected(self):
        with pytest.raises(ConfigError):
            tsallis(1.0)

    def test_renyi_orders(self):
        p = [0.5, 0.25, 0.25]
        assert renyi_entropy(p, 1.0) == pytest.approx(shannon_entropy(p))
        assert renyi_entropy(p, float("inf")) == pytest.approx(np.log(2.0))
        assert renyi_entropy(p, 2.0) == pytest.approx(-np.log(0.375))


class TestDependable:
    def test_model_has_zero_entropy(self):
        assert dependable_entropy(model_pair([0.5, 0.5])) == 0.0

    def test_data_entropy_is_shannon(self):
        p = [0.2, 0.3, 0.5]
        assert dependable_entropy(data_pair(p)) == pytest.approx(shannon_entropy(p))

    def test_update_gives_cross_entropy(self):
        p, p_tilde = np.array([0.25, 0.25, 0.5]), np.array([0.5, 0.25, 0.25])
        updated = dependable_update(model_pair(p), data_pair(p_tilde))
        assert dependable_entropy(updated) == pytest.approx(float(-np.sum(p_tilde * np.log(p))))

    def test_support_mismatch(self):
        with pytest.raises(SupportMismatch):
            dependable_update(model_pair([1.0, 0.0]), data_pair([0.5, 0.5]))

    def test_invalid_pair(self):
        with pytest.raises(DomainError):
            DependablePair(p=np.array([0.5, 0.6]), q=np.ones(2))


class TestKL:
    def test_scalar_is_kl_divergence(self, comparison):
        S = kl_structure(3)
        p, p_tilde = [0.2, 0.5, 0.3], [0.4, 0.4, 0.2]
        value = comparison.scalar_a(S, model_pair(p), data_pair(p_tilde))
        assert value == pytest.approx(kl_divergence(p_tilde, p), abs=1e-12)

    def test_identical_laws_are_orthogonal(self, comparison):
        S = kl_structure(2)
        p = [0.3, 0.7]
        assert comparison.scalar_a(S, model_pair(p), data_pair(p)) == pytest.approx(0.0, abs=1e-12)

    def test_decode(self):
        S = kl_structure(2)
        assert dependable_entropy(S.decode({"model": [0.5, 0.5]})) == 0.0
        with pytest.raises(DomainError):
            S.decode([0.5, 0.5])


class TestPoisson:
    def test_canonical_coefficient(self):
        assert poisson_canonical_coefficient(1.0, 1.0) == pytest.approx(2.0)
        with pytest.raises(ConfigError):
            poisson_canonical_coefficient(0.0, 1.0)

    def test_profile(self):
        profile = poisson_profile(0.5, 1.0)
        assert profile.xi.hi == pytest.approx(3.0)
        assert profile.a_sigma == pytest.approx(poisson_canonical_coefficient(0.5, 1.0))

    def test_dotplus_subtracts_shared_part(self):
        S = poisson_bivariate(0.5, 1.0)
        assert S.dotplus(2.0, 3.0) == pytest.approx(4.0)
        assert S.dotplus(2.0, 0.5) == pytest.approx(2.0)

    def test_bad_parameters(self):
        with pytest.raises(ConfigError):
            poisson_bivariate(1.5, 0.5)

    def test_independent_scan_is_additive(self):
        frame = poisson_shannon_sign_scan([0.0], [0.5], [1.0, 2.0])
        assert len(frame) == 4
        assert (frame["sign"] == 0).all()
        assert frame["tail_mass"].abs().max() < 1e-9


class TestLinearModel:
    X = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, -1.0]]
    y = [1.0, 2.0, 2.5, 0.5]

    def test_residual_entropy(self):
        S = linear_model(self.X, self.y)
        y = np.asarray(self.y)
        assert S.entropy(frozenset()) == pytest.approx(float(y @ y))
        assert S.entropy(SATURATED) == 0.0
        assert S.dotplus(frozenset({0}), SATURATED) == frozenset({0})

    def test_r_squared(self):
        S = linear_model(self.X, self.y)
        X, y = np.asarray(self.X), np.asarray(self.y)
        beta, *_ = np.linalg.lstsq(X, y, rcond=None)
        residual = y - X @ beta
        expected = 1.0 - float(residual @ residual) / float(y @ y)
        assert r_squared(S, frozenset({0, 1}), frozenset()) == pytest.approx(expected)

    def test_r_squared_needs_submodel(self):
        S = linear_model(self.X, self.y)
        with pytest.raises(DomainError):
            r_squared(S, frozenset({0}), frozenset({1}))

    def test_tichonov_coefficient(self):
        assert tichonov_coefficient(1.0) == pytest.approx(-0.5)
        with pytest.raises(DomainError):
            tichonov_coefficient(-1.0)


class TestVariogram:
    def test_canonical_rho_is_variogram(self, comparison):
        S = variogram_structure("power", d=1, scale=2.0, exponent=1.5)
        x, y = np.array([0.3]), np.array([-1.2])
        assert comparison.canonical_rho(S, None, x, y) == pytest.approx(2.0 * 1.5 ** 1.5)

    def test_nugget_rejected(self):
        with pytest.raises(ConfigError):
            variogram_structure("spherical", nugget=0.1)


class TestTropical:
    def test_sup_mode(self):
        S = tropical("sup", grid_size=2)
        f, g = np.array([1.0, 3.0]), np.array([2.0, 0.5])
        assert S.entropy(S.dotplus(f, g)) == pytest.approx(3.5)
        assert S.entropy(S.circ(f, g)) == pytest.approx(5.0)
        assert (S.profile.m_G, S.profile.M_G) == (0.5, 1.0)

    def test_inf_mode(self):
        S = tropical("inf", grid_size=2)
        f, g = np.array([1.0, 3.0]), np.array([2.0, 0.5])
        assert S.entropy(S.dotplus(f, g)) == pytest.approx(3.0)
        assert S.entropy(S.dotplus(f, g)) >= S.entropy(f) + S.entropy(g)

    def test_unknown_mode(self):
        with pytest.raises(ConfigError):
            tropical("median")

    def test_registry_self_check(self):
        registry = InstanceRegistry()
        S = registry.create("tropical")
        assert S.name == "tropical_sup"
        assert registry.last_self_check.passed


class TestProductSpace:
    def test_cylinder_entropy(self):
        S = product_space()
        assert S.entropy((0.5, 0.25)) == pytest.approx(math.log(8.0))
        assert S.entropy(S.circ((0.5,), (0.25,))) == pytest.approx(math.log(8.0))

    def test_null_factor(self):
        assert math.isinf(product_space().entropy((0.5, 0.0)))

    def test_hemi_group(self):
        assert AxiomChecker(200, 1).check_hemi_group(product_space()).passed


class TestRegistry:
    def test_create_with_defaults(self):
        registry = InstanceRegistry()
        S = registry.create("sets", {"weights": [1.0, 2.0, 3.0]})
        assert S.name == "finite_measure_sets"
        assert registry.last_self_check.passed

    def test_unknown_instance(self):
        with pytest.raises(ConfigError):
            InstanceRegistry().create("hilbert")

    def test_unknown_parameter(self):
        with pytest.raises(ConfigError):
            InstanceRegistry().create("euclidean", {"dimension": 3})

    def test_from_json_needs_instance(self):
        with pytest.raises(ConfigError):
            InstanceRegistry().from_json({"d": 2})

    def test_failing_self_check(self):
        registry = InstanceRegistry()
        registry.register("broken", lambda tolerance=None: replace(gaussian_scale(), circ_fn=lambda x, y: x + y))
        with pytest.raises(ConfigError):
            registry.create("broken")
        assert not registry.last_self_check.passed

    def test_finite_tables(self):
        data = {
            "elements": ["0", "a"],
            "entropy": [0.0, 1.0],
            "dotplus": [[0, 1], [1, 1]],
            "zero": [0],
            "deterministic": [0],
        }
        S = InstanceRegistry().create("finite", data)
        assert S.entropy(S.decode("a")) == pytest.approx(1.0)
