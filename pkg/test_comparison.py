"""
Tests for hemi-metrics, hemi-scalar products and the comparison suites
"""

import math
import warnings

import numpy as np
import pytest

from src.constants import CORRELATION_CLASSES, SIGN_NEGATIVE, SIGN_POSITIVE
from src.controllers.comparison import ComparisonProcessor
from src.controllers.information_instances import mutual_information
from src.controllers.instances import euclidean, finite_measure_sets, lp_space
from src.models.errors import CanonicalUndefined, NotApplicable, OutOfXi
from src.models.profile import ComparisonProfile, XiInterval

WEIGHTS = [1.0, 2.0, 0.5, 1.5, 3.0]
JOINT = [[0.3, 0.1], [0.2, 0.4]]


@pytest.fixture
def comparison():
    return ComparisonProcessor(sample_size=200, seed=5)


def _vectors(seed, n, d=2):
    rng = np.random.default_rng(seed)
    return list(rng.standard_normal((n, d)))


class TestProfile:
    def test_xi_interval(self):
        xi = XiInterval.from_bounds(0.0, 2.0)
        assert xi.to_list() == [-1.0, 1.0, "closed", "closed"]
        assert xi.contains(0.5)
        assert not xi.contains(1.5)

    def test_unbounded_end(self):
        xi = XiInterval.from_bounds(0.5, 1.0)
        assert math.isinf(xi.lo) and xi.lo < 0
        assert xi.hi == pytest.approx(2.0)
        assert not xi.bounded

    def test_profile_dict(self):
        profile = euclidean().profile
        data = profile.to_dict()
        assert data["a_sigma"] == pytest.approx(-1.0)
        restored = ComparisonProfile.from_dict(data)
        assert restored.a_sigma == pytest.approx(profile.a_sigma)

    def test_profile_needs_bounds(self):
        with pytest.raises(KeyError):
            ComparisonProfile.from_dict({"M_G": 1.0, "sign": 1})

    def test_euclidean_profile(self, comparison):
        profile = comparison.profile(euclidean())
        assert (profile.m_G, profile.M_G, profile.sign) == (0.0, 2.0, SIGN_POSITIVE)
        assert profile.a_sigma == pytest.approx(-1.0)

    def test_sets_profile(self, comparison):
        profile = comparison.profile(finite_measure_sets(WEIGHTS))
        assert (profile.m_G, profile.M_G, profile.sign) == (0.5, 1.0, SIGN_NEGATIVE)
        assert profile.a_sigma == pytest.approx(2.0)

    def test_sampled_lp_upper_bound(self):
        comparison = ComparisonProcessor(sample_size=2000, seed=9)
        for p in (1.5, 3.0, 4.0):
            m_hat, M_hat = comparison.estimate_bounds(lp_space(2, p), "sampled")
            assert M_hat == pytest.approx(2.0 ** (p - 1.0), rel=0.02)
            assert 0.0 <= m_hat <= 1.0

    def test_sampled_profile_keeps_seed(self, comparison):
        profile = comparison.profile(finite_measure_sets(WEIGHTS), "sampled")
        assert profile.provenance == "estimated"
        assert profile.sign == SIGN_NEGATIVE
        assert profile.m_G == pytest.approx(0.5)
        assert profile.M_G == pytest.approx(1.0)


class TestEuclidean:
    def test_canonical_metric_and_scalar(self, comparison):
        S = euclidean()
        vectors = _vectors(1, 40)
        for x, y in zip(vectors[:20], vectors[20:]):
            assert comparison.canonical_rho(S, None, x, y) == pytest.approx(float((x - y) @ (x - y)), abs=1e-10)
            assert comparison.canonical_scalar(S, None, x, y, "half") == pytest.approx(float(x @ y), abs=1e-10)
            assert comparison.canonical_rho_alternative(S, None, x, y) == pytest.approx(
                comparison.canonical_rho(S, None, x, y), abs=1e-10)

    def test_rho_outside_xi(self, comparison):
        S = euclidean()
        x, y = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        with pytest.raises(OutOfXi):
            comparison.rho(S, 2.0, x, y)
        assert comparison.rho(S, 2.0, x, y, exploration=True) == pytest.approx(2.0)

    def test_rho_infty_needs_unbounded_xi(self, comparison):
        with pytest.raises(NotApplicable):
            comparison.rho_infty(euclidean(), np.ones(2), np.ones(2))

    def test_correlation(self, comparison):
        S = euclidean()
        x = np.array([1.0, 0.0])
        assert comparison.classify_correlation(S, x, np.array([0.0, 2.0])) == CORRELATION_CLASSES["orthogonal"]
        assert comparison.classify_correlation(S, x, np.array([1.0, 1.0])) == CORRELATION_CLASSES["positive"]
        assert comparison.classify_correlation(S, x, np.array([-1.0, 1.0])) == CORRELATION_CLASSES["negative"]
        assert comparison.pearson(S, x, np.array([1.0, 1.0])) == pytest.approx(1.0 / math.sqrt(2.0))

    def test_uncorrelated_equivalences(self, comparison):
        flags = comparison.uncorrelated_equivalences(euclidean(), 0.5, np.array([1.0, 0.0]), np.array([0.0, 3.0]))
        assert all(flags.values())

    def test_recover_scalar(self, comparison):
        S = euclidean()
        x, y = np.array([1.0, 2.0]), np.array([-0.5, 4.0])
        recovered = comparison.recover_scalar_from_metric(S, None, x, y, np.zeros(2))
        assert recovered == pytest.approx(comparison.canonical_scalar(S, None, x, y))

    def test_scalar_multi(self, comparison):
        S = euclidean()
        x, y, z = np.array([1.0, 0.0]), np.array([1.0, 1.0]), np.array([0.0, 2.0])
        expected = 2.0 * (x @ y + x @ z + y @ z)
        assert comparison.scalar_multi(S, [x, y, z]) == pytest.approx(expected)

    def test_gateaux_derivative(self, comparison):
        from src.controllers.instances import gateaux_derivative

        S = lp_space(3, 3.0)
        x, y = np.array([0.4, -1.2, 0.7]), np.array([1.1, 0.3, -0.8])
        h = 1e-5
        difference = (comparison.scalar_a(S, h * x, y) - comparison.scalar_a(S, -h * x, y)) / (2.0 * h)
        assert difference == pytest.approx(gateaux_derivative(x, y, 3.0), abs=1e-6)

    def test_cauchy_schwarz(self, comparison):
        bundle = comparison.verify_cauchy_schwarz(euclidean())
        assert bundle.passed
        assert bundle.details["S_plus"] == pytest.approx(1.0)
        assert bundle.details["S_minus"] == pytest.approx(1.0)
        assert bundle.details["pearson_bounds"] == pytest.approx([-1.0, 1.0])
        assert bundle.details["growth_exponent"] == pytest.approx(2.0)

    def test_cauchy_schwarz_on_null_sample(self, comparison):
        sample = [(np.zeros(2), np.zeros(2))] * 3
        with warnings.catch_warnings():
            warnings.simplefilter("error", RuntimeWarning)
            bundle = comparison.verify_cauchy_schwarz(euclidean(), sample=sample)
        assert bundle.details["growth_exponent"] is None
        assert bundle.details["growth_vacuous"]
        assert bundle.details["c_m"] == pytest.approx([0.0] * len(bundle.details["c_m"]))
        assert bundle.reports["cauchy_schwarz_plus"].skipped
        assert bundle.reports["cauchy_schwarz_minus"].skipped

    def test_scaling_laws_on_the_line(self, comparison):
        bundle = comparison.verify_scaling_laws(euclidean(d=1, scalar_action=True))
        for law in ("rho_scaling", "scalar_scaling", "self_distance", "self_scalar_zero"):
            assert bundle.reports[law].passed, law
            assert not bundle.reports[law].skipped, law
        assert bundle.details["e_entropy"] == pytest.approx(1.0)
        assert bundle.details["a_self_distance"] == pytest.approx(-1.0)

    def test_scaling_laws_without_invariant_element(self, comparison):
        bundle = comparison.verify_scaling_laws(euclidean(d=2))
        assert all(report.skipped for report in bundle.reports.values())
        assert len(bundle.reports) == 4

    def test_suite(self, comparison):
        bundle = comparison.run_suite(euclidean())
        assert bundle.passed, [r.law for r in bundle.failures()]


class TestSets:
    def test_symmetric_difference_and_intersection(self, comparison):
        S = finite_measure_sets(WEIGHTS)
        mass = dict(enumerate(WEIGHTS))
        for A in S.elements():
            for B in S.elements():
                assert comparison.canonical_rho(S, None, A, B) == pytest.approx(sum(mass[g] for g in A ^ B), abs=1e-10)
                assert comparison.canonical_scalar(S, None, A, B, "half") == pytest.approx(
                    sum(mass[g] for g in A & B), abs=1e-10)

    def test_triangle_inequality(self, comparison):
        S = finite_measure_sets(WEIGHTS)
        elements = S.elements()
        rho = {(A, B): comparison.canonical_rho(S, None, A, B) for A in elements for B in elements}
        for A in elements:
            for B in elements:
                for C in elements:
                    assert rho[(A, C)] <= rho[(A, B)] + rho[(B, C)] + 1e-12

    def test_rho_infty(self, comparison):
        S = finite_measure_sets(WEIGHTS)
        A, B = frozenset({0, 1}), frozenset({1, 2})
        assert comparison.rho_infty(S, A, B) == pytest.approx(2.0)

    def test_compare_pairs(self, comparison):
        S = finite_measure_sets(WEIGHTS)
        rows = comparison.compare_pairs(S, [(frozenset({0, 1}), frozenset({1, 2}))], a=1.5)
        row = rows[0]
        assert row["scalar_half"] == pytest.approx(2.0)
        assert row["rho_ca"] == pytest.approx(1.5)
        assert row["rho_a"] == pytest.approx(1.5 * 3.5 + (1 - 1.5) * 5.5)
        assert row["classification"] == CORRELATION_CLASSES["positive"]

    def test_suite(self, comparison):
        bundle = comparison.run_suite(finite_measure_sets(WEIGHTS))
        assert bundle.passed, [r.law for r in bundle.failures()]


class TestMutualInformation:
    def test_scalar_is_mutual_information(self, comparison):
        joint = np.array(JOINT)
        p_x, p_y = joint.sum(axis=1), joint.sum(axis=0)
        expected = float(np.sum(joint * np.log(joint / np.outer(p_x, p_y))))
        S = mutual_information(JOINT)
        X, Y = S.decode("X"), S.decode("Y")
        assert comparison.canonical_scalar(S, None, X, Y, "half") == pytest.approx(expected, abs=1e-10)

    def test_variation_of_information_is_a_metric(self, comparison):
        S = mutual_information(JOINT)
        rng = np.random.default_rng(4)
        labels = [S.decode("X"), S.decode("Y"), S.decode("constant")]
        labels += [S.decode(list(rng.integers(0, 3, size=4))) for _ in range(6)]
        for A in labels:
            assert comparison.canonical_rho(S, None, A, A) == pytest.approx(0.0, abs=1e-12)
            for B in labels:
                d_ab = comparison.canonical_rho(S, None, A, B)
                assert d_ab >= -1e-12
                assert d_ab == pytest.approx(comparison.canonical_rho(S, None, B, A), abs=1e-12)
                for C in labels:
                    d_ac = comparison.canonical_rho(S, None, A, C)
                    assert d_ac <= d_ab + comparison.canonical_rho(S, None, B, C) + 1e-12


class TestUndefinedCanonical:
    def test_infinite_a_sigma(self, comparison):
        S = euclidean().with_profile(ComparisonProfile(m_G=1.0, M_G=2.0, sign=SIGN_NEGATIVE, provenance="closed_form"))
        with pytest.raises(CanonicalUndefined):
            comparison.canonical_rho(S, None, np.ones(2), np.ones(2))
