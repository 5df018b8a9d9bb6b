"""
Tests for the hemi-group and hemi-ring axiom checks
"""

from dataclasses import replace

import numpy as np
import pytest

from src.constants import CHECK_MODES, SIGN_NEGATIVE, SIGN_POSITIVE, SIGN_UNDETERMINED
from src.controllers.algebra_core import AxiomChecker
from src.controllers.instances import euclidean, finite_measure_sets, gaussian_scale, real_axis
from src.models.errors import ConfigError, DomainError, NotComparable
from src.models.structure import AxiomReport, FormalPair

WEIGHTS = [1.0, 2.0, 0.5, 1.5, 3.0]


@pytest.fixture
def checker():
    return AxiomChecker(sample_size=200, seed=11)


@pytest.fixture
def sets():
    return finite_measure_sets(WEIGHTS)


class TestEntropy:
    def test_formal_pair_adds_components(self):
        S = euclidean()
        x, y = np.array([1.0, 2.0]), np.array([3.0, 0.0])
        assert S.entropy(FormalPair(x, y)) == pytest.approx(14.0)

    def test_outside_carrier(self):
        with pytest.raises(DomainError):
            euclidean(d=2).entropy(np.array([1.0, 2.0, 3.0]))

    def test_multiple_and_neutral(self, sets):
        A = frozenset({1, 3})
        assert sets.multiple(3, A) == A
        assert sets.multiple(0, A) == frozenset()

    def test_failing_report_needs_counterexample(self):
        with pytest.raises(ConfigError):
            AxiomReport(law="x", passed=False, cases_checked=1, mode=CHECK_MODES["sampled"])


class TestHemiGroup:
    def test_sets_exhaustive(self, checker, sets):
        report = checker.check_hemi_group(sets)
        assert report.passed
        assert report.mode == CHECK_MODES["exhaustive"]
        assert report.cases_checked == 32 * 32

    def test_natural_merge(self, checker):
        assert checker.check_hemi_group(gaussian_scale()).passed

    def test_broken_merge_is_caught(self, checker):
        broken = replace(gaussian_scale(), circ_fn=lambda x, y: x + y)
        report = checker.check_hemi_group(broken)
        assert not report.passed
        xi, nu = report.counterexample
        assert xi != 0 and nu != 0

    def test_commutative(self, checker, sets):
        report = checker.check_hemi_commutative(sets)
        assert report.passed
        assert report.details["dotplus_commutative"] is True

    def test_structure_invariants(self, checker, sets):
        report = checker.check_structure_invariants(sets)
        assert report.passed
        assert report.details["zero_count"] == 1


class TestComparable:
    def test_euclidean_positive(self, checker):
        assert checker.check_comparable(euclidean()) == SIGN_POSITIVE

    def test_sets_negative(self, checker, sets):
        assert checker.check_comparable(sets) == SIGN_NEGATIVE

    def test_additive_undetermined(self, checker):
        S = real_axis(1.0, "nonneg", "add")
        assert checker.check_comparable(S) == SIGN_UNDETERMINED
        assert checker.resolve_sign(S) == (S.sign_convention, "convention")

    def test_sign_change_is_reported(self, checker):
        def dotplus(x, y):
            return x + y if x[0] > 0 else x - y

        broken = replace(euclidean(), dotplus_fn=dotplus)
        with pytest.raises(NotComparable) as info:
            checker.check_comparable(broken)
        assert info.value.positive_witness[0] > 0
        assert info.value.negative_witness[0] <= 0

        report = checker.comparable_report(broken)
        assert not report.passed
        assert len(report.counterexample) == 2

    def test_dotplus_neutral(self, checker, sets):
        assert checker.check_dotplus_neutral(sets).passed
        assert checker.check_dotplus_neutral(euclidean()).passed


class TestHemiRing:
    def test_real_axis_rescaling(self, checker):
        S = real_axis(2.0, "full", "add")
        report = checker.check_rescaling(S)
        assert report.passed
        assert report.details["c"] == pytest.approx(1.0)
        assert report.details["e_entropy"] == pytest.approx(1.0)

    def test_real_axis_hemi_ring(self, checker):
        assert checker.check_hemi_ring(real_axis(1.5, "nonneg", "max")).passed

    def test_power_form(self, checker):
        S = real_axis(1.5, "nonneg", "add")
        assert checker.check_power_form(S, b=1.0, alpha=1.5).passed
        assert not checker.check_power_form(S, b=2.0, alpha=1.5).passed

    def test_no_scale_is_skipped(self, checker, sets):
        report = checker.check_hemi_ring(sets)
        assert report.passed
        assert report.skipped


class TestSuite:
    def test_sets_suite(self, checker, sets):
        bundle = checker.run_suite(sets)
        assert bundle.passed
        assert bundle.details["seed"] == 11
        assert bundle.reports["hemi_ring"].skipped

    def test_euclidean_self_check(self, checker):
        bundle = checker.self_check(euclidean())
        assert bundle.passed
        assert bundle.reports["comparable"].details["sign"] == SIGN_POSITIVE

    def test_seeded_runs_repeat(self):
        S = euclidean()
        first = AxiomChecker(sample_size=50, seed=3).run_suite(S).to_dict()
        second = AxiomChecker(sample_size=50, seed=3).run_suite(S).to_dict()
        assert first == second
