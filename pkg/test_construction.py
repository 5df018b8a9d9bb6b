"""
Tests for kernel reconstruction, lattice extension and the scoring-rule correspondence
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.controllers.construction import (
    ConstructionProcessor, euclidean_kernel, kernel_spec_from_structure, max_kernel, rational_lattice,
    squared_error_rule,
)
from src.controllers.instances import euclidean
from src.models.construction_types import (
    ExtensionResult, KernelSpec, LatticePresentation, ObstructionReport, Relation,
)
from src.models.errors import BaseBelowM, ConfigError, DomainError, NoRelations, NotInA


@pytest.fixture
def construction():
    return ConstructionProcessor(sample_size=500, seed=13)


class TestReconstruction:
    def test_rational_lattice(self):
        relations = rational_lattice(4)
        labels = {r.label for r in relations}
        assert "2/4" not in labels
        assert {"1/1", "3/4", "4/3"} <= labels

    def test_consistency_constant(self, construction):
        result = construction.consistency_M(euclidean_kernel(2.0))
        assert result.feasible_signs == [1]
        assert result.M_xi == pytest.approx(1.0)
        assert result.sup_at_depth[1] == pytest.approx(63.0 / 64.0)
        assert result.depth == 64
        assert construction.consistency_M(euclidean_kernel(1.0)).M_xi == pytest.approx(0.5, abs=1e-9)

    def test_base_at_consistency_constant(self, construction):
        spec = euclidean_kernel(1.0)
        M = construction.consistency_M(spec).M_xi
        fractions = sorted({Fraction(n, m) for m in range(1, 51) for n in range(1, 51)})
        table = construction.reconstruct_table(spec, M, fractions)
        for r in fractions:
            assert table[r] == pytest.approx(float(r) ** 2 * M, abs=1e-9)

    def test_structure_kernel_round_trip(self):
        construction = ConstructionProcessor(depth=16, consistency_tolerance=0.1)
        S = euclidean()
        xi = np.array([1.0, 2.0])
        spec = kernel_spec_from_structure(S, xi, 1)
        M = construction.consistency_M(spec).M_xi
        assert M == pytest.approx(5.0, abs=1e-9)
        fractions = [Fraction(1, 3), Fraction(1, 2), Fraction(3, 2), Fraction(7, 4)]
        exact = construction.reconstruct_table(spec, M, fractions)
        shifted = construction.reconstruct_table(spec, M + 0.5, fractions)
        for r in fractions:
            assert exact[r] == pytest.approx(S.entropy(float(r) * xi), abs=1e-9)
            assert shifted[r] - exact[r] == pytest.approx(0.5 * float(r), abs=1e-9)

    def test_euclidean_multiples(self, construction):
        spec = euclidean_kernel(2.0)
        fractions = [Fraction(1, 2), Fraction(3, 2), Fraction(2), Fraction(5, 3)]
        table = construction.reconstruct_table(spec, 1.0, fractions)
        for r in fractions:
            assert table[r] == pytest.approx(float(r) ** 2)
        assert construction.verify_reconstruction(spec, table).passed

    def test_max_kernel_multiples(self, construction):
        spec = max_kernel(alpha=1.0, xi=1.0)
        fractions = [Fraction(2), Fraction(3), Fraction(1, 2), Fraction(3, 2)]
        table = construction.reconstruct_table(spec, 1.0, fractions)
        assert [table[r] for r in fractions] == pytest.approx([2.0, 3.0, 0.5, 1.5])
        report = construction.verify_reconstruction(spec, table)
        assert report.passed
        assert report.cases_checked == 16

    def test_max_kernel_feasible_signs(self, construction):
        linear = construction.consistency_M(max_kernel(alpha=1.0, xi=1.0))
        assert linear.feasible_signs == [-1, 1]
        assert linear.M_xi == pytest.approx(1.0)
        squared = construction.consistency_M(max_kernel(alpha=2.0, xi=1.5))
        assert squared.feasible_signs == [-1]
        assert squared.M_xi == pytest.approx(2.25)
        assert squared.bounds[1] == math.inf
        table = construction.reconstruct_table(max_kernel(alpha=2.0, xi=1.5), 2.25, [Fraction(2, 3)])
        assert table[Fraction(2, 3)] == pytest.approx(1.0)

    def test_max_kernel_pins_base_entropy(self, construction):
        with pytest.raises(DomainError):
            construction.reconstruct_multiple(max_kernel(alpha=1.0, xi=1.0), 2.0, Fraction(1, 2))
        with pytest.raises(DomainError):
            construction.reconstruct_multiple(max_kernel(alpha=1.0, xi=1.0, kernel_sign=1), 1.0, Fraction(2))

    def test_base_below_consistency_constant(self, construction):
        with pytest.raises(BaseBelowM):
            construction.reconstruct_multiple(euclidean_kernel(2.0), 0.9, Fraction(1, 2))

    def test_series_input(self, construction):
        spec = KernelSpec.from_dict({"series": [1.0, 2.0], "relations": [[2, 1, "half", [0.25]]], "sign": 1})
        relation = spec.relations[0]
        assert construction.reconstruct_entropy(spec, 0.5, relation) == pytest.approx(0.125)
        assert construction.consistency_M(spec).M_xi == pytest.approx(0.25)

    def test_no_relations(self, construction):
        with pytest.raises(NoRelations):
            construction.consistency_M(KernelSpec(series=[1.0]))

    def test_bad_relation(self):
        with pytest.raises(ConfigError):
            Relation(m=0, n=1, label="bad")

    def test_kernel_identities(self, construction):
        bundle = construction.verify_kernel_identities(euclidean(), 1)
        assert bundle.passed, [r.law for r in bundle.failures()]


class TestLatticeExtension:
    def test_orthogonal_generators(self, construction):
        result = construction.extend_entropy(LatticePresentation(gram=np.eye(2)))
        assert isinstance(result, ExtensionResult)
        assert result.entropy((1, 1)) == pytest.approx(1.0)
        assert result.entropy((2, 0)) == pytest.approx(2.0)
        assert result.verified_pairs > 0

    def test_asymmetric_kernel_is_obstructed(self, construction):
        result = construction.extend_entropy(LatticePresentation(gram=[[1.0, 1.0], [0.0, 1.0]]))
        assert isinstance(result, ObstructionReport)
        assert result.condition == "a=b"
        assert len(result.witnesses) == 2

    def test_negative_entropy_is_obstructed(self, construction):
        result = construction.extend_entropy(LatticePresentation(gram=[[1.0, -3.0], [-3.0, 1.0]]))
        assert isinstance(result, ObstructionReport)
        assert result.condition == "a>0"
        assert result.values[0] < 0

    def test_zero_class(self, construction):
        result = construction.extend_entropy(LatticePresentation(gram=[[0.0, 1.0], [1.0, 1.0]]))
        assert result.condition == "zero_class"

    def test_presentation_validation(self):
        with pytest.raises(ConfigError):
            LatticePresentation(gram=[[1.0, 0.0]])


class TestScoringRules:
    def test_squared_error_embedding(self):
        construction = ConstructionProcessor(sample_size=1000, seed=13)
        embedded = construction.embed_scoring_rule(squared_error_rule())
        assert embedded.ratio_sup == pytest.approx(2.0)
        assert embedded.a == pytest.approx(-1.5)
        assert embedded.verification["max_abs_error"] < 1e-12
        assert embedded.passed

    def test_embedding_reproduces_rule(self):
        construction = ConstructionProcessor(sample_size=200, seed=2)
        rule = squared_error_rule()
        embedded = construction.embed_scoring_rule(rule)
        assert embedded.rho(embedded.iota(0.25), embedded.iota(-0.5)) == pytest.approx(rule(0.25, -0.5))

    def test_round_trip(self, construction):
        result = construction.round_trip(euclidean())
        assert result["a"] == pytest.approx(-1.0)
        assert result["max_rule_error"] < 1e-9
        assert result["max_rho_error"] < 1e-9

    def test_rule_from_structure(self, construction):
        rule = construction.scoring_rule_from_structure(euclidean(), -1.0)
        eta, xi = np.array([1.0, 2.0]), np.array([0.0, -1.0])
        assert rule(eta, xi) == pytest.approx(float((eta - xi) @ (eta - xi)))

    def test_outside_membership(self, construction):
        with pytest.raises(NotInA):
            construction.scoring_rule_from_structure(euclidean(), 2.0)

    def test_bad_rule_bounds(self):
        with pytest.raises(ConfigError):
            squared_error_rule(1.0, -1.0)
