"""
Axiom checks for entropy-driven hemi-groups and hemi-rings
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.constants import (
    CHECK_MODES, DEFAULT_PARTITIONS, DEFAULT_SAMPLE_SIZE, DEFAULT_SEED, DEFAULT_WORKERS,
    SIGN_NEGATIVE, SIGN_POSITIVE, SIGN_UNDETERMINED,
)
from src.models.errors import ConfigError, DomainError, NotComparable
from src.models.structure import AxiomReport, EntropyStructure, ReportBundle, SkippedReport
from src.utils.sampling import (
    draw_elements, draw_pairs, draw_triples, is_exhaustive, map_partitioned,
)

logger = logging.getLogger(__name__)

Predicate = Callable[[Tuple[Any, ...]], Tuple[bool, Dict[str, Any]]]


class AxiomChecker:
    """Checks the structural laws of an EntropyStructure on samples or exhaustively."""

    def __init__(self, sample_size: int = DEFAULT_SAMPLE_SIZE, seed: int = DEFAULT_SEED,
                 partitions: int = DEFAULT_PARTITIONS, workers: int = DEFAULT_WORKERS):
        self.sample_size = sample_size
        self.seed = seed
        self.partitions = partitions
        self.workers = workers

    # Sampling

    def elements(self, S: EntropyStructure, sample: Optional[Sequence[Any]] = None) -> List[Any]:
        return list(sample) if sample is not None else draw_elements(
            S, self.sample_size, self.seed, self.partitions)

    def pairs(self, S: EntropyStructure, sample: Optional[Sequence[Tuple[Any, Any]]] = None):
        return list(sample) if sample is not None else draw_pairs(
            S, self.sample_size, self.seed, self.partitions)

    def triples(self, S: EntropyStructure, sample: Optional[Sequence[Tuple[Any, Any, Any]]] = None):
        return list(sample) if sample is not None else draw_triples(
            S, self.sample_size, self.seed, self.partitions)

    def _mode(self, S: EntropyStructure, explicit_sample: bool) -> str:
        if is_exhaustive(S) and not explicit_sample:
            return CHECK_MODES["exhaustive"]
        return CHECK_MODES["sampled"]

    def _evaluate(self, law: str, cases: Sequence[Tuple[Any, ...]], predicate: Predicate,
                  mode: str, details: Optional[Dict[str, Any]] = None) -> AxiomReport:
        """Run predicate over cases; the lowest failing case index is the counterexample."""

        def guarded(case):
            try:
                return predicate(case)
            except DomainError as e:
                return False, {"error": str(e)}

        outcomes = map_partitioned(guarded, cases, self.workers, self.partitions)
        report_details = dict(details or {})
        for index, (ok, info) in enumerate(outcomes):
            if not ok:
                report_details.update(info)
                report_details["case_index"] = index
                logger.info("%s failed at case %d", law, index)
                return AxiomReport(law=law, passed=False, cases_checked=len(cases), mode=mode,
                                   counterexample=tuple(cases[index]), details=report_details)
        return AxiomReport(law=law, passed=True, cases_checked=len(cases), mode=mode,
                           details=report_details)

    # Entropy

    def entropy_of(self, S: EntropyStructure, xi: Any) -> float:
        """⟦ξ⟧ for ξ in the carrier."""
        return S.entropy(xi)

    # Hemi-group laws

    def check_hemi_group(self, S: EntropyStructure,
                         sample: Optional[Sequence[Tuple[Any, Any]]] = None) -> AxiomReport:
        """⟦ξ∘ν⟧ = ⟦ξ⟧ + ⟦ν⟧ on every pair."""
        tol = S.tolerance

        def additive(case):
            xi, nu = case
            lhs = S.entropy(S.circ(xi, nu))
            rhs = S.entropy(xi) + S.entropy(nu)
            return tol.close(lhs, rhs), {"lhs": lhs, "rhs": rhs}

        return self._evaluate("hemi_group", self.pairs(S, sample), additive,
                              self._mode(S, sample is not None))

    def check_hemi_commutative(self, S: EntropyStructure,
                               sample: Optional[Sequence[Tuple[Any, Any]]] = None) -> AxiomReport:
        """⟦ξ∘ν⟧ = ⟦ν∘ξ⟧; whether ∔ commutes at the entropy level is reported alongside."""
        tol = S.tolerance
        pairs = self.pairs(S, sample)

        def commutes(case):
            xi, nu = case
            lhs, rhs = S.entropy(S.circ(xi, nu)), S.entropy(S.circ(nu, xi))
            return tol.close(lhs, rhs), {"lhs": lhs, "rhs": rhs}

        dotplus_commutative = None
        if S.has_dotplus:
            dotplus_commutative = all(
                tol.close(S.entropy(S.dotplus(a, b)), S.entropy(S.dotplus(b, a))) for a, b in pairs)
        return self._evaluate("hemi_commutative", pairs, commutes, self._mode(S, sample is not None),
                              {"dotplus_commutative": dotplus_commutative})

    def check_structure_invariants(self, S: EntropyStructure,
                                   sample: Optional[Sequence[Any]] = None) -> AxiomReport:
        """G_s ⊆ G₀, ⟦·⟧ ≥ 0, is_zero agrees with ⟦·⟧ = 0, and G₀ is neither empty nor everything."""
        tol = S.tolerance
        elements = self.elements(S, sample)
        cases = [(xi,) for xi in elements]

        def consistent(case):
            (xi,) = case
            value = S.entropy(xi)
            zero = S.is_zero(xi)
            if S.is_deterministic(xi) and not zero:
                return False, {"violation": "deterministic element outside G₀"}
            if zero != (value <= tol.abs_tol):
                return False, {"violation": "is_zero disagrees with entropy", "entropy": value}
            return True, {}

        report = self._evaluate("structure_invariants", cases, consistent,
                                self._mode(S, sample is not None))
        if not report.passed:
            return report
        zeros = [xi for xi in elements if S.is_zero(xi)]
        neutral_elements = [S.neutral(xi) for xi in elements[:1]]
        has_zero = bool(zeros) or any(e is not None and S.is_zero(e) for e in neutral_elements)
        nonzero = [xi for xi in elements if not S.is_zero(xi)]
        report.details.update({"zero_count": len(zeros), "nonzero_count": len(nonzero)})
        if not has_zero:
            return AxiomReport(law=report.law, passed=False, cases_checked=report.cases_checked,
                               mode=report.mode, counterexample=(),
                               details={"violation": "G₀ is empty on the sample"})
        if not nonzero:
            return AxiomReport(law=report.law, passed=False, cases_checked=report.cases_checked,
                               mode=report.mode, counterexample=(elements[0],),
                               details={"violation": "G₀ is the whole sample"})
        return report

    def check_comparable(self, S: EntropyStructure, sample: Optional[Sequence[Any]] = None) -> int:
        """Sign of ξ ↦ ⟦ξ∔ξ⟧ − 2⟦ξ⟧ on the sample: −1, +1, or 0 for undetermined."""
        if not S.has_dotplus:
            raise ConfigError(f"{S.name} has no ∔ operator")
        tol = S.tolerance
        positive = negative = None
        for xi in self.elements(S, sample):
            left, right = S.diagonal(xi)
            e_left, e_right = S.entropy(left), S.entropy(right)
            joined = S.entropy(S.dotplus(left, right))
            value = joined - e_left - e_right
            slack = tol.slack(joined, e_left + e_right)
            if value > slack and positive is None:
                positive = xi
            elif value < -slack and negative is None:
                negative = xi
            if positive is not None and negative is not None:
                raise NotComparable(f"{S.name}: ⟦ξ∔ξ⟧ − 2⟦ξ⟧ changes sign",
                                    positive_witness=positive, negative_witness=negative)
        if negative is not None:
            return SIGN_NEGATIVE
        if positive is not None:
            return SIGN_POSITIVE
        return SIGN_UNDETERMINED

    def resolve_sign(self, S: EntropyStructure, sample: Optional[Sequence[Any]] = None) -> Tuple[int, str]:
        """Observed sign, or the structure's convention when undetermined."""
        sign = self.check_comparable(S, sample)
        if sign == SIGN_UNDETERMINED:
            return S.sign_convention, "convention"
        return sign, "observed"

    def comparable_report(self, S: EntropyStructure, sample: Optional[Sequence[Any]] = None) -> AxiomReport:
        mode = self._mode(S, sample is not None)
        if not S.has_dotplus:
            return SkippedReport("comparable", f"{S.name} has no ∔ operator", mode)
        elements = self.elements(S, sample)
        try:
            sign = self.check_comparable(S, elements)
        except NotComparable as e:
            return AxiomReport(law="comparable", passed=False, cases_checked=len(elements), mode=mode,
                               counterexample=(e.positive_witness, e.negative_witness),
                               details={"violation": str(e)})
        return AxiomReport(law="comparable", passed=True, cases_checked=len(elements), mode=mode,
                           details={"sign": sign})

    def check_dotplus_neutral(self, S: EntropyStructure,
                              sample: Optional[Sequence[Any]] = None) -> AxiomReport:
        """⟦ξ∔ε⟧ = ⟦ε∔ξ⟧ = ⟦ξ⟧ for ε ∈ G_s."""
        mode = self._mode(S, sample is not None)
        if not S.has_dotplus:
            return SkippedReport("dotplus_neutral", f"{S.name} has no ∔ operator", mode)
        elements = self.elements(S, sample)
        if S.is_finite and sample is None:
            deterministic = [e for e in elements if S.is_deterministic(e)]
            cases = [(xi, eps) for xi in elements for eps in deterministic]
        else:
            cases = [(xi, S.neutral(xi)) for xi in elements]
        if not cases or any(eps is None for _, eps in cases):
            return SkippedReport("dotplus_neutral", "G_s is empty", mode)
        tol = S.tolerance

        def neutral(case):
            xi, eps = case
            if not S.is_deterministic(eps):
                return False, {"violation": "designated element is not in G_s"}
            base = S.entropy(xi)
            right = S.entropy(S.dotplus(xi, eps))
            left = S.entropy(S.dotplus(eps, xi))
            return tol.close(right, base) and tol.close(left, base), {
                "entropy": base, "xi_dotplus_eps": right, "eps_dotplus_xi": left}

        return self._evaluate("dotplus_neutral", cases, neutral, mode)

    # Hemi-ring laws

    def check_hemi_ring(self, S: EntropyStructure,
                        sample: Optional[Sequence[Tuple[Any, Any, Any]]] = None,
                        invariant_element: Any = None) -> AxiomReport:
        """Deterministic transformations, G_s ⊆ G_t, right hemi-distributivity, entropy-invariant e."""
        mode = self._mode(S, sample is not None)
        if not S.has_scale:
            return SkippedReport("hemi_ring", f"{S.name} has no scale operator", mode)
        tol = S.tolerance
        e = invariant_element if invariant_element is not None else S.invariant_element
        triples = self.triples(S, sample)
        cases = []
        for xi, nu, eta in triples:
            if S.is_transformation(xi):
                cases.append(("deterministic_transformation", xi, nu, eta))
            eps = S.neutral(xi)
            if eps is not None:
                cases.append(("deterministic_in_transformations", eps, nu, eta))
            if S.has_dotplus:
                cases.append(("right_distributive", xi, nu, eta))
                if e is not None:
                    cases.append(("entropy_invariant", e, nu, eta))

        def law(case):
            part, xi, nu, eta = case
            if part in ("deterministic_transformation", "deterministic_in_transformations"):
                lhs = S.entropy(S.scale(xi, S.circ(nu, eta)))
                rhs = S.entropy(S.circ(S.scale(xi, nu), S.scale(xi, eta)))
            elif part == "right_distributive":
                lhs = S.entropy(S.scale(S.dotplus(xi, nu), eta))
                rhs = S.entropy(S.dotplus(S.scale(xi, eta), S.scale(nu, eta)))
            else:
                lhs = S.entropy(S.dotplus(S.scale(xi, nu), S.scale(xi, eta)))
                rhs = S.entropy(S.dotplus(nu, eta))
            return tol.close(lhs, rhs), {"part": part, "lhs": lhs, "rhs": rhs}

        details = {"invariant_element": e, "parts": sorted({c[0] for c in cases})}
        return self._evaluate("hemi_ring", cases, law, mode, details)

    def check_rescaling(self, S: EntropyStructure, sample: Optional[Sequence[Any]] = None,
                        invariant_element: Any = None, max_factors: int = 100) -> AxiomReport:
        """Left rescaling ⟦ξν⟧ = c_ξ⟦ν⟧, scale invariance c_ξ = c⟦ξ⟧ and c = ⟦e⟧⁻¹.

        The fitted constants are returned in details["c"] and details["c_xi"].
        """
        mode = self._mode(S, sample is not None)
        if not S.has_scale:
            return SkippedReport("rescaling", f"{S.name} has no scale operator", mode)
        tol = S.tolerance
        elements = self.elements(S, sample)
        factors = elements[:max_factors]
        targets = [nu for nu in elements[max_factors:2 * max_factors] or elements
                   if not S.is_zero(nu)][:max_factors]
        if not targets:
            return SkippedReport("rescaling", "no element with positive entropy", mode)
        c_xi = [S.entropy(S.scale(xi, targets[0])) / S.entropy(targets[0]) for xi in factors]
        cases = [(i, nu) for i in range(len(factors)) for nu in targets]

        def left_rescaling(case):
            i, nu = case
            lhs = S.entropy(S.scale(factors[i], nu))
            rhs = c_xi[i] * S.entropy(nu)
            return tol.close(lhs, rhs), {"part": "left_rescaling", "lhs": lhs, "rhs": rhs,
                                         "xi": factors[i]}

        report = self._evaluate("rescaling", cases, left_rescaling, mode)
        ratios = [c / S.entropy(xi) for c, xi in zip(c_xi, factors) if not S.is_zero(xi)]
        c = ratios[0] if ratios else None
        report.details.update({"c_xi": c_xi, "c": c})
        if not report.passed:
            return report
        for xi, ratio in zip([x for x in factors if not S.is_zero(x)], ratios):
            if not tol.close(ratio, c):
                return AxiomReport(law="rescaling", passed=False, cases_checked=report.cases_checked,
                                   mode=mode, counterexample=(xi,),
                                   details={"part": "scale_invariance", "c": c, "c_xi_over_entropy": ratio})
        e = invariant_element if invariant_element is not None else S.invariant_element
        if e is not None and c is not None:
            e_entropy = S.entropy(e)
            report.details["e_entropy"] = e_entropy
            if not tol.close(c, 1.0 / e_entropy):
                return AxiomReport(law="rescaling", passed=False, cases_checked=report.cases_checked,
                                   mode=mode, counterexample=(e,),
                                   details={"part": "invariant_normalization", "c": c,
                                            "inverse_e_entropy": 1.0 / e_entropy})
        return report

    def check_power_form(self, S: EntropyStructure, b: float, alpha: float,
                         sample: Optional[Sequence[Any]] = None) -> AxiomReport:
        """⟦μ⟧ = b|μ|^α on a real-axis carrier."""
        tol = S.tolerance
        cases = [(mu,) for mu in self.elements(S, sample)]

        def power(case):
            (mu,) = case
            lhs, rhs = S.entropy(mu), b * abs(mu) ** alpha
            return tol.close(lhs, rhs), {"lhs": lhs, "rhs": rhs}

        return self._evaluate("power_form", cases, power, self._mode(S, sample is not None),
                              {"b": b, "alpha": alpha})

    # Suites

    def self_check(self, S: EntropyStructure) -> ReportBundle:
        """Axioms every registered instance must satisfy at construction."""
        bundle = ReportBundle(name=S.name)
        bundle.add(self.check_hemi_group(S))
        bundle.add(self.comparable_report(S))
        bundle.add(self.check_dotplus_neutral(S))
        return bundle

    def run_suite(self, S: EntropyStructure) -> ReportBundle:
        """All structural checks of the hemi-group and hemi-ring layers."""
        bundle = self.self_check(S)
        bundle.add(self.check_hemi_commutative(S))
        bundle.add(self.check_structure_invariants(S))
        if S.has_scale:
            bundle.add(self.check_hemi_ring(S))
            bundle.add(self.check_rescaling(S))
        else:
            bundle.add(SkippedReport("hemi_ring", f"{S.name} has no scale operator"))
            bundle.add(SkippedReport("rescaling", f"{S.name} has no scale operator"))
        bundle.details.update({"seed": self.seed, "sample_size": self.sample_size,
                               "rel_tol": S.tolerance.rel_tol, "abs_tol": S.tolerance.abs_tol})
        return bundle

