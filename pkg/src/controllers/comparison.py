"""
Hemi-metrics, hemi-scalar products and correlation measures of comparable structures
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.constants import (
    CHECK_MODES, CORRELATION_CLASSES, CS_PAIR_LIMIT, CS_STABILITY_TOLERANCE, DEFAULT_CS_DEPTH,
    DEFAULT_PARTITIONS, DEFAULT_SAMPLE_SIZE, DEFAULT_SEED, DEFAULT_WORKERS,
    ORTHOGONALITY_THRESHOLD, PROVENANCE_ESTIMATED,
)
from src.controllers.algebra_core import AxiomChecker
from src.models.errors import (
    CanonicalUndefined, ConfigError, DepthInsufficient, DivisionByZeroEntropy, DomainError,
    NoValidPairs, NotApplicable, OutOfXi, RangeError,
)
from src.models.profile import ComparisonProfile, XiInterval
from src.models.structure import AxiomReport, EntropyStructure, ReportBundle, SkippedReport
from src.utils.sampling import draw_elements, draw_pairs, draw_triples, is_exhaustive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairTerms:
    """Entropies entering every pairwise comparison."""
    xi: float
    eta: float
    plus: float
    circ: float

    @property
    def deviation(self) -> float:
        """⟦ξ∔η⟧ − ⟦ξ∘η⟧, i.e. σ⟨ξ,η⟩_a."""
        return self.plus - self.circ


class ComparisonProcessor:
    """Processor for the comparison quantities derived from ∘ and ∔."""

    def __init__(self, sample_size: int = DEFAULT_SAMPLE_SIZE, seed: int = DEFAULT_SEED,
                 partitions: int = DEFAULT_PARTITIONS, workers: int = DEFAULT_WORKERS,
                 exploration: bool = False):
        self.sample_size = sample_size
        self.seed = seed
        self.partitions = partitions
        self.exploration = exploration
        self.checker = AxiomChecker(sample_size, seed, partitions, workers)

    # Basic terms

    def pair_terms(self, S: EntropyStructure, xi: Any, eta: Any) -> PairTerms:
        """⟦ξ⟧, ⟦η⟧, ⟦ξ∔η⟧, ⟦ξ∘η⟧; comparison needs finite entropies."""
        terms = PairTerms(
            xi=S.entropy(xi),
            eta=S.entropy(eta),
            plus=S.entropy(S.dotplus(xi, eta)),
            circ=S.entropy(S.circ(xi, eta)),
        )
        if not all(math.isfinite(v) for v in (terms.xi, terms.eta, terms.plus, terms.circ)):
            raise DomainError(f"{S.name}: comparison requires finite entropies")
        return terms

    def _slack(self, S: EntropyStructure, terms: PairTerms) -> float:
        return S.tolerance.slack(terms.plus, terms.circ)

    # Profiles

    def estimate_bounds(self, S: EntropyStructure, mode: str = "closed_form",
                        n: Optional[int] = None, seed: Optional[int] = None,
                        include_diagonal: bool = True) -> Tuple[float, float]:
        """(m_G, M_G): registered constants, or sampled inf/sup of ⟦ξ∔ν⟧/⟦ξ∘ν⟧.

        Sampled values bound M_G from below and m_G from above.
        """
        if mode == "closed_form":
            if S.profile is None:
                raise ConfigError(f"{S.name} registers no closed-form profile")
            return S.profile.m_G, S.profile.M_G
        if mode != "sampled":
            raise ConfigError(f"Unknown estimation mode: {mode}")
        n = n or self.sample_size
        seed = self.seed if seed is None else seed
        pairs = draw_pairs(S, n, seed, self.partitions)
        if include_diagonal and not S.is_finite:
            pairs += [S.diagonal(xi) for xi in draw_elements(S, n, seed + 1, self.partitions)]
        ratios = []
        for xi, nu in pairs:
            circ = S.entropy(S.circ(xi, nu))
            if circ > S.tolerance.abs_tol and math.isfinite(circ):
                ratios.append(S.entropy(S.dotplus(xi, nu)) / circ)
        if not ratios:
            raise NoValidPairs(f"{S.name}: every sampled pair has ⟦ξ∘ν⟧ = 0")
        # G_s pairs give ratio 1, so m_G ≤ 1 ≤ M_G always.
        m_hat, M_hat = min(min(ratios), 1.0), max(max(ratios), 1.0)
        logger.info("%s: sampled m_G=%.6g M_G=%.6g over %d pairs", S.name, m_hat, M_hat, len(ratios))
        return m_hat, M_hat

    def profile(self, S: EntropyStructure, mode: str = "closed_form",
                n: Optional[int] = None, seed: Optional[int] = None) -> ComparisonProfile:
        """ComparisonProfile from registered constants or from a sample."""
        if mode == "closed_form":
            if S.profile is None:
                raise ConfigError(f"{S.name} registers no closed-form profile")
            return S.profile
        n = n or self.sample_size
        seed = self.seed if seed is None else seed
        m_hat, M_hat = self.estimate_bounds(S, "sampled", n, seed)
        elements = draw_elements(S, n, seed, self.partitions)
        sign, source = self.checker.resolve_sign(S, elements)
        return ComparisonProfile(m_G=m_hat, M_G=M_hat, sign=sign, provenance=PROVENANCE_ESTIMATED,
                                 sign_source=source, sample_size=n, seed=seed)

    def get_profile(self, S: EntropyStructure, profile: Optional[ComparisonProfile] = None) -> ComparisonProfile:
        if profile is not None:
            return profile
        if S.profile is not None:
            return S.profile
        return self.profile(S, "sampled")

    def xi_interval(self, m_G: float, M_G: float) -> XiInterval:
        return XiInterval.from_bounds(m_G, M_G)

    # Hemi-metrics

    def rho(self, S: EntropyStructure, a: float, xi: Any, nu: Any,
            profile: Optional[ComparisonProfile] = None, exploration: Optional[bool] = None) -> float:
        """ρ_a(ξ,ν) = a⟦ξ∔ν⟧ + (1−a)⟦ξ∘ν⟧."""
        profile = self.get_profile(S, profile)
        exploration = self.exploration if exploration is None else exploration
        if not profile.xi.contains(a, S.tolerance.slack(a)):
            if not exploration:
                raise OutOfXi(f"a={a} lies outside Ξ={profile.xi.to_list()} for {S.name}")
            logger.warning("exploration mode: a=%s outside Ξ=%s for %s", a, profile.xi.to_list(), S.name)
        terms = self.pair_terms(S, xi, nu)
        return a * terms.plus + (1.0 - a) * terms.circ

    def canonical_rho(self, S: EntropyStructure, profile: Optional[ComparisonProfile],
                      xi: Any, nu: Any) -> float:
        """ρ_ca = ⟦ξ∘ν⟧ − ⟨ξ,ν⟩."""
        profile = self.get_profile(S, profile)
        a = self._canonical_coefficient(S, profile)
        terms = self.pair_terms(S, xi, nu)
        return terms.circ - abs(a) * profile.sign * terms.deviation

    def canonical_rho_alternative(self, S: EntropyStructure, profile: Optional[ComparisonProfile],
                                  xi: Any, nu: Any) -> float:
        """ρ_ca = ⟦ξ∔ν⟧ − ((a_σ−1)/a_σ)⟨ξ,ν⟩, defined for a_σ ≠ 0."""
        profile = self.get_profile(S, profile)
        a = self._canonical_coefficient(S, profile)
        if a == 0.0:
            raise CanonicalUndefined(f"{S.name}: the alternative form needs a_σ ≠ 0")
        terms = self.pair_terms(S, xi, nu)
        scalar = abs(a) * profile.sign * terms.deviation
        return terms.plus - (a - 1.0) / a * scalar

    def rho_infty(self, S: EntropyStructure, xi: Any, nu: Any,
                  profile: Optional[ComparisonProfile] = None) -> float:
        """lim |a|⁻¹ρ_a along the unbounded end of Ξ; 0 when both ends are unbounded."""
        xi_interval = self.get_profile(S, profile).xi
        lower_open, upper_open = math.isinf(xi_interval.lo), math.isinf(xi_interval.hi)
        if not (lower_open or upper_open):
            raise NotApplicable(f"{S.name}: Ξ is bounded, ρ_∞ does not exist")
        if lower_open and upper_open:
            return 0.0
        terms = self.pair_terms(S, xi, nu)
        return -terms.deviation if lower_open else terms.deviation

    def _canonical_coefficient(self, S: EntropyStructure, profile: ComparisonProfile) -> float:
        a = profile.a_sigma
        if not math.isfinite(a):
            raise CanonicalUndefined(f"{S.name}: a_σ is infinite, use rho_infty")
        return a

    # Hemi-scalar products

    def _sign(self, S: EntropyStructure, profile: Optional[ComparisonProfile]) -> int:
        if profile is not None:
            return profile.sign
        if S.profile is not None:
            return S.profile.sign
        return self.checker.resolve_sign(S)[0]

    def scalar_a(self, S: EntropyStructure, xi: Any, eta: Any,
                 profile: Optional[ComparisonProfile] = None) -> float:
        """⟨ξ,η⟩_a = σ(⟦ξ∔η⟧ − ⟦ξ∘η⟧)."""
        return self._sign(S, profile) * self.pair_terms(S, xi, eta).deviation

    def canonical_scalar(self, S: EntropyStructure, profile: Optional[ComparisonProfile],
                         xi: Any, eta: Any, variant: str = "full") -> float:
        """⟨ξ,η⟩ = |a_σ|⟨ξ,η⟩_a, or ⟨ξ,η⟩₂ = ⟨ξ,η⟩/2."""
        profile = self.get_profile(S, profile)
        a = self._canonical_coefficient(S, profile)
        value = abs(a) * self.scalar_a(S, xi, eta, profile)
        if variant == "half":
            return value / 2.0
        if variant != "full":
            raise ConfigError(f"Unknown scalar product variant: {variant}")
        return value

    def scalar_multi(self, S: EntropyStructure, elements: Sequence[Any],
                     profile: Optional[ComparisonProfile] = None) -> float:
        """σ(⟦ξ₁∔…∔ξ_n⟧ − Σ⟦ξ_i⟧); the binary product for n = 2."""
        if len(elements) < 2:
            raise DomainError("The multivariate product needs at least two elements")
        joined = S.entropy(reduce(S.dotplus, elements))
        independent = S.entropy(reduce(S.circ, elements))
        return self._sign(S, profile) * (joined - independent)

    # Correlation

    def classify_correlation(self, S: EntropyStructure, xi: Any, eta: Any,
                             profile: Optional[ComparisonProfile] = None) -> str:
        terms = self.pair_terms(S, xi, eta)
        value = self._sign(S, profile) * terms.deviation
        if abs(value) <= ORTHOGONALITY_THRESHOLD * max(terms.circ, 1.0):
            return CORRELATION_CLASSES["orthogonal"]
        return CORRELATION_CLASSES["positive"] if value > 0 else CORRELATION_CLASSES["negative"]

    def correlation_r(self, S: EntropyStructure, xi: Any, eta: Any,
                      profile: Optional[ComparisonProfile] = None) -> float:
        """r = ⟨ξ,η⟩ / ⟦ξ∘η⟧."""
        circ = S.entropy(S.circ(xi, eta))
        if circ <= S.tolerance.abs_tol:
            raise DivisionByZeroEntropy(f"{S.name}: ⟦ξ∘η⟧ = 0")
        return self.canonical_scalar(S, profile, xi, eta) / circ

    def pearson(self, S: EntropyStructure, xi: Any, eta: Any,
                profile: Optional[ComparisonProfile] = None) -> float:
        """⟨ξ,η⟩₂ / √(⟦ξ⟧⟦η⟧)."""
        product = S.entropy(xi) * S.entropy(eta)
        if product <= S.tolerance.abs_tol ** 2:
            raise DivisionByZeroEntropy(f"{S.name}: ⟦ξ⟧⟦η⟧ = 0")
        return self.canonical_scalar(S, profile, xi, eta, "half") / math.sqrt(product)

    def recover_scalar_from_metric(self, S: EntropyStructure, profile: Optional[ComparisonProfile],
                                   xi: Any, eta: Any, eps: Any) -> float:
        """ρ_ca(ξ,ε) + ρ_ca(η,ε) − ρ_ca(ξ,η)."""
        return (self.canonical_rho(S, profile, xi, eps) + self.canonical_rho(S, profile, eta, eps)
                - self.canonical_rho(S, profile, xi, eta))

    def uncorrelated_equivalences(self, S: EntropyStructure, a: float, xi: Any, eta: Any,
                                  profile: Optional[ComparisonProfile] = None) -> Dict[str, bool]:
        """The four equivalent forms of orthogonality for a ∈ Ξ∖{0,1}."""
        if a in (0.0, 1.0):
            raise DomainError("The equivalence chain needs a ∉ {0, 1}")
        terms = self.pair_terms(S, xi, eta)
        slack = self._slack(S, terms)
        rho = a * terms.plus + (1.0 - a) * terms.circ
        return {
            "scalar_zero": abs(self._sign(S, profile) * terms.deviation) <= slack,
            "pythagorean": abs(terms.circ - terms.plus) <= slack,
            "rho_equals_circ": abs(rho - terms.circ) <= slack * abs(a),
            "rho_equals_plus": abs(rho - terms.plus) <= slack * abs(a - 1.0),
        }

    def compare_pairs(self, S: EntropyStructure, pairs: Sequence[Tuple[Any, Any]],
                      a: Optional[float] = None, profile: Optional[ComparisonProfile] = None) -> List[Dict[str, Any]]:
        """One row of comparison quantities per pair."""
        profile = self.get_profile(S, profile)
        rows = []
        for index, (xi, eta) in enumerate(pairs):
            row: Dict[str, Any] = {"pair": index, "scalar_a": self.scalar_a(S, xi, eta, profile),
                                   "classification": self.classify_correlation(S, xi, eta, profile)}
            if a is not None:
                row["a"] = a
                row["rho_a"] = self.rho(S, a, xi, eta, profile)
            if profile.a_sigma_finite:
                row["rho_ca"] = self.canonical_rho(S, profile, xi, eta)
                row["scalar"] = self.canonical_scalar(S, profile, xi, eta)
                row["scalar_half"] = self.canonical_scalar(S, profile, xi, eta, "half")
                try:
                    row["correlation_r"] = self.correlation_r(S, xi, eta, profile)
                except DivisionByZeroEntropy:
                    row["correlation_r"] = None
            if not profile.xi.bounded:
                row["rho_infty"] = self.rho_infty(S, xi, eta, profile)
            rows.append(row)
        return rows

    # Proposition suites

    def _suite_coefficient(self, S: EntropyStructure, profile: ComparisonProfile,
                           a: Optional[float]) -> float:
        if a is None:
            a = profile.a_sigma if profile.a_sigma_finite and profile.a_sigma != 0.0 else 0.5
        if a == 0.0 or not profile.xi.contains(a, S.tolerance.slack(a)):
            raise OutOfXi(f"a={a} must lie in Ξ∖{{0}} = {profile.xi.to_list()}")
        return a

    def verify_scalar_properties(self, S: EntropyStructure, profile: Optional[ComparisonProfile] = None,
                                 sample: Optional[Sequence[Tuple[Any, Any]]] = None,
                                 a: Optional[float] = None,
                                 triples: Optional[Sequence[Tuple[Any, Any, Any]]] = None) -> ReportBundle:
        """Symmetry, nonnegativity, weak linearity, zero products and the bound family."""
        profile = self.get_profile(S, profile)
        a = self._suite_coefficient(S, profile, a)
        sigma = profile.sign
        tol = S.tolerance
        mode = CHECK_MODES["exhaustive"] if is_exhaustive(S) and sample is None else CHECK_MODES["sampled"]
        pairs = list(sample) if sample is not None else draw_pairs(S, self.sample_size, self.seed, self.partitions)
        terms = [self.pair_terms(S, x, y) for x, y in pairs]
        reversed_plus = [S.entropy(S.dotplus(y, x)) for x, y in pairs]
        canonical = profile.a_sigma if profile.a_sigma_finite else None
        xi_lo, xi_hi = profile.xi.lo, profile.xi.hi
        bundle = ReportBundle(name=f"{S.name}:scalar_properties",
                              details={"a": a, "a_sigma": canonical, "sign": sigma,
                                       "seed": self.seed, "rel_tol": tol.rel_tol})

        def report(law, predicate, cases=None, case_fn=None):
            cases = range(len(pairs)) if cases is None else cases
            for index in cases:
                ok, info = predicate(index)
                if not ok:
                    example = case_fn(index) if case_fn else tuple(pairs[index])
                    bundle.add(AxiomReport(law=law, passed=False, cases_checked=len(cases), mode=mode,
                                           counterexample=example, details=info))
                    return
            bundle.add(AxiomReport(law=law, passed=True, cases_checked=len(cases), mode=mode))

        def symmetry(i):
            t = terms[i]
            slack = self._slack(S, t)
            forward = sigma * t.deviation
            backward = sigma * (reversed_plus[i] - S.entropy(S.circ(pairs[i][1], pairs[i][0])))
            scalar_symmetric = abs(forward - backward) <= slack
            dotplus_symmetric = abs(t.plus - reversed_plus[i]) <= slack
            return scalar_symmetric == dotplus_symmetric, {"forward": forward, "backward": backward}

        report("symmetry_iff_dotplus_commutes", symmetry)

        diagonal_cases = [S.diagonal(x) for x, _ in pairs]

        def nonneg_self(i):
            left, right = diagonal_cases[i]
            t = self.pair_terms(S, left, right)
            value = sigma * t.deviation
            ok = value >= -self._slack(S, t)
            return ok, {"scalar_a_self": value}

        report("nonneg_self", nonneg_self, case_fn=lambda i: diagonal_cases[i])

        if S.hemi_associative:
            triple_cases = list(triples) if triples is not None else draw_triples(
                S, min(len(pairs), self.sample_size), self.seed + 2, self.partitions)

            def weak_linearity(i):
                x, y, z = triple_cases[i]
                lhs = self.scalar_a(S, S.dotplus(x, y), z, profile)
                rhs = (self.scalar_a(S, x, S.dotplus(y, z), profile) - self.scalar_a(S, x, y, profile)
                       + self.scalar_a(S, y, z, profile))
                scale = S.entropy(S.dotplus(S.dotplus(x, y), z)) + S.entropy(x) + S.entropy(y) + S.entropy(z)
                return abs(lhs - rhs) <= tol.slack(scale), {"lhs": lhs, "rhs": rhs}

            report("weak_linearity", weak_linearity, cases=range(len(triple_cases)),
                   case_fn=lambda i: tuple(triple_cases[i]))
        else:
            bundle.add(SkippedReport("weak_linearity", "∔ is not hemi-associative", mode))

        def zero_product(i):
            x = pairs[i][0]
            eps = S.neutral(x)
            if eps is None:
                return True, {}
            forward = self.scalar_a(S, x, eps, profile)
            backward = self.scalar_a(S, eps, x, profile)
            slack = tol.slack(S.entropy(x))
            return abs(forward) <= slack and abs(backward) <= slack, {"forward": forward, "backward": backward}

        report("zero_product", zero_product)

        def scalar_rho(i):
            x = pairs[i][0]
            eps = S.neutral(x)
            if eps is None:
                return True, {}
            t = self.pair_terms(S, x, eps)
            value = a * t.plus + (1.0 - a) * t.circ
            return tol.close(value, t.xi), {"rho": value, "entropy": t.xi}

        report("scalar_rho", scalar_rho)

        def bound_family(i):
            t = terms[i]
            d = t.deviation
            slack = self._slack(S, t)
            checks = {
                "cs0a": d >= (-t.circ / xi_hi if math.isfinite(xi_hi) else 0.0) - slack,
                "cs0c": d <= (t.plus / (1.0 - xi_lo) if math.isfinite(xi_lo) else 0.0) + slack,
            }
            if xi_lo != 0.0:
                checks["cs0b"] = d <= (-t.circ / xi_lo if math.isfinite(xi_lo) else 0.0) + slack
            if xi_hi != 1.0:
                checks["cs0aa"] = d >= (t.plus / (1.0 - xi_hi) if math.isfinite(xi_hi) else 0.0) - slack
            failed = sorted(k for k, v in checks.items() if not v)
            return not failed, {"failed_bounds": failed, "deviation": d}

        report("bound_family", bound_family)

        def correlation_bounds(i):
            t = terms[i]
            if t.circ <= tol.abs_tol or canonical is None:
                return True, {}
            r = abs(canonical) * sigma * t.deviation / t.circ
            ok = r <= 1.0 + tol.rel_tol
            if profile.m_G + profile.M_G >= 2.0:
                ok = ok and r >= -1.0 - tol.rel_tol
            return ok, {"r": r}

        report("correlation_bounds", correlation_bounds)

        if canonical is not None:
            def cs_a(i):
                t = terms[i]
                scalar = abs(canonical) * sigma * t.deviation
                return scalar <= t.circ + self._slack(S, t) * max(1.0, abs(canonical)), {"scalar": scalar}

            report("cs_a", cs_a)

            if not (0.0 <= canonical <= 1.0):
                def cs_b(i):
                    t = terms[i]
                    scalar = abs(canonical) * sigma * t.deviation
                    bound = canonical / (canonical - 1.0) * t.plus
                    return scalar <= bound + self._slack(S, t) * max(1.0, abs(canonical)), {
                        "scalar": scalar, "bound": bound}

                report("cs_b", cs_b)
            if canonical < 0.0:
                def cs_2(i):
                    t = terms[i]
                    scalar = abs(canonical) * sigma * t.deviation
                    bound = canonical / xi_hi * t.circ if math.isfinite(xi_hi) else 0.0
                    return scalar >= bound - self._slack(S, t) * max(1.0, abs(canonical)), {
                        "scalar": scalar, "bound": bound}

                report("cs_2", cs_2)

            def canonical_forms(i):
                x, y = pairs[i]
                first = self.canonical_rho(S, profile, x, y)
                if canonical == 0.0:
                    return True, {}
                second = self.canonical_rho_alternative(S, profile, x, y)
                return abs(first - second) <= self._slack(S, terms[i]) * max(1.0, abs(canonical)), {
                    "rhoopt": first, "rhoopt2": second}

            report("canonical_forms", canonical_forms)

            def recover(i):
                x, y = pairs[i]
                eps = S.neutral(x)
                if eps is None:
                    return True, {}
                recovered = self.recover_scalar_from_metric(S, profile, x, y, eps)
                direct = self.canonical_scalar(S, profile, x, y)
                scale = max(terms[i].circ, terms[i].plus) * max(1.0, abs(canonical))
                return abs(recovered - direct) <= tol.slack(scale), {"recovered": recovered, "direct": direct}

            report("recover_scalar", recover)

        if a not in (0.0, 1.0):
            def equivalence_chain(i):
                x, y = pairs[i]
                flags = self.uncorrelated_equivalences(S, a, x, y, profile)
                return len(set(flags.values())) == 1, flags

            report("equivalence_chain", equivalence_chain)

        def nonneg_rho(i):
            t = terms[i]
            values = {}
            for endpoint in (xi_lo, a, xi_hi):
                if math.isfinite(endpoint):
                    values[endpoint] = endpoint * t.plus + (1.0 - endpoint) * t.circ
            worst = min(values.values())
            return worst >= -self._slack(S, t) * max(1.0, *(abs(k) for k in values)), {"rho": values}

        report("rho_nonnegative", nonneg_rho)
        return bundle

    # Generalized Cauchy-Schwarz

    def _multiples(self, S: EntropyStructure, xi: Any, depth: int) -> List[Any]:
        """[1ξ, 2ξ, …, depth·ξ] by iterated ∔."""
        multiples = [xi]
        for _ in range(depth - 1):
            multiples.append(S.dotplus(multiples[-1], xi))
        return multiples

    def _c_series(self, S: EntropyStructure, elements: Sequence[Any], depth: int,
                  negate: bool = False) -> np.ndarray:
        series = np.zeros(depth)
        for xi in elements:
            base = S.entropy(xi)
            if base <= S.tolerance.abs_tol:
                continue
            start = S.negate_fn(xi) if negate else xi
            values = [S.entropy(m) / base for m in self._multiples(S, start, depth)]
            series = np.maximum(series, values)
        return series

    def _fit_growth(self, series: np.ndarray) -> Optional[Tuple[float, float]]:
        """Exponent a and constant c with c_m ≈ c·m^a over the tail of the prefix; None when c_m vanishes."""
        depth = len(series)
        half = max(depth // 2, 1)
        if depth < 1 or series[half - 1] <= 0.0 or series[-1] <= 0.0:
            return None
        exponent = math.log(series[-1] / series[half - 1]) / math.log(depth / half) if depth > 1 else 0.0
        tail = np.arange(half, depth + 1)
        normalized = series[half - 1:] / tail ** exponent
        spread = (normalized.max() - normalized.min()) / normalized.max()
        if spread > CS_STABILITY_TOLERANCE:
            raise DepthInsufficient(f"c_m/m^a varies by {spread:.3g} over m ∈ [{half}, {depth}]")
        return exponent, float(normalized[-1])

    def verify_cauchy_schwarz(self, S: EntropyStructure, profile: Optional[ComparisonProfile] = None,
                              sample: Optional[Sequence[Tuple[Any, Any]]] = None,
                              depth: int = DEFAULT_CS_DEPTH) -> ReportBundle:
        """c_m series, S₊/S₋ estimates, the bounds −σ⟨ξ,η⟩_a ≤ 2√(⟦ξ⟧⟦η⟧)/S₊ and σ⟨ξ,η⟩_a ≤ 2√(⟦ξ⟧⟦η⟧)/S₋."""
        profile = self.get_profile(S, profile)
        bundle = ReportBundle(name=f"{S.name}:cauchy_schwarz", details={"depth": depth, "seed": self.seed})
        mode = CHECK_MODES["exhaustive"] if is_exhaustive(S) and sample is None else CHECK_MODES["sampled"]
        if not S.hemi_associative:
            bundle.add(SkippedReport("cauchy_schwarz_plus", "∔ is not hemi-associative", mode))
            return bundle
        sigma = profile.sign
        pairs = list(sample) if sample is not None else draw_pairs(S, self.sample_size, self.seed, self.partitions)
        elements = []
        for x, y in pairs:
            elements.extend((x, y))
            if len(elements) >= 2 * CS_PAIR_LIMIT:
                break
        c_plus = self._c_series(S, elements, depth)
        growth = self._fit_growth(c_plus)
        if growth is None:
            logger.warning("%s: c_m vanishes on the sample, no bound to estimate", S.name)
            bundle.details.update({
                "c_m": c_plus.tolist(),
                "growth_exponent": None,
                "growth_constant": None,
                "growth_condition_satisfied": None,
                "growth_vacuous": True,
            })
            bundle.add(SkippedReport("cauchy_schwarz_plus", "c_m vanishes on the sample", mode))
            if S.negate_fn is not None:
                bundle.add(SkippedReport("cauchy_schwarz_minus", "c_m vanishes on the sample", mode))
            return bundle
        exponent, constant = growth
        bundle.details.update({
            "c_m": c_plus.tolist(),
            "growth_exponent": exponent,
            "growth_constant": constant,
            "growth_condition_satisfied": abs(exponent) > S.tolerance.rel_tol,
        })
        if abs(exponent) <= S.tolerance.rel_tol:
            logger.warning("%s: c_m does not grow; the sufficient growth condition is not implied", S.name)
        tail = sorted({max(1, depth // 4), max(1, depth // 2), max(1, 3 * depth // 4), depth})
        terms = [self.pair_terms(S, x, y) for x, y in pairs]

        def estimate(side: int, c_left: np.ndarray, c_right: np.ndarray) -> Optional[float]:
            ratios = []
            used = 0
            for (x, y), t in zip(pairs, terms):
                value = sigma * t.deviation
                if side * value <= self._slack(S, t) or used >= CS_PAIR_LIMIT:
                    continue
                used += 1
                right_start = S.negate_fn(y) if side > 0 else y
                xs = self._multiples(S, x, depth)
                ys = self._multiples(S, right_start, depth)
                best = math.inf
                for m in tail:
                    for n in tail:
                        t_mn = self.pair_terms(S, xs[m - 1], ys[n - 1])
                        scalar_mn = sigma * t_mn.deviation
                        # ⟨ξ,η⟩_a itself carries the sign flip on the group side
                        numerator = -scalar_mn if side > 0 else scalar_mn
                        ratio = numerator / (math.sqrt(c_left[m - 1] * c_right[n - 1]) * value)
                        best = min(best, ratio)
                ratios.append(best)
            return min(ratios) if ratios else None

        s_plus = estimate(-1, c_plus, c_plus)
        s_minus = None
        if S.negate_fn is not None:
            c_minus = self._c_series(S, elements, depth, negate=True)
            bundle.details["c_minus_m"] = c_minus.tolist()
            s_minus = estimate(+1, c_plus, c_minus)
        bundle.details.update({"S_plus": s_plus, "S_minus": s_minus,
                               "S_plus_vacuous": s_plus is None, "S_minus_vacuous": s_minus is None})

        def bound_report(law, estimate_value, side):
            if estimate_value is None or estimate_value <= 0.0:
                if estimate_value is None:
                    logger.warning("%s: %s estimate is vacuous, bound skipped", S.name, law)
                bundle.add(SkippedReport(law, "no qualifying pair" if estimate_value is None
                                         else "non-positive estimate", mode))
                return
            for (x, y), t in zip(pairs, terms):
                lhs = side * sigma * t.deviation
                rhs = 2.0 * math.sqrt(t.xi * t.eta) / estimate_value
                if lhs > rhs + self._slack(S, t):
                    bundle.add(AxiomReport(law=law, passed=False, cases_checked=len(pairs), mode=mode,
                                           counterexample=(x, y), details={"lhs": lhs, "rhs": rhs}))
                    return
            bundle.add(AxiomReport(law=law, passed=True, cases_checked=len(pairs), mode=mode,
                                   details={"estimate": estimate_value}))

        bound_report("cauchy_schwarz_plus", s_plus, -1)
        if S.negate_fn is not None:
            bound_report("cauchy_schwarz_minus", s_minus, +1)
        if profile.a_sigma_finite:
            a_abs = abs(profile.a_sigma)
            upper_side, lower_side = (s_minus, s_plus) if sigma > 0 else (s_plus, s_minus)
            bundle.details["pearson_bounds"] = [
                -a_abs / lower_side if lower_side else None,
                a_abs / upper_side if upper_side else None,
            ]
        return bundle

    # Scaling laws

    def verify_scaling_laws(self, S: EntropyStructure, profile: Optional[ComparisonProfile] = None,
                            sample: Optional[Sequence[Tuple[Any, Any]]] = None,
                            invariant_element: Any = None) -> ReportBundle:
        """⟦e⟧ρ_a(ξν,ην) = ⟦ν⟧ρ_a(ξ,η), its scalar-product twin, and the self-distance laws."""
        profile = self.get_profile(S, profile)
        e = invariant_element if invariant_element is not None else S.invariant_element
        bundle = ReportBundle(name=f"{S.name}:scaling_laws")
        mode = CHECK_MODES["exhaustive"] if is_exhaustive(S) and sample is None else CHECK_MODES["sampled"]
        if e is None:
            for law in ("rho_scaling", "scalar_scaling", "self_distance", "self_scalar_zero"):
                bundle.add(SkippedReport(law, "no left entropy-invariant element", mode))
            return bundle
        tol = S.tolerance
        pairs = list(sample) if sample is not None else draw_pairs(S, self.sample_size, self.seed, self.partitions)
        e_entropy = S.entropy(e)
        e_double = S.entropy(S.dotplus(e, e))
        a = profile.a_sigma if profile.a_sigma_finite else 0.5
        bundle.details.update({"e_entropy": e_entropy, "a": a})

        def run(law, predicate):
            for index, (x, y) in enumerate(pairs):
                ok, info = predicate(index, x, y)
                if not ok:
                    bundle.add(AxiomReport(law=law, passed=False, cases_checked=len(pairs), mode=mode,
                                           counterexample=(x, y, pairs[-1 - index][0]), details=info))
                    return
            bundle.add(AxiomReport(law=law, passed=True, cases_checked=len(pairs), mode=mode))

        if S.has_scale:
            def rho_scaling(index, x, y):
                nu = pairs[-1 - index][0]
                scaled = self.pair_terms(S, S.scale(x, nu), S.scale(y, nu))
                plain = self.pair_terms(S, x, y)
                lhs = e_entropy * (a * scaled.plus + (1 - a) * scaled.circ)
                rhs = S.entropy(nu) * (a * plain.plus + (1 - a) * plain.circ)
                return abs(lhs - rhs) <= tol.slack(e_entropy * scaled.plus, e_entropy * scaled.circ) * max(1, abs(a)), {
                    "lhs": lhs, "rhs": rhs}

            def scalar_scaling(index, x, y):
                nu = pairs[-1 - index][0]
                scaled = self.pair_terms(S, S.scale(x, nu), S.scale(y, nu))
                plain = self.pair_terms(S, x, y)
                lhs = e_entropy * scaled.deviation
                rhs = S.entropy(nu) * plain.deviation
                return abs(lhs - rhs) <= tol.slack(e_entropy * scaled.plus, e_entropy * scaled.circ), {
                    "lhs": lhs, "rhs": rhs}

            run("rho_scaling", rho_scaling)
            run("scalar_scaling", scalar_scaling)
        else:
            bundle.add(SkippedReport("rho_scaling", "no scale operator", mode))
            bundle.add(SkippedReport("scalar_scaling", "no scale operator", mode))

        if tol.close(e_double, 2.0 * e_entropy):
            bundle.add(SkippedReport("self_distance", "⟦e∔e⟧ = 2⟦e⟧", mode))
            bundle.add(SkippedReport("self_scalar_zero", "⟦e∔e⟧ = 2⟦e⟧", mode))
            return bundle
        a_self = 1.0 / (1.0 - e_double / (2.0 * e_entropy))
        bundle.details["a_self_distance"] = a_self

        def self_distance(index, x, y):
            left, right = S.diagonal(x)
            t = self.pair_terms(S, left, right)
            value = a_self * t.plus + (1 - a_self) * t.circ
            return abs(value) <= self._slack(S, t) * max(1.0, abs(a_self)), {"rho": value}

        def self_scalar_zero(index, x, y):
            left, right = S.diagonal(x)
            t = self.pair_terms(S, left, right)
            vanishes = abs(t.deviation) <= self._slack(S, t)
            return vanishes == S.is_zero(x), {"scalar_a_self": profile.sign * t.deviation}

        run("self_distance", self_distance)
        run("self_scalar_zero", self_scalar_zero)
        return bundle

    def run_suite(self, S: EntropyStructure, profile: Optional[ComparisonProfile] = None) -> ReportBundle:
        """Every comparison-level verification merged into one bundle."""
        profile = self.get_profile(S, profile)
        merged = ReportBundle(name=f"{S.name}:comparison", details={"profile": profile.to_dict()})
        for bundle in (self.verify_scalar_properties(S, profile),
                       self.verify_scaling_laws(S, profile)):
            for report in bundle.reports.values():
                merged.add(report)
        if S.hemi_associative:
            try:
                for report in self.verify_cauchy_schwarz(S, profile).reports.values():
                    merged.add(report)
            except (DepthInsufficient, RangeError) as e:
                merged.add(SkippedReport("cauchy_schwarz_plus", str(e), CHECK_MODES["sampled"]))
        return merged
