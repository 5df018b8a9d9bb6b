"""
Constructing entropies from kernels and scoring rules

An entropy is recovered from a kernel ⟨·,·⟩ on a commensurable presentation through the
consistency constant M_ξ, extended over finitely generated lattices, and translated to and
from proper scoring rules.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.constants import (
    CHECK_MODES, CONSISTENCY_DIVERGENCE_TOLERANCE, DEFAULT_CS_DEPTH, DEFAULT_PARTITIONS,
    DEFAULT_SAMPLE_SIZE, DEFAULT_SEED, EMBED_MIN_MARGIN, EMBED_RATIO_CAP, EMBED_REL_MARGIN,
    SIGN_NEGATIVE, SIGN_POSITIVE,
)
from src.models.construction_types import (
    ConsistencyResult, EmbeddedStructure, ExtensionResult, KernelSpec, LatticePresentation,
    ObstructionReport, Relation, ScoringRule,
)
from src.models.errors import (
    BaseBelowM, ConfigError, DomainError, InsufficientSeries, NoRelations, NotInA, SupUnbounded,
)
from src.models.structure import AxiomReport, EntropyStructure, FormalPair, ReportBundle, Tolerance
from src.utils.sampling import draw_elements, draw_pairs, partition_generators, partition_sizes

logger = logging.getLogger(__name__)


# Kernel presentations

def euclidean_kernel(norm_sq: float = 1.0, kernel_sign: int = SIGN_POSITIVE) -> KernelSpec:
    """⟨rξ, sξ⟩ = rs‖ξ‖² on the rational multiples of one vector."""
    if norm_sq <= 0:
        raise ConfigError(f"‖ξ‖² must be positive, got {norm_sq}")
    return KernelSpec(
        kernel_sign=kernel_sign,
        base=Fraction(1),
        kernel=lambda r, s: r * s * norm_sq,
        multiply=lambda k, r: k * r,
        name="euclidean_kernel",
    )


def max_kernel(alpha: float = 1.0, xi: float = 1.0, kernel_sign: int = SIGN_NEGATIVE) -> KernelSpec:
    """⟨x, y⟩ = (x ∧ y)^α on [0, ∞) with ∔ = ∨, presented on the scale factors r of rξ.

    ∨ is idempotent, so ⟦η⟧ = ⟦η∨η⟧ forces ⟦η⟧ = −e⟨η, η⟩ = (rξ)^α under e = −1.
    """
    if alpha <= 0 or xi <= 0:
        raise ConfigError("alpha and ξ must be positive")
    return KernelSpec(
        kernel_sign=kernel_sign,
        base=Fraction(1),
        kernel=lambda r, s: (float(min(r, s)) * xi) ** alpha,
        multiply=lambda k, r: r,
        dotplus=max,
        idempotent=True,
        name="max_kernel",
    )


def rational_lattice(depth: int) -> List[Relation]:
    """mη = nξ for every reduced n/m with m, n ≤ depth."""
    if depth < 1:
        raise ConfigError(f"depth must be positive, got {depth}")
    return [
        Relation(m=m, n=n, label=f"{n}/{m}", value=Fraction(n, m))
        for m in range(1, depth + 1) for n in range(1, depth + 1) if math.gcd(m, n) == 1
    ]


def entropy_kernel(S: EntropyStructure, kernel_sign: int):
    """⟨ν, η⟩ = e(⟦ν∔η⟧ − ⟦ν⟧ − ⟦η⟧), the kernel an entropy induces under sign e."""

    def kernel(nu, eta):
        return kernel_sign * (S.entropy(S.dotplus(nu, eta)) - S.entropy(nu) - S.entropy(eta))

    return kernel


def kernel_spec_from_structure(S: EntropyStructure, xi: Any, kernel_sign: int) -> KernelSpec:
    """One-generator presentation of a structure's induced kernel at ξ; rξ is scalar multiplication."""
    return KernelSpec(
        kernel_sign=kernel_sign,
        base=xi,
        kernel=entropy_kernel(S, kernel_sign),
        multiply=lambda k, x: S.multiple(k, x),
        fraction_of=lambda r, x: float(r) * x,
        dotplus=S.dotplus,
        name=f"{S.name}_kernel",
    )


# Scoring rules

def squared_error_rule(low: float = -1.0, high: float = 1.0, omega: float = 0.0) -> ScoringRule:
    """S(η, ξ) = (η − ξ)² on [low, high].

    Half of the sampled pairs are reflections (x, low + high − x), which attain the ratio
    supremum when ω is the midpoint.
    """
    if not low < high:
        raise ConfigError("low must be below high")
    if not low <= omega <= high:
        raise ConfigError("ω must lie in [low, high]")

    def sampler(rng, n):
        return [float(v) for v in rng.uniform(low, high, size=n)]

    def pair_sampler(rng, n):
        half = n // 2
        x = rng.uniform(low, high, size=n)
        y = rng.uniform(low, high, size=n)
        y[:half] = low + high - x[:half]
        return [(float(a), float(b)) for a, b in zip(x, y)]

    return ScoringRule(
        name="squared_error",
        evaluator=lambda eta, xi: (eta - xi) ** 2,
        omega=float(omega),
        sampler=sampler,
        pair_sampler=pair_sampler,
        domain=f"[{low}, {high}]",
    )


def _structure_sampler(S: EntropyStructure):
    if S.sampler is not None:
        return S.sampler
    elements = S.elements()

    def sampler(rng, n):
        return [elements[i] for i in rng.integers(0, len(elements), size=n)]

    return sampler


class ConstructionProcessor:
    """Processor for kernel-based reconstruction and the scoring-rule correspondence."""

    def __init__(self, sample_size: int = DEFAULT_SAMPLE_SIZE, seed: int = DEFAULT_SEED,
                 partitions: int = DEFAULT_PARTITIONS, depth: int = DEFAULT_CS_DEPTH,
                 consistency_tolerance: float = CONSISTENCY_DIVERGENCE_TOLERANCE,
                 ratio_cap: float = EMBED_RATIO_CAP, tolerance: Optional[Tolerance] = None):
        self.sample_size = sample_size
        self.seed = seed
        self.partitions = partitions
        self.depth = depth
        self.consistency_tolerance = consistency_tolerance
        self.ratio_cap = ratio_cap
        self.tolerance = tolerance or Tolerance()
        self._consistency_cache: Dict[int, Tuple[KernelSpec, ConsistencyResult]] = {}

    # Series

    def xi_series(self, spec: KernelSpec, length: int) -> np.ndarray:
        """⟨kξ, ξ⟩ for k = 1, …, length."""
        if length <= 0:
            return np.zeros(0)
        if len(spec.series) >= length:
            return np.asarray(spec.series[:length], dtype=float)
        if spec.kernel is None:
            raise InsufficientSeries(
                f"{spec.name}: ⟨kξ,ξ⟩ known for k ≤ {len(spec.series)}, {length} needed")
        return np.array([spec.pair(spec.k_multiple(k, spec.base), spec.base) for k in range(1, length + 1)])

    def target_element(self, spec: KernelSpec, relation: Relation) -> Any:
        if isinstance(relation.value, Fraction):
            return spec.element_at(relation.value)
        if relation.value is None:
            return spec.element_at(Fraction(relation.n, relation.m))
        return relation.value

    def eta_series(self, spec: KernelSpec, relation: Relation, length: int) -> np.ndarray:
        """⟨kη, η⟩ for k = 1, …, length."""
        if length <= 0:
            return np.zeros(0)
        if relation.series is not None and len(relation.series) >= length:
            return np.asarray(relation.series[:length], dtype=float)
        if spec.kernel is None:
            raise InsufficientSeries(f"{spec.name}: relation {relation.label} needs {length} series terms")
        eta = self.target_element(spec, relation)
        return np.array([spec.pair(spec.k_multiple(k, eta), eta) for k in range(1, length + 1)])

    def kernel_sums(self, spec: KernelSpec, i: int, j: int) -> float:
        """⟨iξ, jξ⟩ from the telescoping sums of ⟨kξ, ξ⟩."""
        if i < 1 or j < 1:
            raise DomainError("i and j must be positive")
        s = self.xi_series(spec, i + j - 1)
        return float(s[:i + j - 1].sum() - s[:j - 1].sum() - s[:i - 1].sum())

    def kernel_partial_sums(self, spec: KernelSpec, i: int, m: int) -> float:
        """Σ_{n<m} ⟨niξ, iξ⟩ = Σ_{k<mi} ⟨kξ,ξ⟩ − m Σ_{k<i} ⟨kξ,ξ⟩."""
        if i < 1 or m < 1:
            raise DomainError("i and m must be positive")
        s = self.xi_series(spec, max(m * i - 1, i - 1, 0))
        return float(s[:m * i - 1].sum() - m * s[:i - 1].sum())

    # Consistency

    def _relation_value(self, spec: KernelSpec, relation: Relation, xi_cumsum: np.ndarray) -> float:
        """(1/n)(Σ_{k<m}⟨kη,η⟩ − Σ_{k<n}⟨kξ,ξ⟩), before the sign e."""
        eta_sum = float(self.eta_series(spec, relation, relation.m - 1).sum())
        xi_sum = float(xi_cumsum[relation.n - 2]) if relation.n > 1 else 0.0
        return (eta_sum - xi_sum) / relation.n

    def consistency_M(self, spec: KernelSpec, depth: Optional[int] = None,
                      extra: Sequence[Relation] = ()) -> ConsistencyResult:
        """M_ξ = sup_e e(…) over the relations, per sign, with the feasible signs.

        Without explicit relations a kernel callable is required; the rational lattice up to
        depth is generated and the supremum counts as converged when it moves by less than
        the consistency tolerance between depth/2 and depth. A converged supremum approaches
        its limit like 1/depth, so the reported bound is 2·sup(depth) − sup(depth/2).
        """
        relations = list(spec.relations) + list(extra)
        generated = False
        if not relations:
            if spec.kernel is None:
                raise NoRelations(f"{spec.name} carries no commensurability relations")
            depth = depth or self.depth
            relations = rational_lattice(depth)
            generated = True
        longest = max(r.n for r in relations)
        xi_cumsum = np.cumsum(self.xi_series(spec, longest - 1)) if longest > 1 else np.zeros(0)

        values = np.array([self._relation_value(spec, r, xi_cumsum) for r in relations])
        bounds: Dict[int, float] = {}
        feasible: List[int] = []
        sup_at_depth: Dict[int, float] = {}
        half = np.array([max(r.m, r.n) <= (depth or 0) // 2 for r in relations]) if generated else None
        for sign in (SIGN_NEGATIVE, SIGN_POSITIVE):
            signed = sign * values
            bound = float(signed.max())
            if generated and half.any():
                sup_at_depth[sign] = bound
                coarse = float(signed[half].max())
                if bound - coarse > self.consistency_tolerance * max(abs(bound), self.tolerance.abs_tol):
                    logger.debug("%s: sup for e=%+d still growing (%.6g → %.6g)", spec.name, sign, coarse, bound)
                    bound = math.inf
                else:
                    bound = 2.0 * bound - coarse
            bounds[sign] = bound
            if 0.0 < bound < math.inf:
                feasible.append(sign)
        result = ConsistencyResult(bounds=bounds, feasible_signs=feasible, kernel_sign=spec.kernel_sign,
                                   relations_used=len(relations), depth=depth if generated else None,
                                   sup_at_depth=sup_at_depth)
        logger.info("%s: M_ξ=%s over %d relations, feasible signs %s", spec.name, result.M_xi,
                    len(relations), feasible)
        return result

    def _cached_consistency(self, spec: KernelSpec, relation: Relation) -> ConsistencyResult:
        cached = self._consistency_cache.get(id(spec))
        if cached is not None and cached[0] is spec:
            return cached[1]
        extra = [relation] if not spec.relations and spec.kernel is None else []
        result = self.consistency_M(spec, extra=extra)
        if not extra:
            self._consistency_cache[id(spec)] = (spec, result)
        return result

    # Reconstruction

    def reconstruct_entropy(self, spec: KernelSpec, base_entropy: float, relation: Relation,
                            consistency: Optional[ConsistencyResult] = None,
                            check_bound: bool = True) -> float:
        """⟦η⟧ = (1/m)(n⟦ξ⟧ + eΣ_{k<n}⟨kξ,ξ⟧ − eΣ_{k<m}⟨kη,η⟩) for mη = nξ.

        An idempotent ∔ pins every entropy to −e⟨η, η⟩, the base entropy included.
        """
        if check_bound:
            consistency = consistency or self._cached_consistency(spec, relation)
            M = consistency.M_xi
            if not self.tolerance.leq(M, base_entropy):
                raise BaseBelowM(f"{spec.name}: base entropy {base_entropy} is below M_ξ = {M}")
        e = spec.kernel_sign
        if spec.idempotent:
            forced = -e * spec.pair(spec.base, spec.base)
            if not self.tolerance.close(base_entropy, forced):
                raise DomainError(f"{spec.name}: ∔ is idempotent, so ⟦ξ⟧ must equal {forced}, got {base_entropy}")
            eta = self.target_element(spec, relation)
            value = -e * spec.pair(eta, eta)
            if value < -self.tolerance.slack(value):
                raise DomainError(f"{spec.name}: sign e={e:+d} forces a negative entropy at {relation.label}")
            return max(value, 0.0)
        xi_sum = float(self.xi_series(spec, relation.n - 1).sum())
        eta_sum = float(self.eta_series(spec, relation, relation.m - 1).sum())
        value = (relation.n * base_entropy + e * xi_sum - e * eta_sum) / relation.m
        if value < -self.tolerance.slack(value, base_entropy):
            raise BaseBelowM(f"{spec.name}: relation {relation.label} forces a base entropy above {base_entropy}")
        return max(value, 0.0)

    def reconstruct_multiple(self, spec: KernelSpec, base_entropy: float, r: Fraction,
                             consistency: Optional[ConsistencyResult] = None) -> float:
        """⟦rξ⟧ for a positive rational r."""
        r = Fraction(r)
        if r <= 0:
            raise DomainError(f"r must be positive, got {r}")
        relation = Relation(m=r.denominator, n=r.numerator, label=str(r), value=r)
        return self.reconstruct_entropy(spec, base_entropy, relation, consistency)

    def reconstruct_table(self, spec: KernelSpec, base_entropy: float,
                          fractions: Sequence[Fraction]) -> Dict[Fraction, float]:
        consistency = self._cached_consistency(spec, Relation(1, 1, "1"))
        return {Fraction(r): self.reconstruct_multiple(spec, base_entropy, r, consistency) for r in fractions}

    def verify_reconstruction(self, spec: KernelSpec, table: Dict[Fraction, float]) -> AxiomReport:
        """e⟨ν,η⟩ = ⟦ν∔η⟧ − ⟦ν⟧ − ⟦η⟧ on every pair of the table whose sum is tabulated."""
        checked = 0
        for r, s in itertools.product(sorted(table), repeat=2):
            total = spec.combine(spec.element_at(r), spec.element_at(s))
            key = total / spec.base if isinstance(spec.base, (Fraction, int)) else None
            if key not in table:
                continue
            checked += 1
            lhs = spec.kernel_sign * spec.pair(spec.element_at(r), spec.element_at(s))
            rhs = table[key] - table[r] - table[s]
            if not self.tolerance.close(lhs, rhs):
                return AxiomReport(law="kernel_identity", passed=False, cases_checked=checked,
                                   mode=CHECK_MODES["exhaustive"], counterexample=(str(r), str(s)),
                                   details={"lhs": lhs, "rhs": rhs})
        return AxiomReport(law="kernel_identity", passed=True, cases_checked=checked,
                           mode=CHECK_MODES["exhaustive"])

    # Finitely generated lattices

    def _class_entropies(self, presentation: LatticePresentation) -> Dict[Tuple[int, ...], float]:
        e = presentation.kernel_sign
        entropies: Dict[Tuple[int, ...], float] = {}
        for i in range(presentation.rank):
            generator = presentation.generator(i)
            base = (presentation.base_entropies[i] if presentation.base_entropies is not None
                    else max(presentation.gram[i, i] / 2.0, 0.0))
            spec = KernelSpec(kernel_sign=e, base=generator, kernel=presentation.kernel,
                              multiply=lambda k, x: tuple(k * v for v in x), dotplus=presentation.add,
                              name=f"class_{i}")
            for c in range(1, presentation.class_size + 1):
                element = tuple(c * v for v in generator)
                relation = Relation(m=1, n=c, label=f"{c}e{i}", value=element)
                entropies[element] = self.reconstruct_entropy(spec, base, relation, check_bound=False)
        return entropies

    def extend_entropy(self, presentation: LatticePresentation) -> Union[ExtensionResult, ObstructionReport]:
        """Extend the per-class entropies to every word of length ≤ max_length.

        A word a₁…a_ℓ is assigned Σ⟦a_i⟧ + eΣ_{i<ℓ}⟨a_i, a_{i+1}+…+a_ℓ⟩. Negative values and
        words with equal sums but different values are returned as obstructions.
        """
        e = presentation.kernel_sign
        zero = presentation.zero()
        for i in range(presentation.rank):
            if presentation.gram[i, i] == 0.0:
                generator = presentation.generator(i)
                for j in range(presentation.rank):
                    other = presentation.generator(j)
                    if presentation.kernel(generator, other) != 0.0 or presentation.kernel(other, generator) != 0.0:
                        return ObstructionReport(
                            condition="zero_class",
                            message=f"generator {i} has ⟨ξ,ξ⟩ = 0 but pairs nontrivially with generator {j}",
                            witnesses=[[list(generator)], [list(other)]])

        try:
            classes = self._class_entropies(presentation)
        except BaseBelowM as exc:
            return ObstructionReport(condition="a>0", message=str(exc))
        letters = sorted(classes)

        table: Dict[Tuple[int, ...], float] = {zero: 0.0}
        first_word: Dict[Tuple[int, ...], Tuple[Tuple[int, ...], ...]] = {zero: ()}
        words = 0
        for length in range(1, presentation.max_length + 1):
            for word in itertools.product(letters, repeat=length):
                words += 1
                value = sum(classes[a] for a in word)
                suffix = zero
                for index in range(length - 1, 0, -1):
                    suffix = presentation.add(word[index], suffix)
                    value += e * presentation.kernel(word[index - 1], suffix)
                total = presentation.add(word[0], suffix) if length > 1 else word[0]
                if value < -self.tolerance.slack(value):
                    logger.info("extension obstructed: negative value %.6g at %s", value, word)
                    return ObstructionReport(condition="a>0", message="a word has negative entropy",
                                             witnesses=[[list(a) for a in word]], values=[value])
                if total in table and not self.tolerance.close(table[total], value):
                    logger.info("extension obstructed: %s and %s disagree", first_word[total], word)
                    return ObstructionReport(
                        condition="a=b", message="two words with equal sums carry different entropies",
                        witnesses=[[list(a) for a in first_word[total]], [list(a) for a in word]],
                        values=[table[total], value])
                if total not in table:
                    table[total] = value
                    first_word[total] = word

        verified = 0
        for x, y in itertools.product(sorted(table), repeat=2):
            total = presentation.add(x, y)
            if total not in table:
                continue
            verified += 1
            lhs = e * presentation.kernel(x, y)
            rhs = table[total] - table[x] - table[y]
            if not self.tolerance.close(lhs, rhs):
                return ObstructionReport(condition="kernel_identity",
                                         message="e⟨ν,η⟩ differs from ⟦ν∔η⟧ − ⟦ν⟧ − ⟦η⟧",
                                         witnesses=[[list(x)], [list(y)]], values=[lhs, rhs])
        return ExtensionResult(table=table, words_checked=words, verified_pairs=verified, kernel_sign=e)

    # Kernel identities on structures

    def verify_kernel_identities(self, S: EntropyStructure, kernel_sign: int,
                                 multiples: int = 4) -> ReportBundle:
        """Telescoping, exchange and ∔-sum identities of the induced kernel on sampled tuples."""
        kernel = entropy_kernel(S, kernel_sign)
        tol = S.tolerance
        n = min(self.sample_size, 500)
        elements = draw_elements(S, n, self.seed, self.partitions)
        quadruples = [tuple(elements[(i + k) % len(elements)] for k in range(4)) for i in range(len(elements))]
        mode = CHECK_MODES["sampled"]
        bundle = ReportBundle(name=f"{S.name}_kernel_identities")

        def run(law, cases, predicate):
            for index, case in enumerate(cases):
                lhs, rhs = predicate(case)
                if not tol.close(lhs, rhs):
                    bundle.add(AxiomReport(law=law, passed=False, cases_checked=len(cases), mode=mode,
                                           counterexample=tuple(case), details={"lhs": lhs, "rhs": rhs,
                                                                                "case_index": index}))
                    return
            bundle.add(AxiomReport(law=law, passed=True, cases_checked=len(cases), mode=mode))

        def telescoping(case):
            xi, i, j = case
            lhs = kernel(S.multiple(i, xi), S.multiple(j, xi))
            series = [kernel(S.multiple(k, xi), xi) for k in range(1, i + j)]
            return lhs, sum(series) - sum(series[:j - 1]) - sum(series[:i - 1])

        def exchange(case):
            xi, eta, lam, nu = case
            lhs = kernel(S.dotplus(xi, eta), S.dotplus(lam, nu))
            rhs = (kernel(S.dotplus(xi, lam), S.dotplus(eta, nu)) - kernel(xi, eta) + kernel(xi, lam)
                   + kernel(eta, nu) - kernel(lam, nu) + kernel(eta, lam) - kernel(lam, eta))
            return lhs, rhs

        def sum_of_pair(case):
            xi, eta, m = case
            both = S.dotplus(xi, eta)
            lhs = sum(kernel(S.multiple(k, both), both) for k in range(1, m))
            rhs = (kernel(S.multiple(m, xi), S.multiple(m, eta)) - m * kernel(xi, eta)
                   + sum(kernel(S.multiple(k, eta), eta) for k in range(1, m))
                   + sum(kernel(S.multiple(k, xi), xi) for k in range(1, m)))
            return lhs, rhs

        ij = [(i, j) for i in range(1, multiples + 1) for j in range(1, multiples + 1)]
        run("scalarsum_telescoping",
            [(elements[t % len(elements)],) + ij[t % len(ij)] for t in range(len(elements))], telescoping)
        run("scalarsum_exchange", quadruples, exchange)
        run("sum_of_pair_multiples",
            [(q[0], q[1], 2 + t % (multiples - 1)) for t, q in enumerate(quadruples)], sum_of_pair)
        return bundle

    # Scoring rules

    def scoring_rule_from_structure(self, S: EntropyStructure, a: float,
                                    pairs: Optional[Sequence[Tuple[Any, Any]]] = None) -> ScoringRule:
        """S(η,ξ) = r_a(η,ξ) − r_a(ξ,ξ) with r_a(η,ξ) = a⟦η∔ξ⟧ + (1−a)(⟦ξ⟧+⟦η⟧).

        Membership of a in A is checked on the sample, together with non-constancy.
        """

        def r(eta, xi):
            return a * S.entropy(S.dotplus(eta, xi)) + (1.0 - a) * (S.entropy(xi) + S.entropy(eta))

        def evaluator(eta, xi):
            return r(eta, xi) - r(xi, xi)

        pairs = list(pairs) if pairs is not None else draw_pairs(S, self.sample_size, self.seed, self.partitions)
        constant = True
        for eta, xi in pairs:
            value = evaluator(eta, xi)
            if value < -S.tolerance.slack(r(eta, xi), r(xi, xi)):
                raise NotInA(f"a={a} violates the membership inequality for {S.name}", witness=(eta, xi))
            if value > S.tolerance.slack(value):
                constant = False
        if constant:
            raise NotInA(f"a={a} yields a constant rule on {S.name}")

        omega = S.neutral(pairs[0][0] if pairs else None)
        if omega is None:
            raise ConfigError(f"{S.name} designates no deterministic element to serve as ω")
        sampler = _structure_sampler(S)
        if S.pair_sampler is not None:
            pair_sampler = S.pair_sampler
        else:
            def pair_sampler(rng, n):
                items = sampler(rng, 2 * n)
                return list(zip(items[:n], items[n:]))
        logger.info("%s: scoring rule at a=%s checked on %d pairs", S.name, a, len(pairs))
        return ScoringRule(name=f"{S.name}_a{a:g}", evaluator=evaluator, omega=omega, sampler=sampler,
                           pair_sampler=pair_sampler, domain=S.name)

    def rule_pairs(self, rule: ScoringRule, n: Optional[int] = None) -> List[Tuple[Any, Any]]:
        """Seeded pairs from the rule's pair sampler, or from independent element draws."""
        n = n or self.sample_size
        drawn: List[Tuple[Any, Any]] = []
        partitions = max(1, min(self.partitions, n))
        for rng, size in zip(partition_generators(self.seed, partitions), partition_sizes(n, partitions)):
            if not size:
                continue
            if rule.pair_sampler is not None:
                drawn.extend(rule.pair_sampler(rng, size))
            else:
                items = rule.sampler(rng, 2 * size)
                drawn.extend(zip(items[:size], items[size:]))
        return drawn

    def ratio_sup(self, rule: ScoringRule, pairs: Sequence[Tuple[Any, Any]]) -> float:
        """sup S(η,ξ) / (S(ω,η) + S(ω,ξ)) over pairs with S(η,ξ) > 0."""
        best = 0.0
        for eta, xi in pairs:
            value = rule(eta, xi)
            if value <= self.tolerance.slack(value):
                continue
            denominator = rule(rule.omega, eta) + rule(rule.omega, xi)
            if denominator <= self.tolerance.abs_tol:
                raise SupUnbounded(f"{rule.name}: S(ω,η) + S(ω,ξ) vanishes while S(η,ξ) = {value}")
            best = max(best, value / denominator)
            if best > self.ratio_cap:
                raise SupUnbounded(f"{rule.name}: ratio exceeds the cap {self.ratio_cap}")
        return best

    def embed_scoring_rule(self, rule: ScoringRule,
                           pairs: Optional[Sequence[Tuple[Any, Any]]] = None) -> EmbeddedStructure:
        """Realize S as ρ_a on G×G with the left-neutral ∔ and ι(ξ) = (ω, ξ)."""
        pairs = list(pairs) if pairs is not None else self.rule_pairs(rule)
        sup = self.ratio_sup(rule, pairs)
        a = (1.0 - sup) - max(EMBED_MIN_MARGIN, EMBED_REL_MARGIN * sup)
        omega = rule.omega

        def dotplus(x, y):
            nu, eta = x
            lam, xi = y
            if rule.same(nu, omega) and rule.same(eta, omega):
                return (lam, xi)
            if not rule.same(nu, omega):
                return (nu, xi)
            return (eta, xi)

        def entropy(x):
            eta, xi = x
            return rule(eta, xi) / a + (1.0 - 1.0 / a) * (rule(omega, eta) + rule(omega, xi))

        def sampler(rng, n):
            items = rule.sampler(rng, 2 * n)
            return list(zip(items[:n], items[n:]))

        structure = EntropyStructure(
            name=f"{rule.name}_embedded",
            entropy_fn=entropy,
            dotplus_fn=dotplus,
            contains_fn=lambda x: isinstance(x, tuple) and len(x) == 2,
            is_deterministic_fn=lambda x: rule.same(x[0], omega) and rule.same(x[1], omega),
            neutral_fn=lambda _x: (omega, omega),
            sampler=sampler,
            tolerance=self.tolerance,
            named={"omega": (omega, omega)},
            parameters={"a": a, "ratio_sup": sup},
        )
        embedded = EmbeddedStructure(structure=structure, a=a, ratio_sup=sup, rule=rule)
        embedded.verification = self._verify_embedding(embedded, pairs)
        logger.info("%s embedded with a=%.6g (ratio sup %.6g)", rule.name, a, sup)
        return embedded

    def _verify_embedding(self, embedded: EmbeddedStructure, pairs: Sequence[Tuple[Any, Any]]) -> Dict[str, Any]:
        S = embedded.structure
        max_error = 0.0
        min_entropy = math.inf
        for eta, xi in pairs:
            target = embedded.rule(eta, xi)
            value = embedded.rho(embedded.iota(eta), embedded.iota(xi))
            max_error = max(max_error, abs(value - target))
            min_entropy = min(min_entropy, S.entropy_fn((eta, xi)), S.entropy_fn(embedded.iota(xi)))
        scale = max((abs(embedded.rule(eta, xi)) for eta, xi in pairs), default=0.0)
        return {
            "pairs": len(pairs),
            "max_abs_error": max_error,
            "recovers_rule": max_error <= self.tolerance.slack(scale),
            "min_entropy": min_entropy if pairs else None,
            "nonnegative": (min_entropy >= -self.tolerance.slack(min_entropy)) if pairs else True,
        }

    def round_trip(self, S: EntropyStructure, a: Optional[float] = None,
                   pairs: Optional[Sequence[Tuple[Any, Any]]] = None) -> Dict[str, Any]:
        """Structure → rule → embedded structure, compared with ρ_a on the original pairs."""
        if a is None:
            if S.profile is None or not S.profile.a_sigma_finite:
                raise ConfigError(f"{S.name}: pass a explicitly, no finite canonical coefficient")
            a = S.profile.a_sigma
        pairs = list(pairs) if pairs is not None else draw_pairs(S, min(self.sample_size, 2000),
                                                                  self.seed, self.partitions)
        rule = self.scoring_rule_from_structure(S, a, pairs)
        embedded = self.embed_scoring_rule(rule, pairs)

        def rho(x, y):
            return a * S.entropy(S.dotplus(x, y)) + (1.0 - a) * S.entropy(FormalPair(x, y))

        rule_error = 0.0
        rho_error = 0.0
        for eta, xi in pairs:
            embedded_value = embedded.rho(embedded.iota(eta), embedded.iota(xi))
            rule_error = max(rule_error, abs(embedded_value - rule(eta, xi)))
            rho_error = max(rho_error, abs(embedded_value - (rho(eta, xi) - rho(xi, xi))))
        return {
            "structure": S.name,
            "a": a,
            "embedded_a": embedded.a,
            "ratio_sup": embedded.ratio_sup,
            "pairs": len(pairs),
            "max_rule_error": rule_error,
            "max_rho_error": rho_error,
            "verification": embedded.verification,
        }
