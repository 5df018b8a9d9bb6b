"""
Main entry point for the Entropy Algebra Toolkit
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from pydantic import ValidationError

from src.constants import (
    EXIT_FAILED_CHECK, EXIT_INPUT_ERROR, EXIT_OK, OUTPUT_FORMATS, REPORT_SAMPLE_SIZE, SIGN_NEGATIVE,
    SIGN_POSITIVE, SUBCOMMANDS,
)
from src.controllers.algebra_core import AxiomChecker
from src.controllers.comparison import ComparisonProcessor
from src.controllers.construction import (
    ConstructionProcessor, euclidean_kernel, max_kernel, squared_error_rule,
)
from src.controllers.instance_registry import InstanceRegistry
from src.controllers.model_simulator import ModelSimulator
from src.controllers.risk_fitter import RiskFitter, bernoulli_family, categorical_family
from src.models.analysis_config import AnalysisSettings, ConfigManager
from src.models.commands import (
    PAYLOADS, CheckPayload, Command, ComparePayload, EmbedPayload, FitPayload, KernelInput,
    ProfilePayload, ReconstructPayload, ReportPayload, SimulatePayload, StructureInput,
)
from src.models.construction_types import KernelSpec, LatticePresentation, ObstructionReport
from src.models.errors import AnalysisError, InputError
from src.models.fit_problem import FitProblem
from src.models.profile import ComparisonProfile
from src.models.statistical import ModelSpec
from src.models.structure import EntropyStructure, ReportBundle
from src.utils.export_utils import ExportUtils, to_jsonable
from src.utils.json_reader import JSONReader
from src.version import get_version

logger = logging.getLogger(__name__)


@dataclass
class Outcome:
    """Result of one subcommand: JSON document, CSV rows and overall verdict."""
    data: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = True
    trajectory: Any = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropy-algebra",
        description="Check, compare, construct and fit entropy-driven hemi-groups.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", help="payload: JSON file, '-' for stdin, or inline JSON")
    parser.add_argument("--output", help="output file (default: stdout)")
    parser.add_argument("--seed", type=int, help="master seed for every random draw")
    parser.add_argument("--tol", type=float, help="relative tolerance for floating comparisons")
    parser.add_argument("--level", type=float, help="KS significance level for simulate")
    parser.add_argument("--exploration", action="store_true",
                        help="allow a outside Ξ in compare and fit")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="json")
    parser.add_argument("--trajectory", help="CSV file for the optimizer trajectory of fit")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--config", default=Command.model_fields["config"].default)
    parser.add_argument("--version", action="version", version=get_version())
    return parser


def format_validation_error(error: ValidationError) -> str:
    """One 'field <path>: <message>' line per violation."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<payload>"
        lines.append(f"field {path}: {item['msg']}")
    return "\n".join(lines)


class CommandRunner:
    """Dispatches a validated command to the processors and renders the artifacts."""

    def __init__(self, command: Command, settings: AnalysisSettings, reader: Optional[JSONReader] = None):
        self.command = command
        self.settings = settings
        self.reader = reader or JSONReader()
        self.registry = InstanceRegistry(settings)
        self.checker = AxiomChecker(settings.sample_size, settings.seed, settings.partitions, settings.workers)
        self.comparison = ComparisonProcessor(settings.sample_size, settings.seed, settings.partitions,
                                              settings.workers, exploration=command.exploration)
        self.fitter = RiskFitter(self.comparison, settings.workers, settings.partitions)
        self.handlers = {
            "check": self.check,
            "profile": self.profile,
            "compare": self.compare,
            "reconstruct": self.reconstruct,
            "embed": self.embed,
            "simulate": self.simulate,
            "fit": self.fit,
            "report": self.report,
        }

    def run(self) -> int:
        raw = self.reader.read_payload(self.command.input)
        payload = PAYLOADS[self.command.subcommand].model_validate(raw)
        logger.info("Running %s", self.command.subcommand)
        outcome = self.handlers[self.command.subcommand](payload)
        self.write(outcome)
        return EXIT_OK if outcome.passed else EXIT_FAILED_CHECK

    def run_metadata(self) -> Dict[str, Any]:
        return {
            "subcommand": self.command.subcommand,
            "seed": self.settings.seed,
            "rel_tol": self.settings.rel_tol,
            "abs_tol": self.settings.abs_tol,
            "ks_level": self.settings.ks_level,
            "exploration": self.command.exploration,
            "version": get_version(),
        }

    def write(self, outcome: Outcome):
        if self.command.format == "csv":
            text = ExportUtils.table_to_csv(outcome.rows)
        else:
            document = dict(outcome.data)
            document["passed"] = outcome.passed
            document["run"] = self.run_metadata()
            text = ExportUtils.dumps(document)
        if ExportUtils.write_text(text, self.command.output) is not None:
            sys.stdout.write(text)
        if self.command.trajectory and outcome.trajectory is not None:
            ExportUtils.save_csv(outcome.trajectory, self.command.trajectory)

    # Structures

    def structure(self, spec: StructureInput) -> EntropyStructure:
        S = self.registry.create(spec.instance, spec.params)
        if spec.profile is not None:
            try:
                S = S.with_profile(ComparisonProfile.from_dict(spec.profile))
            except KeyError as e:
                raise InputError(f"profile is missing {e.args[0]}") from e
        return S

    @staticmethod
    def bundle_rows(bundle: ReportBundle) -> List[Dict[str, Any]]:
        return [{
            "bundle": bundle.name,
            "law": report.law,
            "passed": report.passed,
            "skipped": report.skipped,
            "cases_checked": report.cases_checked,
            "mode": report.mode,
            "counterexample": to_jsonable(report.counterexample),
        } for _, report in sorted(bundle.reports.items())]

    # Subcommands

    def check(self, payload: CheckPayload) -> Outcome:
        S = self.structure(payload.structure)
        bundles = [self.checker.run_suite(S)]
        if payload.comparison:
            bundles.append(self.comparison.run_suite(S))
        rows = [row for bundle in bundles for row in self.bundle_rows(bundle)]
        return Outcome(data={"structure": S.name, "bundles": [b.to_dict() for b in bundles]},
                       rows=rows, passed=all(b.passed for b in bundles))

    def profile(self, payload: ProfilePayload) -> Outcome:
        S = self.structure(payload.structure)
        profile = self.comparison.profile(S, payload.mode, payload.sample_size)
        data = {"structure": S.name, "profile": profile.to_dict()}
        row = {"structure": S.name}
        row.update(to_jsonable(profile.to_dict()))
        return Outcome(data=data, rows=[row])

    def compare(self, payload: ComparePayload) -> Outcome:
        S = self.structure(payload.structure)
        profile = self.comparison.get_profile(S)
        pairs = [(S.decode(x), S.decode(y)) for x, y in payload.pairs]
        rows = self.comparison.compare_pairs(S, pairs, payload.a, profile)
        for row, (x, y) in zip(rows, payload.pairs):
            row["xi"], row["eta"] = x, y
        return Outcome(data={"structure": S.name, "profile": profile.to_dict(), "pairs": rows},
                       rows=[to_jsonable(row) for row in rows])

    def _kernel_spec(self, kernel: KernelInput) -> KernelSpec:
        if kernel.builtin == "euclidean":
            return euclidean_kernel(kernel.norm_sq, kernel.sign or SIGN_POSITIVE)
        if kernel.builtin == "max":
            return max_kernel(kernel.alpha, kernel.xi, kernel.sign or SIGN_NEGATIVE)
        data = kernel.model_dump(include={"series", "relations"})
        data["sign"] = kernel.sign or SIGN_POSITIVE
        return KernelSpec.from_dict(data)

    def reconstruct(self, payload: ReconstructPayload) -> Outcome:
        construction = ConstructionProcessor(
            self.settings.sample_size, self.settings.seed, self.settings.partitions,
            depth=payload.depth or self.settings.cs_depth,
            consistency_tolerance=self.settings.consistency_tolerance,
            ratio_cap=self.settings.embed_ratio_cap, tolerance=self.settings.tolerance)

        if payload.presentation is not None:
            presentation = LatticePresentation.from_dict(payload.presentation.model_dump())
            result = construction.extend_entropy(presentation)
            if isinstance(result, ObstructionReport):
                return Outcome(data=result.to_dict(), rows=[to_jsonable(result.to_dict())], passed=False)
            data = result.to_dict()
            return Outcome(data=data, rows=data["entropy"])

        spec = self._kernel_spec(payload.kernel)
        consistency = construction.consistency_M(spec)
        data: Dict[str, Any] = {"kernel": spec.name, "base_entropy": payload.base_entropy,
                                "consistency": consistency.to_dict()}
        passed = True
        if payload.fractions or not spec.relations:
            fractions = [Fraction(r) for r in payload.fractions] or [
                Fraction(n, m) for m in range(1, 5) for n in range(1, 5)]
            table = construction.reconstruct_table(spec, payload.base_entropy, sorted(set(fractions)))
            entries = {str(r): v for r, v in sorted(table.items())}
            if isinstance(spec.base, (Fraction, int)) and spec.kernel is not None:
                verification = construction.verify_reconstruction(spec, table)
                data["verification"] = verification.to_dict()
                passed = verification.passed
        else:
            entries = {r.label: construction.reconstruct_entropy(spec, payload.base_entropy, r, consistency)
                       for r in spec.relations}
        data["entropy"] = entries
        rows = [{"element": label, "entropy": value} for label, value in entries.items()]
        return Outcome(data=data, rows=rows, passed=passed)

    def embed(self, payload: EmbedPayload) -> Outcome:
        construction = ConstructionProcessor(
            payload.sample_size or self.settings.sample_size, self.settings.seed, self.settings.partitions,
            ratio_cap=self.settings.embed_ratio_cap, tolerance=self.settings.tolerance)
        if payload.rule is not None:
            rule = squared_error_rule(payload.rule.low, payload.rule.high, payload.rule.omega)
            embedded = construction.embed_scoring_rule(rule)
            data = embedded.to_dict()
            return Outcome(data=data, rows=[to_jsonable(data)], passed=embedded.passed)
        S = self.structure(payload.structure)
        data = construction.round_trip(S, payload.a)
        verification = data["verification"]
        passed = bool(verification["recovers_rule"] and verification["nonnegative"])
        return Outcome(data=data, rows=[to_jsonable(data)], passed=passed)

    def simulate(self, payload: SimulatePayload) -> Outcome:
        model_data = payload.model.model_dump(exclude_none=True)
        model_data["seed"] = self.settings.seed
        model = ModelSpec.from_dict(model_data)
        simulator = ModelSimulator(self.settings.ks_level, self.settings.quantile_levels,
                                   self.settings.quantile_log_tolerance, self.settings.workers,
                                   self.settings.partitions)
        n = payload.n or self.settings.merge_sample_size
        seeds = [self.settings.seed + r for r in range(payload.repetitions)]
        grid = simulator.merge_law_grid(model, payload.xis, payload.nus, n, seeds=seeds)
        calibration = [simulator.verify_entropy_calibration(model, xi, n) for xi in payload.calibrate]
        passed = bool(grid["pass_rate"].min() >= payload.min_pass_rate) and all(c.passed for c in calibration)
        rows = grid.to_dict(orient="records")
        data = {
            "model": model.to_dict(),
            "n": n,
            "min_pass_rate": payload.min_pass_rate,
            "grid": rows,
            "calibration": [c.to_dict() for c in calibration],
        }
        return Outcome(data=data, rows=rows, passed=passed)

    def fit(self, payload: FitPayload) -> Outcome:
        if payload.kind == "tichonov":
            result = self.fitter.tichonov_fit(payload.X, payload.y, payload.lam)
            return Outcome(data=to_jsonable(result), rows=[to_jsonable(result)], passed=result["agrees"])

        if payload.kind == "mle":
            if payload.family == "bernoulli":
                family, bounds = bernoulli_family, [(0.0, 1.0)]
            else:
                family, bounds = categorical_family, [(0.0, 1.0)] * (len(payload.p_tilde) - 1)
            result = self.fitter.mle_fit(payload.p_tilde, family, bounds, payload.reliability_scale,
                                         self.settings.fit_grid_resolution, self.settings.fit_refine_iterations)
            passed = bool(result.details["agrees_with_likelihood"])
        else:
            S = self.structure(payload.structure)
            problem = FitProblem(
                structure=S,
                data=S.decode(payload.data),
                family=lambda candidate: candidate,
                candidates=[S.decode(c) for c in payload.candidates],
                a=payload.a,
                exploration=self.command.exploration,
                tolerance=self.settings.fit_tolerance,
                name=f"{S.name}_min_rho",
            )
            result = self.fitter.fit_min_rho(problem)
            passed = result.nonnegative is not False
        data = result.to_dict()
        return Outcome(data=data, rows=[to_jsonable(data)], passed=passed, trajectory=result.trajectory_frame())

    def report(self, payload: ReportPayload) -> Outcome:
        sample_size = payload.sample_size or REPORT_SAMPLE_SIZE
        checker = AxiomChecker(sample_size, self.settings.seed, self.settings.partitions, self.settings.workers)
        comparison = ComparisonProcessor(sample_size, self.settings.seed, self.settings.partitions,
                                         self.settings.workers)
        names = payload.instances or [name for name in self.registry.names() if name != "finite"]
        rows = []
        passed = True
        for name in names:
            row: Dict[str, Any] = {"instance": name}
            try:
                S = self.registry.create(name)
                profile = comparison.get_profile(S)
                row.update({"m_G": profile.m_G, "M_G": profile.M_G, "sign": profile.sign,
                            "a_sigma": profile.a_sigma, "provenance": profile.provenance})
                bundles = [checker.run_suite(S), comparison.run_suite(S, profile)]
            except (InputError, AnalysisError) as e:
                logger.warning("report: %s skipped: %s", name, e)
                row.update({"status": "skipped", "reason": str(e)})
                rows.append(row)
                continue
            failures = sorted(r.law for bundle in bundles for r in bundle.failures())
            row.update({
                "status": "passed" if not failures else "failed",
                "laws_checked": sum(len(bundle.reports) for bundle in bundles),
                "failures": failures,
            })
            passed = passed and not failures
            rows.append(row)
        return Outcome(data={"sample_size": sample_size, "instances": to_jsonable(rows)},
                       rows=[to_jsonable(row) for row in rows], passed=passed)


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        command = Command(**{key: value for key, value in vars(args).items()})
        settings = ConfigManager(command.config).get_settings().with_overrides(
            seed=command.seed, rel_tol=command.tol, ks_level=command.level)
        return CommandRunner(command, settings).run()
    except ValidationError as e:
        sys.stderr.write(format_validation_error(e) + "\n")
        return EXIT_INPUT_ERROR
    except InputError as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT_ERROR
    except AnalysisError as e:
        sys.stderr.write(f"analysis error: {e}\n")
        return EXIT_FAILED_CHECK


if __name__ == "__main__":
    sys.exit(main())
