"""
Registry of named catalog instances with construction-time self-checks
"""

import inspect
import logging
from typing import Any, Callable, Dict, List, Optional

from src.controllers import information_instances as info
from src.controllers import instances
from src.controllers.algebra_core import AxiomChecker
from src.models.analysis_config import AnalysisSettings
from src.models.errors import ConfigError
from src.models.structure import EntropyStructure, FiniteStructure, ReportBundle

logger = logging.getLogger(__name__)


def _finite(tolerance=None, sign_convention: int = 1, **data: Any) -> EntropyStructure:
    """A FiniteStructure given inline as operation tables."""
    return FiniteStructure.from_dict(data).to_structure(tolerance, sign_convention)


CONSTRUCTORS: Dict[str, Callable[..., EntropyStructure]] = {
    "euclidean": instances.euclidean,
    "bivariate_gaussian": instances.bivariate_gaussian,
    "lp_space": instances.lp_space,
    "variogram": instances.variogram_structure,
    "finite_measure_sets": instances.finite_measure_sets,
    "real_axis": instances.real_axis,
    "cauchy": instances.cauchy,
    "gaussian_scale": instances.gaussian_scale,
    "frechet_scale": instances.frechet_scale,
    "tropical": instances.tropical,
    "linear_model": instances.linear_model,
    "tichonov": instances.tichonov_model,
    "product_space": instances.product_space,
    "mutual_information": info.mutual_information,
    "shannon_concat": info.shannon_concat,
    "shannon_product": info.tsallis_limit,
    "renyi": info.renyi,
    "tsallis": info.tsallis,
    "sharma_mittal": info.sharma_mittal,
    "dependable_shannon": info.dependable_shannon,
    "kl": info.kl_structure,
    "poisson_bivariate": info.poisson_bivariate,
    "finite": _finite,
}

ALIASES = {
    "sets": "finite_measure_sets",
    "tichonov_model": "tichonov",
    "tsallis_limit": "shannon_product",
    "kl_structure": "kl",
    "poisson": "poisson_bivariate",
}


class InstanceRegistry:
    """Builds catalog instances by name from JSON parameter objects."""

    def __init__(self, settings: Optional[AnalysisSettings] = None):
        self.settings = settings or AnalysisSettings()
        self.constructors: Dict[str, Callable[..., EntropyStructure]] = dict(CONSTRUCTORS)
        self.last_self_check: Optional[ReportBundle] = None

    def names(self) -> List[str]:
        return sorted(self.constructors)

    def register(self, name: str, constructor: Callable[..., EntropyStructure]):
        self.constructors[name] = constructor

    def resolve(self, name: str) -> str:
        name = ALIASES.get(name, name)
        if name not in self.constructors:
            raise ConfigError(f"Unknown instance '{name}'; available: {', '.join(self.names())}")
        return name

    def _arguments(self, name: str, constructor: Callable[..., EntropyStructure],
                   params: Dict[str, Any]) -> Dict[str, Any]:
        """Merge configured defaults, explicit parameters and the ambient tolerance and caps."""
        arguments = dict(self.settings.instance_defaults.get(name, {}))
        arguments.update(params)
        signature = inspect.signature(constructor)
        accepts_any = any(p.kind == inspect.Parameter.VAR_KEYWORD for p in signature.parameters.values())
        if not accepts_any:
            unknown = sorted(set(arguments) - set(signature.parameters))
            if unknown:
                raise ConfigError(f"{name}: unknown parameters {unknown}")
        if "tolerance" in signature.parameters:
            arguments.setdefault("tolerance", self.settings.tolerance)
        if "cap" in signature.parameters:
            arguments.setdefault("cap", self.settings.shannon_extension_cap)
        return arguments

    def create(self, name: str, params: Optional[Dict[str, Any]] = None,
               self_check: bool = True) -> EntropyStructure:
        """Construct an instance; a failing self-check raises ConfigError."""
        name = self.resolve(name)
        constructor = self.constructors[name]
        arguments = self._arguments(name, constructor, dict(params or {}))
        try:
            structure = constructor(**arguments)
        except TypeError as e:
            raise ConfigError(f"{name}: {e}") from e
        if self_check:
            checker = AxiomChecker(sample_size=self.settings.self_check_sample_size, seed=self.settings.seed,
                                   partitions=self.settings.partitions, workers=self.settings.workers)
            bundle = checker.self_check(structure)
            self.last_self_check = bundle
            if not bundle.passed:
                failed = ", ".join(r.law for r in bundle.failures())
                raise ConfigError(f"{name} fails its self-check: {failed}")
            logger.info("Constructed %s (self-check passed)", name)
        return structure

    def from_json(self, data: Dict[str, Any], self_check: bool = True) -> EntropyStructure:
        """{"instance": name, ...parameters}."""
        params = dict(data)
        name = params.pop("instance", None)
        if name is None:
            raise ConfigError("Missing 'instance' field")
        return self.create(name, params, self_check)
