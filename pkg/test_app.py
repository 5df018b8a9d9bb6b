"""
Smoke tests for the Entropy Algebra Toolkit
"""

from pathlib import Path

import pytest

from src.constants import EXIT_OK
from src.controllers.algebra_core import AxiomChecker
from src.controllers.comparison import ComparisonProcessor
from src.controllers.construction import ConstructionProcessor
from src.controllers.instance_registry import InstanceRegistry
from src.controllers.model_simulator import ModelSimulator
from src.controllers.risk_fitter import RiskFitter
from src.main import main
from src.models.analysis_config import AnalysisSettings, ConfigManager
from src.models.errors import ConfigError
from src.version import get_version, get_version_info

CONFIG = str(Path(__file__).parent / "config" / "analysis_config.json")


class TestApplication:
    def test_processors_initialize(self):
        checker = AxiomChecker()
        comparison = ComparisonProcessor()
        assert checker.sample_size == comparison.sample_size
        assert ConstructionProcessor().depth > 0
        assert ModelSimulator().ks_level == pytest.approx(0.01)
        assert RiskFitter(comparison).comparison is comparison

    def test_config_loads(self):
        settings = ConfigManager(CONFIG).get_settings()
        assert settings.rel_tol == pytest.approx(1e-9)
        assert settings.instance_defaults["finite_measure_sets"]["weights"] == [1.0, 2.0, 0.5, 1.5, 3.0]

    def test_missing_config_keeps_defaults(self, tmp_path):
        settings = ConfigManager(str(tmp_path / "absent.json")).get_settings()
        assert settings == AnalysisSettings()

    def test_config_round_trip(self, tmp_path):
        path = tmp_path / "settings.json"
        manager = ConfigManager(str(path))
        manager.settings = manager.settings.with_overrides(seed=7, rel_tol=1e-6)
        manager.save_config()
        reloaded = ConfigManager(str(path)).get_settings()
        assert reloaded.seed == 7
        assert reloaded.rel_tol == pytest.approx(1e-6)

    def test_unknown_setting_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"sample_sise": 10}', encoding="utf-8")
        with pytest.raises(ConfigError):
            ConfigManager(str(path))

    def test_registry_names(self):
        names = InstanceRegistry().names()
        for name in ("euclidean", "finite_measure_sets", "mutual_information", "tsallis", "poisson_bivariate"):
            assert name in names
        assert InstanceRegistry().resolve("sets") == "finite_measure_sets"

    def test_version(self):
        assert get_version()
        assert ".".join(str(part) for part in get_version_info()) == get_version()

    def test_cli_profile_runs(self, capsys):
        status = main(["profile", "--config", CONFIG, "--input", '{"structure": {"instance": "euclidean"}}'])
        assert status == EXIT_OK
        assert '"a_sigma"' in capsys.readouterr().out
