"""
Tests for the command-line front end
"""

import json
from pathlib import Path

import pytest

from src.constants import EXIT_FAILED_CHECK, EXIT_INPUT_ERROR, EXIT_OK
from src.main import main

CONFIG = str(Path(__file__).parent / "config" / "analysis_config.json")


def run(capsys, subcommand, payload, *extra):
    text = payload if isinstance(payload, str) else json.dumps(payload)
    status = main([subcommand, "--config", CONFIG, "--input", text, *extra])
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def run_json(capsys, subcommand, payload, *extra):
    status, out, err = run(capsys, subcommand, payload, *extra)
    return status, (json.loads(out) if out else None), err


class TestInputHandling:
    def test_profile(self, capsys):
        status, document, _ = run_json(capsys, "profile", {"structure": {"instance": "euclidean"}})
        assert status == EXIT_OK
        assert document["profile"]["a_sigma"] == pytest.approx(-1.0)
        assert document["run"]["subcommand"] == "profile"

    def test_malformed_json(self, capsys):
        status, out, err = run(capsys, "profile", '{"structure": ')
        assert status == EXIT_INPUT_ERROR
        assert out == ""
        assert "line 1" in err

    def test_unknown_field(self, capsys):
        status, _, err = run(capsys, "profile", {"structure": {"instance": "euclidean"}, "mood": 1})
        assert status == EXIT_INPUT_ERROR
        assert "mood" in err

    def test_unknown_instance(self, capsys):
        status, _, err = run(capsys, "check", {"structure": {"instance": "hilbert"}})
        assert status == EXIT_INPUT_ERROR
        assert "hilbert" in err

    def test_missing_input_file(self, capsys, tmp_path):
        status, _, _ = run(capsys, "check", str(tmp_path / "absent.json"))
        assert status == EXIT_INPUT_ERROR

    def test_input_file_and_output(self, capsys, tmp_path):
        source = tmp_path / "payload.json"
        source.write_text(json.dumps({"structure": {"instance": "sets"}}), encoding="utf-8")
        target = tmp_path / "out" / "profile.json"
        status = main(["profile", "--config", CONFIG, "--input", str(source), "--output", str(target)])
        assert status == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["profile"]["sign"] == -1


class TestSubcommands:
    def test_check_sets(self, capsys):
        status, document, _ = run_json(capsys, "check", {"structure": {"instance": "sets"}})
        assert status == EXIT_OK
        assert document["passed"] is True
        assert len(document["bundles"]) == 2

    def test_check_csv(self, capsys):
        status, out, _ = run(capsys, "check", {"structure": {"instance": "sets"}, "comparison": False},
                             "--format", "csv")
        assert status == EXIT_OK
        header = out.splitlines()[0].split(",")
        assert "law" in header and "passed" in header

    def test_compare(self, capsys):
        payload = {"structure": {"instance": "sets"}, "pairs": [[[0, 1], [1, 2]]], "a": 1.5}
        status, document, _ = run_json(capsys, "compare", payload)
        assert status == EXIT_OK
        assert document["pairs"][0]["scalar_half"] == pytest.approx(2.0)

    def test_reconstruct_kernel(self, capsys):
        payload = {"kernel": {"builtin": "euclidean", "norm_sq": 2.0}, "base_entropy": 1.0,
                   "fractions": ["1/2", "3/2", "2"]}
        status, document, _ = run_json(capsys, "reconstruct", payload)
        assert status == EXIT_OK
        assert document["entropy"]["3/2"] == pytest.approx(2.25)

    def test_reconstruct_obstruction(self, capsys):
        payload = {"presentation": {"gram": [[1.0, 1.0], [0.0, 1.0]]}}
        status, document, _ = run_json(capsys, "reconstruct", payload)
        assert status == EXIT_FAILED_CHECK
        assert document["obstruction"] == "a=b"

    def test_reconstruct_needs_base(self, capsys):
        status, _, _ = run(capsys, "reconstruct", {"kernel": {"builtin": "euclidean"}})
        assert status == EXIT_INPUT_ERROR

    def test_embed_rule(self, capsys):
        status, document, _ = run_json(capsys, "embed", {"rule": {}, "sample_size": 1000})
        assert status == EXIT_OK
        assert document["a"] == pytest.approx(-1.5)

    def test_embed_round_trip(self, capsys):
        payload = {"structure": {"instance": "euclidean"}, "sample_size": 300}
        status, document, _ = run_json(capsys, "embed", payload)
        assert status == EXIT_OK
        assert document["max_rule_error"] < 1e-9

    def test_fit_mle(self, capsys):
        status, document, _ = run_json(capsys, "fit", {"kind": "mle", "family": "bernoulli", "p_tilde": [0.3, 0.7]})
        assert status == EXIT_OK
        assert document["theta"][0] == pytest.approx(0.3, abs=1e-6)

    def test_fit_min_rho_trajectory(self, capsys, tmp_path):
        trajectory = tmp_path / "trajectory.csv"
        payload = {"kind": "min_rho", "structure": {"instance": "sets"}, "data": [0, 2],
                   "candidates": [[], [0], [0, 2], [1, 2]]}
        status, document, _ = run_json(capsys, "fit", payload, "--trajectory", str(trajectory))
        assert status == EXIT_OK
        assert document["theta"] == [0, 2]
        assert len(trajectory.read_text(encoding="utf-8").splitlines()) == 5

    def test_fit_missing_fields(self, capsys):
        status, _, err = run(capsys, "fit", {"kind": "tichonov", "lam": 1.0})
        assert status == EXIT_INPUT_ERROR
        assert "X" in err

    def test_simulate(self, capsys):
        payload = {"model": {"family": "max_stable", "alpha": 1.0}, "xis": [1.0], "nus": [2.0],
                   "n": 2000, "repetitions": 10, "min_pass_rate": 0.8}
        status, document, _ = run_json(capsys, "simulate", payload)
        assert status == EXIT_OK
        assert document["grid"][0]["repetitions"] == 10

    def test_seed_flag_is_recorded(self, capsys):
        status, document, _ = run_json(capsys, "profile", {"structure": {"instance": "euclidean"}}, "--seed", "5")
        assert status == EXIT_OK
        assert document["run"]["seed"] == 5
