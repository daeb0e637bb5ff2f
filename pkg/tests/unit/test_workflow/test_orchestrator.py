"""Unit tests for src/workflow/orchestrator.py module."""

import json
from unittest.mock import MagicMock, patch

import pytest

from src.cli.report import Report
from src.workflow.orchestrator import VerificationWorkflow, WorkflowConfig


def _suite_report(name: str, passed: bool = True) -> Report:
    report = Report(name)
    report.check("case/0", "anchor", passed, 0.0 if passed else 1.0, 0.5)
    report.results["value"] = name
    return report


@pytest.fixture
def fake_suites():
    """Three cheap suites standing in for the registry."""
    suites = {
        "alpha": MagicMock(side_effect=lambda seed: _suite_report("alpha")),
        "beta": MagicMock(side_effect=lambda seed: _suite_report("beta", passed=False)),
        "gamma": MagicMock(side_effect=lambda seed: _suite_report("gamma")),
    }
    with patch.dict("src.workflow.orchestrator.SUITES", suites, clear=True):
        yield suites


class TestWorkflowConfig:
    """Tests for the WorkflowConfig dataclass."""

    def test_workflow_config_default_values(self):
        """WorkflowConfig should have correct default values."""
        config = WorkflowConfig()

        assert config.seed == 7
        assert config.output_base_dir is None
        assert config.workers == 1
        assert config.quiet is False
        assert config.save is False

    def test_workflow_config_custom_values(self):
        """WorkflowConfig should accept custom values."""
        config = WorkflowConfig(seed=11, output_base_dir="/my/outputs", workers=4, quiet=True, save=True)

        assert config.seed == 11
        assert config.output_base_dir == "/my/outputs"
        assert config.workers == 4


class TestVerificationWorkflowRun:
    """Tests for running suites and merging their reports."""

    def test_runs_every_suite_with_seed(self, fake_suites):
        """Each registered suite should be called once with the configured seed."""
        VerificationWorkflow(WorkflowConfig(seed=3, quiet=True)).run()

        for suite in fake_suites.values():
            suite.assert_called_once_with(3)

    def test_records_prefixed_in_registry_order(self, fake_suites):
        """Records should be merged in registry order with the suite name as prefix."""
        report = VerificationWorkflow(WorkflowConfig(quiet=True)).run()

        assert [r.name for r in report.records] == ["alpha/case/0", "beta/case/0", "gamma/case/0"]
        assert report.results["beta"] == {"value": "beta"}
        assert report.command == "verify-all"
        assert report.exit_code == 1

    def test_parallel_matches_sequential(self, fake_suites):
        """Running on a thread pool should not change the report."""
        sequential = VerificationWorkflow(WorkflowConfig(quiet=True)).run()
        parallel = VerificationWorkflow(WorkflowConfig(quiet=True, workers=3)).run()

        assert parallel.to_json() == sequential.to_json()

    def test_selected_suites(self, fake_suites):
        """run(names) should only call the named suites."""
        report = VerificationWorkflow(WorkflowConfig(quiet=True)).run(["gamma"])

        fake_suites["alpha"].assert_not_called()
        assert report.counts["total"] == 1
        assert report.config["suites"] == ["gamma"]

    def test_unknown_suite(self, fake_suites):
        """Unknown suite names should raise ValueError."""
        with pytest.raises(ValueError, match="Unknown suites: nope"):
            VerificationWorkflow(WorkflowConfig(quiet=True)).run(["nope"])

    def test_quiet_prints_nothing(self, fake_suites, capsys):
        """quiet should silence banners on stderr."""
        VerificationWorkflow(WorkflowConfig(quiet=True)).run()

        assert capsys.readouterr().err == ""

    def test_progress_banner(self, fake_suites, capsys):
        """Without quiet, banners and per-suite marks go to stderr, never stdout."""
        VerificationWorkflow(WorkflowConfig()).run()

        captured = capsys.readouterr()
        assert captured.out == ""
        assert "Starting verification suites" in captured.err
        assert "✗ beta completed" in captured.err
        assert "Verification found failures" in captured.err


class TestVerificationWorkflowSave:
    """Tests for saved reports."""

    def test_save_writes_report_and_summary(self, fake_suites, temp_dir):
        """save should write report.json and summary.json into a timestamped directory."""
        workflow = VerificationWorkflow(WorkflowConfig(quiet=True, save=True, output_base_dir=str(temp_dir)))

        report = workflow.run()

        out_dir = workflow.last_output_dir
        assert out_dir.parent == temp_dir / "verify-all"
        assert json.loads((out_dir / "report.json").read_text(encoding="utf-8")) == json.loads(report.to_json())
        summary = json.loads((out_dir / "summary.json").read_text(encoding="utf-8"))
        assert [s["name"] for s in summary["suites"]] == ["alpha", "beta", "gamma"]
        assert summary["exit_code"] == 1
        assert summary["counts"]["fail"] == 1

    def test_no_save_by_default(self, fake_suites):
        """Without save nothing is written."""
        workflow = VerificationWorkflow(WorkflowConfig(quiet=True))
        workflow.run()

        assert workflow.last_output_dir is None

    def test_save_uses_settings_output_dir(self, fake_suites, temp_dir):
        """Without output_base_dir the HPF_OUTPUT_DIR setting is used."""
        with patch("src.workflow.orchestrator.settings") as mock_settings:
            mock_settings.output_dir = str(temp_dir / "fromenv")
            workflow = VerificationWorkflow(WorkflowConfig(quiet=True, save=True))
            workflow.run()

        assert workflow.last_output_dir.parent == temp_dir / "fromenv" / "verify-all"
