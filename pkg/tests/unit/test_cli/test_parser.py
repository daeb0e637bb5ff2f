"""Unit tests for src/cli/parser.py module."""

import json
import math
from unittest.mock import patch

import pytest

from src.cli.parser import build_parser, config_from_args, main
from src.cli.report import Report


class TestBuildParser:
    """Tests for the argparse tree."""

    def test_pf_arguments(self):
        """pf should parse its numeric options."""
        args = build_parser().parse_args(["pf", "--f", "cos(x)", "--alpha", "-1.5", "--x", "0.5", "--n", "2"])

        assert args.subcommand == "pf"
        assert args.alpha == -1.5
        assert args.x == 0.5
        assert args.n == 2

    def test_depth_options_are_exclusive(self):
        """--n and --sweep-n cannot be combined."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["pf", "--f", "x", "--alpha", "-0.5", "--n", "1", "--sweep-n", "1..2"])

    def test_infinite_exponent(self):
        """--p inf should parse as math.inf."""
        args = build_parser().parse_args(["witness", "--w", "x", "--p", "inf"])

        assert args.p == math.inf

    def test_repeatable_sequences(self):
        """--seq can be given several times."""
        args = build_parser().parse_args(["summation", "--seq", "01", "--seq", "1[0]*"])

        assert args.seq == ["01", "1[0]*"]

    def test_subcommand_required(self):
        """A bare invocation should exit with a usage error."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestConfigFromArgs:
    """Tests for namespace conversion."""

    def test_absent_flags_keep_defaults(self):
        """None values should not override RunConfig defaults."""
        args = build_parser().parse_args(["witness", "--f", "1/x"])

        config = config_from_args(args)

        assert config.f == "1/x"
        assert config.x == 1.0
        assert config.tol is None
        assert config.depth == 12

    def test_unknown_keys_dropped(self):
        """log_level is not a RunConfig field."""
        args = build_parser().parse_args(["partition", "--K", "3", "--log-level", "debug"])

        config = config_from_args(args)

        assert config.K == 3
        assert not hasattr(config, "log_level")


class TestMain:
    """Tests for the entry point."""

    def test_prints_report_and_returns_exit_code(self, sample_report, capsys, mocker):
        """main should print the rendered report and return its exit code."""
        mock_run = mocker.patch("src.cli.parser.run", return_value=sample_report)

        code = main(["partition", "--K", "3"])

        assert code == 1
        assert mock_run.call_args.args[0].K == 3
        assert json.loads(capsys.readouterr().out)["summary"]["total"] == 4

    def test_text_format(self, capsys, mocker):
        """--format text should reach the renderer."""
        report = Report("partition")
        report.check("ok", "anchor", True)
        mocker.patch("src.cli.parser.run", return_value=report)

        code = main(["partition", "--format", "text"])

        assert code == 0
        assert "✓ ok" in capsys.readouterr().out

    def test_configuration_error(self, capsys):
        """Invalid HPF_* settings should exit with 3 before running anything."""
        with patch("src.cli.parser.settings.validate", side_effect=ValueError("HPF_TOLERANCE must be positive")), \
             patch("src.cli.parser.run") as mock_run:
            code = main(["partition"])

        assert code == 3
        mock_run.assert_not_called()
        assert "Configuration error" in capsys.readouterr().err

    def test_unknown_log_level(self, capsys, mocker):
        """An unknown --log-level should exit with 3 instead of raising from logging."""
        mock_run = mocker.patch("src.cli.parser.run")

        code = main(["partition", "--log-level", "LOUD"])

        assert code == 3
        mock_run.assert_not_called()
        assert "Unknown --log-level: LOUD" in capsys.readouterr().err

    def test_log_level_is_case_insensitive(self, mocker):
        """A lower-case level name should be accepted."""
        mocker.patch("src.cli.parser.run", return_value=Report("partition"))

        assert main(["partition", "--log-level", "debug", "--format", "text"]) == 0
