"""Unit tests for src/config.py module."""

import importlib
import os
from unittest.mock import patch

import pytest


class TestSettings:
    """Tests for the Settings dataclass."""

    def test_settings_default_tolerances(self):
        """Settings should accept explicit tolerances."""
        from src.config import Settings
        settings = Settings(tolerance=1e-9, rel_tolerance=1e-9)
        assert settings.tolerance == 1e-9
        assert settings.rel_tolerance == 1e-9

    def test_settings_custom_values(self):
        """Settings should accept custom values."""
        from src.config import Settings
        settings = Settings(
            tolerance=1e-6,
            epsilon_min=1e-10,
            max_subdivisions=1000,
            max_arches=64,
            numeric_derivatives=False,
            log_level="DEBUG",
            output_dir="elsewhere",
        )
        assert settings.tolerance == 1e-6
        assert settings.epsilon_min == 1e-10
        assert settings.max_subdivisions == 1000
        assert settings.max_arches == 64
        assert settings.numeric_derivatives is False
        assert settings.log_level == "DEBUG"
        assert settings.output_dir == "elsewhere"


class TestSettingsValidation:
    """Tests for Settings.validate() method."""

    def test_validate_defaults_succeed(self):
        """Validation should pass with the documented defaults."""
        from src.config import Settings
        settings = Settings(tolerance=1e-9, rel_tolerance=1e-9, epsilon_min=1e-12,
                            divergence_bound=1e6, max_subdivisions=4_000_000, max_arches=2**20,
                            log_level="WARNING")
        # Should not raise
        settings.validate()

    def test_validate_nonpositive_tolerance_fails(self):
        """Validation should fail for a zero tolerance."""
        from src.config import Settings
        settings = Settings(tolerance=0.0)
        with pytest.raises(ValueError) as exc_info:
            settings.validate()
        assert "HPF_TOLERANCE" in str(exc_info.value)

    @pytest.mark.parametrize("epsilon_min", [0.0, 1.0, -1e-12])
    def test_validate_epsilon_min_outside_unit_interval_fails(self, epsilon_min):
        """Validation should fail unless 0 < epsilon_min < 1."""
        from src.config import Settings
        settings = Settings(tolerance=1e-9, epsilon_min=epsilon_min)
        with pytest.raises(ValueError, match="HPF_EPSILON_MIN"):
            settings.validate()

    def test_validate_divergence_bound_fails(self):
        """Validation should fail for a nonpositive divergence bound."""
        from src.config import Settings
        settings = Settings(tolerance=1e-9, epsilon_min=1e-12, divergence_bound=0.0)
        with pytest.raises(ValueError, match="HPF_DIVERGENCE_BOUND"):
            settings.validate()

    def test_validate_budget_fails(self):
        """Validation should fail for an empty panel budget."""
        from src.config import Settings
        settings = Settings(tolerance=1e-9, epsilon_min=1e-12, divergence_bound=1e6, max_subdivisions=0)
        with pytest.raises(ValueError, match="HPF_MAX_SUBDIVISIONS"):
            settings.validate()

    def test_validate_unknown_log_level_fails(self):
        """Validation should fail with an unknown log level."""
        from src.config import Settings
        settings = Settings(tolerance=1e-9, epsilon_min=1e-12, divergence_bound=1e6,
                            max_subdivisions=10, max_arches=10, log_level="LOUD")
        with pytest.raises(ValueError) as exc_info:
            settings.validate()
        assert "Unknown HPF_LOG_LEVEL" in str(exc_info.value)


class TestSettingsFromEnvironment:
    """Tests for Settings loading from environment variables."""

    @pytest.fixture
    def reload_config(self):
        """Reload src.config under the current environment, restoring it afterwards."""
        import src.config
        yield lambda: importlib.reload(src.config)
        importlib.reload(src.config)

    def test_settings_loads_tolerance_from_env(self, clean_env, reload_config):
        """Settings should load HPF_TOLERANCE from environment."""
        with patch.dict(os.environ, {"HPF_TOLERANCE": "1e-7"}, clear=False):
            config = reload_config()
            assert config.Settings().tolerance == 1e-7

    def test_settings_loads_numeric_flag_from_env(self, clean_env, reload_config):
        """HPF_NUMERIC_DERIVATIVES=off should disable the finite-difference fallback."""
        with patch.dict(os.environ, {"HPF_NUMERIC_DERIVATIVES": "off"}, clear=False):
            config = reload_config()
            assert config.Settings().numeric_derivatives is False

    def test_settings_loads_output_dir_from_env(self, clean_env, reload_config):
        """Settings should load HPF_OUTPUT_DIR from environment."""
        with patch.dict(os.environ, {"HPF_OUTPUT_DIR": "/tmp/hpf-reports"}, clear=False):
            config = reload_config()
            assert config.settings.output_dir == "/tmp/hpf-reports"

    def test_settings_uses_defaults_when_env_not_set(self, clean_env, reload_config):
        """Settings should use defaults when environment variables are not set."""
        config = reload_config()
        settings = config.Settings()
        assert settings.tolerance == 1e-9
        assert settings.epsilon_min == 1e-12
        assert settings.max_arches == 2**20
        assert settings.log_level == "WARNING"
        assert settings.output_dir == "outputs"
