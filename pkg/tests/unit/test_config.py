"""
Unit tests for settings
"""

import pytest
from pydantic import ValidationError

from src.core.config import Settings, get_settings, settings


class TestSettings:
    """Test suite for Settings."""

    def test_defaults(self):
        fresh = Settings(_env_file=None)
        assert fresh.DEFAULT_STEPS == 10_000
        assert fresh.CLASSIFICATION_TOLERANCE == 1e-9
        assert fresh.SPAN_RESIDUAL_TOLERANCE == 1e-8
        assert fresh.INCONSISTENCY_THRESHOLD == 1e-4
        assert fresh.CSV_SIGNIFICANT_DIGITS == 17

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("HOLONOMY_DEFAULT_STEPS", "2500")
        monkeypatch.setenv("HOLONOMY_HORIZONTALITY_ACCEPT", "1e-7")
        fresh = Settings(_env_file=None)
        assert fresh.DEFAULT_STEPS == 2500
        assert fresh.HORIZONTALITY_ACCEPT == 1e-7

    def test_unprefixed_variables_ignored(self, monkeypatch):
        monkeypatch.setenv("DEFAULT_STEPS", "3")
        assert Settings(_env_file=None).DEFAULT_STEPS == 10_000

    def test_log_level_normalized(self):
        assert Settings(_env_file=None, LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"

    def test_rejects_unknown_log_format(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, LOG_FORMAT="xml")

    def test_rejects_non_positive_tolerance(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, PROJECTION_TOLERANCE=0.0)

    def test_grouped_views(self):
        assert settings.TOLERANCES["inconsistency"] == settings.INCONSISTENCY_THRESHOLD
        assert settings.INTEGRATOR_CONFIG["default_steps"] == settings.DEFAULT_STEPS

    def test_cached_instance(self):
        assert get_settings() is settings
