"""
Unit Tests for Configuration Management (efid/config.py)

Tests configuration loading, validation, and defaults
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from efid.config import Settings


class TestSettingsValidation:
    """Test Settings validation and loading"""

    def test_settings_load_from_env(self, test_env_vars):
        """Test that settings load correctly from environment variables"""
        settings = Settings(_env_file=None)

        assert settings.APP_NAME == "efid-test"
        assert settings.APP_VERSION == "1.0.0-test"
        assert settings.LOG_LEVEL == "DEBUG"
        assert settings.EFID_THREADS == 2
        assert settings.DEFAULT_TRIALS == 50
        assert settings.DEFAULT_SEED == 11

    def test_settings_defaults(self, monkeypatch):
        """Test that default values are applied correctly"""
        for key in ("APP_NAME", "EFID_THREADS", "DEFAULT_TRIALS", "CI_TRIALS", "DEFAULT_SEED", "DEFAULT_QUALITY"):
            monkeypatch.delenv(key, raising=False)

        settings = Settings(_env_file=None)

        assert settings.APP_NAME == "efid"
        assert settings.FORMAT_VERSION == "efid-sim/1"
        assert settings.EFID_THREADS is None
        assert settings.DEFAULT_TRIALS == 1000
        assert settings.CI_TRIALS == 100
        assert settings.CI_TOLERANCE_MULTIPLIER == 3.0
        assert settings.DEFAULT_SEED == 7
        assert settings.DEFAULT_QUALITY == 75
        assert settings.SNR_SEGMENT_LEN == 256

    def test_bundled_data_paths_exist(self, monkeypatch):
        """Test that the default workload and manifest paths point at bundled files"""
        monkeypatch.delenv("WORKLOAD_DIR", raising=False)
        monkeypatch.delenv("MANIFEST_PATH", raising=False)

        settings = Settings(_env_file=None)

        assert (Path(settings.WORKLOAD_DIR) / "g721_decode.json").exists()
        assert Path(settings.MANIFEST_PATH).exists()

    def test_settings_type_conversion_bool(self, test_env_vars, monkeypatch):
        """Test that boolean types are converted correctly"""
        monkeypatch.setenv("DEBUG", "false")
        assert Settings(_env_file=None).DEBUG is False

        monkeypatch.setenv("DEBUG", "true")
        assert Settings(_env_file=None).DEBUG is True


class TestSettingsEdgeCases:
    """Test edge cases and error scenarios"""

    def test_invalid_thread_count_type(self, test_env_vars, monkeypatch):
        """Test that a non-integer EFID_THREADS raises ValidationError"""
        monkeypatch.setenv("EFID_THREADS", "many")

        with pytest.raises(ValidationError) as exc_info:
            Settings(_env_file=None)

        assert "EFID_THREADS" in str(exc_info.value)

    def test_thread_count_must_be_positive(self, test_env_vars, monkeypatch):
        """Test that EFID_THREADS=0 is rejected"""
        monkeypatch.setenv("EFID_THREADS", "0")

        with pytest.raises(ValidationError):
            Settings(_env_file=None)

    def test_quality_out_of_range(self, test_env_vars, monkeypatch):
        """Test that DEFAULT_QUALITY outside 1..100 is rejected"""
        monkeypatch.setenv("DEFAULT_QUALITY", "101")

        with pytest.raises(ValidationError):
            Settings(_env_file=None)

    def test_settings_case_sensitivity(self, test_env_vars, monkeypatch):
        """Test that environment variable names are case sensitive"""
        monkeypatch.setenv("app_name", "WrongName")
        monkeypatch.setenv("APP_NAME", "CorrectName")

        settings = Settings(_env_file=None)

        assert settings.APP_NAME == "CorrectName"
