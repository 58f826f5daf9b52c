"""Unit tests for settings."""

import pytest

from hyperlam.config import Settings, get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


class TestSettings:
    """Settings come from HYPERLAM_* variables with defaults."""

    def test_defaults(self, monkeypatch):
        for name in ("STATE_CAP", "STAR_CAP", "MAX_STEPS", "LOG_LEVEL", "DATABASE_URL"):
            monkeypatch.delenv(f"HYPERLAM_{name}", raising=False)
        settings = Settings()
        assert settings.state_cap == 200000
        assert settings.star_cap == 4
        assert settings.max_steps == 12
        assert settings.log_level == "WARNING"
        assert settings.database_url.startswith("sqlite+aiosqlite://")

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("HYPERLAM_STATE_CAP", "10")
        monkeypatch.setenv("HYPERLAM_LOG_LEVEL", "debug")
        settings = get_settings()
        assert settings.state_cap == 10
        assert settings.log_level == "DEBUG"

    def test_settings_are_cached(self):
        assert get_settings() is get_settings()
