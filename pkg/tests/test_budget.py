"""Unit tests for search budgets."""

import pytest

from hyperlam.exceptions import BudgetExceeded, ConfigError
from hyperlam.services.budget import BudgetConfig, BudgetStore


class TestBudgetConfig:
    """Tests for BudgetConfig class."""

    def test_stores_limit_and_scope(self):
        """Config should store its limit and scope."""
        config = BudgetConfig(limit=50, scope="dpo states")
        assert config.limit == 50
        assert config.scope == "dpo states"

    def test_non_positive_limit_is_rejected(self):
        """A cap of zero or less is a configuration error."""
        with pytest.raises(ConfigError):
            BudgetConfig(limit=0)
        with pytest.raises(ConfigError):
            BudgetConfig(limit=-3)

    def test_state_cap_from_settings(self, monkeypatch):
        """Without an explicit value the cap comes from HYPERLAM_STATE_CAP."""
        from hyperlam.config import get_settings

        monkeypatch.setenv("HYPERLAM_STATE_CAP", "77")
        get_settings.cache_clear()
        try:
            assert BudgetConfig.state_cap().limit == 77
            assert BudgetConfig.state_cap(5).limit == 5
        finally:
            get_settings.cache_clear()


class TestBudgetStore:
    """Tests for BudgetStore class."""

    def test_first_unit_is_allowed(self):
        """First unit should always be allowed."""
        store = BudgetStore()
        allowed, remaining = store.check_and_increment("states", "", 10)
        assert allowed is True
        assert remaining == 9

    def test_units_up_to_limit_are_allowed(self):
        """Units up to the limit should be allowed."""
        store = BudgetStore()
        for i in range(10):
            allowed, remaining = store.check_and_increment("states", "", 10)
            assert allowed is True
            assert remaining == 10 - i - 1

    def test_unit_over_limit_is_refused(self):
        """The unit past the limit is refused."""
        store = BudgetStore()
        for _ in range(10):
            store.check_and_increment("states", "", 10)
        allowed, remaining = store.check_and_increment("states", "", 10)
        assert allowed is False
        assert remaining == 0

    def test_keys_are_counted_separately(self):
        """Different keys have separate counts."""
        store = BudgetStore()
        for _ in range(3):
            store.check_and_increment("states", "a", 3)
        allowed, _ = store.check_and_increment("states", "b", 3)
        assert allowed is True
        assert store.used("states", "a") == 3
        assert store.used("states", "b") == 1
        assert store.used("states", "c") == 0

    def test_charge_raises_when_exhausted(self):
        """charge() raises BudgetExceeded naming the scope."""
        store = BudgetStore()
        config = BudgetConfig(limit=2, scope="derivations")
        assert store.charge(config) == 1
        assert store.charge(config) == 0
        with pytest.raises(BudgetExceeded) as info:
            store.charge(config)
        assert "derivations" in str(info.value)
