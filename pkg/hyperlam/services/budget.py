"""Search budgets.

Every search charges one unit per explored state against a named scope; once
the limit is reached the search stops with BudgetExceeded, which callers fold
into an UNKNOWN outcome.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from hyperlam.config import get_settings
from hyperlam.exceptions import BudgetExceeded, ConfigError


@dataclass
class BudgetConfig:
    """A cap on how many units one scope may consume.

    Attributes:
        limit: Maximum number of units.
        scope: Name of what is being counted (states, derivations, ...).
    """

    limit: int
    scope: str = "states"

    def __post_init__(self):
        if self.limit <= 0:
            raise ConfigError(f"budget for {self.scope} must be positive, got {self.limit}")

    @classmethod
    def state_cap(cls, limit: Optional[int] = None, scope: str = "states") -> "BudgetConfig":
        """Cap from an explicit value or HYPERLAM_STATE_CAP."""
        return cls(limit if limit is not None else get_settings().state_cap, scope)


@dataclass
class BudgetEntry:
    """Units consumed so far by one (scope, key) pair."""

    count: int = 0


class BudgetStore:
    """In-memory budget accounting, one store per search."""

    def __init__(self):
        self._entries: dict[tuple[str, str], BudgetEntry] = defaultdict(BudgetEntry)

    def check_and_increment(self, scope: str, key: str, limit: int) -> tuple[bool, int]:
        """Consume one unit if any is left.

        Returns:
            Tuple of (allowed, remaining)
        """
        entry = self._entries[(scope, key)]
        if entry.count >= limit:
            return False, 0
        entry.count += 1
        return True, max(0, limit - entry.count)

    def charge(self, config: BudgetConfig, key: str = "") -> int:
        """Consume one unit or raise BudgetExceeded. Returns what remains."""
        allowed, remaining = self.check_and_increment(config.scope, key, config.limit)
        if not allowed:
            raise BudgetExceeded(f"{config.scope} cap of {config.limit} reached")
        return remaining

    def used(self, scope: str, key: str = "") -> int:
        entry = self._entries.get((scope, key))
        return entry.count if entry else 0
