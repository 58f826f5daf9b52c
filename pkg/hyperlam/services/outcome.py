"""Tri-state results shared by proof search and membership checks."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Generic, Optional, TypeVar

T = TypeVar("T")


class Verdict(str, Enum):
    """How a search ended."""

    FOUND = "found"
    NOT_DERIVABLE = "not_derivable"
    NOT_MEMBER = "not_member"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        if self is Verdict.FOUND:
            return 0
        if self is Verdict.UNKNOWN:
            return 2
        return 1

    @property
    def definitive(self) -> bool:
        return self is not Verdict.UNKNOWN


@dataclass
class Outcome(Generic[T]):
    """A verdict with its witness (for FOUND) or diagnostics (for UNKNOWN).

    Attributes:
        verdict: The classification.
        value: The witness when found.
        diagnostics: Human-readable reason for an UNKNOWN (or a refutation note).
        stats: Search counters, reported by the CLI.
    """

    verdict: Verdict
    value: Optional[T] = None
    diagnostics: Optional[str] = None
    stats: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def found(cls, value: T, **stats: Any) -> "Outcome[T]":
        return cls(verdict=Verdict.FOUND, value=value, stats=stats)

    @classmethod
    def refuted(
        cls, verdict: Verdict = Verdict.NOT_DERIVABLE, diagnostics: Optional[str] = None, **stats: Any
    ) -> "Outcome[T]":
        return cls(verdict=verdict, diagnostics=diagnostics, stats=stats)

    @classmethod
    def unknown(cls, diagnostics: str, **stats: Any) -> "Outcome[T]":
        return cls(verdict=Verdict.UNKNOWN, diagnostics=diagnostics, stats=stats)

    @property
    def is_found(self) -> bool:
        return self.verdict is Verdict.FOUND

    @property
    def is_unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN
