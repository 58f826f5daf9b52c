"""Sequents and derivation trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Iterator, Mapping

from hyperlam.exceptions import InvalidType, RankMismatch
from hyperlam.models.hypergraph import Hypergraph
from hyperlam.models.types import TypeExpr


class Rule(str, Enum):
    """Inference rules a derivation tree node may be labeled with."""

    AXIOM = "axiom"
    DIV_LEFT = "div-left"
    DIV_RIGHT = "div-right"
    MUL_RIGHT = "mul-right"
    MUL_LEFT = "mul-left"
    BANG_LEFT = "bang-left"
    BANG_RIGHT = "bang-right"
    WEAKEN = "weaken"
    CONTRACT = "contract"
    CUT = "cut"
    STAR_LEFT = "star-left"
    STAR_RIGHT_BOUNDED = "star-right-bounded"

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = {
    Rule.AXIOM: "Ax",
    Rule.DIV_LEFT: "÷→",
    Rule.DIV_RIGHT: "→÷",
    Rule.MUL_RIGHT: "→×",
    Rule.MUL_LEFT: "×→",
    Rule.BANG_LEFT: "!→",
    Rule.BANG_RIGHT: "→!",
    Rule.WEAKEN: "w",
    Rule.CONTRACT: "c",
    Rule.CUT: "cut",
    Rule.STAR_LEFT: "*→",
    Rule.STAR_RIGHT_BOUNDED: "→*",
}


@dataclass(frozen=True)
class Sequent:
    """H → A with rk(H) = rk(A)."""

    antecedent: Hypergraph
    succedent: TypeExpr

    def __post_init__(self):
        for edge in self.antecedent.edges:
            if not isinstance(edge.label, TypeExpr):
                raise InvalidType(f"antecedent edge {edge.id} is not labeled by a type")
        if self.antecedent.rank != self.succedent.rank:
            raise RankMismatch(
                f"antecedent rank {self.antecedent.rank} differs from "
                f"succedent rank {self.succedent.rank}"
            )

    @cached_property
    def key(self) -> str:
        from hyperlam.services.canonical import canonical

        return f"{canonical(self.antecedent).text}=>{self.succedent.key}"

    @cached_property
    def connectives(self) -> int:
        return self.succedent.connectives + sum(
            e.label.connectives for e in self.antecedent.edges
        )

    @property
    def has_exponentials(self) -> bool:
        return self.succedent.has_exponentials or any(
            e.label.has_exponentials for e in self.antecedent.edges
        )

    def __str__(self) -> str:
        labels = ", ".join(str(e.label) for e in self.antecedent.edges)
        return f"[{labels}] → {self.succedent}"


@dataclass(frozen=True)
class DerivationTree:
    """A rule application with its conclusion, premises and instantiation data.

    `data` records what the rule needs to be re-checked: the principal edge id,
    the principal type, the star unfolding count.
    """

    rule: Rule
    conclusion: Sequent
    premises: tuple["DerivationTree", ...] = ()
    data: Mapping[str, Any] = field(default_factory=dict)

    def walk(self) -> Iterator["DerivationTree"]:
        yield self
        for premise in self.premises:
            yield from premise.walk()

    @property
    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def rule_counts(self) -> dict[Rule, int]:
        counts: dict[Rule, int] = {}
        for node in self.walk():
            counts[node.rule] = counts.get(node.rule, 0) + 1
        return counts

    def skeleton(self) -> tuple:
        """Nested (rule, children) tuple, handy for comparing tree shapes."""
        return (self.rule.value, tuple(p.skeleton() for p in self.premises))
