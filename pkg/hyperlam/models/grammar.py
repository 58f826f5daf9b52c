"""DPO rules and grammars, DPO derivations, lexicalized grammars and their witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from hyperlam.exceptions import InvalidRule, RankMismatch, UnknownLabel
from hyperlam.models.hypergraph import Hypergraph, RankedLabel
from hyperlam.models.sequent import DerivationTree
from hyperlam.models.types import TypeExpr
from hyperlam.services.suggest import did_you_mean


@dataclass(frozen=True)
class DpoRule:
    """L ←φL− D_k −φR→ R over zero-rank sides.

    Attributes:
        name: Rule identifier, unique within a grammar.
        left: Left-hand side L.
        k: Size of the discrete interface.
        phi_left: Images of the interface nodes in L.
        phi_right: Images of the interface nodes in R.
        right: Right-hand side R.
    """

    name: str
    left: Hypergraph
    k: int
    phi_left: tuple[int, ...]
    phi_right: tuple[int, ...]
    right: Hypergraph

    def __post_init__(self):
        object.__setattr__(self, "phi_left", tuple(self.phi_left))
        object.__setattr__(self, "phi_right", tuple(self.phi_right))
        if not self.name:
            raise InvalidRule("rule needs a name")
        if self.k < 0:
            raise InvalidRule(f"rule {self.name}: interface size must be >= 0")
        if len(self.phi_left) != self.k or len(self.phi_right) != self.k:
            raise InvalidRule(
                f"rule {self.name}: interface D_{self.k} needs maps of length {self.k}"
            )
        if self.left.ext or self.right.ext:
            raise InvalidRule(f"rule {self.name}: sides must have rank 0")
        for side, phi in (("left", self.phi_left), ("right", self.phi_right)):
            graph = getattr(self, side)
            missing = [v for v in phi if v not in graph.node_set]
            if missing:
                raise InvalidRule(f"rule {self.name}: {side} map hits unknown nodes {missing}")

    def labels(self) -> list[Any]:
        return self.left.labels() + self.right.labels()


@dataclass(frozen=True)
class DpoGrammar:
    """⟨N, Σ, P, S•⟩.

    A normalized grammar additionally records its proxies (terminal a -> T_a) and
    which rules are terminal (P_T); every other rule is nonterminal (P_N).
    """

    nonterminals: tuple[RankedLabel, ...]
    terminals: tuple[RankedLabel, ...]
    rules: tuple[DpoRule, ...]
    start: RankedLabel
    proxies: Mapping[str, RankedLabel] = field(default_factory=dict)
    terminal_rules: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "terminal_rules", frozenset(self.terminal_rules))
        names = [label.name for label in self.nonterminals + self.terminals]
        if len(set(names)) != len(names):
            raise InvalidRule("nonterminal and terminal names must be distinct")
        if self.start not in self.nonterminals:
            raise InvalidRule(f"start symbol {self.start.name!r} is not a nonterminal")
        rule_names = [rule.name for rule in self.rules]
        if len(set(rule_names)) != len(rule_names):
            raise InvalidRule("rule names must be unique")
        alphabet = {label.name: label for label in self.nonterminals + self.terminals}
        for rule in self.rules:
            for label in rule.labels():
                known = alphabet.get(getattr(label, "name", None))
                if known is None:
                    raise UnknownLabel(
                        f"rule {rule.name} uses unknown label {label}"
                        + did_you_mean(str(label), alphabet)
                    )
                if known.rank != label.rank:
                    raise RankMismatch(
                        f"rule {rule.name} uses {label.name} with rank {label.rank}, "
                        f"declared rank {known.rank}"
                    )

    @property
    def is_normalized(self) -> bool:
        return bool(self.proxies) or (not self.terminals)

    @property
    def nonterminal_rules(self) -> list[DpoRule]:
        """P_N."""
        return [r for r in self.rules if r.name not in self.terminal_rules]

    @property
    def terminal_rule_list(self) -> list[DpoRule]:
        """P_T."""
        return [r for r in self.rules if r.name in self.terminal_rules]

    @property
    def terminal_names(self) -> set[str]:
        return {label.name for label in self.terminals}

    def rule(self, name: str) -> DpoRule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise InvalidRule(
            f"no rule named {name!r}" + did_you_mean(name, [r.name for r in self.rules])
        )

    def label(self, name: str) -> RankedLabel:
        for label in self.nonterminals + self.terminals:
            if label.name == name:
                return label
        names = [label.name for label in self.nonterminals + self.terminals]
        raise UnknownLabel(f"no label named {name!r}" + did_you_mean(name, names))


@dataclass(frozen=True)
class DpoStep:
    """One rule application: the graph before is context[hole/L′], after is context[hole/R′]."""

    rule: str
    context: Hypergraph
    hole: int
    result: Hypergraph


@dataclass(frozen=True)
class DpoDerivation:
    source: Hypergraph
    steps: tuple[DpoStep, ...] = ()

    @property
    def target(self) -> Hypergraph:
        return self.steps[-1].result if self.steps else self.source

    @property
    def rule_names(self) -> list[str]:
        return [step.rule for step in self.steps]

    def rule_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for step in self.steps:
            counts[step.rule] = counts.get(step.rule, 0) + 1
        return counts

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class LexGrammar:
    """⟨Σ, S, ▷⟩: a finite lexicon pairing terminals with types of the same rank.

    Attributes:
        alphabet: Terminal labels.
        start: The distinguished type S.
        lexicon: (terminal name, type) pairs, without duplicates up to type equality.
        source: Which construction produced the grammar, when known.
    """

    alphabet: tuple[RankedLabel, ...]
    start: TypeExpr
    lexicon: tuple[tuple[str, TypeExpr], ...]
    source: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "lexicon", tuple(self.lexicon))
        ranks = {label.name: label.rank for label in self.alphabet}
        for name, t in self.lexicon:
            if name not in ranks:
                raise UnknownLabel(
                    f"lexicon entry for unknown terminal {name!r}" + did_you_mean(name, ranks)
                )
            if ranks[name] != t.rank:
                raise RankMismatch(
                    f"terminal {name} has rank {ranks[name]} but is assigned a type of rank {t.rank}"
                )

    def types_for(self, name: str) -> list[TypeExpr]:
        return sorted(t for n, t in self.lexicon if n == name)


@dataclass(frozen=True)
class HlWitness:
    """An assignment of lexicon types to the edges of a graph, with the proof of f_G(G) → S."""

    assignment: Mapping[int, TypeExpr]
    tree: DerivationTree
