"""Backward proof search for HL, HMEL₀ and HL with the conjunctive Kleene star.

Search order at every sequent: the invertible rules (→÷) and (×→) are applied
eagerly; then the axiom, promotion, dereliction, (÷→) over all decompositions,
(→×) over all decompositions, and finally the star rules. Sequents are memoized
by canonical key.

In HMEL₀ the floating !-edges of an antecedent form a zone: duplicates are
dropped by weakening, every branching rule hands a copy of the zone to each
premise (contraction), and a dereliction keeps the !-edge while adding a copy of
its body. Each of these bookkeeping moves is recorded in the tree, so returned
trees only use the rules of the calculus.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace as dc_replace
from enum import Enum
from typing import Callable, Optional

from hyperlam.config import get_settings
from hyperlam.exceptions import BudgetExceeded, ConfigError, InvalidType, SearchInvariantError
from hyperlam.models.hypergraph import Hypergraph
from hyperlam.models.sequent import DerivationTree, Rule, Sequent
from hyperlam.models.types import Bang, Div, Mul, Star, TypeExpr
from hyperlam.services.budget import BudgetConfig, BudgetStore
from hyperlam.services.calculus import (
    invert_product,
    invert_rdiv,
    match_divisor,
    match_product,
    sequent_balanced,
    sequent_types,
    type_equal,
    validate_type,
)
from hyperlam.services.canonical import isomorphic, same_shape
from hyperlam.services.outcome import Outcome, Verdict
from hyperlam.services.replacement import disjoint_union, handle_filled, replace
from hyperlam.services.templates import t_iterate

logger = logging.getLogger(__name__)


class Calculus(str, Enum):
    """Which calculus a search runs in."""

    HL = "hl"
    HMEL0 = "hmel0"
    HLSTAR = "hl-star"


@dataclass
class SearchConfig:
    """Search budgets. Unset fields are filled per sequent by `resolved`.

    Attributes:
        max_depth: Longest branch explored (HMEL₀ and star search only).
        max_bang_copies: Derelictions allowed per !-type along one branch.
        star_cap: Largest n tried for (*→) and checked for (→*).
        state_cap: Sequents expanded before giving up (HMEL₀ and star search only).
        accept_bounded_omega: Accept (→*) once every n up to star_cap is derivable.
    """

    max_depth: Optional[int] = None
    max_bang_copies: Optional[int] = None
    star_cap: Optional[int] = None
    state_cap: Optional[int] = None
    accept_bounded_omega: bool = False

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or value is None:
                continue
            if value <= 0:
                raise ConfigError(f"{item.name} must be positive, got {value}")

    def resolved(self, sequent: Sequent, calculus: "Calculus") -> "SearchConfig":
        """Defaults: |E| + 8 copies, 4 · connectives depth, caps from settings."""
        settings = get_settings()
        star_cap = self.star_cap if self.star_cap is not None else settings.star_cap
        depth = self.max_depth
        if depth is None:
            depth = 4 * max(1, sequent.connectives)
            if calculus is Calculus.HLSTAR:
                depth *= star_cap + 1
        return dc_replace(
            self,
            max_depth=depth,
            max_bang_copies=(
                self.max_bang_copies
                if self.max_bang_copies is not None
                else len(sequent.antecedent.edges) + 8
            ),
            star_cap=star_cap,
            state_cap=self.state_cap if self.state_cap is not None else settings.state_cap,
        )


def _zone(graph: Hypergraph, calculus: Calculus) -> list[int]:
    if calculus is not Calculus.HMEL0:
        return []
    return [e.id for e in graph.edges if isinstance(e.label, Bang)]


def _without(graph: Hypergraph, edge_ids: list[int]) -> Hypergraph:
    drop = set(edge_ids)
    return Hypergraph(graph.nodes, tuple(e for e in graph.edges if e.id not in drop), graph.ext)


def _zone_graph(graph: Hypergraph, zone: list[int]) -> Hypergraph:
    keep = set(zone)
    return Hypergraph((), tuple(e for e in graph.edges if e.id in keep), ())


def _contracted(
    sequent: Sequent, labels: list[TypeExpr], copies: int
) -> tuple[Sequent, Callable[[DerivationTree], DerivationTree]]:
    """The sequent with `copies` extra copies of each zone label, and the (c) chain back."""
    added = [label for _ in range(copies) for label in labels]
    graphs = [sequent.antecedent]
    for label in added:
        graphs.append(disjoint_union(graphs[-1], handle_filled(label)))
    top = Sequent(graphs[-1], sequent.succedent) if added else sequent

    def wrap(tree: DerivationTree) -> DerivationTree:
        for t in reversed(range(len(added))):
            conclusion = sequent if t == 0 else Sequent(graphs[t], sequent.succedent)
            tree = DerivationTree(Rule.CONTRACT, conclusion, (tree,), {"type": added[t]})
        return tree

    return top, wrap


def _weakened(
    sequent: Sequent, drop: list[int]
) -> tuple[Sequent, Callable[[DerivationTree], DerivationTree]]:
    """The sequent without the given !-edges, and the (w) chain back."""
    graphs = [sequent.antecedent]
    for edge_id in drop:
        graphs.append(graphs[-1].without_edge(edge_id))
    top = Sequent(graphs[-1], sequent.succedent) if drop else sequent

    def wrap(tree: DerivationTree) -> DerivationTree:
        for t in reversed(range(len(drop))):
            conclusion = sequent if t == 0 else Sequent(graphs[t], sequent.succedent)
            label = sequent.antecedent.label_of(drop[t])
            tree = DerivationTree(Rule.WEAKEN, conclusion, (tree,), {"type": label})
        return tree

    return top, wrap


def rebase(tree: DerivationTree, sequent: Sequent) -> DerivationTree:
    """Re-root a tree at an isomorphic copy of its conclusion."""
    if tree.conclusion is sequent:
        return tree
    data = dict(tree.data)
    if "edge" in data and tree.rule in (Rule.MUL_LEFT, Rule.STAR_LEFT):
        witness = isomorphic(tree.conclusion.antecedent, sequent.antecedent)
        if witness is None:
            raise SearchInvariantError("memoized tree does not fit an equal-key sequent")
        data["edge"] = witness.edge_map[data["edge"]]
    return DerivationTree(tree.rule, sequent, tree.premises, data)


class Prover:
    """One search session; memo tables are shared by every `derive` call on it."""

    def __init__(
        self,
        calculus: Calculus = Calculus.HL,
        config: Optional[SearchConfig] = None,
        store: Optional[BudgetStore] = None,
    ):
        self.calculus = Calculus(calculus)
        self.config = config or SearchConfig()
        self.store = store if store is not None else BudgetStore()
        self.limits = self.config
        self._found: dict[str, DerivationTree] = {}
        self._refuted: set[str] = set()
        self._cut: set[tuple] = set()
        self._active: set[str] = set()
        self._cuts = 0
        self.states = 0

    @property
    def limited(self) -> bool:
        return self.calculus is not Calculus.HL

    def check_calculus(self, sequent: Sequent) -> None:
        for t in sequent_types(sequent):
            if isinstance(t, Bang) and self.calculus is not Calculus.HMEL0:
                raise InvalidType(f"{self.calculus.value} does not admit the ! modality")
            if isinstance(t, Star) and self.calculus is not Calculus.HLSTAR:
                raise InvalidType(f"{self.calculus.value} does not admit the conjunctive star")
        for edge in sequent.antecedent.edges:
            problems = validate_type(edge.label)
            if problems:
                raise InvalidType("; ".join(problems))
        problems = validate_type(sequent.succedent)
        if problems:
            raise InvalidType("; ".join(problems))

    def derive(self, sequent: Sequent) -> Outcome[DerivationTree]:
        self.check_calculus(sequent)
        self.limits = self.config.resolved(sequent, self.calculus)
        budget = BudgetConfig(self.limits.state_cap, "sequents")
        self._budget = budget
        cuts_before = self._cuts
        try:
            tree = self._prove(sequent, 0, ())
        except BudgetExceeded as exc:
            logger.info("search for %s stopped: %s", sequent, exc)
            self._active.clear()
            return Outcome.unknown(str(exc), states=self.states)
        if tree is not None:
            logger.debug("derived %s after %d states", sequent, self.states)
            return Outcome.found(tree, states=self.states)
        if self._cuts > cuts_before:
            return Outcome.unknown(
                "search space cut by depth, copy or unfolding bounds", states=self.states
            )
        return Outcome.refuted(Verdict.NOT_DERIVABLE, states=self.states)

    def _prove(
        self, sequent: Sequent, depth: int, derels: tuple[tuple[str, int], ...]
    ) -> Optional[DerivationTree]:
        key = sequent.key
        hit = self._found.get(key)
        if hit is not None:
            return rebase(hit, sequent)
        if key in self._refuted:
            return None
        cut_key = (key, depth, derels)
        if self.limited:
            if cut_key in self._cut or key in self._active:
                self._cuts += 1
                return None
            if depth > self.limits.max_depth:
                self._cuts += 1
                return None
            self.store.charge(self._budget)
        self.states += 1

        cuts_before = self._cuts
        self._active.add(key)
        try:
            tree = self._expand(sequent, depth, derels)
        finally:
            self._active.discard(key)
        if tree is not None:
            self._found[key] = tree
        elif self._cuts == cuts_before:
            self._refuted.add(key)
        else:
            self._cut.add(cut_key)
        return tree

    def _check_metric(self, conclusion: Sequent, premises: list[Sequent]) -> None:
        if conclusion.has_exponentials:
            return
        total = sum(p.connectives for p in premises)
        if total != conclusion.connectives - 1:
            raise SearchInvariantError(
                f"connectives went from {conclusion.connectives} to {total} in one step"
            )

    def _expand(
        self, sequent: Sequent, depth: int, derels: tuple[tuple[str, int], ...]
    ) -> Optional[DerivationTree]:
        antecedent, succedent = sequent.antecedent, sequent.succedent
        zone = _zone(antecedent, self.calculus)

        seen: set[str] = set()
        duplicates = []
        for edge_id in zone:
            label_key = antecedent.label_of(edge_id).key
            if label_key in seen:
                duplicates.append(edge_id)
            seen.add(label_key)
        if duplicates:
            reduced, wrap = _weakened(sequent, duplicates)
            sub = self._prove(reduced, depth, derels)
            return None if sub is None else wrap(sub)

        if isinstance(succedent, Div):
            premise = invert_rdiv(sequent)
            self._check_metric(sequent, [premise])
            sub = self._prove(premise, depth + 1, derels)
            return None if sub is None else DerivationTree(Rule.DIV_RIGHT, sequent, (sub,))

        for edge in antecedent.edges:
            if isinstance(edge.label, Mul):
                premise = invert_product(sequent, edge.id)
                self._check_metric(sequent, [premise])
                sub = self._prove(premise, depth + 1, derels)
                if sub is None:
                    return None
                return DerivationTree(Rule.MUL_LEFT, sequent, (sub,), {"edge": edge.id})

        if sequent_balanced(sequent) is False:
            return None

        linear = _without(antecedent, zone)
        tree = self._axiom(sequent, linear, zone)
        if tree is not None:
            return tree

        if isinstance(succedent, Bang) and not linear.nodes and not linear.edges:
            premise = Sequent(antecedent, succedent.inner)
            sub = self._prove(premise, depth + 1, derels)
            if sub is not None:
                return DerivationTree(Rule.BANG_RIGHT, sequent, (sub,))

        if zone:
            counts = dict(derels)
            for edge_id in sorted(zone, key=lambda e: antecedent.label_of(e).key):
                label = antecedent.label_of(edge_id)
                if counts.get(label.key, 0) >= self.limits.max_bang_copies:
                    self._cuts += 1
                    continue
                tree = self._derelict(sequent, label, depth, counts)
                if tree is not None:
                    return tree

        for edge in linear.edges:
            if isinstance(edge.label, Div):
                tree = self._divide(sequent, linear, zone, edge.id, depth, derels)
                if tree is not None:
                    return tree

        if isinstance(succedent, Mul):
            tree = self._multiply(sequent, linear, zone, depth, derels)
            if tree is not None:
                return tree

        if self.calculus is Calculus.HLSTAR:
            for edge in antecedent.edges:
                if isinstance(edge.label, Star):
                    tree = self._unfold(sequent, edge.id, depth, derels)
                    if tree is not None:
                        return tree
            if isinstance(succedent, Star):
                return self._omega(sequent, depth, derels)
        return None

    def _axiom(
        self, sequent: Sequent, linear: Hypergraph, zone: list[int]
    ) -> Optional[DerivationTree]:
        succedent = sequent.succedent
        if same_shape(linear, handle_filled(succedent)):
            top, wrap = _weakened(sequent, zone)
            return wrap(DerivationTree(Rule.AXIOM, top))
        if isinstance(succedent, Bang) and not linear.nodes and not linear.edges:
            for edge_id in zone:
                if type_equal(sequent.antecedent.label_of(edge_id), succedent):
                    top, wrap = _weakened(sequent, [e for e in zone if e != edge_id])
                    return wrap(DerivationTree(Rule.AXIOM, top))
        return None

    def _derelict(
        self, sequent: Sequent, label: Bang, depth: int, counts: dict[str, int]
    ) -> Optional[DerivationTree]:
        doubled = disjoint_union(sequent.antecedent, handle_filled(label))
        copy_id = doubled.edges[-1].id
        premise = Sequent(doubled.with_label(copy_id, label.inner), sequent.succedent)
        grown = dict(counts)
        grown[label.key] = grown.get(label.key, 0) + 1
        sub = self._prove(premise, depth + 1, tuple(sorted(grown.items())))
        if sub is None:
            return None
        dereliction = DerivationTree(
            Rule.BANG_LEFT, Sequent(doubled, sequent.succedent), (sub,), {"edge": copy_id}
        )
        return DerivationTree(Rule.CONTRACT, sequent, (dereliction,), {"type": label})

    def _divide(
        self,
        sequent: Sequent,
        linear: Hypergraph,
        zone: list[int],
        edge_id: int,
        depth: int,
        derels: tuple[tuple[str, int], ...],
    ) -> Optional[DerivationTree]:
        label: Div = linear.label_of(edge_id)
        labels = [sequent.antecedent.label_of(e) for e in zone]
        zone_graph = _zone_graph(sequent.antecedent, zone)
        top, wrap = _contracted(sequent, labels, len(label.parts))
        for decomposition in match_divisor(linear, edge_id):
            first = Sequent(
                disjoint_union(decomposition.context, zone_graph), sequent.succedent
            )
            rest = [
                Sequent(disjoint_union(piece, zone_graph), label.denominator.label_of(d))
                for d, piece in decomposition.pieces
            ]
            self._check_metric(top, [first] + rest)
            subs = []
            for premise in rest + [first]:
                sub = self._prove(premise, depth + 1, derels)
                if sub is None:
                    break
                subs.append(sub)
            else:
                tree = DerivationTree(
                    Rule.DIV_LEFT,
                    top,
                    (subs[-1],) + tuple(subs[:-1]),
                    {"edge": decomposition.hole, "type": label},
                )
                return wrap(tree)
        return None

    def _multiply(
        self,
        sequent: Sequent,
        linear: Hypergraph,
        zone: list[int],
        depth: int,
        derels: tuple[tuple[str, int], ...],
    ) -> Optional[DerivationTree]:
        body = sequent.succedent.body
        labels = [sequent.antecedent.label_of(e) for e in zone]
        zone_graph = _zone_graph(sequent.antecedent, zone)
        if not body.edges:
            if not match_product(linear, body):
                return None
            top, wrap = _weakened(sequent, zone)
            self._check_metric(top, [])
            return wrap(DerivationTree(Rule.MUL_RIGHT, top))
        top, wrap = _contracted(sequent, labels, len(body.edges) - 1)
        for decomposition in match_product(linear, body):
            premises = [
                Sequent(disjoint_union(piece, zone_graph), body.label_of(m))
                for m, piece in decomposition.pieces
            ]
            self._check_metric(top, premises)
            subs = []
            for premise in premises:
                sub = self._prove(premise, depth + 1, derels)
                if sub is None:
                    break
                subs.append(sub)
            else:
                return wrap(DerivationTree(Rule.MUL_RIGHT, top, tuple(subs)))
        return None

    def _unfold(
        self, sequent: Sequent, edge_id: int, depth: int, derels: tuple[tuple[str, int], ...]
    ) -> Optional[DerivationTree]:
        label: Star = sequent.antecedent.label_of(edge_id)
        for n in range(self.limits.star_cap + 1):
            filler = t_iterate(label.template, label.inner, n)
            premise = Sequent(replace(sequent.antecedent, edge_id, filler), sequent.succedent)
            sub = self._prove(premise, depth + 1, derels)
            if sub is not None:
                return DerivationTree(
                    Rule.STAR_LEFT, sequent, (sub,), {"edge": edge_id, "n": n}
                )
        self._cuts += 1
        return None

    def _omega(
        self, sequent: Sequent, depth: int, derels: tuple[tuple[str, int], ...]
    ) -> Optional[DerivationTree]:
        label: Star = sequent.succedent
        subs = []
        for n in range(self.limits.star_cap + 1):
            goal = Mul(t_iterate(label.template, label.inner, n))
            sub = self._prove(Sequent(sequent.antecedent, goal), depth + 1, derels)
            if sub is None:
                return None
            subs.append(sub)
        if not self.limits.accept_bounded_omega:
            self._cuts += 1
            return None
        return DerivationTree(
            Rule.STAR_RIGHT_BOUNDED, sequent, tuple(subs), {"n": self.limits.star_cap}
        )


def derive(
    sequent: Sequent,
    calculus: Calculus = Calculus.HL,
    config: Optional[SearchConfig] = None,
) -> Outcome[DerivationTree]:
    """Search for a derivation of `sequent`.

    HL search is complete and always ends FOUND or NOT_DERIVABLE. HMEL₀ and star
    search end UNKNOWN whenever a budget cut part of the search space.
    """
    return Prover(calculus, config).derive(sequent)


@dataclass
class Composition:
    """A composed sequent, its cut tree (when built) and the search verdict on it."""

    sequent: Sequent
    outcome: Outcome[DerivationTree]
    cut_tree: Optional[DerivationTree] = None


def cut_compose(
    left: DerivationTree,
    right: DerivationTree,
    edge_id: int,
    calculus: Calculus = Calculus.HL,
    config: Optional[SearchConfig] = None,
) -> Composition:
    """From H → A and G[e0/A•] → B build G[e0/H] → B and search for a cut-free proof."""
    cut_type = left.conclusion.succedent
    host = right.conclusion.antecedent
    if not type_equal(host.label_of(edge_id), cut_type):
        raise InvalidType(f"edge {edge_id} is not labeled by the cut type {cut_type}")
    composed = Sequent(replace(host, edge_id, left.conclusion.antecedent), right.conclusion.succedent)
    cut_tree = DerivationTree(Rule.CUT, composed, (left, right), {"edge": edge_id})
    return Composition(composed, derive(composed, calculus, config), cut_tree)


def mix_compose(
    left: DerivationTree,
    right: DerivationTree,
    copies: int,
    config: Optional[SearchConfig] = None,
) -> Composition:
    """From H → !C and G + n·(!C)• → B build G + H → B and search in HMEL₀."""
    bang = left.conclusion.succedent
    if not isinstance(bang, Bang):
        raise InvalidType(f"mix needs a !-succedent, got {bang}")
    if copies <= 0:
        raise ConfigError(f"mix needs at least one copy, got {copies}")
    host = right.conclusion.antecedent
    matching = [e.id for e in host.edges if type_equal(e.label, bang)]
    if len(matching) < copies:
        raise InvalidType(f"antecedent has {len(matching)} copies of {bang}, need {copies}")
    rest = _without(host, matching[:copies])
    composed = Sequent(
        disjoint_union(rest, left.conclusion.antecedent), right.conclusion.succedent
    )
    return Composition(composed, derive(composed, Calculus.HMEL0, config))
