"""DPO rule application, normalization and bounded derivation search.

Rule application is an inverse replacement followed by a replacement: find a
context C with C[e0/L′] ≅ G, then produce C[e0/R′], where L′ and R′ are the
rule sides with the interface images as external nodes.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

from hyperlam.exceptions import ConfigError, InvalidContext, InvalidRule, UnknownLabel
from hyperlam.models.grammar import DpoDerivation, DpoGrammar, DpoRule, DpoStep
from hyperlam.models.hypergraph import Hypergraph, RankedLabel
from hyperlam.services.budget import BudgetConfig, BudgetStore
from hyperlam.services.canonical import CanonicalForm, canonical, same_shape
from hyperlam.services.decomposition import Decomposition, enumerate_contexts
from hyperlam.services.replacement import handle_filled, handle_open, relabel, replace

logger = logging.getLogger(__name__)


def internal_forms(rule: DpoRule) -> tuple[Hypergraph, Hypergraph]:
    """(L′, R′): the sides with the interface images as external sequences."""
    return rule.left.with_ext(rule.phi_left), rule.right.with_ext(rule.phi_right)


def reverse(rule: DpoRule) -> DpoRule:
    """R ← D_k → L."""
    return DpoRule(
        name=f"{rule.name}~",
        left=rule.right,
        k=rule.k,
        phi_left=rule.phi_right,
        phi_right=rule.phi_left,
        right=rule.left,
    )


def find_matches(graph: Hypergraph, rule: DpoRule) -> list[Decomposition]:
    """Every context presenting `graph` as an occurrence of the rule's left side."""
    left, _ = internal_forms(rule)
    return enumerate_contexts(graph, left)


def apply(graph: Hypergraph, rule: DpoRule, match: Decomposition) -> Hypergraph:
    """C[e0/R′] for a context produced by `find_matches`."""
    left, right = internal_forms(rule)
    if match.context is None or match.hole is None:
        raise InvalidContext(f"rule {rule.name}: context has no hole")
    hole = match.context.edge(match.hole)
    if hole.rank != rule.k:
        raise InvalidContext(
            f"rule {rule.name}: hole of rank {hole.rank} does not fit an interface of size {rule.k}"
        )
    if not same_shape(replace(match.context, match.hole, left), graph):
        raise InvalidContext(f"rule {rule.name}: context does not rebuild the graph")
    return replace(match.context, match.hole, right)


def step(graph: Hypergraph, rule: DpoRule, match: Decomposition) -> DpoStep:
    return DpoStep(rule.name, match.context, match.hole, apply(graph, rule, match))


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    suffix = 1
    while name in taken:
        name = f"{base}_{suffix}"
        suffix += 1
    taken.add(name)
    return name


def normalize(grammar: DpoGrammar) -> DpoGrammar:
    """Proxies T_a for every terminal, nonterminal rules over N′, terminal rules T_a° → a°.

    A grammar that is already normalized is returned unchanged.
    """
    if grammar.proxies:
        return grammar
    taken = {label.name for label in grammar.nonterminals + grammar.terminals}
    taken |= {rule.name for rule in grammar.rules}
    proxies = {
        a.name: RankedLabel(_fresh_name(f"T_{a.name}", taken), a.rank) for a in grammar.terminals
    }

    def proxied(graph: Hypergraph) -> Hypergraph:
        return relabel(
            graph, lambda e: proxies.get(getattr(e.label, "name", None), e.label)
        )

    nonterminal_rules = []
    for rule in grammar.rules:
        changed = any(getattr(label, "name", None) in proxies for label in rule.labels())
        if not changed:
            nonterminal_rules.append(rule)
            continue
        nonterminal_rules.append(
            DpoRule(
                name=_fresh_name(f"{rule.name}'", taken),
                left=proxied(rule.left),
                k=rule.k,
                phi_left=rule.phi_left,
                phi_right=rule.phi_right,
                right=proxied(rule.right),
            )
        )
    terminal_rules = []
    for a in grammar.terminals:
        identity = tuple(range(a.rank))
        terminal_rules.append(
            DpoRule(
                name=_fresh_name(f"t_{a.name}", taken),
                left=handle_open(proxies[a.name]),
                k=a.rank,
                phi_left=identity,
                phi_right=identity,
                right=handle_open(a),
            )
        )
    logger.debug(
        "normalized grammar: %d nonterminal rules, %d terminal rules",
        len(nonterminal_rules),
        len(terminal_rules),
    )
    return DpoGrammar(
        nonterminals=grammar.nonterminals + tuple(proxies.values()),
        terminals=grammar.terminals,
        rules=tuple(nonterminal_rules + terminal_rules),
        start=grammar.start,
        proxies=proxies,
        terminal_rules=frozenset(r.name for r in terminal_rules),
    )


def nonterminal_part(grammar: DpoGrammar) -> DpoGrammar:
    """The grammar of P_N alone, with the proxies playing the terminals."""
    if not grammar.proxies:
        raise ConfigError("only a normalized grammar has a nonterminal part")
    proxy_names = {label.name for label in grammar.proxies.values()}
    return DpoGrammar(
        nonterminals=tuple(l for l in grammar.nonterminals if l.name not in proxy_names),
        terminals=tuple(grammar.proxies.values()),
        rules=tuple(grammar.nonterminal_rules),
        start=grammar.start,
    )


def check_derivation(grammar: DpoGrammar, derivation: DpoDerivation) -> bool:
    """Replay every step: each context must rebuild the previous graph and yield the next."""
    current = derivation.source
    for item in derivation.steps:
        try:
            rule = grammar.rule(item.rule)
        except InvalidRule:
            return False
        left, right = internal_forms(rule)
        hole = item.context.edge_index.get(item.hole)
        if hole is None or hole.rank != rule.k:
            return False
        if not same_shape(replace(item.context, item.hole, left), current):
            return False
        if not same_shape(replace(item.context, item.hole, right), item.result):
            return False
        current = item.result
    return True


def _never_loses_nodes(rule: DpoRule) -> bool:
    # a non-injective right map fuses context nodes
    if len(set(rule.phi_right)) != rule.k:
        return False
    return len(rule.right.nodes) - rule.k >= len(rule.left.nodes) - len(set(rule.phi_left))


@dataclass
class _Pruner:
    """Sound bounds for forward search towards terminal graphs."""

    grammar: DpoGrammar
    node_monotone: bool
    groups: dict[str, set[str]]
    committed: set[str]

    @classmethod
    def for_grammar(cls, grammar: DpoGrammar) -> "_Pruner":
        left_labels: dict[str, int] = {}
        for rule in grammar.rules:
            for label in rule.left.labels():
                left_labels[label.name] = left_labels.get(label.name, 0) + 1
        node_monotone = all(_never_loses_nodes(r) for r in grammar.rules)
        groups: dict[str, set[str]] = {}
        committed: set[str] = set()
        for a in grammar.terminals:
            members = {a.name}
            proxy = grammar.proxies.get(a.name)
            if proxy is not None:
                consumers = [
                    r for r in grammar.rules
                    if proxy.name in {l.name for l in r.left.labels()}
                ]
                if all(r.name in grammar.terminal_rules for r in consumers):
                    members.add(proxy.name)
                    committed.add(proxy.name)
            if any(left_labels.get(name, 0) for name in members - committed):
                continue
            groups[a.name] = members
        return cls(grammar, node_monotone, groups, committed)

    def counts(self, graph: Hypergraph) -> dict[str, int]:
        tally: dict[str, int] = {}
        for edge in graph.edges:
            name = getattr(edge.label, "name", None)
            tally[name] = tally.get(name, 0) + 1
        return {a: sum(tally.get(m, 0) for m in members) for a, members in self.groups.items()}

    def pending(self, graph: Hypergraph) -> int:
        """Terminal-rule steps still owed by committed proxies."""
        return sum(1 for e in graph.edges if getattr(e.label, "name", None) in self.committed)


def _initial(grammar: DpoGrammar, source: Optional[Hypergraph]) -> Hypergraph:
    return source if source is not None else handle_filled(grammar.start)


def _successors(
    grammar: DpoGrammar, graph: Hypergraph
) -> Iterator[tuple[DpoRule, DpoStep]]:
    for rule in grammar.rules:
        for match in find_matches(graph, rule):
            yield rule, step(graph, rule, match)


def derive_search(
    grammar: DpoGrammar,
    target: Hypergraph,
    max_steps: int,
    *,
    count_original_steps: bool = False,
    state_cap: Optional[int] = None,
    source: Optional[Hypergraph] = None,
) -> Optional[DpoDerivation]:
    """A shortest derivation S• ⇒* target of at most `max_steps` steps, or None.

    None means no derivation within the bound. With `count_original_steps`
    terminal rules of a normalized grammar cost nothing.

    Raises:
        BudgetExceeded: when more than `state_cap` graphs were expanded.
    """
    if max_steps < 0:
        raise ConfigError(f"max_steps must be >= 0, got {max_steps}")
    budget = BudgetConfig.state_cap(state_cap, "dpo states")
    store = BudgetStore()
    pruner = _Pruner.for_grammar(grammar)
    target_key = canonical(target)
    target_counts = pruner.counts(target)
    target_nodes = len(target.nodes)

    def cost_of(rule: DpoRule) -> int:
        return 0 if count_original_steps and rule.name in grammar.terminal_rules else 1

    def hopeless(graph: Hypergraph, cost: int) -> bool:
        if pruner.node_monotone and len(graph.nodes) > target_nodes:
            return True
        counts = pruner.counts(graph)
        if any(counts[a] > target_counts.get(a, 0) for a in counts):
            return True
        owed = 0 if count_original_steps else pruner.pending(graph)
        return cost + owed > max_steps

    start = _initial(grammar, source)
    start_key = canonical(start)
    best: dict[CanonicalForm, int] = {start_key: 0}
    parent: dict[CanonicalForm, tuple[CanonicalForm, DpoStep]] = {}
    graphs: dict[CanonicalForm, Hypergraph] = {start_key: start}
    queue: deque[tuple[int, CanonicalForm]] = deque([(0, start_key)])

    while queue:
        cost, key = queue.popleft()
        if cost > best[key]:
            continue
        if key == target_key:
            steps = []
            while key in parent:
                key, item = parent[key]
                steps.append(item)
            steps.reverse()
            logger.debug("derivation of %d steps found", len(steps))
            return DpoDerivation(start, tuple(steps))
        store.charge(budget)
        graph = graphs[key]
        for rule, item in _successors(grammar, graph):
            next_cost = cost + cost_of(rule)
            if next_cost > max_steps or hopeless(item.result, next_cost):
                continue
            next_key = canonical(item.result)
            if next_key in best and best[next_key] <= next_cost:
                continue
            best[next_key] = next_cost
            parent[next_key] = (key, item)
            graphs[next_key] = item.result
            if next_cost == cost:
                queue.appendleft((next_cost, next_key))
            else:
                queue.append((next_cost, next_key))
    logger.debug("no derivation within %d steps (%d graphs)", max_steps, len(best))
    return None


def require_terminal(grammar: DpoGrammar, graph: Hypergraph) -> None:
    terminals = {(label.name, label.rank) for label in grammar.terminals}
    for edge in graph.edges:
        key = (getattr(edge.label, "name", None), edge.rank)
        if key not in terminals:
            raise UnknownLabel(f"edge {edge.id} is labeled {edge.label}, not a terminal")


def lc_member(
    grammar: DpoGrammar,
    graph: Hypergraph,
    c: int,
    *,
    count_original_steps: bool = False,
    state_cap: Optional[int] = None,
) -> Optional[DpoDerivation]:
    """A derivation of at most c·|E| steps, or None when the graph is not in L_c."""
    if c < 0:
        raise ConfigError(f"c must be >= 0, got {c}")
    require_terminal(grammar, graph)
    return derive_search(
        grammar,
        graph,
        c * len(graph.edges),
        count_original_steps=count_original_steps,
        state_cap=state_cap,
    )


@dataclass(frozen=True)
class LanguageEntry:
    """A generated graph with the fewest steps found for it."""

    graph: Hypergraph
    steps: int


def enumerate_language(
    grammar: DpoGrammar,
    max_steps: int,
    max_nodes: int,
    max_edges: int,
    *,
    count_original_steps: bool = False,
    state_cap: Optional[int] = None,
) -> dict[CanonicalForm, LanguageEntry]:
    """Terminal graphs derivable within the bounds, keyed by canonical form."""
    if min(max_steps, max_nodes, max_edges) < 0:
        raise ConfigError("enumeration bounds must be >= 0")
    budget = BudgetConfig.state_cap(state_cap, "dpo states")
    store = BudgetStore()
    pruner = _Pruner.for_grammar(grammar)
    terminal_names = grammar.terminal_names

    def cost_of(rule: DpoRule) -> int:
        return 0 if count_original_steps and rule.name in grammar.terminal_rules else 1

    def hopeless(graph: Hypergraph, cost: int) -> bool:
        if pruner.node_monotone and len(graph.nodes) > max_nodes:
            return True
        if sum(pruner.counts(graph).values()) > max_edges:
            return True
        owed = 0 if count_original_steps else pruner.pending(graph)
        return cost + owed > max_steps

    start = handle_filled(grammar.start)
    start_key = canonical(start)
    best = {start_key: 0}
    graphs = {start_key: start}
    queue: deque[tuple[int, CanonicalForm]] = deque([(0, start_key)])
    language: dict[CanonicalForm, LanguageEntry] = {}
    while queue:
        cost, key = queue.popleft()
        if cost > best[key]:
            continue
        graph = graphs[key]
        if (
            all(getattr(e.label, "name", None) in terminal_names for e in graph.edges)
            and len(graph.nodes) <= max_nodes
            and len(graph.edges) <= max_edges
            and key not in language
        ):
            language[key] = LanguageEntry(graph, cost)
        store.charge(budget)
        for rule, item in _successors(grammar, graph):
            next_cost = cost + cost_of(rule)
            if next_cost > max_steps or hopeless(item.result, next_cost):
                continue
            next_key = canonical(item.result)
            if next_key in best and best[next_key] <= next_cost:
                continue
            best[next_key] = next_cost
            graphs[next_key] = item.result
            if next_cost == cost:
                queue.appendleft((next_cost, next_key))
            else:
                queue.append((next_cost, next_key))
    logger.debug("enumerated %d graphs from %d states", len(language), len(best))
    return language
