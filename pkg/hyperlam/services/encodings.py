"""From DPO grammars to hypergraph Lambek grammars, and membership in the result.

A nonterminal rule becomes the rank-0 type DPO(r) = ×(L̂) ÷ (R̂ + $₀•). The
exponential encoding keeps one !DPO(r) per rule in the start type; the truncated
encoding stores up to c copies of DPO(r) inside each terminal's type; the star
encoding uses *_O DPO(r) in place of !DPO(r).
"""

from __future__ import annotations

import itertools
import logging
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from hyperlam.config import get_settings
from hyperlam.exceptions import (
    BudgetExceeded,
    ConfigError,
    EncodingError,
    RankMismatch,
    SearchInvariantError,
    UnknownLabel,
)
from hyperlam.models.grammar import DpoDerivation, DpoGrammar, DpoRule, HlWitness, LexGrammar
from hyperlam.models.hypergraph import Dollar, Hypergraph, RankedLabel
from hyperlam.models.sequent import DerivationTree, Rule, Sequent
from hyperlam.models.types import Bang, Div, Mul, Prim, Star, TypeExpr, combine_balance
from hyperlam.services.calculus import subtypes
from hyperlam.services.canonical import same_shape
from hyperlam.services.dpo import derive_search, internal_forms, nonterminal_part
from hyperlam.services.outcome import Outcome, Verdict
from hyperlam.services.prover import Calculus, Prover, SearchConfig, rebase
from hyperlam.services.replacement import (
    disjoint_union,
    handle_filled,
    relabel,
    replace,
    sum_of,
)
from hyperlam.services.templates import o_template

logger = logging.getLogger(__name__)


def as_type(label: RankedLabel) -> Prim:
    """Grammar labels read as primitive types of the same rank."""
    return Prim(label.name, label.rank)


def typed(graph: Hypergraph) -> Hypergraph:
    """Relabel grammar labels by primitive types; holes and types are kept."""

    def label(edge):
        if isinstance(edge.label, RankedLabel):
            return as_type(edge.label)
        return edge.label

    return relabel(graph, label)


def _require_normalized(grammar: DpoGrammar) -> None:
    if not grammar.proxies and grammar.terminals:
        raise EncodingError("the grammar must be normalized first")


def dpo_type(rule: DpoRule, terminals: Iterable[str] = ()) -> Div:
    """×(L̂) ÷ (R̂ + $₀•) for a nonterminal rule."""
    blocked = set(terminals)
    for label in rule.labels():
        if getattr(label, "name", None) in blocked:
            raise EncodingError(f"rule {rule.name} is not nonterminal: it uses {label.name}")
    left, right = internal_forms(rule)
    denominator = disjoint_union(typed(right), handle_filled(Dollar(0)))
    dollar = denominator.edges[-1].id
    return Div(Mul(typed(left)), denominator, dollar)


def rule_types(grammar: DpoGrammar) -> list[tuple[str, Div]]:
    """(rule name, DPO(r)) for every rule of P_N, in rule order."""
    _require_normalized(grammar)
    terminals = grammar.terminal_names
    return [(rule.name, dpo_type(rule, terminals)) for rule in grammar.nonterminal_rules]


def _proxy_lexicon(grammar: DpoGrammar) -> tuple[tuple[str, TypeExpr], ...]:
    return tuple(
        (a.name, as_type(grammar.proxies[a.name])) for a in grammar.terminals
    )


def _start_with(grammar: DpoGrammar, resources: Sequence[TypeExpr]) -> Div:
    """S ÷ (Σ (resource)• + $_k•) with k the rank of S."""
    start = grammar.start
    denominator = disjoint_union(
        sum_of(handle_filled(t) for t in resources), handle_filled(Dollar(start.rank))
    )
    dollar = denominator.edges[-1].id
    return Div(as_type(start), denominator, dollar)


def lg_hmel(grammar: DpoGrammar) -> LexGrammar:
    """a ▷ T_a and S′ = S ÷ (Σ_{r ∈ P_N} (!DPO(r))• + $•)."""
    types = [Bang(t) for _, t in rule_types(grammar)]
    start = _start_with(grammar, types)
    logger.debug("exponential encoding with %d rule types", len(types))
    return LexGrammar(grammar.terminals, start, _proxy_lexicon(grammar), source="lg-hmel")


def lg_star(grammar: DpoGrammar) -> LexGrammar:
    """As `lg_hmel`, with *_O DPO(r) in place of !DPO(r)."""
    template = o_template()
    types = [Star(template, t) for _, t in rule_types(grammar)]
    start = _start_with(grammar, types)
    return LexGrammar(grammar.terminals, start, _proxy_lexicon(grammar), source="lg-star")


def lg_c(grammar: DpoGrammar, c: int) -> LexGrammar:
    """a ▷ ×(T_a• + Σ k_r·DPO(r)•) for every choice with Σ k_r ≤ c; start type S.

    Entries equal as types are listed once.
    """
    if c < 0:
        raise ConfigError(f"c must be >= 0, got {c}")
    types = sorted({t.key: t for _, t in rule_types(grammar)}.values())
    lexicon: dict[tuple[str, str], tuple[str, TypeExpr]] = {}
    for a in grammar.terminals:
        proxy = handle_filled(as_type(grammar.proxies[a.name]))
        for size in range(c + 1):
            for chosen in itertools.combinations_with_replacement(types, size):
                body = disjoint_union(proxy, sum_of(handle_filled(t) for t in chosen))
                entry = Mul(body)
                lexicon.setdefault((a.name, entry.key), (a.name, entry))
    logger.debug("truncated encoding c=%d: %d lexicon entries", c, len(lexicon))
    return LexGrammar(
        grammar.terminals,
        as_type(grammar.start),
        tuple(lexicon[key] for key in sorted(lexicon)),
        source=f"lg-c:{c}",
    )


def hl_witness_from_dpo(
    grammar: DpoGrammar, derivation: DpoDerivation, tree: DerivationTree
) -> DerivationTree:
    """Replay a derivation by nonterminal rules on top of a proof of Y → A.

    Each step Y ⇒_r Y′ with context C turns a proof of Y + F → A into a proof of
    Y′ + F + DPO(r)• → A by (×→) and (÷→), where F are the floating DPO edges
    left by earlier steps.
    """
    terminals = grammar.terminal_names
    goal = tree.conclusion.succedent
    floating = Hypergraph()
    current = tree
    if not same_shape(tree.conclusion.antecedent, typed(derivation.source)):
        raise EncodingError("the proof does not conclude the source of the derivation")
    for item in derivation.steps:
        rule = grammar.rule(item.rule)
        if rule.name in grammar.terminal_rules:
            raise EncodingError(f"step {rule.name} is a terminal rule")
        div = dpo_type(rule, terminals)
        product: Mul = div.numerator
        context = disjoint_union(typed(item.context), floating)
        hole = item.hole

        unfolded = Sequent(replace(context, hole, product.body), goal)
        if not same_shape(unfolded.antecedent, current.conclusion.antecedent):
            raise SearchInvariantError(f"step {rule.name} does not continue the replayed graph")
        folded = Sequent(context.with_label(hole, product), goal)
        mul_left = DerivationTree(
            Rule.MUL_LEFT, folded, (rebase(current, unfolded),), {"edge": hole}
        )

        axioms = []
        for d in div.parts:
            label = div.denominator.label_of(d)
            axioms.append(DerivationTree(Rule.AXIOM, Sequent(handle_filled(label), label)))
        filled = replace(div.denominator, div.dollar, handle_filled(div))
        conclusion = Sequent(replace(context, hole, filled), goal)
        current = DerivationTree(
            Rule.DIV_LEFT, conclusion, (mul_left, *axioms), {"edge": hole, "type": div}
        )
        floating = disjoint_union(floating, handle_filled(div))
    return current


def bang_introduce(tree: DerivationTree, resources: Sequence[TypeExpr]) -> DerivationTree:
    """From Y′ + Σ k_r·X_r• → A derive Y′ + Σ (!X_r)• → A, one !X per listed resource.

    Floating X-edges are derelicted, surplus copies contracted and missing
    ones weakened in.
    """
    goal = tree.conclusion.succedent
    antecedent = tree.conclusion.antecedent
    wanted: dict[str, int] = {}
    by_key: dict[str, TypeExpr] = {}
    for t in resources:
        wanted[t.key] = wanted.get(t.key, 0) + 1
        by_key[t.key] = t

    current = tree
    held: dict[str, list[int]] = {key: [] for key in wanted}
    for edge in antecedent.edges:
        if edge.rank == 0 and isinstance(edge.label, TypeExpr) and edge.label.key in wanted:
            antecedent = antecedent.with_label(edge.id, Bang(edge.label))
            current = DerivationTree(
                Rule.BANG_LEFT, Sequent(antecedent, goal), (current,), {"edge": edge.id}
            )
            held[edge.label.key].append(edge.id)

    for key in sorted(wanted):
        bang = Bang(by_key[key])
        copies = held[key]
        while len(copies) > wanted[key]:
            antecedent = antecedent.without_edge(copies.pop())
            current = DerivationTree(
                Rule.CONTRACT, Sequent(antecedent, goal), (current,), {"type": bang}
            )
        for _ in range(wanted[key] - len(copies)):
            antecedent = disjoint_union(antecedent, handle_filled(bang))
            current = DerivationTree(
                Rule.WEAKEN, Sequent(antecedent, goal), (current,), {"type": bang}
            )
    return current


def _check_graph(lexicon: LexGrammar, graph: Hypergraph) -> None:
    ranks = {label.name: label.rank for label in lexicon.alphabet}
    for edge in graph.edges:
        name = getattr(edge.label, "name", None)
        if not isinstance(edge.label, RankedLabel) or name not in ranks:
            raise UnknownLabel(
                f"edge {edge.id} is labeled {edge.label}, not a terminal of the grammar"
            )
        if ranks[name] != edge.rank:
            raise RankMismatch(f"edge {edge.id}: terminal {name} has rank {ranks[name]}")
    if graph.rank != lexicon.start.rank:
        raise RankMismatch(
            f"graph of rank {graph.rank} cannot meet a start type of rank {lexicon.start.rank}"
        )


def calculus_for(lexicon: LexGrammar) -> Calculus:
    """The smallest calculus whose connectives cover the lexicon and the start type."""
    found = set()
    for t in [lexicon.start] + [t for _, t in lexicon.lexicon]:
        for sub in subtypes(t):
            found.add(type(sub))
    if Star in found:
        return Calculus.HLSTAR
    if Bang in found:
        return Calculus.HMEL0
    return Calculus.HL


def assignments(
    lexicon: LexGrammar, graph: Hypergraph
) -> Iterator[dict[int, TypeExpr]]:
    """Every f_G with lab(e) ▷ f_G(e), edges in id order and types in type order.

    Assignments whose primitive balance differs from the start type are skipped.
    """
    options = [lexicon.types_for(edge.label.name) for edge in graph.edges]
    goal = lexicon.start.balance
    balanced = goal is not None and all(t.balance is not None for ts in options for t in ts)
    for choice in itertools.product(*options):
        if balanced:
            total: dict[str, int] = {}
            for t in choice:
                total = combine_balance(total, t.balance)
            if total != goal:
                continue
        yield {edge.id: t for edge, t in zip(graph.edges, choice)}


def member_hl(
    lexicon: LexGrammar,
    graph: Hypergraph,
    config: Optional[SearchConfig] = None,
    calculus: Optional[Calculus] = None,
) -> Outcome[HlWitness]:
    """Search for an assignment f_G with a derivable f_G(G) → S.

    NOT_MEMBER only when every assignment was refuted; UNKNOWN when some search
    stopped on a budget.
    """
    _check_graph(lexicon, graph)
    calculus = Calculus(calculus) if calculus is not None else calculus_for(lexicon)
    prover = Prover(calculus, config)
    tried = 0
    unknown: Optional[str] = None
    for assignment in assignments(lexicon, graph):
        tried += 1
        sequent = Sequent(relabel(graph, assignment), lexicon.start)
        outcome = prover.derive(sequent)
        if outcome.is_found:
            logger.debug("member after %d assignments", tried)
            return Outcome.found(
                HlWitness(assignment, outcome.value), assignments=tried, states=prover.states
            )
        if outcome.is_unknown:
            unknown = outcome.diagnostics
    if unknown is not None:
        return Outcome.unknown(unknown, assignments=tried, states=prover.states)
    return Outcome.refuted(Verdict.NOT_MEMBER, assignments=tried, states=prover.states)


def _proxied(grammar: DpoGrammar, graph: Hypergraph) -> Hypergraph:
    def label(edge):
        return grammar.proxies[edge.label.name]

    return relabel(graph, label)


def replay_certificate(
    grammar: DpoGrammar,
    lexicon: LexGrammar,
    graph: Hypergraph,
    max_steps: Optional[int] = None,
    state_cap: Optional[int] = None,
) -> Optional[HlWitness]:
    """A proof of t(H) → S′ built from a derivation S• ⇒* t(H) by nonterminal rules.

    None when no such derivation exists within `max_steps`.
    """
    _require_normalized(grammar)
    if not isinstance(lexicon.start, Div):
        raise EncodingError("the start type is not of the form S ÷ (... + $•)")
    steps = max_steps if max_steps is not None else get_settings().max_steps
    target = _proxied(grammar, graph)
    derivation = derive_search(nonterminal_part(grammar), target, steps, state_cap=state_cap)
    if derivation is None:
        return None
    start = as_type(grammar.start)
    seed = DerivationTree(Rule.AXIOM, Sequent(handle_filled(start), start))
    replayed = hl_witness_from_dpo(grammar, derivation, seed)

    start_type: Div = lexicon.start
    resources = [start_type.denominator.label_of(d) for d in start_type.parts]
    if not all(isinstance(t, Bang) for t in resources):
        raise EncodingError("replay needs an exponential encoding")
    banged = bang_introduce(replayed, [t.inner for t in resources])

    assignment = {edge.id: as_type(grammar.proxies[edge.label.name]) for edge in graph.edges}
    antecedent = relabel(graph, assignment)
    conclusion = Sequent(antecedent, start_type)
    premise = Sequent(replace(start_type.denominator, start_type.dollar, antecedent), start)
    if not same_shape(premise.antecedent, banged.conclusion.antecedent):
        raise SearchInvariantError("replayed proof does not match the start type")
    tree = DerivationTree(Rule.DIV_RIGHT, conclusion, (rebase(banged, premise),))
    return HlWitness(assignment, tree)


def member_hmel(
    lexicon: LexGrammar,
    graph: Hypergraph,
    grammar: Optional[DpoGrammar] = None,
    config: Optional[SearchConfig] = None,
    max_steps: Optional[int] = None,
) -> Outcome[HlWitness]:
    """Membership in an exponential encoding: FOUND or UNKNOWN.

    With the source grammar at hand a DPO derivation is replayed into a proof
    first; otherwise, or when that fails, HMEL₀ search decides within budgets.
    """
    _check_graph(lexicon, graph)
    if grammar is not None:
        try:
            witness = replay_certificate(
                grammar,
                lexicon,
                graph,
                max_steps,
                state_cap=config.state_cap if config is not None else None,
            )
        except BudgetExceeded as exc:
            logger.info("replay route stopped: %s", exc)
            witness = None
        if witness is not None:
            return Outcome.found(witness, route="replay")
    outcome = member_hl(lexicon, graph, config, Calculus.HMEL0)
    if outcome.is_found:
        outcome.stats["route"] = "search"
        return outcome
    return Outcome.unknown(
        outcome.diagnostics or "no certificate within the search budgets", **outcome.stats
    )


def lexicon_summary(lexicon: LexGrammar) -> Mapping[str, int]:
    """Entries per terminal."""
    counts: dict[str, int] = {label.name: 0 for label in lexicon.alphabet}
    for name, _ in lexicon.lexicon:
        counts[name] += 1
    return counts
