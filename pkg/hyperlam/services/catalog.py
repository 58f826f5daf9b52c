"""Worked grammars, rules and sequents used as golden inputs.

`rho_rule` rewrites two edges l, r leaving a common node into a ternary t and a
unary f. The "all graphs" grammar grows nodes with one rule and binary a-edges
with another; its normalized form derives the two-loop triangle in nine steps.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from hyperlam.exceptions import InvalidContext
from hyperlam.models.grammar import DpoDerivation, DpoGrammar, DpoRule
from hyperlam.models.hypergraph import Hypergraph, RankedLabel
from hyperlam.models.sequent import DerivationTree, Rule, Sequent
from hyperlam.models.types import Mul, TypeExpr
from hyperlam.services.canonical import same_shape
from hyperlam.services.dpo import find_matches, step
from hyperlam.services.encodings import as_type, hl_witness_from_dpo, rule_types, typed
from hyperlam.services.replacement import discrete, disjoint_union, handle_filled, handle_open, sum_of

L = RankedLabel("l", 2)
R = RankedLabel("r", 2)
T = RankedLabel("t", 3)
F = RankedLabel("f", 1)
P = RankedLabel("p", 2)
S = RankedLabel("S", 0)
A = RankedLabel("a", 2)


def rho_rule() -> DpoRule:
    """l:(0,1) r:(0,2) ← D_3 → t:(0,1,2) f:(0)."""
    return DpoRule(
        name="rho",
        left=Hypergraph.build([0, 1, 2], [(0, L, (0, 1)), (1, R, (0, 2))]),
        k=3,
        phi_left=(0, 1, 2),
        phi_right=(0, 1, 2),
        right=Hypergraph.build([0, 1, 2], [(0, T, (0, 1, 2)), (1, F, (0,))]),
    )


def rho_grammar() -> DpoGrammar:
    """A terminal-free grammar holding ρ alone; every label is a nonterminal."""
    return DpoGrammar(
        nonterminals=(S, L, R, T, F, P),
        terminals=(),
        rules=(rho_rule(),),
        start=S,
    )


def rho_source() -> Hypergraph:
    """The l, r, p triangle on which ρ fires once."""
    return Hypergraph.build(
        [0, 1, 2], [(0, L, (0, 1)), (1, R, (0, 2)), (2, P, (1, 2))]
    )


def rho_derivation() -> DpoDerivation:
    source = rho_source()
    rule = rho_rule()
    matches = find_matches(source, rule)
    if not matches:
        raise InvalidContext("ρ does not apply to its source triangle")
    return DpoDerivation(source, (step(source, rule, matches[0]),))


def product_axioms(graph: Hypergraph) -> DerivationTree:
    """(→×) over axioms: G → ×(G) for a type-labeled zero-rank graph."""
    premises = tuple(
        DerivationTree(Rule.AXIOM, Sequent(handle_filled(e.label), e.label)) for e in graph.edges
    )
    return DerivationTree(Rule.MUL_RIGHT, Sequent(graph, Mul(graph)), premises)


def rho_tree() -> DerivationTree:
    """t, f, p + DPO(ρ)• → ×(l, r, p) by (÷→) over (×→) over (→×)."""
    seed = product_axioms(typed(rho_source()))
    return hl_witness_from_dpo(rho_grammar(), rho_derivation(), seed)


def rho_sequent() -> Sequent:
    return rho_tree().conclusion


RHO_SKELETON = (
    "div-left",
    (
        ("mul-left", (("mul-right", (("axiom", ()),) * 3),)),
        ("axiom", ()),
        ("axiom", ()),
    ),
)


def all_graphs_grammar() -> DpoGrammar:
    """S° → D_0, S° → S° plus a node, and D_2 → a:(0,1)."""
    start = handle_open(S)
    return DpoGrammar(
        nonterminals=(S,),
        terminals=(A,),
        rules=(
            DpoRule("r1", start, 0, (), (), discrete(0)),
            DpoRule("r2", start, 0, (), (), Hypergraph.build([0], [(0, S, ())])),
            DpoRule(
                "r3",
                discrete(2),
                2,
                (0, 1),
                (0, 1),
                Hypergraph.build([0, 1], [(0, A, (0, 1))]),
            ),
        ),
        start=S,
    )


def two_loop_triangle() -> Hypergraph:
    """Loops on nodes 0 and 1 plus the edge 0 → 1, all labeled a."""
    return Hypergraph.build([0, 1], [(0, A, (0, 0)), (1, A, (1, 1)), (2, A, (0, 1))])


def all_graphs_chain() -> list[tuple[str, Hypergraph]]:
    """(rule, graph after it) along r2, r2, r1, r3, r3, r3 from S°."""
    return [
        ("r2", Hypergraph.build([0], [(0, S, ())])),
        ("r2", Hypergraph.build([0, 1], [(0, S, ())])),
        ("r1", discrete(2)),
        ("r3", Hypergraph.build([0, 1], [(0, A, (0, 1))])),
        ("r3", Hypergraph.build([0, 1], [(0, A, (0, 1)), (1, A, (1, 1))])),
        ("r3", two_loop_triangle()),
    ]


def follow_chain(
    grammar: DpoGrammar, source: Hypergraph, chain: Sequence[tuple[str, Hypergraph]]
) -> DpoDerivation:
    """The derivation through the listed graphs, choosing at each step a matching context.

    Raises:
        InvalidContext: when no occurrence of a rule yields the next listed graph.
    """
    current = source
    steps = []
    for name, expected in chain:
        rule = grammar.rule(name)
        for match in find_matches(current, rule):
            item = step(current, rule, match)
            if same_shape(item.result, expected):
                break
        else:
            raise InvalidContext(f"rule {name} cannot produce the next graph of the chain")
        steps.append(item)
        current = item.result
    return DpoDerivation(source, tuple(steps))


def truncated_entry(grammar: DpoGrammar, terminal: str, rules: Sequence[str]) -> Mul:
    """×(T_a• + Σ DPO(r)•) for the named nonterminal rules of a normalized grammar."""
    by_name: Mapping[str, TypeExpr] = dict(rule_types(grammar))
    proxy = handle_filled(as_type(grammar.proxies[terminal]))
    return Mul(disjoint_union(proxy, sum_of(handle_filled(by_name[r]) for r in rules)))


def two_loop_assignment(grammar: DpoGrammar) -> dict[int, Mul]:
    """Two r2 copies on the first loop, two r3′ on the second, r1 and r3′ on the edge."""
    r1, r2, r3 = (rule.name for rule in grammar.nonterminal_rules)
    return {
        0: truncated_entry(grammar, "a", [r2, r2]),
        1: truncated_entry(grammar, "a", [r3, r3]),
        2: truncated_entry(grammar, "a", [r1, r3]),
    }
