"""DPO rewriting: single applications, derivation search, L_c membership, normalization
and language enumeration."""

import logging
from typing import Optional

import click

from hyperlam.commands.base import (
    AppContext,
    HyperlamGroup,
    emit,
    pass_app,
    positive,
    write_artifacts,
)
from hyperlam.config import get_settings
from hyperlam.exceptions import ConfigError
from hyperlam.services.canonical import canonical
from hyperlam.services.dpo import apply as apply_rule
from hyperlam.services.dpo import (
    derive_search,
    enumerate_language,
    find_matches,
    lc_member,
    normalize as normalize_grammar,
    reverse,
)
from hyperlam.services.workspace import DocumentKind, dump, save

logger = logging.getLogger(__name__)


@click.group("dpo", cls=HyperlamGroup)
def dpo():
    """Double-pushout rewriting."""


@dpo.command("apply")
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.option("--rule", "rule_name", required=True, help="Name of the rule to apply.")
@click.option("--index", default=0, show_default=True, help="Which match to rewrite.")
@click.option("--reverse", "backwards", is_flag=True, help="Apply the rule right to left.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the result here.")
@pass_app
def apply_command(
    app: AppContext,
    graph: str,
    grammar: str,
    rule_name: str,
    index: int,
    backwards: bool,
    output: Optional[str],
):
    """Rewrite GRAPH once with a rule of GRAMMAR.

    Exits 1 when the rule has no match.
    """
    rules = app.grammar(grammar)
    host = app.load(graph, DocumentKind.HYPERGRAPH)
    rule = rules.rule(rule_name)
    if backwards:
        rule = reverse(rule)
    matches = find_matches(host, rule)
    if not matches:
        emit({"rule": rule.name, "matches": 0}, positive(False))
    if not 0 <= index < len(matches):
        raise ConfigError(f"--index must be in [0, {len(matches)}), got {index}")
    result = apply_rule(host, rule, matches[index])
    if output:
        save(result, output)
    emit(
        {
            "rule": rule.name,
            "matches": len(matches),
            "index": index,
            "result": dump(result),
        }
    )


@dpo.command("derive")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.argument("target", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-steps", type=int, help="Longest derivation searched.")
@click.option(
    "--count-original-steps",
    is_flag=True,
    help="Terminal rules of a normalized grammar cost nothing.",
)
@click.option("--emit-witness", type=click.Path(dir_okay=False), help="Write the derivation as JSON.")
@click.option("--emit-dot", type=click.Path(dir_okay=False), help="Write the derivation as DOT.")
@pass_app
def derive_command(
    app: AppContext,
    grammar: str,
    target: str,
    max_steps: Optional[int],
    count_original_steps: bool,
    emit_witness: Optional[str],
    emit_dot: Optional[str],
):
    """Search for a shortest derivation of TARGET from the start symbol."""
    rules = app.grammar(grammar)
    graph = app.load(target, DocumentKind.HYPERGRAPH)
    steps = max_steps if max_steps is not None else get_settings().max_steps
    derivation = derive_search(
        rules,
        graph,
        steps,
        count_original_steps=count_original_steps,
        state_cap=app.state_cap,
    )
    if derivation is None:
        emit({"derivable": False, "max_steps": steps}, positive(False))
    write_artifacts(derivation, emit_witness, emit_dot)
    emit(
        {
            "derivable": True,
            "steps": len(derivation),
            "rules": derivation.rule_names,
            "derivation": dump(derivation),
        }
    )


@dpo.command("member")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.argument("target", type=click.Path(exists=True, dir_okay=False))
@click.option("--c", "c", type=int, required=True, help="Steps allowed per edge.")
@click.option("--count-original-steps", is_flag=True, help="Count steps of the grammar as given.")
@pass_app
def member_command(
    app: AppContext, grammar: str, target: str, c: int, count_original_steps: bool
):
    """Decide whether TARGET has a derivation of at most c·|E| steps in the normalized grammar."""
    rules = app.grammar(grammar, normalized=True)
    graph = app.load(target, DocumentKind.HYPERGRAPH)
    derivation = lc_member(
        rules, graph, c, count_original_steps=count_original_steps, state_cap=app.state_cap
    )
    payload = {"member": derivation is not None, "c": c, "bound": c * len(graph.edges)}
    if derivation is not None:
        payload["steps"] = len(derivation)
        payload["rules"] = derivation.rule_names
    emit(payload, positive(derivation is not None))


@click.command("normalize")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the grammar here.")
@pass_app
def normalize(app: AppContext, grammar: str, output: Optional[str]):
    """Give every terminal a proxy nonterminal and a terminal rule."""
    result = normalize_grammar(app.grammar(grammar))
    if output:
        save(result, output)
    emit(
        {
            "proxies": {a: p.name for a, p in sorted(result.proxies.items())},
            "terminal_rules": sorted(result.terminal_rules),
            "grammar": dump(result),
        }
    )


@click.command("enumerate")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-steps", type=int, help="Longest derivation followed.")
@click.option("--max-nodes", type=int, required=True)
@click.option("--max-edges", type=int, required=True)
@click.option("--count-original-steps", is_flag=True)
@pass_app
def enumerate_command(
    app: AppContext,
    grammar: str,
    max_steps: Optional[int],
    max_nodes: int,
    max_edges: int,
    count_original_steps: bool,
):
    """List the terminal graphs of the language within the bounds."""
    rules = app.grammar(grammar)
    steps = max_steps if max_steps is not None else get_settings().max_steps
    language = enumerate_language(
        rules,
        steps,
        max_nodes,
        max_edges,
        count_original_steps=count_original_steps,
        state_cap=app.state_cap,
    )
    entries = sorted(language.values(), key=lambda e: (e.steps, canonical(e.graph).text))
    emit(
        {
            "count": len(entries),
            "graphs": [
                {"steps": e.steps, "canonical": canonical(e.graph).digest, "graph": dump(e.graph)}
                for e in entries
            ],
        }
    )
