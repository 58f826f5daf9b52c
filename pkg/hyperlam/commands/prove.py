"""Proof search and membership in lexicalized grammars."""

import logging
from typing import Optional

import click

from hyperlam.commands.base import (
    AppContext,
    artifact_options,
    emit,
    outcome_payload,
    pass_app,
    search_config,
    search_options,
    write_artifacts,
)
from hyperlam.commands.cache import document_key, recall, remember
from hyperlam.services.checker import tree_problems
from hyperlam.services.encodings import member_hl, member_hmel
from hyperlam.services.prover import Calculus, derive
from hyperlam.services.workspace import DocumentKind, dump

logger = logging.getLogger(__name__)

CALCULI = [c.value for c in Calculus]


def _cached(kind: str, key: str) -> None:
    hit = recall(kind, key)
    if hit is None:
        return
    payload = {"verdict": hit.verdict.value, "cached": True}
    if hit.witness is not None:
        payload["witness"] = hit.witness
    emit(payload, hit.verdict.exit_code)


@click.command("prove")
@click.argument("sequent", type=click.Path(exists=True, dir_okay=False))
@click.option("--calculus", type=click.Choice(CALCULI), default="hl", show_default=True)
@search_options
@artifact_options
@click.option("--cache", "use_cache", is_flag=True, help="Reuse and store definitive verdicts.")
@pass_app
def prove(
    app: AppContext,
    sequent: str,
    calculus: str,
    emit_witness: Optional[str],
    emit_dot: Optional[str],
    use_cache: bool,
    **budgets,
):
    """Search for a derivation of SEQUENT.

    Exit 0 with a checked proof tree, 1 when not derivable, 2 when a budget
    stopped the search.
    """
    goal = app.load(sequent, DocumentKind.SEQUENT)
    config = search_config(app, **budgets)
    key = document_key(dump(goal), calculus, config.accept_bounded_omega)
    if use_cache:
        _cached("prove", key)
    outcome = derive(goal, Calculus(calculus), config)
    witness = None
    if outcome.is_found:
        problems = tree_problems(outcome.value, calculus)
        if problems:
            logger.error("proof tree rejected: %s", problems)
            outcome.stats["problems"] = problems
        outcome.stats["checked"] = not problems
        witness = dump(outcome.value)
        write_artifacts(outcome.value, emit_witness, emit_dot)
    if use_cache:
        remember("prove", key, outcome.verdict, witness)
    emit(outcome_payload(outcome, witness), outcome.verdict.exit_code)


@click.command("member")
@click.argument("lexgrammar", type=click.Path(exists=True, dir_okay=False))
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--grammar",
    "grammar_path",
    type=click.Path(exists=True, dir_okay=False),
    help="The DPO grammar an exponential encoding was built from; enables the replay route.",
)
@click.option("--calculus", type=click.Choice(CALCULI), help="Default: the smallest that fits.")
@click.option("--max-steps", type=int, help="Derivation length tried by the replay route.")
@search_options
@artifact_options
@click.option("--cache", "use_cache", is_flag=True, help="Reuse and store definitive verdicts.")
@pass_app
def member(
    app: AppContext,
    lexgrammar: str,
    graph: str,
    grammar_path: Optional[str],
    calculus: Optional[str],
    max_steps: Optional[int],
    emit_witness: Optional[str],
    emit_dot: Optional[str],
    use_cache: bool,
    **budgets,
):
    """Decide whether GRAPH belongs to the language of LEXGRAMMAR."""
    lexicon = app.load(lexgrammar, DocumentKind.LEXGRAMMAR)
    host = app.load(graph, DocumentKind.HYPERGRAPH)
    config = search_config(app, **budgets)
    key = document_key(dump(lexicon), dump(host), calculus or "", config.accept_bounded_omega)
    if use_cache:
        _cached("member", key)
    if lexicon.source == "lg-hmel" and grammar_path:
        grammar = app.grammar(grammar_path, normalized=True)
        outcome = member_hmel(lexicon, host, grammar, config, max_steps)
    else:
        outcome = member_hl(lexicon, host, config, Calculus(calculus) if calculus else None)
    witness = None
    if outcome.is_found:
        outcome.stats["checked"] = not tree_problems(outcome.value.tree)
        witness = dump(outcome.value)
        write_artifacts(outcome.value, emit_witness, emit_dot)
    if use_cache:
        remember("member", key, outcome.verdict, witness)
    emit(outcome_payload(outcome, witness), outcome.verdict.exit_code)
