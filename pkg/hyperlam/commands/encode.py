"""Encodings of normalized DPO grammars as types and lexicalized grammars."""

from typing import Optional

import click

from hyperlam.commands.base import AppContext, HyperlamGroup, emit, pass_app
from hyperlam.models.grammar import LexGrammar
from hyperlam.services.encodings import dpo_type, lexicon_summary, lg_c, lg_hmel, lg_star
from hyperlam.services.workspace import dump, save

output_option = click.option(
    "-o", "--output", type=click.Path(dir_okay=False), help="Write the document here."
)


def _emit_lexgrammar(lexicon: LexGrammar, output: Optional[str]) -> None:
    if output:
        save(lexicon, output)
    emit(
        {
            "source": lexicon.source,
            "entries": lexicon_summary(lexicon),
            "lexgrammar": dump(lexicon),
        }
    )


@click.group("encode", cls=HyperlamGroup)
def encode():
    """Build types and lexicalized grammars from a DPO grammar (normalized on the fly)."""


@encode.command("dpo-type")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.option("--rule", "rule_name", required=True, help="A nonterminal rule.")
@output_option
@pass_app
def dpo_type_command(app: AppContext, grammar: str, rule_name: str, output: Optional[str]):
    """The rank-0 type ×(L̂) ÷ (R̂ + $₀•) of one rule."""
    rules = app.grammar(grammar, normalized=True)
    result = dpo_type(rules.rule(rule_name), rules.terminal_names)
    if output:
        save(result, output)
    emit({"rule": rule_name, "type": str(result), "document": dump(result)})


@encode.command("lg-hmel")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@output_option
@pass_app
def lg_hmel_command(app: AppContext, grammar: str, output: Optional[str]):
    """Exponential encoding: one !DPO(r) per rule inside the start type."""
    _emit_lexgrammar(lg_hmel(app.grammar(grammar, normalized=True)), output)


@encode.command("lg-star")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@output_option
@pass_app
def lg_star_command(app: AppContext, grammar: str, output: Optional[str]):
    """Star encoding over the O template."""
    _emit_lexgrammar(lg_star(app.grammar(grammar, normalized=True)), output)


@encode.command("lg-c")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.option("--c", "c", type=int, required=True, help="Rule types stored per terminal.")
@output_option
@pass_app
def lg_c_command(app: AppContext, grammar: str, c: int, output: Optional[str]):
    """Truncated encoding: up to c rule types packed into each terminal's type."""
    _emit_lexgrammar(lg_c(app.grammar(grammar, normalized=True), c), output)
