"""Command-line entry point."""

import logging
from typing import Optional

import click

from hyperlam import __version__
from hyperlam.commands import cache, crosscheck, dpo, encode, graphs, prove
from hyperlam.commands.base import AppContext, HyperlamGroup
from hyperlam.config import get_settings
from hyperlam.services.workspace import DocumentKind, Workspace


@click.group(cls=HyperlamGroup)
@click.version_option(__version__, prog_name="hyperlam")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
@click.option(
    "--state-cap",
    type=int,
    help="States explored before a search gives up (default: HYPERLAM_STATE_CAP).",
)
@click.option(
    "--alphabet",
    "alphabets",
    type=click.Path(exists=True, dir_okay=False),
    multiple=True,
    help="Alphabet document whose labels every input may use. Repeatable.",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, state_cap: Optional[int], alphabets: tuple[str, ...]):
    """Hypergraph rewriting and hypergraph Lambek calculus toolkit.

    Every command prints one JSON object on stdout. Exit codes: 0 positive,
    1 negative, 2 unknown (budget), 3 input error.
    """
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if state_cap is not None and state_cap <= 0:
        raise click.BadParameter("must be positive", param_hint="--state-cap")
    app = AppContext(Workspace(), state_cap)
    for path in alphabets:
        app.load(path, DocumentKind.ALPHABET)
    ctx.obj = app


cli.add_command(graphs.iso)
cli.add_command(graphs.dot)
cli.add_command(dpo.dpo)
cli.add_command(dpo.normalize)
cli.add_command(dpo.enumerate_command, "enumerate")
cli.add_command(encode.encode)
cli.add_command(prove.prove)
cli.add_command(prove.member)
cli.add_command(crosscheck.crosscheck)
cli.add_command(cache.cache)
