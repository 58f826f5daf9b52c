"""Agreement checks between a DPO grammar and its encodings."""

from typing import Optional

import click

from hyperlam.commands.base import (
    AppContext,
    emit,
    pass_app,
    positive,
    search_config,
    search_options,
)
from hyperlam.config import get_settings
from hyperlam.services.canonical import canonical
from hyperlam.services.crosscheck import CrosscheckReport, check_replay, check_truncated
from hyperlam.services.workspace import dump


def _report(report: CrosscheckReport) -> dict:
    return {
        **report.summary(),
        "counterexamples": [
            {
                "c": d.c,
                "expected": d.expected,
                "actual": d.actual.value,
                "canonical": canonical(d.graph).text,
                "graph": dump(d.graph),
            }
            for d in report.discrepancies
        ],
    }


@click.command("crosscheck")
@click.argument("grammar", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--c",
    "cs",
    type=int,
    multiple=True,
    default=(1, 2, 3),
    show_default=True,
    help="Values of c for the truncated check; repeat for several.",
)
@click.option("--max-nodes", type=int, default=3, show_default=True)
@click.option("--max-edges", type=int, default=3, show_default=True)
@click.option("--replay", is_flag=True, help="Also check the exponential encoding on the enumerated language.")
@click.option("--max-steps", type=int, help="Derivation length for --replay.")
@search_options
@pass_app
def crosscheck(
    app: AppContext,
    grammar: str,
    cs: tuple[int, ...],
    max_nodes: int,
    max_edges: int,
    replay: bool,
    max_steps: Optional[int],
    **budgets,
):
    """Compare LG_{c-1} membership with L_c membership on every small terminal graph.

    Exits 1 when a counterexample was found.
    """
    rules = app.grammar(grammar, normalized=True)
    config = search_config(app, **budgets)
    truncated = check_truncated(
        rules, cs, max_nodes, max_edges, config=config, state_cap=app.state_cap
    )
    payload = {"truncated": _report(truncated)}
    ok = truncated.ok
    if replay:
        steps = max_steps if max_steps is not None else get_settings().max_steps
        replayed = check_replay(
            rules, steps, max_nodes, max_edges, config=config, state_cap=app.state_cap
        )
        payload["replay"] = _report(replayed)
        ok = ok and replayed.ok
    payload["ok"] = ok
    emit(payload, positive(ok))
