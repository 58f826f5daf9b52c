"""Isomorphism and DOT export."""

from pathlib import Path
from typing import Optional

import click

from hyperlam.commands.base import AppContext, emit, pass_app, positive
from hyperlam.services.canonical import canonical, isomorphic
from hyperlam.services.dot import to_dot
from hyperlam.services.workspace import DocumentKind, guess_kind, parse, read_json


@click.command("iso")
@click.argument("first", type=click.Path(exists=True, dir_okay=False))
@click.argument("second", type=click.Path(exists=True, dir_okay=False))
@pass_app
def iso(app: AppContext, first: str, second: str):
    """Decide whether two hypergraphs are isomorphic."""
    g1 = app.load(first, DocumentKind.HYPERGRAPH)
    g2 = app.load(second, DocumentKind.HYPERGRAPH)
    witness = isomorphic(g1, g2)
    payload = {
        "isomorphic": witness is not None,
        "canonical": [canonical(g1).digest, canonical(g2).digest],
    }
    if witness is not None:
        payload["morphism"] = {
            "nodes": {str(a): str(b) for a, b in sorted(witness.node_map.items())},
            "edges": {str(a): str(b) for a, b in sorted(witness.edge_map.items())},
        }
    emit(payload, positive(witness is not None))


@click.command("dot")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--kind",
    type=click.Choice([k.value for k in DocumentKind if k is not DocumentKind.ALPHABET]),
    help="Document kind; guessed from the keys when omitted.",
)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write DOT here.")
@pass_app
def dot(app: AppContext, path: str, kind: Optional[str], output: Optional[str]):
    """Render a hypergraph, type, sequent, proof tree or derivation as DOT."""
    data = read_json(path)
    chosen = DocumentKind(kind) if kind else guess_kind(data)
    text = to_dot(parse(data, chosen, app.workspace, path))
    if output:
        Path(output).write_text(text, encoding="utf-8")
        emit({"kind": chosen.value, "written": output})
    emit({"kind": chosen.value, "dot": text})
