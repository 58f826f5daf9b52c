"""Graphviz DOT export for hypergraphs, proof trees and DPO derivations.

Nodes are points; rank-2 edges are arrows from the first to the second
attachment node; every other edge is a box with numbered tentacles. External
nodes carry their positions as "(i)", counted from 1.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any

from jinja2 import Environment, PackageLoader

from hyperlam.exceptions import InvalidType
from hyperlam.models.grammar import DpoDerivation
from hyperlam.models.hypergraph import Hypergraph
from hyperlam.models.sequent import DerivationTree, Sequent
from hyperlam.models.types import TypeExpr


def _escape(value: Any) -> str:
    return str(value).replace("\\", "\\\\").replace('"', '\\"')


@lru_cache
def _environment() -> Environment:
    env = Environment(
        loader=PackageLoader("hyperlam", "templates"),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
        autoescape=False,
    )
    env.filters["dot"] = _escape
    return env


def label_text(label: Any) -> str:
    return str(label)


def _graph_context(graph: Hypergraph, prefix: str = "") -> dict:
    nodes = []
    for v in graph.nodes:
        positions = graph.ext_positions.get(v, ())
        nodes.append(
            {"id": f"{prefix}n{v}", "xlabel": "".join(f"({p + 1})" for p in positions)}
        )
    arrows, boxes = [], []
    for edge in graph.edges:
        if edge.rank == 2:
            arrows.append(
                {
                    "source": f"{prefix}n{edge.att[0]}",
                    "target": f"{prefix}n{edge.att[1]}",
                    "label": label_text(edge.label),
                }
            )
        else:
            boxes.append(
                {
                    "id": f"{prefix}e{edge.id}",
                    "label": label_text(edge.label),
                    "tentacles": [
                        {"node": f"{prefix}n{v}", "index": i + 1} for i, v in enumerate(edge.att)
                    ],
                }
            )
    return {"nodes": nodes, "arrows": arrows, "boxes": boxes}


def hypergraph_dot(graph: Hypergraph, name: str = "H") -> str:
    template = _environment().get_template("hypergraph.dot.j2")
    return template.render(name=name, graph=_graph_context(graph))


def sequent_text(sequent: Sequent) -> str:
    edges = ", ".join(
        f"{label_text(e.label)}({','.join(str(v) for v in e.att)})"
        for e in sequent.antecedent.edges
    )
    ext = "".join(f"({v})" for v in sequent.antecedent.ext)
    return f"[{edges}]{ext} → {label_text(sequent.succedent)}"


def tree_dot(tree: DerivationTree, name: str = "proof") -> str:
    """Conclusions below premises; nodes numbered in pre-order."""
    items: list[dict] = []

    def visit(node: DerivationTree) -> int:
        index = len(items)
        item = {"index": index, "sequent": sequent_text(node.conclusion), "symbol": node.rule.symbol}
        items.append(item)
        item["premises"] = [visit(p) for p in node.premises]
        return index

    visit(tree)
    return _environment().get_template("tree.dot.j2").render(name=name, items=items)


def derivation_dot(derivation: DpoDerivation, name: str = "derivation") -> str:
    graphs = [derivation.source] + [s.result for s in derivation.steps]
    rules = [""] + derivation.rule_names
    stages = []
    for i, (graph, rule) in enumerate(zip(graphs, rules)):
        stages.append(
            {
                "title": f"{i}" if not rule else f"{i}: {rule}",
                "graph": _graph_context(graph, f"g{i}_"),
                "anchor": f"g{i}_anchor",
                "rule": rule,
            }
        )
    return _environment().get_template("derivation.dot.j2").render(name=name, stages=stages)


def to_dot(obj: Any) -> str:
    """Dispatch on the object's kind; types render their defining graph."""
    if isinstance(obj, Hypergraph):
        return hypergraph_dot(obj)
    if isinstance(obj, DerivationTree):
        return tree_dot(obj)
    if isinstance(obj, DpoDerivation):
        return derivation_dot(obj)
    if isinstance(obj, Sequent):
        return hypergraph_dot(obj.antecedent, "antecedent")
    if isinstance(obj, TypeExpr):
        body = getattr(obj, "denominator", None) or getattr(obj, "body", None)
        if body is None:
            raise InvalidType(f"type {obj} has no graph to draw")
        return hypergraph_dot(body, "type")
    raise InvalidType(f"cannot draw {type(obj).__name__}")
