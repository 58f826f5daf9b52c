"""Hyperedge replacement and the constructions built from it.

Handles, discrete graphs, relabeling, replacement (single and simultaneous),
disjoint union and gluing over a discrete interface.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Mapping, Sequence

from networkx.utils import UnionFind

from hyperlam.exceptions import ArityMismatch, BothRanked, RankMismatch, UnknownNode
from hyperlam.models.hypergraph import Edge, Hypergraph, Placeholder


def _classes(nodes: Iterable[int], pairs: Iterable[tuple[int, int]]) -> dict[int, int]:
    """Node -> smallest node of its class once every pair is identified."""
    classes = UnionFind(nodes)
    for a, b in pairs:
        classes.union(a, b)
    return {v: min(block) for block in classes.to_sets() for v in block}


def handle_filled(label: Any) -> Hypergraph:
    """The handle a•: one edge on `rank` fresh nodes, all of them external in order."""
    nodes = tuple(range(label.rank))
    return Hypergraph(nodes, (Edge(0, label, nodes),), nodes)


def handle_open(label: Any) -> Hypergraph:
    """The handle a°: like a• but with no external nodes."""
    nodes = tuple(range(label.rank))
    return Hypergraph(nodes, (Edge(0, label, nodes),), ())


def discrete(k: int) -> Hypergraph:
    """D_k: k isolated nodes, no edges, no external nodes."""
    if k < 0:
        raise ArityMismatch(f"discrete graph needs k >= 0, got {k}")
    return Hypergraph(tuple(range(k)), (), ())


def relabel(
    graph: Hypergraph, mapping: Mapping[int, Any] | Callable[[Edge], Any]
) -> Hypergraph:
    """Replace edge labels. A mapping may cover only some edges; the rest keep theirs."""
    edges = []
    for edge in graph.edges:
        if callable(mapping):
            label = mapping(edge)
        else:
            label = mapping.get(edge.id, edge.label)
        if label.rank != edge.rank:
            raise RankMismatch(
                f"relabeling edge {edge.id} with {label} of rank {label.rank}, "
                f"but the edge has rank {edge.rank}"
            )
        edges.append(Edge(edge.id, label, edge.att))
    return Hypergraph(graph.nodes, tuple(edges), graph.ext)


def splice(
    graph: Hypergraph, edge_id: int, filler: Hypergraph
) -> tuple[Hypergraph, dict[int, int], int]:
    """Replace one edge and report where the filler's nodes and edges ended up.

    Returns:
        (result, filler node -> result node, offset added to filler edge ids)
    """
    target = graph.edge(edge_id)
    if filler.rank != target.rank:
        raise RankMismatch(
            f"cannot replace edge {edge_id} of rank {target.rank} "
            f"with a hypergraph of rank {filler.rank}"
        )
    node_shift = graph.next_node_id
    edge_shift = graph.next_edge_id
    copy = filler.shifted(node_shift, edge_shift)
    find = _classes(graph.nodes + copy.nodes, zip(copy.ext, target.att))

    edges = [
        Edge(e.id, e.label, tuple(find[v] for v in e.att))
        for e in graph.edges
        if e.id != edge_id
    ]
    edges.extend(Edge(e.id, e.label, tuple(find[v] for v in e.att)) for e in copy.edges)
    nodes = sorted({find[v] for v in graph.nodes + copy.nodes})
    result = Hypergraph(tuple(nodes), tuple(edges), tuple(find[v] for v in graph.ext))
    placed = {v: find[v + node_shift] for v in filler.nodes}
    return result, placed, edge_shift


def replace(graph: Hypergraph, edge_id: int, filler: Hypergraph) -> Hypergraph:
    """G[e0/H]: remove e0 and fuse the i-th external node of a fresh copy of H
    with the i-th attachment node of e0."""
    return splice(graph, edge_id, filler)[0]


def replace_many(graph: Hypergraph, fillers: Mapping[int, Hypergraph]) -> Hypergraph:
    """Simultaneous replacement G[e1/H1, ..., ek/Hk]."""
    for edge_id, filler in fillers.items():
        if graph.edge(edge_id).rank != filler.rank:
            raise RankMismatch(
                f"cannot replace edge {edge_id} of rank {graph.edge(edge_id).rank} "
                f"with a hypergraph of rank {filler.rank}"
            )
    result = graph
    for edge_id in sorted(fillers):
        result = replace(result, edge_id, fillers[edge_id])
    return result


def disjoint_union(first: Hypergraph, second: Hypergraph) -> Hypergraph:
    """H1 + H2. At most one argument may have external nodes; the result keeps them."""
    if first.ext and second.ext:
        raise BothRanked("disjoint union needs at least one zero-rank argument")
    copy = second.shifted(first.next_node_id, first.next_edge_id)
    return Hypergraph(
        first.nodes + copy.nodes,
        first.edges + copy.edges,
        first.ext or copy.ext,
    )


def sum_of(graphs: Iterable[Hypergraph]) -> Hypergraph:
    """Disjoint union of any number of hypergraphs (D_0 for none)."""
    result = Hypergraph()
    for graph in graphs:
        result = disjoint_union(result, graph)
    return result


def repeat_union(k: int, graph: Hypergraph) -> Hypergraph:
    """k·H, the disjoint union of k copies of H."""
    if k < 0:
        raise ArityMismatch(f"repeat count must be >= 0, got {k}")
    if k >= 2 and graph.ext:
        raise BothRanked("k·H for k >= 2 needs a zero-rank H")
    return sum_of([graph] * k)


def gluing(
    first: Hypergraph,
    phi_first: Sequence[int],
    second: Hypergraph,
    phi_second: Sequence[int],
    k: int,
) -> Hypergraph:
    """G1 +_{φ1,φ2} G2 over D_k, computed as a quotient of the disjoint union."""
    if len(phi_first) != k or len(phi_second) != k:
        raise ArityMismatch(
            f"interface of size {k} needs maps of length {k}, "
            f"got {len(phi_first)} and {len(phi_second)}"
        )
    if first.ext or second.ext:
        raise RankMismatch("gluing expects zero-rank hypergraphs")
    _check_nodes(first, phi_first)
    _check_nodes(second, phi_second)

    node_shift = first.next_node_id
    copy = second.shifted(node_shift, first.next_edge_id)
    find = _classes(
        first.nodes + copy.nodes,
        ((a, b + node_shift) for a, b in zip(phi_first, phi_second)),
    )
    edges = [
        Edge(e.id, e.label, tuple(find[v] for v in e.att)) for e in first.edges + copy.edges
    ]
    nodes = sorted({find[v] for v in first.nodes + copy.nodes})
    return Hypergraph(tuple(nodes), tuple(edges), ())


def gluing_as_replacement(
    first: Hypergraph,
    phi_first: Sequence[int],
    second: Hypergraph,
    phi_second: Sequence[int],
) -> tuple[Hypergraph, int, Hypergraph]:
    """Present a gluing as a replacement: (G1′, e0, G2′) with G1′[e0/G2′] ≅ gluing.

    G1′ is G1 plus a placeholder edge attached to φ1; G2′ is G2 with ext φ2.
    """
    if len(phi_first) != len(phi_second):
        raise ArityMismatch("interface maps differ in length")
    _check_nodes(first, phi_first)
    _check_nodes(second, phi_second)
    hole = first.next_edge_id
    host = Hypergraph(
        first.nodes,
        first.edges + (Edge(hole, Placeholder(len(phi_first)), tuple(phi_first)),),
        first.ext,
    )
    return host, hole, second.with_ext(phi_second)


def _check_nodes(graph: Hypergraph, nodes: Sequence[int]) -> None:
    for node in nodes:
        if node not in graph.node_set:
            raise UnknownNode(f"interface image {node} is not a node")
