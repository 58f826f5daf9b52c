"""Canonical forms and isomorphism witnesses for hypergraphs.

Canonical forms use color refinement on the node/edge incidence structure,
followed by individualization over tied cells; the minimal serialization over
all branches is the canonical form. Isomorphism witnesses come from networkx's
VF2 matcher on the incidence digraph.
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from hyperlam.models.hypergraph import Hypergraph, Morphism

logger = logging.getLogger(__name__)

_CACHE_SLOT = "_canonical_form"


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Serialization determined by the isomorphism class alone."""

    text: str

    def __bytes__(self) -> bytes:
        return self.text.encode("utf-8")

    @property
    def digest(self) -> str:
        return hashlib.sha256(bytes(self)).hexdigest()

    def __str__(self) -> str:
        return self.text


def _dense_ranks(signatures: Sequence[Hashable]) -> list[int]:
    ordered = sorted(set(signatures))
    index = {sig: i for i, sig in enumerate(ordered)}
    return [index[sig] for sig in signatures]


class _Canonizer:
    """Vertices 0..n-1 are nodes, n..n+m-1 are edges."""

    def __init__(self, graph: Hypergraph):
        self.nodes = list(graph.nodes)
        self.edges = list(graph.edges)
        self.n = len(self.nodes)
        self.m = len(self.edges)
        node_index = {v: i for i, v in enumerate(self.nodes)}
        self.att = [tuple(node_index[v] for v in e.att) for e in self.edges]
        self.keys = [e.label.sort_key for e in self.edges]
        self.incidence: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
        for j, att in enumerate(self.att):
            for pos, v in enumerate(att):
                self.incidence[v].append((j, pos))
        self.ext = [node_index[v] for v in graph.ext]
        self.ext_pos: list[tuple[int, ...]] = [
            tuple(p for p, x in enumerate(self.ext) if x == i) for i in range(self.n)
        ]

    def initial(self) -> list[int]:
        signatures: list[tuple] = [
            ("n", self.ext_pos[i], len(self.incidence[i])) for i in range(self.n)
        ]
        signatures += [("e", key) for key in self.keys]
        return _dense_ranks(signatures)

    def refine(self, colors: list[int]) -> list[int]:
        classes = len(set(colors))
        while True:
            signatures: list[tuple] = []
            for i in range(self.n):
                around = sorted((colors[self.n + j], pos) for j, pos in self.incidence[i])
                signatures.append((colors[i], tuple(around)))
            for j in range(self.m):
                signatures.append((colors[self.n + j], tuple(colors[v] for v in self.att[j])))
            refined = _dense_ranks(signatures)
            refined_classes = len(set(refined))
            if refined_classes == classes:
                return refined
            colors, classes = refined, refined_classes

    def target_cell(self, colors: list[int]) -> Optional[list[int]]:
        cells: dict[int, list[int]] = defaultdict(list)
        for vertex, color in enumerate(colors):
            cells[color].append(vertex)
        tied = [color for color, members in cells.items() if len(members) > 1]
        if not tied:
            return None
        return cells[min(tied)]

    def candidates(self, cell: list[int]) -> list[int]:
        """Drop members that an automorphism swaps with an earlier one."""
        chosen = []
        seen: set[tuple] = set()
        for vertex in cell:
            if vertex < self.n:
                if not self.incidence[vertex] and not self.ext_pos[vertex]:
                    twin: tuple = ("isolated",)
                else:
                    twin = ("node", vertex)
            else:
                j = vertex - self.n
                twin = ("edge", self.keys[j], self.att[j])
            if twin not in seen:
                seen.add(twin)
                chosen.append(vertex)
        return chosen

    def serialize(self, colors: list[int]) -> str:
        order = sorted(range(self.n), key=lambda i: colors[i])
        position = {v: i for i, v in enumerate(order)}
        edges = sorted([self.keys[j], [position[v] for v in self.att[j]]] for j in range(self.m))
        return json.dumps(
            [self.n, edges, [position[v] for v in self.ext]],
            separators=(",", ":"),
            ensure_ascii=False,
        )

    def run(self) -> str:
        best: Optional[str] = None
        stack = [self.refine(self.initial())]
        while stack:
            colors = stack.pop()
            cell = self.target_cell(colors)
            if cell is None:
                text = self.serialize(colors)
                if best is None or text < best:
                    best = text
                continue
            color = colors[cell[0]]
            for vertex in self.candidates(cell):
                split = [2 * c + (1 if c == color and i != vertex else 0) for i, c in enumerate(colors)]
                stack.append(self.refine(split))
        assert best is not None
        return best


def canonical(graph: Hypergraph) -> CanonicalForm:
    """Canonical form of a hypergraph; equal forms iff isomorphic."""
    cached = graph.__dict__.get(_CACHE_SLOT)
    if cached is None:
        cached = CanonicalForm(_Canonizer(graph).run())
        graph.__dict__[_CACHE_SLOT] = cached
    return cached


def incidence_digraph(graph: Hypergraph) -> nx.DiGraph:
    """Bipartite digraph: edge vertex -> node vertex, arcs carry attachment positions."""
    digraph = nx.DiGraph()
    for node in graph.nodes:
        digraph.add_node(("v", node), kind=("v", graph.ext_positions.get(node, ())))
    for edge in graph.edges:
        digraph.add_node(("e", edge.id), kind=("e", edge.label.sort_key))
        positions: dict[int, list[int]] = defaultdict(list)
        for pos, node in enumerate(edge.att):
            positions[node].append(pos)
        for node, slots in positions.items():
            digraph.add_edge(("e", edge.id), ("v", node), positions=tuple(slots))
    return digraph


def isomorphic(first: Hypergraph, second: Hypergraph) -> Optional[Morphism]:
    """A label-, attachment- and ext-preserving bijection, or None."""
    if (
        len(first.nodes) != len(second.nodes)
        or len(first.edges) != len(second.edges)
        or first.rank != second.rank
        or sorted(e.label.sort_key for e in first.edges)
        != sorted(e.label.sort_key for e in second.edges)
    ):
        return None
    matcher = DiGraphMatcher(
        incidence_digraph(first),
        incidence_digraph(second),
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["positions"] == b["positions"],
    )
    for mapping in matcher.isomorphisms_iter():
        nodes = {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
        edges = {a[1]: b[1] for a, b in mapping.items() if a[0] == "e"}
        logger.debug("isomorphism found over %d vertices", len(mapping))
        return Morphism(nodes, edges)
    return None


def same_shape(first: Hypergraph, second: Hypergraph) -> bool:
    """Isomorphism test through canonical forms."""
    return canonical(first) == canonical(second)
