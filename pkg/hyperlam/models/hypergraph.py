"""Immutable hypergraphs over ranked labels.

A hypergraph is a set of nodes, a set of hyperedges each carrying a label and an
ordered attachment sequence, and an ordered sequence of external nodes. Attachment
and external sequences may repeat nodes. Ids are small integers local to one
hypergraph; every operation combining two hypergraphs freshens them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Protocol, runtime_checkable

from hyperlam.exceptions import InvalidType, RankMismatch, UnknownEdge, UnknownNode


@runtime_checkable
class Label(Protocol):
    """Anything usable as an edge label: it has a rank and a total-order key."""

    @property
    def rank(self) -> int: ...

    @property
    def sort_key(self) -> str: ...


@dataclass(frozen=True, order=True)
class RankedLabel:
    """A named label of fixed rank, drawn from an alphabet."""

    name: str
    rank: int

    def __post_init__(self):
        if not self.name:
            raise InvalidType("label name must be nonempty")
        if self.rank < 0:
            raise RankMismatch(f"label {self.name!r} has negative rank {self.rank}")

    @property
    def sort_key(self) -> str:
        return f"L:{self.name}/{self.rank}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Placeholder:
    """Reserved hole label, one per rank. Marks where a context is plugged."""

    rank: int

    @property
    def name(self) -> str:
        return f"#{self.rank}"

    @property
    def sort_key(self) -> str:
        return f"#:{self.rank}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Dollar:
    """The reserved label of a division's plug-in edge, one per rank."""

    rank: int

    @property
    def name(self) -> str:
        return f"${self.rank}"

    @property
    def sort_key(self) -> str:
        return f"$:{self.rank}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Edge:
    """A hyperedge: id, label and attachment sequence."""

    id: int
    label: Any
    att: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.att)


@dataclass(frozen=True)
class Hypergraph:
    """An immutable hypergraph.

    Attributes:
        nodes: Node ids in ascending order.
        edges: Edges in ascending id order.
        ext: External node sequence (may repeat nodes).
    """

    nodes: tuple[int, ...] = ()
    edges: tuple[Edge, ...] = ()
    ext: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(self, "ext", tuple(self.ext))
        if len(set(self.nodes)) != len(self.nodes):
            raise UnknownNode("duplicate node ids")
        node_set = set(self.nodes)
        seen: set[int] = set()
        for edge in self.edges:
            if edge.id in seen:
                raise UnknownEdge(f"duplicate edge id {edge.id}")
            seen.add(edge.id)
            if edge.label.rank != len(edge.att):
                raise RankMismatch(
                    f"edge {edge.id} labeled {edge.label} has {len(edge.att)} "
                    f"attachment nodes but rank {edge.label.rank}"
                )
            for node in edge.att:
                if node not in node_set:
                    raise UnknownNode(f"edge {edge.id} attaches unknown node {node}")
        for node in self.ext:
            if node not in node_set:
                raise UnknownNode(f"external node {node} is not a node")

    @classmethod
    def build(
        cls,
        nodes: Iterable[int] = (),
        edges: Iterable[tuple[int, Any, Iterable[int]]] = (),
        ext: Iterable[int] = (),
    ) -> "Hypergraph":
        """Build a hypergraph from plain (id, label, att) triples."""
        return cls(
            nodes=tuple(nodes),
            edges=tuple(Edge(eid, label, tuple(att)) for eid, label, att in edges),
            ext=tuple(ext),
        )

    @property
    def rank(self) -> int:
        return len(self.ext)

    @property
    def is_zero_rank(self) -> bool:
        return not self.ext

    @cached_property
    def node_set(self) -> frozenset[int]:
        return frozenset(self.nodes)

    @cached_property
    def edge_index(self) -> dict[int, Edge]:
        return {edge.id: edge for edge in self.edges}

    @cached_property
    def incidence(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """node -> ((edge id, position), ...) over all attachment slots."""
        slots: dict[int, list[tuple[int, int]]] = {node: [] for node in self.nodes}
        for edge in self.edges:
            for pos, node in enumerate(edge.att):
                slots[node].append((edge.id, pos))
        return {node: tuple(items) for node, items in slots.items()}

    @cached_property
    def ext_positions(self) -> dict[int, tuple[int, ...]]:
        positions: dict[int, list[int]] = {}
        for pos, node in enumerate(self.ext):
            positions.setdefault(node, []).append(pos)
        return {node: tuple(items) for node, items in positions.items()}

    @property
    def next_node_id(self) -> int:
        return self.nodes[-1] + 1 if self.nodes else 0

    @property
    def next_edge_id(self) -> int:
        return max(self.edge_index) + 1 if self.edges else 0

    def edge(self, edge_id: int) -> Edge:
        try:
            return self.edge_index[edge_id]
        except KeyError:
            raise UnknownEdge(f"no edge {edge_id}") from None

    def label_of(self, edge_id: int) -> Any:
        return self.edge(edge_id).label

    def is_isolated(self, node: int) -> bool:
        return not self.incidence[node]

    def with_ext(self, ext: Iterable[int]) -> "Hypergraph":
        return Hypergraph(self.nodes, self.edges, tuple(ext))

    def without_edge(self, edge_id: int) -> "Hypergraph":
        self.edge(edge_id)
        return Hypergraph(
            self.nodes, tuple(e for e in self.edges if e.id != edge_id), self.ext
        )

    def with_label(self, edge_id: int, label: Any) -> "Hypergraph":
        target = self.edge(edge_id)
        if label.rank != target.rank:
            raise RankMismatch(
                f"label {label} of rank {label.rank} cannot label edge {edge_id} "
                f"of rank {target.rank}"
            )
        return Hypergraph(
            self.nodes,
            tuple(Edge(e.id, label, e.att) if e.id == edge_id else e for e in self.edges),
            self.ext,
        )

    def shifted(self, node_offset: int, edge_offset: int) -> "Hypergraph":
        """Copy with every node id and edge id moved by the given offsets."""
        return Hypergraph(
            tuple(v + node_offset for v in self.nodes),
            tuple(
                Edge(e.id + edge_offset, e.label, tuple(v + node_offset for v in e.att))
                for e in self.edges
            ),
            tuple(v + node_offset for v in self.ext),
        )

    def compacted(self) -> "Hypergraph":
        """Copy with node and edge ids renumbered 0, 1, ... in their current order."""
        node_map = {v: i for i, v in enumerate(self.nodes)}
        return Hypergraph(
            tuple(range(len(self.nodes))),
            tuple(
                Edge(i, e.label, tuple(node_map[v] for v in e.att))
                for i, e in enumerate(self.edges)
            ),
            tuple(node_map[v] for v in self.ext),
        )

    def labels(self) -> list[Any]:
        return [edge.label for edge in self.edges]

    def __repr__(self) -> str:
        edges = ", ".join(f"{e.id}:{e.label}{list(e.att)}" for e in self.edges)
        return f"Hypergraph(nodes={list(self.nodes)}, edges=[{edges}], ext={list(self.ext)})"


@dataclass(frozen=True)
class Morphism:
    """A pair of node and edge maps between two hypergraphs."""

    node_map: Mapping[int, int] = field(default_factory=dict)
    edge_map: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def identity(cls, graph: Hypergraph) -> "Morphism":
        return cls({v: v for v in graph.nodes}, {e.id: e.id for e in graph.edges})

    def inverse(self) -> "Morphism":
        return Morphism(
            {b: a for a, b in self.node_map.items()},
            {b: a for a, b in self.edge_map.items()},
        )

    def then(self, other: "Morphism") -> "Morphism":
        """Composition: first self, then other."""
        return Morphism(
            {a: other.node_map[b] for a, b in self.node_map.items()},
            {a: other.edge_map[b] for a, b in self.edge_map.items()},
        )

    def is_isomorphism(self, source: Hypergraph, target: Hypergraph) -> bool:
        """Check that the maps are bijective and preserve labels, attachment and ext."""
        if set(self.node_map) != set(source.nodes) or set(self.edge_map) != {
            e.id for e in source.edges
        }:
            return False
        if sorted(self.node_map.values()) != list(target.nodes):
            return False
        if sorted(self.edge_map.values()) != sorted(e.id for e in target.edges):
            return False
        for edge in source.edges:
            image = target.edge_index.get(self.edge_map[edge.id])
            if image is None or image.label.sort_key != edge.label.sort_key:
                return False
            if tuple(self.node_map[v] for v in edge.att) != image.att:
                return False
        return tuple(self.node_map[v] for v in source.ext) == target.ext
