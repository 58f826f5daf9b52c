"""Inverse replacement: reading a host hypergraph as a pattern with holes filled.

One engine serves three callers:

- contexts of an occurrence (DPO matching): every pattern edge is matched
  literally and the host is C[e0/F] for some context C;
- division on the left: the dollar edge is pinned to the divided edge, the other
  denominator edges are holes filled by sub-hypergraphs, and the remainder is a
  context with one new edge;
- product on the right: the whole host is M[m_1/H_1, ..., m_l/H_l].

Pattern nodes map to host nodes by a map μ. Pattern nodes sharing an image are
either fused inside the pieces (through a piece with a repeated external node) or
kept apart and fused by the context; only external pattern nodes can be fused by
the context. Attachment positions of a hole edge over one host node are split
into ports, so a piece may have distinct external nodes that the replacement
fuses, even when the hole edge repeats a pattern node.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Collection, Iterator, Mapping, Optional, Sequence

from networkx.utils import UnionFind

from hyperlam.models.hypergraph import Edge, Hypergraph, Placeholder
from hyperlam.services.canonical import canonical

logger = logging.getLogger(__name__)

REST = -1

PieceGuard = Callable[[int, Sequence[Edge]], bool]


@dataclass(frozen=True)
class Decomposition:
    """One reading of the host.

    Attributes:
        context: The host minus the occurrence, with a hole edge; None for whole-host reads.
        hole: Id of the hole edge inside `context`.
        pieces: (pattern hole edge id, filler) pairs in edge id order.
        node_map: Pattern node -> host node.
        edge_map: Literal pattern edge -> host edge.
    """

    context: Optional[Hypergraph]
    hole: Optional[int]
    pieces: tuple[tuple[int, Hypergraph], ...] = ()
    node_map: Mapping[int, int] = field(default_factory=dict)
    edge_map: Mapping[int, int] = field(default_factory=dict)

    def piece(self, edge_id: int) -> Hypergraph:
        return dict(self.pieces)[edge_id]

    @cached_property
    def key(self) -> tuple[str, tuple[str, ...]]:
        context_key = canonical(self.context).text if self.context is not None else ""
        return context_key, tuple(canonical(piece).text for _, piece in self.pieces)


def set_partitions(items: Sequence[Any]) -> Iterator[list[list[Any]]]:
    """All partitions of a small sequence into nonempty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        yield [[head]] + partial
        for i in range(len(partial)):
            yield partial[:i] + [[head] + partial[i]] + partial[i + 1 :]


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write `total` as a sum of `parts` non-negative integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for tail in compositions(total - first, parts - 1):
            yield (first,) + tail


@dataclass
class _Component:
    edges: list[int]
    inner: list[int]
    touched: list[int]
    pinned_to_context: bool


class _Splitter:
    def __init__(
        self,
        host: Hypergraph,
        pattern: Hypergraph,
        holes: Collection[int],
        pinned: Mapping[int, int],
        embedded: bool,
        hole_label: Any,
        piece_guard: Optional[PieceGuard],
    ):
        self.host = host
        self.pattern = pattern
        self.holes = sorted(holes)
        self.pinned = dict(pinned)
        self.embedded = embedded
        self.hole_label = hole_label if hole_label is not None else Placeholder(pattern.rank)
        self.piece_guard = piece_guard

        hole_set = set(self.holes)
        literal = [e.id for e in pattern.edges if e.id not in hole_set]
        self.literal = sorted(literal, key=lambda e: (e not in self.pinned, e))
        self.pattern_ext = set(pattern.ext)
        touched = {v for e in pattern.edges for v in e.att}
        self.floating = [
            p for p in pattern.nodes if p not in touched and p not in self.pattern_ext
        ]
        self.mapped = [p for p in pattern.nodes if p not in self.floating]
        self.hole_nodes = {d: sorted(set(pattern.edge(d).att)) for d in self.holes}
        self.host_ext = set(host.ext)

    def run(self) -> list[Decomposition]:
        if not self.embedded and self.pattern.rank != self.host.rank:
            return []
        found: dict[tuple, Decomposition] = {}
        seed: dict[int, int] = {}
        if not self.embedded:
            for p, v in zip(self.pattern.ext, self.host.ext):
                if seed.setdefault(p, v) != v:
                    return []
        for edge_map, partial in self._literal_matches(seed):
            for mu in self._extend(partial):
                self._complete(edge_map, mu, found)
        logger.debug(
            "split of %d-edge host by %d-edge pattern: %d readings",
            len(self.host.edges),
            len(self.pattern.edges),
            len(found),
        )
        return [found[key] for key in sorted(found)]

    def _literal_matches(
        self, seed: dict[int, int]
    ) -> Iterator[tuple[dict[int, int], dict[int, int]]]:
        def extend(i: int, edge_map: dict[int, int], mu: dict[int, int]):
            if i == len(self.literal):
                yield dict(edge_map), dict(mu)
                return
            pattern_edge = self.pattern.edge(self.literal[i])
            if pattern_edge.id in self.pinned:
                candidates = [self.pinned[pattern_edge.id]]
            else:
                candidates = [
                    e.id
                    for e in self.host.edges
                    if e.label.sort_key == pattern_edge.label.sort_key
                ]
            used = set(edge_map.values())
            for host_id in candidates:
                if host_id in used:
                    continue
                host_edge = self.host.edge(host_id)
                if host_edge.rank != pattern_edge.rank:
                    continue
                grown = dict(mu)
                if all(
                    grown.setdefault(p, v) == v
                    for p, v in zip(pattern_edge.att, host_edge.att)
                ):
                    edge_map[pattern_edge.id] = host_id
                    yield from extend(i + 1, edge_map, grown)
                    del edge_map[pattern_edge.id]

        yield from extend(0, {}, dict(seed))

    def _extend(self, mu: dict[int, int]) -> Iterator[dict[int, int]]:
        open_nodes = [p for p in self.mapped if p not in mu]
        for images in itertools.product(self.host.nodes, repeat=len(open_nodes)):
            full = dict(mu)
            full.update(zip(open_nodes, images))
            yield full

    def _complete(
        self, edge_map: dict[int, int], mu: dict[int, int], found: dict[tuple, Decomposition]
    ) -> None:
        preimage: dict[int, list[int]] = {}
        for p in self.mapped:
            preimage.setdefault(mu[p], []).append(p)

        # Attachment positions of a hole over one host node, split into ports.
        groups: list[tuple[int, int, list[int]]] = []
        for d in self.holes:
            by_node: dict[int, list[int]] = {}
            for pos, p in enumerate(self.pattern.edge(d).att):
                by_node.setdefault(mu[p], []).append(pos)
            for v, positions in sorted(by_node.items()):
                groups.append((d, v, positions))

        for choice in itertools.product(*(list(set_partitions(g[2])) for g in groups)):
            ports: dict[tuple[int, int], list[list[int]]] = {}
            port_of: dict[tuple[int, int], int] = {}
            fused = UnionFind(self.mapped)

            for (d, v, _), blocks in zip(groups, choice):
                att = self.pattern.edge(d).att
                ports[(d, v)] = blocks
                for index, block in enumerate(blocks):
                    for pos in block:
                        port_of[(d, pos)] = index
                    fused.union(*(att[pos] for pos in block))

            private: set[int] = set()
            valid = True
            for v, members in preimage.items():
                blocks: dict[int, list[int]] = {}
                for p in members:
                    blocks.setdefault(fused[p], []).append(p)
                if len(blocks) == 1:
                    (block,) = blocks.values()
                    if not any(p in self.pattern_ext for p in block):
                        if v in self.host_ext:
                            valid = False
                            break
                        private.add(v)
                    continue
                if not self.embedded or not all(
                    any(p in self.pattern_ext for p in block) for block in blocks.values()
                ):
                    valid = False
                    break
            if valid:
                self._assign(edge_map, mu, ports, port_of, private, found)

    def _components(self, edge_map: dict[int, int], image: set[int]) -> list[_Component]:
        used = set(edge_map.values())
        free = [e for e in self.host.edges if e.id not in used]
        free_ids = {e.id for e in free}
        linked = UnionFind(free_ids)
        for v in self.host.nodes:
            if v in image:
                continue
            linked.union(*(eid for eid, _ in self.host.incidence[v] if eid in free_ids))

        grouped: dict[int, list[int]] = {}
        for edge in free:
            grouped.setdefault(linked[edge.id], []).append(edge.id)
        components = []
        for edge_ids in grouped.values():
            inner: set[int] = set()
            touched: set[int] = set()
            for eid in edge_ids:
                for v in self.host.edge(eid).att:
                    (touched if v in image else inner).add(v)
            components.append(
                _Component(
                    edges=sorted(edge_ids),
                    inner=sorted(inner),
                    touched=sorted(touched),
                    pinned_to_context=any(v in self.host_ext for v in inner),
                )
            )
        return components

    def _targets(
        self,
        component: _Component,
        ports: dict[tuple[int, int], list[list[int]]],
        private: set[int],
    ) -> list[int]:
        targets = []
        if self.embedded and not any(v in private for v in component.touched):
            targets.append(REST)
        if not component.pinned_to_context:
            for d in self.holes:
                if all((d, v) in ports for v in component.touched):
                    targets.append(d)
        return targets

    def _assign(
        self,
        edge_map: dict[int, int],
        mu: dict[int, int],
        ports: dict[tuple[int, int], list[list[int]]],
        port_of: dict[tuple[int, int], int],
        private: set[int],
        found: dict[tuple, Decomposition],
    ) -> None:
        image = set(mu.values())
        components = self._components(edge_map, image)
        attached = [c for c in components if c.touched]
        floating_groups: dict[tuple, list[_Component]] = {}
        for component in components:
            if component.touched:
                continue
            sub = Hypergraph(
                tuple(component.inner),
                tuple(self.host.edge(e) for e in component.edges),
                (),
            )
            floating_groups.setdefault(
                (component.pinned_to_context, canonical(sub).text), []
            ).append(component)
        floating = [floating_groups[key] for key in sorted(floating_groups)]

        attached_targets = [self._targets(c, ports, private) for c in attached]
        if any(not t for t in attached_targets):
            return
        floating_targets = [self._targets(group[0], ports, private) for group in floating]
        if any(not t for t in floating_targets):
            return

        spare = [
            v
            for v in self.host.nodes
            if self.host.is_isolated(v) and v not in image and v not in self.host_ext
        ]
        if len(spare) < len(self.floating):
            return
        floating_images = dict(zip(self.floating, spare))
        spare = spare[len(self.floating) :]
        isolated_targets = ([REST] if self.embedded else []) + list(self.holes)
        if spare and not isolated_targets:
            return

        floating_splits = [
            list(compositions(len(group), len(targets)))
            for group, targets in zip(floating, floating_targets)
        ]
        for attached_choice in itertools.product(*attached_targets):
            for floating_choice in itertools.product(*floating_splits):
                owner: dict[int, list[_Component]] = {REST: []}
                for d in self.holes:
                    owner[d] = []
                for component, target in zip(attached, attached_choice):
                    owner[target].append(component)
                for group, targets, counts in zip(floating, floating_targets, floating_choice):
                    cursor = 0
                    for target, count in zip(targets, counts):
                        owner[target].extend(group[cursor : cursor + count])
                        cursor += count
                if self.piece_guard is not None and not all(
                    self.piece_guard(
                        d, [self.host.edge(e) for c in owner[d] for e in c.edges]
                    )
                    for d in self.holes
                ):
                    continue
                self._emit(
                    edge_map, mu, ports, port_of, private, owner, spare,
                    isolated_targets, floating_images, found,
                )

    def _emit(
        self,
        edge_map: dict[int, int],
        mu: dict[int, int],
        ports: dict[tuple[int, int], list[list[int]]],
        port_of: dict[tuple[int, int], int],
        private: set[int],
        owner: dict[int, list[_Component]],
        spare: list[int],
        isolated_targets: list[int],
        floating_images: dict[int, int],
        found: dict[tuple, Decomposition],
    ) -> None:
        ends: list[tuple[int, int, int]] = []
        options: list[range] = []
        for d in self.holes:
            for component in owner[d]:
                for eid in component.edges:
                    for pos, v in enumerate(self.host.edge(eid).att):
                        if v in mu.values() and (d, v) in ports:
                            ends.append((d, eid, pos))
                            options.append(range(len(ports[(d, v)])))

        for end_choice in itertools.product(*options):
            chosen = {(eid, pos): port for (_, eid, pos), port in zip(ends, end_choice)}
            for isolated_split in compositions(len(spare), len(isolated_targets)):
                counts = dict(zip(isolated_targets, isolated_split))
                pieces = tuple(
                    (d, self._piece(d, mu, ports, port_of, owner[d], chosen, counts.get(d, 0)))
                    for d in self.holes
                )
                context = None
                hole = None
                if self.embedded:
                    context, hole = self._context(
                        mu, private, owner, spare, counts.get(REST, 0), floating_images
                    )
                node_map = dict(mu)
                node_map.update(floating_images)
                result = Decomposition(context, hole, pieces, node_map, dict(edge_map))
                found.setdefault(result.key, result)

    def _piece(
        self,
        d: int,
        mu: dict[int, int],
        ports: dict[tuple[int, int], list[list[int]]],
        port_of: dict[tuple[int, int], int],
        components: list[_Component],
        chosen: dict[tuple[int, int], int],
        isolated: int,
    ) -> Hypergraph:
        port_ids: dict[tuple[int, int], int] = {}
        for v in sorted({mu[p] for p in self.hole_nodes[d]}):
            for index in range(len(ports[(d, v)])):
                port_ids[(v, index)] = len(port_ids)
        next_id = len(port_ids)
        inner_ids: dict[int, int] = {}
        edges = []
        for component in components:
            for v in component.inner:
                inner_ids[v] = next_id
                next_id += 1
            for eid in component.edges:
                edge = self.host.edge(eid)
                att = []
                for pos, v in enumerate(edge.att):
                    if v in inner_ids:
                        att.append(inner_ids[v])
                    else:
                        att.append(port_ids[(v, chosen[(eid, pos)])])
                edges.append(Edge(eid, edge.label, tuple(att)))
        nodes = list(range(next_id + isolated))
        ext = tuple(
            port_ids[(mu[p], port_of[(d, pos)])]
            for pos, p in enumerate(self.pattern.edge(d).att)
        )
        return Hypergraph(tuple(nodes), tuple(edges), ext)

    def _context(
        self,
        mu: dict[int, int],
        private: set[int],
        owner: dict[int, list[_Component]],
        spare: list[int],
        kept_isolated: int,
        floating_images: dict[int, int],
    ) -> tuple[Hypergraph, int]:
        removed = set(private) | set(floating_images.values())
        for d in self.holes:
            for component in owner[d]:
                removed.update(component.inner)
        removed.update(spare[kept_isolated:])
        edges = [self.host.edge(e) for c in owner[REST] for e in c.edges]
        hole = self.host.next_edge_id
        edges.append(Edge(hole, self.hole_label, tuple(mu[p] for p in self.pattern.ext)))
        nodes = tuple(v for v in self.host.nodes if v not in removed)
        return Hypergraph(nodes, tuple(edges), self.host.ext), hole


def split(
    host: Hypergraph,
    pattern: Hypergraph,
    *,
    holes: Collection[int] = (),
    pinned: Optional[Mapping[int, int]] = None,
    embedded: bool = True,
    hole_label: Any = None,
    piece_guard: Optional[PieceGuard] = None,
) -> list[Decomposition]:
    """All readings of `host` as `pattern` with its hole edges filled.

    Args:
        host: The hypergraph to decompose.
        pattern: Literal edges are matched by label, hole edges receive pieces.
        holes: Ids of the pattern edges that are filled by sub-hypergraphs.
        pinned: Literal pattern edges forced onto given host edges (labels not compared).
        embedded: Whether the occurrence sits inside a context (else it is the whole host).
        hole_label: Label of the context's new edge (a placeholder by default).
        piece_guard: Called with (hole edge, edges given to it); False prunes the reading.

    Returns:
        Readings sorted by their canonical key, one per distinct key.
    """
    return _Splitter(
        host, pattern, holes, pinned or {}, embedded, hole_label, piece_guard
    ).run()


def enumerate_contexts(host: Hypergraph, occurrence: Hypergraph) -> list[Decomposition]:
    """All contexts C with a hole e0 such that C[e0/F] is the host."""
    return split(host, occurrence, embedded=True)
