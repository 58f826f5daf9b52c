"""Unit tests for hypergraphs and hyperedge replacement."""

import random

import networkx as nx
import pytest

from hyperlam.exceptions import ArityMismatch, BothRanked, RankMismatch, UnknownEdge, UnknownNode
from hyperlam.models.hypergraph import Hypergraph, Placeholder, RankedLabel
from hyperlam.services.canonical import same_shape
from hyperlam.services.replacement import (
    discrete,
    disjoint_union,
    gluing,
    gluing_as_replacement,
    handle_filled,
    handle_open,
    repeat_union,
    replace,
    replace_many,
    sum_of,
)

A = RankedLabel("a", 2)
B = RankedLabel("b", 1)
C = RankedLabel("c", 3)
LABELS = [A, B, C]


def random_graph(rng: random.Random, max_nodes: int = 4, max_edges: int = 4, ext: int = 0):
    n = rng.randint(max(1, ext), max_nodes)
    edges = []
    for i in range(rng.randint(0, max_edges)):
        label = rng.choice(LABELS)
        edges.append((i, label, [rng.randrange(n) for _ in range(label.rank)]))
    return Hypergraph.build(range(n), edges, [rng.randrange(n) for _ in range(ext)])


class TestHypergraph:
    """Tests for the immutable hypergraph model."""

    def test_rank_is_number_of_external_nodes(self):
        """rk(H) counts external positions, repeats included."""
        graph = Hypergraph.build([0, 1], [(0, A, (0, 1))], [1, 1, 0])
        assert graph.rank == 3
        assert graph.ext_positions == {1: (0, 1), 0: (2,)}

    def test_attachment_must_match_label_rank(self):
        """An edge must attach exactly rank-many nodes."""
        with pytest.raises(RankMismatch):
            Hypergraph.build([0], [(0, A, (0,))])

    def test_unknown_attachment_node(self):
        """Attachment nodes must exist."""
        with pytest.raises(UnknownNode):
            Hypergraph.build([0], [(0, B, (3,))])

    def test_duplicate_edge_ids(self):
        """Edge ids are unique."""
        with pytest.raises(UnknownEdge):
            Hypergraph.build([0], [(0, B, (0,)), (0, B, (0,))])

    def test_handles(self):
        """a• exposes its nodes, a° does not."""
        filled = handle_filled(C)
        opened = handle_open(C)
        assert filled.ext == (0, 1, 2)
        assert opened.ext == ()
        assert filled.edges[0].att == opened.edges[0].att == (0, 1, 2)

    def test_discrete(self):
        """D_k has k nodes and nothing else."""
        assert discrete(3).nodes == (0, 1, 2)
        assert not discrete(3).edges
        with pytest.raises(ArityMismatch):
            discrete(-1)


class TestReplace:
    """Tests for single and simultaneous replacement."""

    def test_replace_fuses_external_nodes_with_attachment(self):
        """G[e/H] glues H's i-th external node onto e's i-th attachment node."""
        host = Hypergraph.build([0, 1, 2], [(0, A, (0, 1)), (1, A, (1, 2))])
        path = Hypergraph.build([0, 1, 2], [(0, B, (1,)), (1, A, (0, 1)), (2, A, (1, 2))], [0, 2])
        result = replace(host, 0, path)
        assert len(result.nodes) == 4
        assert len(result.edges) == 4
        expected = Hypergraph.build(
            [0, 1, 2, 3],
            [(0, A, (1, 2)), (1, B, (3,)), (2, A, (0, 3)), (3, A, (3, 1))],
        )
        assert same_shape(result, expected)

    def test_replace_with_repeated_external_nodes_merges(self):
        """A filler whose external sequence repeats a node fuses the attachment nodes."""
        host = Hypergraph.build([0, 1], [(0, A, (0, 1))])
        loop = Hypergraph.build([0], [], [0, 0])
        result = replace(host, 0, loop)
        assert len(result.nodes) == 1
        assert not result.edges

    def test_replace_rank_mismatch(self):
        """The filler's rank must equal the edge's rank."""
        host = Hypergraph.build([0, 1], [(0, A, (0, 1))])
        with pytest.raises(RankMismatch):
            replace(host, 0, handle_filled(B))

    def test_replace_unknown_edge(self):
        """Replacing a missing edge fails."""
        with pytest.raises(UnknownEdge):
            replace(discrete(2), 0, handle_filled(A))

    def test_replace_keeps_host_external_sequence(self):
        """rk(G[e/H]) = rk(G)."""
        host = Hypergraph.build([0, 1], [(0, A, (0, 1))], [1, 0])
        result = replace(host, 0, handle_filled(A))
        assert result.rank == 2

    def test_sequential_order_does_not_matter(self):
        """Replacing two edges in either order gives isomorphic results."""
        rng = random.Random(7)
        for _ in range(1000):
            host = random_graph(rng, max_edges=4)
            if len(host.edges) < 2:
                continue
            first, second = rng.sample([e.id for e in host.edges], 2)
            fillers = {
                first: random_graph(rng, ext=host.edge(first).rank),
                second: random_graph(rng, ext=host.edge(second).rank),
            }
            one = replace(replace(host, first, fillers[first]), second, fillers[second])
            two = replace(replace(host, second, fillers[second]), first, fillers[first])
            assert same_shape(one, two)
            assert same_shape(one, replace_many(host, fillers))

    def test_replace_many_checks_every_rank_first(self):
        """A rank error in any filler is reported before anything is replaced."""
        host = Hypergraph.build([0, 1], [(0, A, (0, 1)), (1, B, (0,))])
        with pytest.raises(RankMismatch):
            replace_many(host, {0: handle_filled(A), 1: handle_filled(A)})


class TestUnionAndGluing:
    """Tests for disjoint union and gluing over D_k."""

    def test_disjoint_union_keeps_ranked_side(self):
        """Only one side may be ranked; the result inherits its external nodes."""
        union = disjoint_union(discrete(2), handle_filled(A))
        assert union.rank == 2
        assert len(union.nodes) == 4

    def test_disjoint_union_both_ranked(self):
        """Two ranked arguments are rejected."""
        with pytest.raises(BothRanked):
            disjoint_union(handle_filled(A), handle_filled(B))

    def test_sum_and_repeat(self):
        """k·H is the sum of k copies."""
        assert sum_of([]) == Hypergraph()
        three = repeat_union(3, handle_open(A))
        assert len(three.edges) == 3
        assert same_shape(three, sum_of([handle_open(A)] * 3))

    def test_gluing_equals_replacement(self):
        """G1 glued to G2 over D_k equals G1′[e0/G2′]."""
        rng = random.Random(11)
        for _ in range(1000):
            first = random_graph(rng)
            second = random_graph(rng)
            k = rng.randint(0, 3)
            phi_first = [rng.choice(first.nodes) for _ in range(k)]
            phi_second = [rng.choice(second.nodes) for _ in range(k)]
            glued = gluing(first, phi_first, second, phi_second, k)
            host, hole, filler = gluing_as_replacement(first, phi_first, second, phi_second)
            assert isinstance(host.label_of(hole), Placeholder)
            assert same_shape(glued, replace(host, hole, filler))

    def test_identifications_close_transitively(self):
        """Gluing leaves one node per component of the identification graph."""
        rng = random.Random(13)
        for _ in range(300):
            first = random_graph(rng)
            second = random_graph(rng)
            k = rng.randint(0, 4)
            phi_first = [rng.choice(first.nodes) for _ in range(k)]
            phi_second = [rng.choice(second.nodes) for _ in range(k)]
            links = nx.Graph()
            links.add_nodes_from((1, v) for v in first.nodes)
            links.add_nodes_from((2, v) for v in second.nodes)
            links.add_edges_from(((1, a), (2, b)) for a, b in zip(phi_first, phi_second))
            glued = gluing(first, phi_first, second, phi_second, k)
            assert len(glued.nodes) == nx.number_connected_components(links)
            assert len(glued.edges) == len(first.edges) + len(second.edges)

    def test_gluing_map_length(self):
        """Interface maps must have length k."""
        with pytest.raises(ArityMismatch):
            gluing(discrete(1), [0], discrete(1), [], 1)
