"""Canonical forms against a networkx isomorphism oracle."""

import itertools
import random

from networkx.algorithms.isomorphism import DiGraphMatcher

from hyperlam.models.hypergraph import Hypergraph, RankedLabel
from hyperlam.services.canonical import canonical, incidence_digraph, isomorphic, same_shape

A = RankedLabel("a", 1)
B = RankedLabel("b", 2)


def all_small_graphs(max_nodes: int = 3, max_edges: int = 2):
    """Every graph over {a/1, b/2} within the bounds, isomorphic copies included."""
    graphs = []
    for n in range(max_nodes + 1):
        slots = [(A, (v,)) for v in range(n)] + [
            (B, att) for att in itertools.product(range(n), repeat=2)
        ]
        for m in range(max_edges + 1):
            for chosen in itertools.combinations_with_replacement(slots, m):
                graphs.append(
                    Hypergraph.build(range(n), [(i, l, att) for i, (l, att) in enumerate(chosen)])
                )
    return graphs


def oracle(first: Hypergraph, second: Hypergraph) -> bool:
    matcher = DiGraphMatcher(
        incidence_digraph(first),
        incidence_digraph(second),
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["positions"] == b["positions"],
    )
    return matcher.is_isomorphic()


def permuted(graph: Hypergraph, rng: random.Random) -> Hypergraph:
    order = list(graph.nodes)
    rng.shuffle(order)
    node_map = dict(zip(graph.nodes, order))
    edges = list(graph.edges)
    rng.shuffle(edges)
    return Hypergraph.build(
        graph.nodes,
        [(i, e.label, [node_map[v] for v in e.att]) for i, e in enumerate(edges)],
        [node_map[v] for v in graph.ext],
    )


class TestCanonicalForm:
    """Tests for the canonical form."""

    def test_agrees_with_oracle_exhaustively(self):
        """Equal canonical forms exactly when networkx finds an isomorphism."""
        graphs = all_small_graphs()
        groups = {}
        for graph in graphs:
            groups.setdefault((len(graph.nodes), len(graph.edges)), []).append(graph)
        for group in groups.values():
            for first, second in itertools.combinations(group, 2):
                assert (canonical(first) == canonical(second)) == oracle(first, second)

    def test_invariant_under_renumbering(self):
        """Shuffling node and edge ids does not change the form."""
        rng = random.Random(3)
        for graph in all_small_graphs():
            assert canonical(permuted(graph, rng)) == canonical(graph)

    def test_external_sequence_matters(self):
        """Swapping the external order gives a different class."""
        graph = Hypergraph.build([0, 1], [(0, B, (0, 1))], [0, 1])
        swapped = graph.with_ext([1, 0])
        assert not same_shape(graph, swapped)

    def test_regular_graph_needs_individualization(self):
        """Two directed triangles vs one directed hexagon: refinement alone cannot tell."""
        two = Hypergraph.build(
            range(6),
            [
                (0, B, (0, 1)), (1, B, (1, 2)), (2, B, (2, 0)),
                (3, B, (3, 4)), (4, B, (4, 5)), (5, B, (5, 3)),
            ],
        )
        six = Hypergraph.build(range(6), [(i, B, (i, (i + 1) % 6)) for i in range(6)])
        assert not same_shape(two, six)

    def test_digest_is_stable(self):
        """The digest is a sha256 hex string of the form."""
        form = canonical(Hypergraph.build([0], [(0, A, (0,))]))
        assert len(form.digest) == 64
        assert form.digest == canonical(Hypergraph.build([3], [(9, A, (3,))])).digest


class TestIsomorphic:
    """Tests for the explicit isomorphism."""

    def test_returns_checked_morphism(self):
        """The morphism found preserves labels, attachment and ext."""
        rng = random.Random(5)
        for graph in all_small_graphs(3, 2)[::7]:
            other = permuted(graph, rng)
            morphism = isomorphic(graph, other)
            assert morphism is not None
            assert morphism.is_isomorphism(graph, other)

    def test_none_for_different_labels(self):
        """Graphs with different label multisets are not isomorphic."""
        first = Hypergraph.build([0, 1], [(0, A, (0,))])
        second = Hypergraph.build([0, 1], [(0, A, (1,)), (1, A, (0,))])
        assert isomorphic(first, second) is None
