"""Tests for context enumeration and the split helpers."""

import itertools
import math
import random

from hyperlam.models.hypergraph import Dollar, Edge, Hypergraph, Placeholder, RankedLabel
from hyperlam.models.types import Div, Prim
from hyperlam.services.calculus import match_divisor
from hyperlam.services.canonical import canonical, same_shape
from hyperlam.services.decomposition import (
    compositions,
    enumerate_contexts,
    set_partitions,
    split,
)
from hyperlam.services.replacement import handle_filled, relabel, replace, replace_many

A = RankedLabel("a", 2)
B = RankedLabel("b", 1)

BELL = [1, 1, 2, 5, 15, 52]

OCCURRENCES = [
    handle_filled(A),
    handle_filled(B),
    Hypergraph.build([0, 1], [(0, A, (0, 1))], [0]),
    Hypergraph.build([0, 1, 2], [(0, A, (0, 1)), (1, A, (1, 2))], [0, 2]),
    Hypergraph.build([0], [(0, A, (0, 0))], [0]),
    Hypergraph.build([0], [(0, B, (0,))]),
    Hypergraph.build([0, 1], [(0, A, (0, 1)), (1, B, (1,))], [1, 0]),
    Hypergraph.build([0, 1], [(0, B, (0,))], [0]),
    Hypergraph.build([0], [], [0]),
]

HOLE_LABELS = [RankedLabel("x", 0), RankedLabel("y", 1), RankedLabel("z", 2)]
PART_TYPES = [Prim("s", 1), Prim("t", 2)]


def random_edge(rng: random.Random, edge_id: int, n: int) -> tuple:
    label = A if rng.random() < 0.6 else B
    return edge_id, label, tuple(rng.randrange(n) for _ in range(label.rank))


def random_host(rng: random.Random) -> Hypergraph:
    n = rng.randint(1, 4)
    edges = [random_edge(rng, i, n) for i in range(rng.randint(0, 5))]
    ext = (rng.randrange(n),) if rng.random() < 0.3 else ()
    return Hypergraph.build(range(n), edges, ext)


def random_piece(rng: random.Random, rank: int, max_edges: int = 1) -> Hypergraph:
    """A filler of the given rank; external nodes may repeat, inner ones may be isolated."""
    k = rng.randint(1, 2)
    ext = tuple(rng.randrange(k) for _ in range(rank))
    edges = [random_edge(rng, i, k) for i in range(rng.randint(0, max_edges))]
    return Hypergraph.build(range(k), edges, ext)


def touched_nodes(edges, ext=()) -> list[int]:
    return sorted({v for _, _, att in edges for v in att} | set(ext))


def brute_force_contexts(host: Hypergraph, occurrence: Hypergraph) -> set[str]:
    """Canonical texts of every context C with C[e0/F] = host, by trying all matches."""
    found = set()
    external = set(occurrence.ext)
    internal = [p for p in occurrence.nodes if p not in external]
    for images in itertools.permutations(host.edges, len(occurrence.edges)):
        if any(h.label != e.label for e, h in zip(occurrence.edges, images)):
            continue
        mu: dict[int, int] = {}
        if not all(
            mu.setdefault(p, v) == v
            for e, h in zip(occurrence.edges, images)
            for p, v in zip(e.att, h.att)
        ):
            continue
        used = {h.id for h in images}
        rest = tuple(e for e in host.edges if e.id not in used)
        open_nodes = [p for p in occurrence.nodes if p not in mu]
        for extra in itertools.product(host.nodes, repeat=len(open_nodes)):
            full = dict(mu)
            full.update(zip(open_nodes, extra))
            inner = [full[p] for p in internal]
            if len(set(inner)) != len(inner):
                continue
            if set(inner) & ({full[p] for p in external} | set(host.ext)):
                continue
            if any(v in inner for e in rest for v in e.att):
                continue
            hole = Edge(
                host.next_edge_id,
                Placeholder(occurrence.rank),
                tuple(full[p] for p in occurrence.ext),
            )
            context = Hypergraph(
                tuple(v for v in host.nodes if v not in inner), rest + (hole,), host.ext
            )
            found.add(canonical(context).text)
    return found


class TestHelpers:
    """Tests for set partitions and compositions."""

    def test_set_partitions_counts(self):
        """The number of partitions of an n-set is the n-th Bell number."""
        for n, bell in enumerate(BELL):
            partitions = list(set_partitions(list(range(n))))
            assert len(partitions) == bell
            for partition in partitions:
                assert sorted(x for block in partition for x in block) == list(range(n))

    def test_compositions_counts(self):
        """Weak compositions of t into p parts number C(t + p - 1, p - 1)."""
        for total, parts in itertools.product(range(5), range(1, 4)):
            found = list(compositions(total, parts))
            assert len(found) == math.comb(total + parts - 1, parts - 1)
            assert all(sum(c) == total for c in found)
        assert list(compositions(0, 0)) == [()]
        assert list(compositions(2, 0)) == []


class TestEnumerateContexts:
    """Tests for contexts of an occurrence inside a host."""

    def test_every_context_rebuilds_the_host(self):
        """C[e0/F] is isomorphic to the host for every context found."""
        rng = random.Random(17)
        occurrence = handle_filled(A)
        for _ in range(200):
            host = random_host(rng)
            for item in enumerate_contexts(host, occurrence):
                assert same_shape(replace(item.context, item.hole, occurrence), host)

    def test_matches_brute_force(self):
        """The contexts found are exactly those of every label- and dangling-respecting match."""
        rng = random.Random(19)
        for _ in range(1000):
            host = random_host(rng)
            occurrence = rng.choice(OCCURRENCES)
            found = {canonical(item.context).text for item in enumerate_contexts(host, occurrence)}
            assert found == brute_force_contexts(host, occurrence)

    def test_asymmetric_positions_give_distinct_contexts(self):
        """Both edges of a directed path are separate occurrences."""
        host = Hypergraph.build([0, 1, 2], [(0, A, (0, 1)), (1, A, (1, 2))])
        contexts = enumerate_contexts(host, handle_filled(A))
        assert len(contexts) == 2

    def test_isolated_interface_nodes(self):
        """An occurrence of D_2 with both nodes external picks any ordered pair of nodes."""
        host = Hypergraph.build([0, 1], [(0, A, (0, 1))])
        occurrence = Hypergraph.build([0, 1], [], [0, 1])
        contexts = enumerate_contexts(host, occurrence)
        assert contexts
        for item in contexts:
            assert same_shape(replace(item.context, item.hole, occurrence), host)


class TestWholeHostSplit:
    """Reading a host as M[m_1/H_1, ..., m_l/H_l]."""

    def test_finds_every_constructed_reading(self):
        """Pieces put into a body with repeated attachments are found again."""
        rng = random.Random(41)
        for _ in range(1000):
            n = rng.randint(1, 3)
            edges = []
            for i in range(rng.randint(1, 2)):
                label = rng.choice(HOLE_LABELS)
                edges.append((i, label, tuple(rng.randrange(n) for _ in range(label.rank))))
            ext = tuple(rng.sample(range(n), rng.randint(0, min(2, n))))
            body = Hypergraph.build(touched_nodes(edges, ext), edges, ext)
            pieces = {e.id: random_piece(rng, e.rank, 2) for e in body.edges}
            host = replace_many(body, pieces)

            readings = split(host, body, holes=[e.id for e in body.edges], embedded=False)
            expected = tuple(canonical(pieces[e.id]).text for e in body.edges)
            assert expected in {r.key[1] for r in readings}
            for reading in readings:
                assert same_shape(replace_many(body, dict(reading.pieces)), host)

    def test_distinct_ends_over_a_loop(self):
        """A body edge z(u, u) accepts a piece whose two ends differ."""
        body = Hypergraph.build([0], [(0, HOLE_LABELS[2], (0, 0))])
        host = Hypergraph.build([0], [(0, A, (0, 0))])
        readings = split(host, body, holes=[0], embedded=False)
        assert any(len(set(r.piece(0).ext)) == 2 for r in readings)
        assert any(len(set(r.piece(0).ext)) == 1 for r in readings)


class TestDivisorMatching:
    """Reading an antecedent as H[e/D[$/(N÷D)•, d_i/H_i]]."""

    @staticmethod
    def random_divisor(rng: random.Random) -> Div:
        k = rng.randint(0, 2)
        n = max(k, rng.randint(1, 2))
        r = rng.randint(0, 1)
        edges = [(0, Dollar(r), tuple(rng.randrange(n) for _ in range(r)))]
        for i in range(1, rng.randint(2, 3)):
            label = rng.choice(PART_TYPES)
            edges.append((i, label, tuple(rng.randrange(n) for _ in range(label.rank))))
        ext = tuple(rng.sample(range(n), k))
        denominator = Hypergraph.build(touched_nodes(edges, ext), edges, ext)
        return Div(Prim("n", k), denominator, 0)

    def test_finds_every_constructed_reading(self):
        """Contexts and pieces put around a division edge are found again."""
        rng = random.Random(43)
        for _ in range(1000):
            div = self.random_divisor(rng)
            pieces = {d: random_piece(rng, div.denominator.edge(d).rank) for d in div.parts}
            m = rng.randint(1, 2)
            edges = [(0, div.numerator, tuple(rng.randrange(m) for _ in range(div.numerator.rank)))]
            edges.extend(random_edge(rng, i, m) for i in range(1, rng.randint(1, 2)))
            context = Hypergraph.build(touched_nodes(edges), edges)
            opened = relabel(div.denominator, {div.dollar: div})
            host = replace(context, 0, replace_many(opened, pieces))
            (divided,) = [e.id for e in host.edges if isinstance(e.label, Div)]

            readings = match_divisor(host, divided, balanced=False)
            expected = (
                canonical(context).text,
                tuple(canonical(pieces[d]).text for d in div.parts),
            )
            assert expected in {r.key for r in readings}
            for reading in readings:
                filled = replace_many(opened, dict(reading.pieces))
                assert same_shape(replace(reading.context, reading.hole, filled), host)
