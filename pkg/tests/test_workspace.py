"""Tests for document parsing, conversion and the label registry."""

import json
from pathlib import Path

import pytest

from hyperlam.exceptions import ParseError, RankMismatch, UnknownLabel, UnknownNode
from hyperlam.models.grammar import DpoGrammar, LexGrammar
from hyperlam.models.hypergraph import Hypergraph, RankedLabel
from hyperlam.models.sequent import Rule, Sequent
from hyperlam.models.types import Bang, Mul, Prim
from hyperlam.services.canonical import same_shape
from hyperlam.services.catalog import (
    all_graphs_grammar,
    rho_sequent,
    rho_tree,
    rho_derivation,
    two_loop_triangle,
)
from hyperlam.services.checker import check_tree
from hyperlam.services.dpo import check_derivation, normalize
from hyperlam.services.encodings import lg_c, lg_hmel
from hyperlam.services.prover import Calculus, cut_compose, derive
from hyperlam.services.replacement import handle_filled, sum_of
from hyperlam.services.workspace import (
    DocumentKind,
    Workspace,
    dump,
    guess_kind,
    load,
    parse,
    read_json,
    save,
)

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

P = Prim("p", 0)
Q = Prim("q", 0)


def graph_data(**overrides):
    data = {
        "format": "hyperlam/1",
        "labels": [{"name": "a", "rank": 2}],
        "nodes": ["u", "v"],
        "edges": [{"id": "e", "label": "a", "att": ["u", "v"]}],
    }
    data.update(overrides)
    return data


class TestParseErrors:
    """Malformed documents raise ParseError or a precise input error."""

    def test_wrong_format_tag(self):
        """Only hyperlam/1 is accepted."""
        with pytest.raises(ParseError) as info:
            parse(graph_data(format="hyperlam/2"), DocumentKind.HYPERGRAPH)
        assert info.value.location == "$.format"

    def test_unknown_field(self):
        """Extra keys are rejected with their path."""
        with pytest.raises(ParseError) as info:
            parse(graph_data(colour="red"), DocumentKind.HYPERGRAPH, source="g.json")
        assert info.value.location == "g.json:$.colour"

    def test_unknown_label(self):
        """Labels must be declared, with a suggestion for near misses."""
        data = graph_data(labels=[{"name": "ab", "rank": 2}])
        with pytest.raises(UnknownLabel) as info:
            parse(data, DocumentKind.HYPERGRAPH)
        assert "did you mean 'ab'" in str(info.value)

    def test_unknown_node(self):
        """Attachment nodes must be listed."""
        data = graph_data(edges=[{"id": "e", "label": "a", "att": ["u", "w"]}])
        with pytest.raises(UnknownNode) as info:
            parse(data, DocumentKind.HYPERGRAPH)
        assert "$.edges[0].att" in str(info.value)

    def test_rank_mismatch(self):
        """An edge must have as many attachment nodes as its label's rank."""
        data = graph_data(edges=[{"id": "e", "label": "a", "att": ["u"]}])
        with pytest.raises(RankMismatch):
            parse(data, DocumentKind.HYPERGRAPH)

    def test_label_redeclared_with_other_rank(self):
        """The registry keeps one rank per name."""
        workspace = Workspace({"a": 1})
        with pytest.raises(RankMismatch):
            parse(graph_data(), DocumentKind.HYPERGRAPH, workspace)

    def test_reserved_label_prefix(self):
        with pytest.raises(ParseError):
            Workspace().register(RankedLabel("$x", 0))

    def test_type_needs_one_constructor(self):
        """A type object naming two constructors is invalid."""
        data = {
            "format": "hyperlam/1",
            "type": {"prim": {"name": "p", "rank": 0}, "bang": {"prim": {"name": "p", "rank": 0}}},
        }
        with pytest.raises(ParseError):
            parse(data, DocumentKind.TYPE)

    def test_bad_json(self, tmp_path):
        """Syntax errors report line and column."""
        path = tmp_path / "broken.json"
        path.write_text('{"format": ', encoding="utf-8")
        with pytest.raises(ParseError) as info:
            read_json(path)
        assert info.value.location.startswith(f"{path}:1:")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            read_json(tmp_path / "absent.json")


class TestRoundTrips:
    """Documents written by dump() read back to equal objects."""

    def test_graph(self):
        """Node and edge ids are renumbered; the shape survives."""
        graph = two_loop_triangle()
        back = parse(dump(graph), DocumentKind.HYPERGRAPH)
        assert same_shape(back, graph)

    def test_normalized_grammar(self):
        """Proxies and terminal rules are kept."""
        grammar = normalize(all_graphs_grammar())
        back = parse(dump(grammar), DocumentKind.GRAMMAR)
        assert isinstance(back, DpoGrammar)
        assert back.proxies.keys() == grammar.proxies.keys()
        assert back.terminal_rules == grammar.terminal_rules
        assert [r.name for r in back.rules] == [r.name for r in grammar.rules]

    def test_lexgrammars(self):
        """Lexicons and start types survive, including ! types."""
        grammar = normalize(all_graphs_grammar())
        for lexicon in (lg_c(grammar, 2), lg_hmel(grammar)):
            back = parse(dump(lexicon), DocumentKind.LEXGRAMMAR)
            assert isinstance(back, LexGrammar)
            assert back.start == lexicon.start
            assert sorted(t.key for _, t in back.lexicon) == sorted(t.key for _, t in lexicon.lexicon)
            assert back.source == lexicon.source

    def test_tree(self):
        """A derivation tree reloads and still checks."""
        tree = rho_tree()
        back = parse(dump(tree), DocumentKind.TREE)
        assert back.skeleton() == tree.skeleton()
        assert check_tree(back)

    def test_tree_through_division(self):
        """A searched (÷→) tree names its hole in the first premise and reloads."""
        tree = derive(rho_sequent(), Calculus.HL).value
        assert tree.rule is Rule.DIV_LEFT
        back = parse(dump(tree), DocumentKind.TREE)
        assert back.skeleton() == tree.skeleton()
        assert check_tree(back, "hl")

    def test_tree_through_dereliction(self):
        """(!→) nodes name the derelicted copy in their premise."""
        bang = Bang(P)
        goal = Mul(sum_of([handle_filled(P), handle_filled(P)]))
        tree = derive(Sequent(handle_filled(bang), goal), Calculus.HMEL0).value
        assert Rule.BANG_LEFT in tree.rule_counts()
        back = parse(dump(tree), DocumentKind.TREE)
        assert back.rule_counts() == tree.rule_counts()
        assert check_tree(back, "hmel0")

    def test_tree_through_cut(self):
        """A cut names its edge in the right premise, not in the conclusion."""
        left = derive(Sequent(handle_filled(P), P)).value
        host = sum_of([handle_filled(Q), handle_filled(P)])
        right = derive(Sequent(host, Mul(host))).value
        tree = cut_compose(left, right, 1).cut_tree
        back = parse(dump(tree), DocumentKind.TREE)
        assert back.rule is Rule.CUT
        assert back.premises[1].conclusion.antecedent.label_of(back.data["edge"]) == P
        assert check_tree(back, "hl")

    def test_dpo_derivation(self):
        """A DPO derivation reloads and still replays."""
        from hyperlam.services.catalog import rho_grammar

        derivation = rho_derivation()
        back = parse(dump(derivation), DocumentKind.DERIVATION)
        assert back.rule_names == ["rho"]
        assert check_derivation(rho_grammar(), back)

    def test_save_and_load(self, tmp_path):
        """save() writes a versioned document load() can guess."""
        path = tmp_path / "sequent.json"
        save(rho_sequent(), path)
        assert json.loads(path.read_text(encoding="utf-8"))["format"] == "hyperlam/1"
        back = load(path)
        assert isinstance(back, Sequent)
        assert back.key == rho_sequent().key


class TestSamples:
    """The shipped sample documents load."""

    def test_rho_sequent_matches_catalog(self):
        """The hand-written sequent is the one the replay produces."""
        sequent = load(SAMPLES / "rho.sequent.json")
        assert sequent.key == rho_sequent().key

    def test_graph_with_alphabet(self):
        """Labels can come from a separately loaded alphabet."""
        workspace = Workspace()
        load(SAMPLES / "rho.alphabet.json", DocumentKind.ALPHABET, workspace)
        graph = load(SAMPLES / "rho-triangle.json", DocumentKind.HYPERGRAPH, workspace)
        assert isinstance(graph, Hypergraph)
        assert len(graph.edges) == 3

    def test_graph_without_alphabet(self):
        """Without the alphabet the labels are unknown."""
        with pytest.raises(UnknownLabel):
            load(SAMPLES / "rho-triangle.json")

    def test_grammar_and_triangle(self):
        """The all-graphs sample matches the built-in grammar."""
        workspace = Workspace()
        grammar = load(SAMPLES / "all-graphs.grammar.json", workspace=workspace)
        graph = load(SAMPLES / "two-loop-triangle.json", workspace=workspace)
        assert [r.name for r in grammar.rules] == ["r1", "r2", "r3"]
        assert same_shape(graph, two_loop_triangle())


class TestGuessKind:
    """Tests for the key-based kind guess."""

    @pytest.mark.parametrize(
        "data,kind",
        [
            ({"rule": "axiom", "conclusion": {}}, DocumentKind.TREE),
            ({"steps": []}, DocumentKind.DERIVATION),
            ({"antecedent": {}}, DocumentKind.SEQUENT),
            ({"nonterminals": []}, DocumentKind.GRAMMAR),
            ({"lexicon": []}, DocumentKind.LEXGRAMMAR),
            ({"type": {}}, DocumentKind.TYPE),
            ({"nodes": []}, DocumentKind.HYPERGRAPH),
            ({"labels": []}, DocumentKind.ALPHABET),
        ],
    )
    def test_kinds(self, data, kind):
        assert guess_kind(data) is kind

    def test_not_an_object(self):
        with pytest.raises(ParseError):
            guess_kind([1, 2])
