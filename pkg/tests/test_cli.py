"""Command-line tests: JSON output and exit codes."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from hyperlam.cli import cli

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

GRAMMAR = str(SAMPLES / "all-graphs.grammar.json")
TRIANGLE = str(SAMPLES / "two-loop-triangle.json")
RHO_ALPHABET = str(SAMPLES / "rho.alphabet.json")


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    """Invoke the CLI and decode the JSON object it printed last."""
    result = runner.invoke(cli, [str(a) for a in args])
    lines = [line for line in result.stdout.splitlines() if line.startswith("{")]
    payload = json.loads(lines[-1]) if lines else None
    return result.exit_code, payload


class TestProve:
    """Tests for the prove command."""

    def test_derivable_sequent(self, runner):
        """Exit 0 with a checked witness."""
        code, payload = run(runner, "prove", SAMPLES / "rho.sequent.json")
        assert code == 0
        assert payload["verdict"] == "found"
        assert payload["stats"]["checked"] is True
        assert payload["witness"]["rule"] == "div-left"

    def test_not_derivable(self, runner):
        """Exit 1 when the search space is exhausted."""
        code, payload = run(runner, "prove", SAMPLES / "p-to-q.sequent.json")
        assert code == 1
        assert payload["verdict"] == "not_derivable"

    def test_writes_artifacts(self, runner, tmp_path):
        """--emit-witness and --emit-dot write files."""
        witness = tmp_path / "proof.json"
        drawing = tmp_path / "proof.dot"
        code, _ = run(
            runner,
            "prove",
            SAMPLES / "rho.sequent.json",
            "--emit-witness",
            witness,
            "--emit-dot",
            drawing,
        )
        assert code == 0
        assert json.loads(witness.read_text(encoding="utf-8"))["format"] == "hyperlam/1"
        assert drawing.read_text(encoding="utf-8").startswith("digraph proof")

    def test_emitted_witness_draws(self, runner, tmp_path):
        """The witness file written by prove is a tree document dot accepts."""
        witness = tmp_path / "proof.json"
        code, _ = run(runner, "prove", SAMPLES / "rho.sequent.json", "--emit-witness", witness)
        assert code == 0
        code, payload = run(runner, "dot", witness)
        assert code == 0
        assert payload["kind"] == "tree"
        assert payload["dot"].startswith("digraph proof")


class TestInputErrors:
    """Usage and document errors exit 3."""

    def test_unknown_calculus(self, runner):
        code, _ = run(runner, "prove", SAMPLES / "p-to-q.sequent.json", "--calculus", "lk")
        assert code == 3

    def test_missing_file(self, runner, tmp_path):
        code, _ = run(runner, "prove", tmp_path / "absent.json")
        assert code == 3

    def test_non_positive_state_cap(self, runner):
        code, _ = run(runner, "--state-cap", "0", "iso", TRIANGLE, TRIANGLE)
        assert code == 3

    def test_broken_document(self, runner, tmp_path):
        """Parse errors are reported in the JSON error field."""
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        code, payload = run(runner, "prove", path)
        assert code == 3
        assert "ParseError" in payload["error"]

    def test_unknown_label_without_alphabet(self, runner):
        code, payload = run(runner, "iso", SAMPLES / "rho-triangle.json", TRIANGLE)
        assert code == 3
        assert "UnknownLabel" in payload["error"]


class TestGraphs:
    """Tests for iso and dot."""

    def test_iso_with_itself(self, runner):
        code, payload = run(runner, "iso", TRIANGLE, TRIANGLE)
        assert code == 0
        assert payload["isomorphic"] is True
        assert payload["canonical"][0] == payload["canonical"][1]
        assert len(payload["morphism"]["edges"]) == 3

    def test_iso_different_graphs(self, runner):
        """Labels from a shared alphabet; different shapes exit 1."""
        code, payload = run(
            runner, "--alphabet", RHO_ALPHABET, "iso", SAMPLES / "rho-triangle.json", TRIANGLE
        )
        assert code == 1
        assert payload["isomorphic"] is False

    def test_dot(self, runner):
        code, payload = run(runner, "dot", TRIANGLE)
        assert code == 0
        assert payload["kind"] == "hypergraph"
        assert payload["dot"].startswith("digraph H")


class TestDpoCommands:
    """Tests for dpo, normalize and enumerate."""

    def test_member_in_l3(self, runner):
        """The triangle takes nine steps: in L_3, not in L_2."""
        code, payload = run(runner, "dpo", "member", GRAMMAR, TRIANGLE, "--c", "3")
        assert code == 0
        assert payload["steps"] == 9
        assert payload["bound"] == 9
        code, payload = run(runner, "dpo", "member", GRAMMAR, TRIANGLE, "--c", "2")
        assert code == 1
        assert payload["member"] is False

    def test_derive(self, runner):
        code, payload = run(runner, "dpo", "derive", GRAMMAR, TRIANGLE, "--max-steps", "6")
        assert code == 0
        assert payload["steps"] == 6
        assert sorted(payload["rules"]) == ["r1", "r2", "r2", "r3", "r3", "r3"]

    def test_derive_too_short(self, runner):
        code, payload = run(runner, "dpo", "derive", GRAMMAR, TRIANGLE, "--max-steps", "5")
        assert code == 1
        assert payload["derivable"] is False

    def test_apply_without_match(self, runner):
        """r3 needs two nodes; the empty graph has none."""
        code, payload = run(runner, "dpo", "apply", SAMPLES / "empty.json", GRAMMAR, "--rule", "r3")
        assert code == 1
        assert payload["matches"] == 0

    def test_apply_unknown_rule(self, runner):
        code, payload = run(runner, "dpo", "apply", TRIANGLE, GRAMMAR, "--rule", "r4")
        assert code == 3
        assert "did you mean" in payload["error"]

    def test_normalize(self, runner, tmp_path):
        out = tmp_path / "normalized.json"
        code, payload = run(runner, "normalize", GRAMMAR, "-o", out)
        assert code == 0
        assert payload["proxies"] == {"a": "T_a"}
        assert payload["terminal_rules"] == ["t_a"]
        assert json.loads(out.read_text(encoding="utf-8"))["terminalRules"] == ["t_a"]

    def test_enumerate(self, runner):
        code, payload = run(
            runner, "enumerate", GRAMMAR, "--max-steps", "6", "--max-nodes", "2", "--max-edges", "1"
        )
        assert code == 0
        assert payload["count"] == 6
        assert [g["steps"] for g in payload["graphs"]] == [1, 2, 3, 3, 4, 4]


class TestEncodeAndMember:
    """Tests for encode and member."""

    def test_lg_c_then_member(self, runner, tmp_path):
        """Build LG_2 and check the triangle against it."""
        lexicon = tmp_path / "lg2.json"
        code, payload = run(runner, "encode", "lg-c", GRAMMAR, "--c", "2", "-o", lexicon)
        assert code == 0
        assert payload["entries"] == {"a": 10}
        assert payload["source"] == "lg-c:2"

        code, payload = run(runner, "member", lexicon, TRIANGLE)
        assert code == 0
        assert payload["verdict"] == "found"
        assert payload["stats"]["checked"] is True
        assert set(payload["witness"]["assignment"]) == {"0", "1", "2"}

    def test_lg_hmel_replay(self, runner, tmp_path):
        """With --grammar the exponential encoding accepts through a replayed derivation."""
        lexicon = tmp_path / "hmel.json"
        code, _ = run(runner, "encode", "lg-hmel", GRAMMAR, "-o", lexicon)
        assert code == 0
        code, payload = run(runner, "member", lexicon, TRIANGLE, "--grammar", GRAMMAR)
        assert code == 0
        assert payload["stats"]["route"] == "replay"

    def test_dpo_type(self, runner):
        code, payload = run(runner, "encode", "dpo-type", GRAMMAR, "--rule", "r3'")
        assert code == 0
        assert payload["document"]["type"]["div"]["dollar"]
