"""Unit tests for "did you mean" suggestions."""

from hyperlam.services.suggest import (
    did_you_mean,
    levenshtein_distance,
    match_score,
    similarity_ratio,
    suggest,
)


class TestLevenshteinDistance:
    """Tests for Levenshtein distance calculation."""

    def test_identical_strings(self):
        """Identical strings should have distance 0."""
        assert levenshtein_distance("r3'", "r3'") == 0
        assert levenshtein_distance("", "") == 0

    def test_empty_string(self):
        """Distance to empty string is length of other string."""
        assert levenshtein_distance("rho", "") == 3
        assert levenshtein_distance("", "T_a") == 3

    def test_single_edits(self):
        """Insertion, deletion and substitution each cost 1."""
        assert levenshtein_distance("r3", "r3'") == 1
        assert levenshtein_distance("t_a", "ta") == 1
        assert levenshtein_distance("r1", "r2") == 1


class TestScores:
    """Tests for similarity and match scores."""

    def test_similarity_bounds(self):
        assert similarity_ratio("abc", "abc") == 1.0
        assert similarity_ratio("", "abc") == 0.0
        assert similarity_ratio("", "") == 1.0

    def test_case_insensitive(self):
        assert similarity_ratio("T_A", "t_a") == 1.0

    def test_prefix_bonus(self):
        """A prefix scores 0.9, an exact match 1.0."""
        assert match_score("r3", "r3'") == 0.9
        assert match_score("rho", "rho") == 1.0


class TestSuggest:
    """Tests for the ranked suggestions."""

    def test_closest_first(self):
        assert suggest("r3", ["r1", "r3'", "zzz"])[0] == "r3'"

    def test_nothing_close(self):
        assert suggest("xyz", ["r1", "r2"]) == []
        assert did_you_mean("xyz", ["r1", "r2"]) == ""

    def test_empty_query(self):
        assert suggest("", ["r1"]) == []

    def test_did_you_mean_fragment(self):
        assert did_you_mean("rh", ["rho", "t"]) == " (did you mean 'rho'?)"
