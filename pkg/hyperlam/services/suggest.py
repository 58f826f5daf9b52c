"""Fuzzy matching of names for "did you mean" hints.

Levenshtein distance for typo tolerance plus a prefix bonus, ranked by score.
"""

from typing import Iterable


def levenshtein_distance(s1: str, s2: str) -> int:
    """Calculate the Levenshtein (edit) distance between two strings.

    Returns the minimum number of single-character edits (insertions,
    deletions, or substitutions) required to change s1 into s2.
    """
    if len(s1) < len(s2):
        return levenshtein_distance(s2, s1)

    if len(s2) == 0:
        return len(s1)

    previous_row = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1):
        current_row = [i + 1]
        for j, c2 in enumerate(s2):
            insertions = previous_row[j + 1] + 1
            deletions = current_row[j] + 1
            substitutions = previous_row[j] + (c1 != c2)
            current_row.append(min(insertions, deletions, substitutions))
        previous_row = current_row

    return previous_row[-1]


def similarity_ratio(s1: str, s2: str) -> float:
    """Similarity between two names (0.0 to 1.0), case-insensitive.

    Uses Levenshtein distance normalized by the length of the longer string.
    """
    if not s1 and not s2:
        return 1.0
    if not s1 or not s2:
        return 0.0

    s1_lower = s1.lower()
    s2_lower = s2.lower()

    max_len = max(len(s1_lower), len(s2_lower))
    distance = levenshtein_distance(s1_lower, s2_lower)

    return 1.0 - (distance / max_len)


def match_score(query: str, name: str) -> float:
    """Score a candidate name against what the user typed."""
    query_lower = query.lower()
    name_lower = name.lower()
    if query_lower == name_lower:
        return 1.0
    if name_lower.startswith(query_lower) or query_lower.startswith(name_lower):
        return 0.9
    return similarity_ratio(query, name)


def suggest(
    query: str, candidates: Iterable[str], threshold: float = 0.5, limit: int = 3
) -> list[str]:
    """Closest candidates first, ties broken alphabetically."""
    if not query:
        return []
    scored = [(match_score(query, name), name) for name in set(candidates)]
    ranked = sorted((item for item in scored if item[0] >= threshold), key=lambda x: (-x[0], x[1]))
    return [name for _, name in ranked[:limit]]


def did_you_mean(query: str, candidates: Iterable[str]) -> str:
    """A sentence fragment like " (did you mean 'r1'?)", or "" when nothing is close."""
    names = suggest(query, candidates)
    if not names:
        return ""
    return " (did you mean " + " or ".join(repr(n) for n in names) + "?)"
