"""Versioned JSON document schemas."""

from hyperlam.schemas.documents import (
    FORMAT,
    AlphabetDocument,
    DerivationDocument,
    GrammarDocument,
    HypergraphDocument,
    LexGrammarDocument,
    SequentDocument,
    TreeDocument,
    TypeDocument,
)

__all__ = [
    "FORMAT",
    "AlphabetDocument",
    "DerivationDocument",
    "GrammarDocument",
    "HypergraphDocument",
    "LexGrammarDocument",
    "SequentDocument",
    "TreeDocument",
    "TypeDocument",
]
