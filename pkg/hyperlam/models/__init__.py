"""Hypergraphs, types, sequents, grammars and cached verdicts."""

from hyperlam.models.hypergraph import Dollar, Edge, Hypergraph, Morphism, Placeholder, RankedLabel
from hyperlam.models.types import Bang, Div, Mul, Prim, Slot, Star, Template, TypeExpr
from hyperlam.models.sequent import DerivationTree, Rule, Sequent
from hyperlam.models.grammar import (
    DpoDerivation,
    DpoGrammar,
    DpoRule,
    DpoStep,
    HlWitness,
    LexGrammar,
)
from hyperlam.models.verdict import CachedVerdict

__all__ = [
    "Dollar",
    "Edge",
    "Hypergraph",
    "Morphism",
    "Placeholder",
    "RankedLabel",
    "Bang",
    "Div",
    "Mul",
    "Prim",
    "Slot",
    "Star",
    "Template",
    "TypeExpr",
    "DerivationTree",
    "Rule",
    "Sequent",
    "DpoDerivation",
    "DpoGrammar",
    "DpoRule",
    "DpoStep",
    "HlWitness",
    "LexGrammar",
    "CachedVerdict",
]
