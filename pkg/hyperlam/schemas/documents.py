"""JSON document schemas.

Node and edge ids are strings in documents. Edge labels are either a name
(a registered label, `$k` for a dollar, `#k` for a hole, `@1`/`@2` for a
template slot) or a type object.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

FORMAT = "hyperlam/1"


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class LabelDoc(_Doc):
    name: str = Field(..., min_length=1)
    rank: int = Field(..., ge=0)


class EdgeDoc(_Doc):
    id: str
    label: Union[str, "TypeDoc"]
    att: list[str] = Field(default_factory=list)


class HypergraphDoc(_Doc):
    nodes: list[str] = Field(default_factory=list)
    edges: list[EdgeDoc] = Field(default_factory=list)
    ext: list[str] = Field(default_factory=list)


class PrimDoc(_Doc):
    name: str = Field(..., min_length=1)
    rank: int = Field(..., ge=0)


class DivDoc(_Doc):
    num: "TypeDoc"
    den: HypergraphDoc
    dollar: str


class TemplateDoc(_Doc):
    body: HypergraphDoc
    unit: HypergraphDoc


class StarDoc(_Doc):
    template: TemplateDoc
    inner: "TypeDoc"


class TypeDoc(_Doc):
    """Exactly one of the constructor fields is set."""

    prim: Optional[PrimDoc] = None
    div: Optional[DivDoc] = None
    mul: Optional[HypergraphDoc] = None
    bang: Optional["TypeDoc"] = None
    star: Optional[StarDoc] = None

    @model_validator(mode="after")
    def one_constructor(self) -> "TypeDoc":
        chosen = [
            name
            for name in ("prim", "div", "mul", "bang", "star")
            if getattr(self, name) is not None
        ]
        if len(chosen) != 1:
            raise ValueError(f"a type needs exactly one constructor, got {chosen or 'none'}")
        return self


class SequentDoc(_Doc):
    antecedent: HypergraphDoc
    succedent: TypeDoc


class RuleDoc(_Doc):
    name: str = Field(..., min_length=1)
    left: HypergraphDoc
    k: int = Field(..., ge=0)
    phi_left: list[str] = Field(default_factory=list, alias="phiL")
    phi_right: list[str] = Field(default_factory=list, alias="phiR")
    right: HypergraphDoc


class LexEntryDoc(_Doc):
    terminal: str
    type: TypeDoc


class TreeDoc(_Doc):
    rule: str
    conclusion: SequentDoc
    premises: list["TreeDoc"] = Field(default_factory=list)
    data: dict[str, Any] = Field(default_factory=dict)


class StepDoc(_Doc):
    rule: str
    context: HypergraphDoc
    hole: str
    result: HypergraphDoc


class _Versioned(_Doc):
    format: Literal["hyperlam/1"] = FORMAT


class AlphabetDocument(_Versioned):
    labels: list[LabelDoc] = Field(default_factory=list)


class HypergraphDocument(_Versioned, HypergraphDoc):
    labels: list[LabelDoc] = Field(default_factory=list)


class TypeDocument(_Versioned):
    type: TypeDoc


class SequentDocument(_Versioned, SequentDoc):
    pass


class GrammarDocument(_Versioned):
    nonterminals: list[LabelDoc]
    terminals: list[LabelDoc] = Field(default_factory=list)
    start: str
    rules: list[RuleDoc] = Field(default_factory=list)
    proxies: dict[str, str] = Field(default_factory=dict)
    terminal_rules: list[str] = Field(default_factory=list, alias="terminalRules")


class LexGrammarDocument(_Versioned):
    alphabet: list[LabelDoc]
    start: TypeDoc = Field(..., alias="S")
    lexicon: list[LexEntryDoc] = Field(default_factory=list)
    source: Optional[str] = None


class TreeDocument(_Versioned, TreeDoc):
    assignment: Optional[dict[str, TypeDoc]] = None


class DerivationDocument(_Versioned):
    labels: list[LabelDoc] = Field(default_factory=list)
    source: HypergraphDoc
    steps: list[StepDoc] = Field(default_factory=list)


for _model in (EdgeDoc, DivDoc, StarDoc, TypeDoc, TreeDoc, TreeDocument):
    _model.model_rebuild()
