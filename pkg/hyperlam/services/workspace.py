"""Loading and saving documents, and the alphabet registry they resolve labels against."""

from __future__ import annotations

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import BaseModel, ValidationError

from hyperlam.exceptions import (
    InvalidType,
    ParseError,
    RankMismatch,
    UnknownEdge,
    UnknownLabel,
    UnknownNode,
)
from hyperlam.models.grammar import (
    DpoDerivation,
    DpoGrammar,
    DpoRule,
    DpoStep,
    HlWitness,
    LexGrammar,
)
from hyperlam.models.hypergraph import Dollar, Edge, Hypergraph, Placeholder, RankedLabel
from hyperlam.models.sequent import DerivationTree, Rule, Sequent
from hyperlam.models.types import Bang, Div, Mul, Prim, Slot, Star, TypeExpr
from hyperlam.schemas.documents import (
    AlphabetDocument,
    DerivationDocument,
    DivDoc,
    EdgeDoc,
    GrammarDocument,
    HypergraphDoc,
    HypergraphDocument,
    LabelDoc,
    LexEntryDoc,
    LexGrammarDocument,
    PrimDoc,
    RuleDoc,
    SequentDoc,
    SequentDocument,
    StarDoc,
    StepDoc,
    TemplateDoc,
    TreeDoc,
    TreeDocument,
    TypeDoc,
    TypeDocument,
)
from hyperlam.services.suggest import did_you_mean
from hyperlam.services.templates import make_template

logger = logging.getLogger(__name__)

# Premise whose antecedent holds the edge named in a rule's data; others name a conclusion edge.
EDGE_OWNER = {Rule.DIV_LEFT: 0, Rule.BANG_LEFT: 0, Rule.CUT: 1}


class DocumentKind(str, Enum):
    ALPHABET = "alphabet"
    HYPERGRAPH = "hypergraph"
    TYPE = "type"
    SEQUENT = "sequent"
    GRAMMAR = "grammar"
    LEXGRAMMAR = "lexgrammar"
    TREE = "tree"
    DERIVATION = "derivation"


_SCHEMAS: dict[DocumentKind, type[BaseModel]] = {
    DocumentKind.ALPHABET: AlphabetDocument,
    DocumentKind.HYPERGRAPH: HypergraphDocument,
    DocumentKind.TYPE: TypeDocument,
    DocumentKind.SEQUENT: SequentDocument,
    DocumentKind.GRAMMAR: GrammarDocument,
    DocumentKind.LEXGRAMMAR: LexGrammarDocument,
    DocumentKind.TREE: TreeDocument,
    DocumentKind.DERIVATION: DerivationDocument,
}


def _index(ids: list[str], what: str, location: str) -> dict[str, int]:
    mapping: dict[str, int] = {}
    for i, name in enumerate(ids):
        if name in mapping:
            raise ParseError(f"duplicate {what} id {name!r}", location)
        mapping[name] = i
    return mapping


def _name_of(label: Any) -> str:
    if isinstance(label, Slot):
        return f"@{label.index}"
    return label.name


class Workspace:
    """Labels registered so far, by name, and the conversions that use them."""

    def __init__(self, labels: Optional[Mapping[str, int]] = None):
        self.labels: dict[str, RankedLabel] = {}
        for name, rank in (labels or {}).items():
            self.register(RankedLabel(name, rank))

    def register(self, label: RankedLabel, location: str = "") -> RankedLabel:
        if label.name[0] in "$#@":
            raise ParseError(f"label name {label.name!r} uses a reserved prefix", location)
        known = self.labels.setdefault(label.name, label)
        if known.rank != label.rank:
            raise RankMismatch(
                f"{location}: label {label.name} registered with rank {known.rank}, "
                f"redeclared with rank {label.rank}"
            )
        return known

    def register_docs(self, docs: list[LabelDoc], location: str = "") -> list[RankedLabel]:
        return [
            self.register(RankedLabel(doc.name, doc.rank), f"{location}.labels[{i}]")
            for i, doc in enumerate(docs)
        ]

    def lookup(self, name: str, location: str = "") -> RankedLabel:
        try:
            return self.labels[name]
        except KeyError:
            raise UnknownLabel(
                f"{location}: unknown label {name!r}" + did_you_mean(name, self.labels)
            ) from None

    # documents -> objects

    def _label(self, doc: Union[str, TypeDoc], arity: int, location: str) -> Any:
        if isinstance(doc, TypeDoc):
            return self.type_from(doc, location)
        if doc[:1] in "$#" and doc[1:].isdigit():
            return Dollar(int(doc[1:])) if doc[0] == "$" else Placeholder(int(doc[1:]))
        if doc in ("@1", "@2"):
            return Slot(int(doc[1]), arity)
        return self.lookup(doc, location)

    def _graph(
        self, doc: HypergraphDoc, location: str
    ) -> tuple[Hypergraph, dict[str, int], dict[str, int]]:
        nodes = _index(doc.nodes, "node", location)
        edge_ids = _index([e.id for e in doc.edges], "edge", location)

        def node(name: str, where: str) -> int:
            try:
                return nodes[name]
            except KeyError:
                raise UnknownNode(f"{where}: unknown node {name!r}") from None

        edges = []
        for i, edge in enumerate(doc.edges):
            where = f"{location}.edges[{i}]"
            att = tuple(node(v, f"{where}.att") for v in edge.att)
            label = self._label(edge.label, len(att), f"{where}.label")
            edges.append(Edge(edge_ids[edge.id], label, att))
        ext = tuple(node(v, f"{location}.ext") for v in doc.ext)
        try:
            graph = Hypergraph(tuple(nodes.values()), tuple(edges), ext)
        except RankMismatch as exc:
            raise RankMismatch(f"{location}: {exc}") from None
        return graph, nodes, edge_ids

    def graph_from(self, doc: HypergraphDoc, location: str = "$") -> Hypergraph:
        return self._graph(doc, location)[0]

    def type_from(self, doc: TypeDoc, location: str = "$") -> TypeExpr:
        if doc.prim is not None:
            return Prim(doc.prim.name, doc.prim.rank)
        if doc.bang is not None:
            return Bang(self.type_from(doc.bang, f"{location}.bang"))
        if doc.mul is not None:
            return Mul(self.graph_from(doc.mul, f"{location}.mul"))
        if doc.div is not None:
            den, _, edge_ids = self._graph(doc.div.den, f"{location}.div.den")
            if doc.div.dollar not in edge_ids:
                raise UnknownEdge(f"{location}.div.dollar: no edge {doc.div.dollar!r}")
            numerator = self.type_from(doc.div.num, f"{location}.div.num")
            return Div(numerator, den, edge_ids[doc.div.dollar])
        star = doc.star
        template = make_template(
            self.graph_from(star.template.body, f"{location}.star.template.body"),
            self.graph_from(star.template.unit, f"{location}.star.template.unit"),
        )
        return Star(template, self.type_from(star.inner, f"{location}.star.inner"))

    def sequent_from(self, doc: SequentDoc, location: str = "$") -> Sequent:
        return self._sequent(doc, location)[0]

    def _sequent(self, doc: SequentDoc, location: str) -> tuple[Sequent, dict[str, int]]:
        antecedent, _, edge_ids = self._graph(doc.antecedent, f"{location}.antecedent")
        succedent = self.type_from(doc.succedent, f"{location}.succedent")
        return Sequent(antecedent, succedent), edge_ids

    def grammar_from(self, doc: GrammarDocument, location: str = "$") -> DpoGrammar:
        nonterminals = self.register_docs(doc.nonterminals, f"{location}.nonterminals")
        terminals = self.register_docs(doc.terminals, f"{location}.terminals")
        rules = [self._rule(rule, f"{location}.rules[{i}]") for i, rule in enumerate(doc.rules)]
        return DpoGrammar(
            nonterminals=tuple(nonterminals),
            terminals=tuple(terminals),
            rules=tuple(rules),
            start=self.lookup(doc.start, f"{location}.start"),
            proxies={a: self.lookup(p, f"{location}.proxies") for a, p in doc.proxies.items()},
            terminal_rules=frozenset(doc.terminal_rules),
        )

    def _rule(self, doc: RuleDoc, location: str) -> DpoRule:
        left, left_nodes, _ = self._graph(doc.left, f"{location}.left")
        right, right_nodes, _ = self._graph(doc.right, f"{location}.right")

        def image(ids: list[str], nodes: dict[str, int], where: str) -> tuple[int, ...]:
            missing = [v for v in ids if v not in nodes]
            if missing:
                raise UnknownNode(f"{where}: unknown nodes {missing}")
            return tuple(nodes[v] for v in ids)

        return DpoRule(
            name=doc.name,
            left=left,
            k=doc.k,
            phi_left=image(doc.phi_left, left_nodes, f"{location}.phiL"),
            phi_right=image(doc.phi_right, right_nodes, f"{location}.phiR"),
            right=right,
        )

    def lexgrammar_from(self, doc: LexGrammarDocument, location: str = "$") -> LexGrammar:
        alphabet = self.register_docs(doc.alphabet, f"{location}.alphabet")
        lexicon: dict[tuple[str, str], tuple[str, TypeExpr]] = {}
        for i, entry in enumerate(doc.lexicon):
            t = self.type_from(entry.type, f"{location}.lexicon[{i}].type")
            lexicon.setdefault((entry.terminal, t.key), (entry.terminal, t))
        return LexGrammar(
            alphabet=tuple(alphabet),
            start=self.type_from(doc.start, f"{location}.S"),
            lexicon=tuple(lexicon.values()),
            source=doc.source,
        )

    def tree_from(self, doc: TreeDoc, location: str = "$") -> DerivationTree:
        return self._tree(doc, location)[0]

    def _tree(self, doc: TreeDoc, location: str) -> tuple[DerivationTree, dict[str, int]]:
        try:
            rule = Rule(doc.rule)
        except ValueError:
            raise ParseError(
                f"unknown rule {doc.rule!r}" + did_you_mean(doc.rule, [r.value for r in Rule]),
                f"{location}.rule",
            ) from None
        conclusion, own_ids = self._sequent(doc.conclusion, f"{location}.conclusion")
        parsed = [
            self._tree(p, f"{location}.premises[{i}]") for i, p in enumerate(doc.premises)
        ]
        edge_ids = own_ids
        owner = EDGE_OWNER.get(rule)
        if owner is not None and owner < len(parsed):
            edge_ids = parsed[owner][1]
        data: dict[str, Any] = {}
        for key, value in doc.data.items():
            where = f"{location}.data.{key}"
            if key == "edge":
                if value not in edge_ids:
                    raise UnknownEdge(f"{where}: no edge {value!r}")
                data[key] = edge_ids[value]
            elif key == "type":
                data[key] = self.type_from(TypeDoc.model_validate(value), where)
            else:
                data[key] = value
        premises = tuple(tree for tree, _ in parsed)
        return DerivationTree(rule, conclusion, premises, data), own_ids

    def derivation_from(self, doc: DerivationDocument, location: str = "$") -> DpoDerivation:
        self.register_docs(doc.labels, location)
        steps = []
        for i, item in enumerate(doc.steps):
            where = f"{location}.steps[{i}]"
            context, _, edge_ids = self._graph(item.context, f"{where}.context")
            if item.hole not in edge_ids:
                raise UnknownEdge(f"{where}.hole: no edge {item.hole!r}")
            result = self.graph_from(item.result, f"{where}.result")
            steps.append(DpoStep(item.rule, context, edge_ids[item.hole], result))
        return DpoDerivation(self.graph_from(doc.source, f"{location}.source"), tuple(steps))

    def convert(self, doc: BaseModel, kind: DocumentKind, location: str = "$") -> Any:
        if kind is DocumentKind.ALPHABET:
            return self.register_docs(doc.labels, location)
        if kind is DocumentKind.HYPERGRAPH:
            self.register_docs(doc.labels, location)
            return self.graph_from(doc, location)
        if kind is DocumentKind.TYPE:
            return self.type_from(doc.type, f"{location}.type")
        if kind is DocumentKind.SEQUENT:
            return self.sequent_from(doc, location)
        if kind is DocumentKind.GRAMMAR:
            return self.grammar_from(doc, location)
        if kind is DocumentKind.LEXGRAMMAR:
            return self.lexgrammar_from(doc, location)
        if kind is DocumentKind.TREE:
            return self.tree_from(doc, location)
        return self.derivation_from(doc, location)

    # objects -> documents

    def graph_doc(self, graph: Hypergraph) -> HypergraphDoc:
        return HypergraphDoc(
            nodes=[str(v) for v in graph.nodes],
            edges=[
                EdgeDoc(
                    id=str(e.id),
                    label=self.type_doc(e.label) if isinstance(e.label, TypeExpr) else _name_of(e.label),
                    att=[str(v) for v in e.att],
                )
                for e in graph.edges
            ],
            ext=[str(v) for v in graph.ext],
        )

    def type_doc(self, t: TypeExpr) -> TypeDoc:
        if isinstance(t, Prim):
            return TypeDoc(prim=PrimDoc(name=t.name, rank=t.arity))
        if isinstance(t, Bang):
            return TypeDoc(bang=self.type_doc(t.inner))
        if isinstance(t, Mul):
            return TypeDoc(mul=self.graph_doc(t.body))
        if isinstance(t, Div):
            return TypeDoc(
                div=DivDoc(
                    num=self.type_doc(t.numerator),
                    den=self.graph_doc(t.denominator),
                    dollar=str(t.dollar),
                )
            )
        if isinstance(t, Star):
            return TypeDoc(
                star=StarDoc(
                    template=TemplateDoc(
                        body=self.graph_doc(t.template.body),
                        unit=self.graph_doc(t.template.unit),
                    ),
                    inner=self.type_doc(t.inner),
                )
            )
        raise InvalidType(f"cannot serialize {t!r}")

    def sequent_doc(self, sequent: Sequent) -> SequentDoc:
        return SequentDoc(
            antecedent=self.graph_doc(sequent.antecedent),
            succedent=self.type_doc(sequent.succedent),
        )

    def tree_doc(self, tree: DerivationTree) -> TreeDoc:
        data: dict[str, Any] = {}
        for key, value in tree.data.items():
            if key == "edge":
                data[key] = str(value)
            elif isinstance(value, TypeExpr):
                data[key] = self.type_doc(value).model_dump(by_alias=True, exclude_none=True)
            else:
                data[key] = value
        return TreeDoc(
            rule=tree.rule.value,
            conclusion=self.sequent_doc(tree.conclusion),
            premises=[self.tree_doc(p) for p in tree.premises],
            data=data,
        )


def _label_docs(labels: list[Any]) -> list[LabelDoc]:
    found: dict[str, RankedLabel] = {}
    for label in labels:
        if isinstance(label, RankedLabel):
            found.setdefault(label.name, label)
    return [LabelDoc(name=l.name, rank=l.rank) for l in found.values()]


def document_for(obj: Any, workspace: Optional[Workspace] = None) -> BaseModel:
    """The versioned document of a library object."""
    ws = workspace or Workspace()
    if isinstance(obj, Hypergraph):
        doc = ws.graph_doc(obj)
        return HypergraphDocument(
            labels=_label_docs(obj.labels()), nodes=doc.nodes, edges=doc.edges, ext=doc.ext
        )
    if isinstance(obj, TypeExpr):
        return TypeDocument(type=ws.type_doc(obj))
    if isinstance(obj, Sequent):
        doc = ws.sequent_doc(obj)
        return SequentDocument(antecedent=doc.antecedent, succedent=doc.succedent)
    if isinstance(obj, (DerivationTree, HlWitness)):
        tree = obj.tree if isinstance(obj, HlWitness) else obj
        doc = ws.tree_doc(tree)
        assignment = None
        if isinstance(obj, HlWitness):
            assignment = {str(e): ws.type_doc(t) for e, t in sorted(obj.assignment.items())}
        return TreeDocument(
            rule=doc.rule,
            conclusion=doc.conclusion,
            premises=doc.premises,
            data=doc.data,
            assignment=assignment,
        )
    if isinstance(obj, DpoGrammar):
        return GrammarDocument(
            nonterminals=_label_docs(list(obj.nonterminals)),
            terminals=_label_docs(list(obj.terminals)),
            start=obj.start.name,
            rules=[
                RuleDoc(
                    name=r.name,
                    left=ws.graph_doc(r.left),
                    k=r.k,
                    phi_left=[str(v) for v in r.phi_left],
                    phi_right=[str(v) for v in r.phi_right],
                    right=ws.graph_doc(r.right),
                )
                for r in obj.rules
            ],
            proxies={a: p.name for a, p in obj.proxies.items()},
            terminal_rules=sorted(obj.terminal_rules),
        )
    if isinstance(obj, LexGrammar):
        return LexGrammarDocument(
            alphabet=_label_docs(list(obj.alphabet)),
            start=ws.type_doc(obj.start),
            lexicon=[LexEntryDoc(terminal=a, type=ws.type_doc(t)) for a, t in obj.lexicon],
            source=obj.source,
        )
    if isinstance(obj, DpoDerivation):
        graphs = [obj.source] + [s.context for s in obj.steps] + [s.result for s in obj.steps]
        return DerivationDocument(
            labels=_label_docs([l for g in graphs for l in g.labels()]),
            source=ws.graph_doc(obj.source),
            steps=[
                StepDoc(
                    rule=s.rule,
                    context=ws.graph_doc(s.context),
                    hole=str(s.hole),
                    result=ws.graph_doc(s.result),
                )
                for s in obj.steps
            ],
        )
    raise InvalidType(f"no document kind for {type(obj).__name__}")


def dump(obj: Any) -> dict[str, Any]:
    """JSON-ready dict of a library object's document."""
    return document_for(obj).model_dump(by_alias=True, exclude_none=True, mode="json")


def parse(data: Any, kind: DocumentKind, workspace: Optional[Workspace] = None, source: str = "") -> Any:
    """Validate a decoded JSON value against a document kind and convert it.

    Raises:
        ParseError: when the document does not validate, with the JSON path.
    """
    kind = DocumentKind(kind)
    try:
        doc = _SCHEMAS[kind].model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        path = ".".join(str(part) for part in error["loc"])
        base = f"{source}:$" if source else "$"
        raise ParseError(error["msg"], f"{base}.{path}" if path else base) from None
    ws = workspace if workspace is not None else Workspace()
    return ws.convert(doc, kind, f"{source}:$" if source else "$")


def guess_kind(data: Any) -> DocumentKind:
    """The document kind suggested by a decoded document's top-level keys."""
    if not isinstance(data, dict):
        raise ParseError("a document must be a JSON object", "$")
    if "rule" in data and "conclusion" in data:
        return DocumentKind.TREE
    if "steps" in data:
        return DocumentKind.DERIVATION
    if "antecedent" in data:
        return DocumentKind.SEQUENT
    if "rules" in data or "nonterminals" in data:
        return DocumentKind.GRAMMAR
    if "lexicon" in data:
        return DocumentKind.LEXGRAMMAR
    if "type" in data:
        return DocumentKind.TYPE
    if "nodes" in data or "edges" in data:
        return DocumentKind.HYPERGRAPH
    return DocumentKind.ALPHABET


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


def load(
    path: Union[str, Path],
    kind: Optional[DocumentKind] = None,
    workspace: Optional[Workspace] = None,
) -> Any:
    """Read, validate and convert one document; the kind is guessed when omitted."""
    data = read_json(path)
    kind = DocumentKind(kind) if kind is not None else guess_kind(data)
    logger.debug("loading %s as %s", path, kind.value)
    return parse(data, kind, workspace, str(path))


def save(obj: Any, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(dump(obj), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
