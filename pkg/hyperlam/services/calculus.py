"""Operations on types and sequents: ranks, validation, equality, the
invertible rules and the decomposition enumerators behind (÷→) and (→×)."""

from __future__ import annotations

from typing import Iterator, Mapping, Optional, Sequence

from hyperlam.exceptions import InvalidType, RankMismatch, UnknownEdge
from hyperlam.models.hypergraph import Dollar, Edge, Hypergraph
from hyperlam.models.sequent import Sequent
from hyperlam.models.types import Bang, Div, Mul, Prim, Star, TypeExpr, graph_balance
from hyperlam.services.decomposition import Decomposition, PieceGuard, split
from hyperlam.services.replacement import replace
from hyperlam.services.templates import is_monoidal, is_template


def rank_of(t: TypeExpr) -> int:
    return t.rank


def subtypes(t: TypeExpr) -> Iterator[TypeExpr]:
    """Every type occurring in `t`, including `t` itself."""
    yield t
    if isinstance(t, Div):
        yield from subtypes(t.numerator)
        for e in t.parts:
            yield from subtypes(t.denominator.label_of(e))
    elif isinstance(t, Mul):
        for edge in t.body.edges:
            yield from subtypes(edge.label)
    elif isinstance(t, Bang):
        yield from subtypes(t.inner)
    elif isinstance(t, Star):
        yield from subtypes(t.inner)
        for edge in t.template.unit.edges:
            yield from subtypes(edge.label)


def validate_type(t: TypeExpr) -> list[str]:
    """Problems found in `t`; empty when it is well formed."""
    problems: list[str] = []
    for sub in subtypes(t):
        if isinstance(sub, Star):
            if not is_template(sub.template):
                problems.append(f"star over {sub.inner} uses a malformed template")
            elif not is_monoidal(sub.template):
                problems.append(f"star over {sub.inner} uses a template that is not monoidal")
            if any(not isinstance(e.label, TypeExpr) for e in sub.template.unit.edges):
                problems.append("template unit must be labeled by types")
        elif isinstance(sub, Bang) and sub.inner.rank != 0:
            problems.append(f"! over a rank-{sub.inner.rank} type")
        elif isinstance(sub, Prim) and sub.name.startswith("$"):
            problems.append(f"primitive {sub.name!r} uses the reserved $ prefix")
    return problems


def type_equal(first: TypeExpr, second: TypeExpr) -> bool:
    """Structural equality with embedded hypergraphs compared up to isomorphism."""
    return first.key == second.key


def sequent_types(sequent: Sequent) -> Iterator[TypeExpr]:
    for edge in sequent.antecedent.edges:
        yield from subtypes(edge.label)
    yield from subtypes(sequent.succedent)


def invert_product(sequent: Sequent, edge_id: Optional[int] = None) -> Sequent:
    """H[e/(×(M))•] → A  becomes  H[e/M] → A."""
    antecedent = sequent.antecedent
    if edge_id is None:
        candidates = [e.id for e in antecedent.edges if isinstance(e.label, Mul)]
        if not candidates:
            raise InvalidType("antecedent has no product edge")
        edge_id = candidates[0]
    label = antecedent.label_of(edge_id)
    if not isinstance(label, Mul):
        raise InvalidType(f"edge {edge_id} is labeled {label}, not a product")
    return Sequent(replace(antecedent, edge_id, label.body), sequent.succedent)


def invert_rdiv(sequent: Sequent) -> Sequent:
    """H → N÷D  becomes  D[$/H] → N."""
    succedent = sequent.succedent
    if not isinstance(succedent, Div):
        raise InvalidType(f"succedent {succedent} is not a division")
    antecedent = replace(succedent.denominator, succedent.dollar, sequent.antecedent)
    return Sequent(antecedent, succedent.numerator)


def balance_guard(labels: Mapping[int, TypeExpr]) -> Optional[PieceGuard]:
    """Guard requiring each piece to carry the primitive balance of its target type.

    None when a target or a piece label carries ! or *, where balance says nothing.
    """
    if any(label.balance is None for label in labels.values()):
        return None
    targets = {edge_id: label.balance for edge_id, label in labels.items()}

    def guard(edge_id: int, edges: Sequence[Edge]) -> bool:
        total = _edges_balance(edges)
        return total is None or total == targets[edge_id]

    return guard


def _edges_balance(edges: Sequence[Edge]) -> Optional[dict[str, int]]:
    total: dict[str, int] = {}
    for edge in edges:
        part = edge.label.balance
        if part is None:
            return None
        for key, count in part.items():
            value = total.get(key, 0) + count
            if value:
                total[key] = value
            else:
                total.pop(key, None)
    return total


def match_divisor(
    antecedent: Hypergraph, edge_id: int, *, balanced: bool = True
) -> list[Decomposition]:
    """All readings of the antecedent as H[e/D[e$/(N÷D)•, d_i/H_i]] around edge f.

    The context's new edge is labeled N; pieces are keyed by denominator edge id.
    With `balanced`, pieces whose primitive balance differs from their target
    type are skipped (such a premise H_i → lab(d_i) is never derivable).
    """
    label = antecedent.label_of(edge_id)
    if not isinstance(label, Div):
        raise InvalidType(f"edge {edge_id} is labeled {label}, not a division")
    guard = None
    if balanced:
        guard = balance_guard({d: label.denominator.label_of(d) for d in label.parts})
    return split(
        antecedent,
        label.denominator,
        holes=label.parts,
        pinned={label.dollar: edge_id},
        embedded=True,
        hole_label=label.numerator,
        piece_guard=guard,
    )


def match_product(
    antecedent: Hypergraph, body: Hypergraph, *, balanced: bool = True
) -> list[Decomposition]:
    """All readings of the antecedent as M[m_1/H_1, ..., m_l/H_l]."""
    if antecedent.rank != body.rank:
        raise RankMismatch(
            f"antecedent of rank {antecedent.rank} cannot fill a body of rank {body.rank}"
        )
    if any(isinstance(e.label, Dollar) for e in body.edges):
        raise UnknownEdge("a product body cannot carry a $ edge")
    guard = None
    if balanced:
        guard = balance_guard({e.id: e.label for e in body.edges})
    return split(
        antecedent,
        body,
        holes=[e.id for e in body.edges],
        embedded=False,
        piece_guard=guard,
    )


def sequent_balanced(sequent: Sequent) -> Optional[bool]:
    """Whether antecedent and succedent carry the same primitive balance.

    None when ! or * occurs and balance is not preserved by the rules.
    """
    left = graph_balance(sequent.antecedent)
    right = sequent.succedent.balance
    if left is None or right is None:
        return None
    return left == right
