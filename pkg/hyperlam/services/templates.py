"""Templates, monoidality and T-iteration for the conjunctive Kleene star."""

from __future__ import annotations

from hyperlam.exceptions import ArityMismatch, InvalidType
from hyperlam.models.hypergraph import Edge, Hypergraph, RankedLabel
from hyperlam.models.types import Slot, Template, TypeExpr
from hyperlam.services.canonical import same_shape
from hyperlam.services.replacement import handle_filled, replace_many


def is_template(template: Template) -> bool:
    """Two placeholder edges, numbered 1 and 2, both of the body's rank; unit of that rank."""
    edges = template.body.edges
    if len(edges) != 2 or not all(isinstance(e.label, Slot) for e in edges):
        return False
    if sorted(e.label.index for e in edges) != [1, 2]:
        return False
    k = template.body.rank
    return all(e.rank == k for e in edges) and template.unit.rank == k


def make_template(body: Hypergraph, unit: Hypergraph) -> Template:
    template = Template(body, unit)
    if not is_template(template):
        raise InvalidType("a template needs two placeholder edges of its own rank and a unit of that rank")
    return template


def instantiate(template: Template, first: Hypergraph, second: Hypergraph) -> Hypergraph:
    """T(H1, H2) = T[1/H1, 2/H2]."""
    one, two = template.slots
    return replace_many(template.body, {one: first, two: second})


def is_monoidal(template: Template) -> bool:
    """Associativity and both unit laws, checked on three distinctly labeled handles.

    Handles with fresh labels are generic: an isomorphism of the instantiated
    graphs must send each handle's edge to itself, so the laws for handles imply
    the laws for arbitrary fillers.
    """
    if not is_template(template):
        return False
    k = template.rank
    a, b, c = (handle_filled(RankedLabel(name, k)) for name in ("x", "y", "z"))
    left = instantiate(template, instantiate(template, a, b), c)
    right = instantiate(template, a, instantiate(template, b, c))
    if not same_shape(left, right):
        return False
    unit = template.unit
    return same_shape(instantiate(template, unit, a), a) and same_shape(
        instantiate(template, a, unit), a
    )


def t_iterate(template: Template, inner: TypeExpr, n: int) -> Hypergraph:
    """T^0(A) = U_T and T^(n+1)(A) = T(T^n(A), A•)."""
    if n < 0:
        raise ArityMismatch(f"iteration count must be >= 0, got {n}")
    if inner.rank != template.rank:
        raise InvalidType(
            f"cannot iterate a rank-{inner.rank} type over a rank-{template.rank} template"
        )
    result = template.unit
    handle = handle_filled(inner)
    for _ in range(n):
        result = instantiate(template, result, handle)
    return result


def o_template() -> Template:
    """O: two floating rank-0 placeholders, unit D_0. O(H, G) = H + G."""
    body = Hypergraph((), (Edge(1, Slot(1, 0), ()), Edge(2, Slot(2, 0), ())), ())
    return Template(body, Hypergraph())


def str_template() -> Template:
    """Str: a path of two rank-2 placeholders from (1) to (2); the unit is one node."""
    body = Hypergraph(
        (0, 1, 2),
        (Edge(1, Slot(1, 2), (0, 1)), Edge(2, Slot(2, 2), (1, 2))),
        (0, 2),
    )
    return Template(body, Hypergraph((0,), (), (0, 0)))
