"""Types of the hypergraph Lambek calculus and its extensions.

A type is a primitive, a division N÷D, a product ×(M), an exponential !A or a
conjunctive star *_T A. Division and product embed hypergraphs labeled by types,
so type equality compares those hypergraphs up to isomorphism; every type has a
canonical `key` string which doubles as its label sort key.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from hyperlam.exceptions import InvalidType
from hyperlam.models.hypergraph import Dollar, Hypergraph

Balance = dict[str, int]


def _combine(total: Balance, part: Balance, sign: int = 1) -> Balance:
    result = dict(total)
    for key, count in part.items():
        value = result.get(key, 0) + sign * count
        if value:
            result[key] = value
        else:
            result.pop(key, None)
    return result


class TypeExpr:
    """Common behaviour of all type constructors."""

    @property
    def rank(self) -> int:
        raise NotImplementedError

    @cached_property
    def key(self) -> str:
        return self._compute_key()

    def _compute_key(self) -> str:
        raise NotImplementedError

    @property
    def sort_key(self) -> str:
        return self.key

    @cached_property
    def connectives(self) -> int:
        """Number of ×, ÷, ! and * occurrences."""
        return self._count_connectives()

    def _count_connectives(self) -> int:
        raise NotImplementedError

    @cached_property
    def balance(self) -> Optional[Balance]:
        """Signed primitive counts; None once ! or * occurs."""
        return self._compute_balance()

    def _compute_balance(self) -> Optional[Balance]:
        raise NotImplementedError

    @property
    def has_exponentials(self) -> bool:
        return self.balance is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TypeExpr):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "TypeExpr") -> bool:
        return self.key < other.key


def _graph_key(graph: Hypergraph) -> str:
    from hyperlam.services.canonical import canonical

    return canonical(graph).text


def _labels_balance(graph: Hypergraph) -> Optional[Balance]:
    total: Balance = {}
    for edge in graph.edges:
        if isinstance(edge.label, Dollar):
            continue
        part = edge.label.balance
        if part is None:
            return None
        total = _combine(total, part)
    return total


def _require_types(graph: Hypergraph, where: str, allow_dollar: bool = False) -> None:
    for edge in graph.edges:
        if isinstance(edge.label, TypeExpr):
            continue
        if allow_dollar and isinstance(edge.label, Dollar):
            continue
        raise InvalidType(f"{where}: edge {edge.id} is labeled {edge.label!r}, not a type")


@dataclass(frozen=True, eq=False)
class Prim(TypeExpr):
    """A primitive type."""

    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise InvalidType("primitive type needs a name")
        if self.arity < 0:
            raise InvalidType(f"primitive {self.name!r} has negative rank")

    @property
    def rank(self) -> int:
        return self.arity

    def _compute_key(self) -> str:
        return f"p:{self.name}/{self.arity}"

    def _count_connectives(self) -> int:
        return 0

    def _compute_balance(self) -> Optional[Balance]:
        return {self.key: 1}

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class Div(TypeExpr):
    """N ÷ D: D is a hypergraph with exactly one dollar edge."""

    numerator: TypeExpr
    denominator: Hypergraph
    dollar: int

    def __post_init__(self):
        dollars = [e for e in self.denominator.edges if isinstance(e.label, Dollar)]
        if len(dollars) != 1:
            raise InvalidType(f"denominator needs exactly one $ edge, found {len(dollars)}")
        if dollars[0].id != self.dollar:
            raise InvalidType(f"edge {self.dollar} is not the $ edge of the denominator")
        _require_types(self.denominator, "denominator", allow_dollar=True)
        if self.numerator.rank != self.denominator.rank:
            raise InvalidType(
                f"numerator rank {self.numerator.rank} differs from "
                f"denominator rank {self.denominator.rank}"
            )

    @property
    def rank(self) -> int:
        return self.denominator.edge(self.dollar).rank

    @property
    def parts(self) -> list[int]:
        """Non-dollar denominator edges in id order."""
        return [e.id for e in self.denominator.edges if e.id != self.dollar]

    def _compute_key(self) -> str:
        return f"d({self.numerator.key}|{_graph_key(self.denominator)})"

    def _count_connectives(self) -> int:
        return 1 + self.numerator.connectives + sum(
            self.denominator.label_of(e).connectives for e in self.parts
        )

    def _compute_balance(self) -> Optional[Balance]:
        inner = _labels_balance(self.denominator)
        if inner is None or self.numerator.balance is None:
            return None
        return _combine(self.numerator.balance, inner, -1)

    def __str__(self) -> str:
        return f"({self.numerator})÷D[{len(self.denominator.edges)}]"


@dataclass(frozen=True, eq=False)
class Mul(TypeExpr):
    """×(M)."""

    body: Hypergraph

    def __post_init__(self):
        _require_types(self.body, "product body")

    @property
    def rank(self) -> int:
        return self.body.rank

    def _compute_key(self) -> str:
        return f"x({_graph_key(self.body)})"

    def _count_connectives(self) -> int:
        return 1 + sum(e.label.connectives for e in self.body.edges)

    def _compute_balance(self) -> Optional[Balance]:
        return _labels_balance(self.body)

    def __str__(self) -> str:
        return f"×[{len(self.body.edges)}]"


@dataclass(frozen=True, eq=False)
class Bang(TypeExpr):
    """!A, only over rank-0 types."""

    inner: TypeExpr

    def __post_init__(self):
        if self.inner.rank != 0:
            raise InvalidType(f"! applies to rank-0 types only, got rank {self.inner.rank}")

    @property
    def rank(self) -> int:
        return 0

    def _compute_key(self) -> str:
        return f"!({self.inner.key})"

    def _count_connectives(self) -> int:
        return 1 + self.inner.connectives

    def _compute_balance(self) -> Optional[Balance]:
        return None

    def __str__(self) -> str:
        return f"!{self.inner}"


@dataclass(frozen=True)
class Slot:
    """Label of a template placeholder edge (1 or 2)."""

    index: int
    rank: int

    @property
    def sort_key(self) -> str:
        return f"@{self.index}:{self.rank}"

    def __str__(self) -> str:
        return f"@{self.index}"


@dataclass(frozen=True)
class Template:
    """A hypergraph with two placeholder edges of its own rank, plus a unit."""

    body: Hypergraph
    unit: Hypergraph

    @property
    def rank(self) -> int:
        return self.body.rank

    @property
    def slots(self) -> tuple[int, int]:
        """Ids of the first and second placeholder edges."""
        first, second = sorted(self.body.edges, key=lambda e: getattr(e.label, "index", 0))
        return first.id, second.id

    @cached_property
    def key(self) -> str:
        return f"t({_graph_key(self.body)}|{_graph_key(self.unit)})"


@dataclass(frozen=True, eq=False)
class Star(TypeExpr):
    """*_T A, the conjunctive Kleene star over a monoidal template."""

    template: Template
    inner: TypeExpr

    def __post_init__(self):
        if self.inner.rank != self.template.rank:
            raise InvalidType(
                f"star over a rank-{self.template.rank} template needs a type of that "
                f"rank, got {self.inner.rank}"
            )

    @property
    def rank(self) -> int:
        return self.inner.rank

    def _compute_key(self) -> str:
        return f"*({self.template.key}|{self.inner.key})"

    def _count_connectives(self) -> int:
        return 1 + self.inner.connectives

    def _compute_balance(self) -> Optional[Balance]:
        return None

    def __str__(self) -> str:
        return f"*{self.inner}"


def graph_balance(graph: Hypergraph) -> Optional[Balance]:
    """Summed balance of the labels of a type-labeled hypergraph."""
    return _labels_balance(graph)


def combine_balance(total: Balance, part: Balance, sign: int = 1) -> Balance:
    return _combine(total, part, sign)
