"""Independent verification of derivation trees.

Every node is rebuilt from its premises and instantiation data and compared
with its conclusion up to isomorphism. The checker shares no code path with
the search beyond replacement and canonical forms.
"""

from __future__ import annotations

import logging
from typing import Callable, Optional

from hyperlam.exceptions import HyperlamError
from hyperlam.models.sequent import DerivationTree, Rule
from hyperlam.models.types import Bang, Div, Mul, Star
from hyperlam.services.canonical import same_shape
from hyperlam.services.replacement import (
    disjoint_union,
    handle_filled,
    relabel,
    replace,
    replace_many,
)
from hyperlam.services.templates import t_iterate

logger = logging.getLogger(__name__)

_RULES_BY_CALCULUS = {
    "hl": {Rule.AXIOM, Rule.DIV_LEFT, Rule.DIV_RIGHT, Rule.MUL_LEFT, Rule.MUL_RIGHT, Rule.CUT},
}
_RULES_BY_CALCULUS["hmel0"] = _RULES_BY_CALCULUS["hl"] | {
    Rule.BANG_LEFT,
    Rule.BANG_RIGHT,
    Rule.WEAKEN,
    Rule.CONTRACT,
}
_RULES_BY_CALCULUS["hl-star"] = _RULES_BY_CALCULUS["hl"] | {
    Rule.STAR_LEFT,
    Rule.STAR_RIGHT_BOUNDED,
}


class _Reject(Exception):
    pass


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _Reject(message)


def _premise_count(node: DerivationTree, count: int) -> None:
    _require(
        len(node.premises) == count,
        f"{node.rule.symbol} needs {count} premises, has {len(node.premises)}",
    )


def _same_succedent(node: DerivationTree) -> None:
    _require(
        node.premises[0].conclusion.succedent == node.conclusion.succedent,
        "succedent changed across a left rule",
    )


def _check_axiom(node: DerivationTree) -> None:
    _premise_count(node, 0)
    conclusion = node.conclusion
    _require(
        same_shape(conclusion.antecedent, handle_filled(conclusion.succedent)),
        "axiom antecedent is not the handle of its succedent",
    )


def _check_div_right(node: DerivationTree) -> None:
    _premise_count(node, 1)
    succedent = node.conclusion.succedent
    _require(isinstance(succedent, Div), "(→÷) needs a division succedent")
    premise = node.premises[0].conclusion
    rebuilt = replace(succedent.denominator, succedent.dollar, node.conclusion.antecedent)
    _require(premise.succedent == succedent.numerator, "premise succedent is not the numerator")
    _require(same_shape(premise.antecedent, rebuilt), "premise is not D[$/H]")


def _check_mul_left(node: DerivationTree) -> None:
    _premise_count(node, 1)
    _same_succedent(node)
    edge_id = node.data["edge"]
    label = node.conclusion.antecedent.label_of(edge_id)
    _require(isinstance(label, Mul), f"edge {edge_id} is not a product")
    rebuilt = replace(node.conclusion.antecedent, edge_id, label.body)
    _require(
        same_shape(node.premises[0].conclusion.antecedent, rebuilt),
        "premise is not the unfolded product",
    )


def _check_mul_right(node: DerivationTree) -> None:
    succedent = node.conclusion.succedent
    _require(isinstance(succedent, Mul), "(→×) needs a product succedent")
    body = succedent.body
    _premise_count(node, len(body.edges))
    fillers = {}
    for edge, premise in zip(body.edges, node.premises):
        _require(premise.conclusion.succedent == edge.label, "premise succedent mismatch")
        fillers[edge.id] = premise.conclusion.antecedent
    _require(
        same_shape(replace_many(body, fillers), node.conclusion.antecedent),
        "antecedent is not M[m_i/H_i]",
    )


def _check_div_left(node: DerivationTree) -> None:
    div = node.data["type"]
    _require(isinstance(div, Div), "(÷→) needs a division type")
    parts = div.parts
    _premise_count(node, 1 + len(parts))
    first = node.premises[0].conclusion
    _same_succedent(node)
    edge_id = node.data["edge"]
    _require(first.antecedent.label_of(edge_id) == div.numerator, "hole is not the numerator")
    fillers = {}
    for d, premise in zip(parts, node.premises[1:]):
        _require(
            premise.conclusion.succedent == div.denominator.label_of(d),
            "piece succedent mismatch",
        )
        fillers[d] = premise.conclusion.antecedent
    filled = replace_many(relabel(div.denominator, {div.dollar: div}), fillers)
    rebuilt = replace(first.antecedent, edge_id, filled)
    _require(
        same_shape(rebuilt, node.conclusion.antecedent),
        "antecedent is not H[e/D[$/(N÷D)•, d_i/H_i]]",
    )


def _check_bang_left(node: DerivationTree) -> None:
    _premise_count(node, 1)
    _same_succedent(node)
    premise = node.premises[0].conclusion
    edge_id = node.data["edge"]
    inner = premise.antecedent.label_of(edge_id)
    rebuilt = premise.antecedent.with_label(edge_id, Bang(inner))
    _require(same_shape(rebuilt, node.conclusion.antecedent), "conclusion is not the !-ed premise")


def _check_bang_right(node: DerivationTree) -> None:
    _premise_count(node, 1)
    conclusion = node.conclusion
    _require(isinstance(conclusion.succedent, Bang), "(→!) needs a !-succedent")
    antecedent = conclusion.antecedent
    _require(
        not antecedent.nodes and all(isinstance(e.label, Bang) for e in antecedent.edges),
        "(→!) antecedent must consist of !-edges only",
    )
    premise = node.premises[0].conclusion
    _require(premise.succedent == conclusion.succedent.inner, "premise succedent mismatch")
    _require(same_shape(premise.antecedent, antecedent), "antecedent changed")


def _check_weaken(node: DerivationTree) -> None:
    _premise_count(node, 1)
    _same_succedent(node)
    label = node.data["type"]
    _require(isinstance(label, Bang), "only !-types can be weakened")
    rebuilt = disjoint_union(node.premises[0].conclusion.antecedent, handle_filled(label))
    _require(same_shape(rebuilt, node.conclusion.antecedent), "conclusion is not premise + (!A)•")


def _check_contract(node: DerivationTree) -> None:
    _premise_count(node, 1)
    _same_succedent(node)
    label = node.data["type"]
    _require(isinstance(label, Bang), "only !-types can be contracted")
    conclusion = node.conclusion.antecedent
    _require(any(e.label == label for e in conclusion.edges), "conclusion lacks the !-edge")
    rebuilt = disjoint_union(conclusion, handle_filled(label))
    _require(
        same_shape(node.premises[0].conclusion.antecedent, rebuilt),
        "premise is not conclusion + (!A)•",
    )


def _check_cut(node: DerivationTree) -> None:
    _premise_count(node, 2)
    left, right = (p.conclusion for p in node.premises)
    edge_id = node.data["edge"]
    _require(right.antecedent.label_of(edge_id) == left.succedent, "cut edge mismatch")
    _require(right.succedent == node.conclusion.succedent, "succedent mismatch")
    rebuilt = replace(right.antecedent, edge_id, left.antecedent)
    _require(same_shape(rebuilt, node.conclusion.antecedent), "conclusion is not G[e/H]")


def _check_star_left(node: DerivationTree) -> None:
    _premise_count(node, 1)
    _same_succedent(node)
    edge_id, n = node.data["edge"], node.data["n"]
    label = node.conclusion.antecedent.label_of(edge_id)
    _require(isinstance(label, Star), f"edge {edge_id} is not a star")
    rebuilt = replace(node.conclusion.antecedent, edge_id, t_iterate(label.template, label.inner, n))
    _require(
        same_shape(rebuilt, node.premises[0].conclusion.antecedent),
        "premise is not the n-fold unfolding",
    )


def _check_star_right(node: DerivationTree) -> None:
    succedent = node.conclusion.succedent
    _require(isinstance(succedent, Star), "(→*) needs a star succedent")
    n = node.data["n"]
    _premise_count(node, n + 1)
    for i, premise in enumerate(node.premises):
        goal = Mul(t_iterate(succedent.template, succedent.inner, i))
        _require(premise.conclusion.succedent == goal, f"premise {i} is not × of T^{i}")
        _require(
            same_shape(premise.conclusion.antecedent, node.conclusion.antecedent),
            "antecedent changed",
        )


_CHECKS: dict[Rule, Callable[[DerivationTree], None]] = {
    Rule.AXIOM: _check_axiom,
    Rule.DIV_RIGHT: _check_div_right,
    Rule.DIV_LEFT: _check_div_left,
    Rule.MUL_LEFT: _check_mul_left,
    Rule.MUL_RIGHT: _check_mul_right,
    Rule.BANG_LEFT: _check_bang_left,
    Rule.BANG_RIGHT: _check_bang_right,
    Rule.WEAKEN: _check_weaken,
    Rule.CONTRACT: _check_contract,
    Rule.CUT: _check_cut,
    Rule.STAR_LEFT: _check_star_left,
    Rule.STAR_RIGHT_BOUNDED: _check_star_right,
}


def tree_problems(tree: DerivationTree, calculus: Optional[str] = None) -> list[str]:
    """Every node that is not a legal rule instance, as readable messages."""
    allowed = _RULES_BY_CALCULUS.get(str(getattr(calculus, "value", calculus))) if calculus else None
    problems = []
    for depth, node in _walk(tree, 0):
        where = f"depth {depth} {node.rule.symbol}"
        if allowed is not None and node.rule not in allowed:
            problems.append(f"{where}: rule not available in {calculus}")
            continue
        try:
            _CHECKS[node.rule](node)
        except _Reject as exc:
            problems.append(f"{where}: {exc}")
        except (HyperlamError, KeyError, TypeError) as exc:
            problems.append(f"{where}: bad instantiation ({exc.__class__.__name__}: {exc})")
    if problems:
        logger.debug("tree rejected: %s", problems[0])
    return problems


def check_tree(tree: DerivationTree, calculus: Optional[str] = None) -> bool:
    """True when every node re-validates as an instance of its rule."""
    return not tree_problems(tree, calculus)


def _walk(tree: DerivationTree, depth: int):
    yield depth, tree
    for premise in tree.premises:
        yield from _walk(premise, depth + 1)
