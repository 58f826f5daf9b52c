"""Agreement checks between DPO derivations and the grammars built from them.

`check_truncated` compares membership in L(LG_{c-1}) with L_c graph by graph over
every small terminal graph. `check_replay` walks the enumerated language of a
grammar and asks the exponential encoding to accept each graph.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from hyperlam.exceptions import ConfigError
from hyperlam.models.grammar import DpoGrammar
from hyperlam.models.hypergraph import Hypergraph, RankedLabel
from hyperlam.services.canonical import canonical
from hyperlam.services.dpo import enumerate_language, lc_member
from hyperlam.services.encodings import lg_c, lg_hmel, member_hl, member_hmel
from hyperlam.services.outcome import Verdict
from hyperlam.services.prover import SearchConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Discrepancy:
    """A graph on which the two sides disagree (or one side could not decide)."""

    graph: Hypergraph
    c: int
    expected: bool
    actual: Verdict


@dataclass
class CrosscheckReport:
    checked: int = 0
    members: int = 0
    unknown: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def summary(self) -> dict:
        return {
            "checked": self.checked,
            "members": self.members,
            "unknown": self.unknown,
            "discrepancies": len(self.discrepancies),
            "elapsed": round(self.elapsed, 3),
        }


def small_graphs(
    labels: Sequence[RankedLabel], max_nodes: int, max_edges: int
) -> Iterator[Hypergraph]:
    """Every zero-rank graph over `labels` within the bounds, one per isomorphism class."""
    if max_nodes < 0 or max_edges < 0:
        raise ConfigError("graph bounds must be >= 0")
    seen = set()
    for n in range(max_nodes + 1):
        slots = [
            (label, att)
            for label in sorted(labels)
            for att in itertools.product(range(n), repeat=label.rank)
        ]
        for m in range(max_edges + 1):
            for chosen in itertools.combinations_with_replacement(slots, m):
                graph = Hypergraph.build(
                    range(n), ((i, label, att) for i, (label, att) in enumerate(chosen))
                )
                key = canonical(graph)
                if key in seen:
                    continue
                seen.add(key)
                yield graph


def check_truncated(
    grammar: DpoGrammar,
    cs: Iterable[int],
    max_nodes: int,
    max_edges: int,
    config: Optional[SearchConfig] = None,
    state_cap: Optional[int] = None,
) -> CrosscheckReport:
    """member_hl(LG_{c-1}, H) against lc_member(H, c) for each c and each small graph.

    Raises:
        ConfigError: for c < 1, or a start symbol of nonzero rank.
    """
    cs = sorted(set(cs))
    if not cs or cs[0] < 1:
        raise ConfigError("the truncated check needs c >= 1")
    if grammar.start.rank != 0:
        raise ConfigError("only zero-rank start symbols are supported")
    started = time.perf_counter()
    report = CrosscheckReport()
    graphs = list(small_graphs(grammar.terminals, max_nodes, max_edges))
    for c in cs:
        lexicon = lg_c(grammar, c - 1)
        for graph in graphs:
            expected = lc_member(grammar, graph, c, state_cap=state_cap) is not None
            outcome = member_hl(lexicon, graph, config)
            report.checked += 1
            report.members += expected
            if outcome.is_unknown:
                report.unknown += 1
            if outcome.is_found != expected:
                logger.warning("disagreement at c=%d on %r", c, graph)
                report.discrepancies.append(Discrepancy(graph, c, expected, outcome.verdict))
    report.elapsed = time.perf_counter() - started
    logger.info("truncated check: %s", report.summary())
    return report


def check_replay(
    grammar: DpoGrammar,
    max_steps: int,
    max_nodes: int,
    max_edges: int,
    config: Optional[SearchConfig] = None,
    state_cap: Optional[int] = None,
) -> CrosscheckReport:
    """Every enumerated graph must be accepted by the exponential encoding."""
    started = time.perf_counter()
    report = CrosscheckReport()
    lexicon = lg_hmel(grammar)
    language = enumerate_language(grammar, max_steps, max_nodes, max_edges, state_cap=state_cap)
    for entry in language.values():
        outcome = member_hmel(lexicon, entry.graph, grammar, config, max_steps)
        report.checked += 1
        report.members += 1
        if not outcome.is_found:
            report.unknown += outcome.is_unknown
            report.discrepancies.append(Discrepancy(entry.graph, 0, True, outcome.verdict))
    report.elapsed = time.perf_counter() - started
    logger.info("replay check: %s", report.summary())
    return report
