"""Shared plumbing for the command line: context, output, exit codes and options."""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Awaitable, Callable, Optional, TypeVar

import click

from hyperlam.exceptions import BudgetExceeded, InputError
from hyperlam.models.grammar import DpoGrammar
from hyperlam.services.dot import to_dot
from hyperlam.services.dpo import normalize
from hyperlam.services.outcome import Outcome, Verdict
from hyperlam.services.prover import SearchConfig
from hyperlam.services.workspace import DocumentKind, Workspace, dump, load

logger = logging.getLogger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3


@dataclass
class AppContext:
    """What every command needs: the label registry and the global budgets."""

    workspace: Workspace = field(default_factory=Workspace)
    state_cap: Optional[int] = None

    def load(self, path: str, kind: DocumentKind) -> Any:
        return load(path, kind, self.workspace)

    def grammar(self, path: str, normalized: bool = False) -> DpoGrammar:
        grammar = self.load(path, DocumentKind.GRAMMAR)
        if normalized and not grammar.proxies:
            logger.info("normalizing %s", path)
            grammar = normalize(grammar)
        return grammar


pass_app = click.make_pass_decorator(AppContext, ensure=True)


def emit(payload: dict[str, Any], code: int = EXIT_OK) -> None:
    """Write the one JSON result object and leave with `code`."""
    click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    click.get_current_context().exit(code)


def fail(message: str, code: int) -> None:
    click.echo(message, err=True)
    verdict = Verdict.UNKNOWN.value if code == EXIT_UNKNOWN else None
    payload = {"error": message} if verdict is None else {"verdict": verdict, "diagnostics": message}
    emit(payload, code)


class HyperlamGroup(click.Group):
    """A group mapping library errors onto exit codes: input 3, budget 2."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as exc:
            exc.exit_code = EXIT_INPUT
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_INPUT
            raise
        except InputError as exc:
            fail(f"{type(exc).__name__}: {exc}", EXIT_INPUT)
        except BudgetExceeded as exc:
            fail(str(exc), EXIT_UNKNOWN)


def outcome_payload(outcome: Outcome, witness: Optional[dict] = None) -> dict[str, Any]:
    payload: dict[str, Any] = {"verdict": outcome.verdict.value, "stats": outcome.stats}
    if outcome.diagnostics:
        payload["diagnostics"] = outcome.diagnostics
    if witness is not None:
        payload["witness"] = witness
    return payload


def write_artifacts(obj: Any, emit_witness: Optional[str], emit_dot: Optional[str]) -> None:
    if emit_witness:
        Path(emit_witness).write_text(
            json.dumps(dump(obj), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    if emit_dot:
        Path(emit_dot).write_text(to_dot(getattr(obj, "tree", obj)), encoding="utf-8")


def artifact_options(func: Callable) -> Callable:
    func = click.option(
        "--emit-dot", type=click.Path(dir_okay=False), help="Write the witness as DOT."
    )(func)
    return click.option(
        "--emit-witness", type=click.Path(dir_okay=False), help="Write the witness as JSON."
    )(func)


def search_options(func: Callable) -> Callable:
    """Budgets of HMEL₀ and star search."""
    options = [
        click.option("--max-depth", type=int, help="Longest branch explored."),
        click.option("--bang-copies", "max_bang_copies", type=int, help="Derelictions per !-type."),
        click.option("--star-cap", type=int, help="Largest star unfolding tried."),
        click.option(
            "--accept-bounded-omega",
            is_flag=True,
            help="Accept (→*) once every unfolding up to the star cap is derivable.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def search_config(app: AppContext, **budgets: Any) -> SearchConfig:
    return SearchConfig(
        max_depth=budgets.get("max_depth"),
        max_bang_copies=budgets.get("max_bang_copies"),
        star_cap=budgets.get("star_cap"),
        state_cap=app.state_cap,
        accept_bounded_omega=bool(budgets.get("accept_bounded_omega")),
    )


def run_async(factory: Callable[[], Awaitable[T]]) -> T:
    return asyncio.run(factory())


def positive(flag: bool) -> int:
    return EXIT_OK if flag else EXIT_NEGATIVE
