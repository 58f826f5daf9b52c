"""The persistent verdict cache: maintenance commands and the lookups used by prove/member."""

import json
import logging
from typing import Any, Optional

import click

from hyperlam.commands.base import AppContext, HyperlamGroup, emit, pass_app, run_async
from hyperlam.database import cache_session, init_db
from hyperlam.services.outcome import Verdict
from hyperlam.services.verdict_cache import (
    CacheHit,
    invalidate_verdicts,
    lookup_verdict,
    query_key,
    store_verdict,
)

logger = logging.getLogger(__name__)


def document_key(*parts: Any) -> str:
    """Query key over JSON documents; edge ids matter since witnesses refer to them."""
    return query_key(*(json.dumps(p, sort_keys=True, ensure_ascii=False) for p in parts))


def recall(kind: str, key: str) -> Optional[CacheHit]:
    async def run():
        async with cache_session() as db:
            return await lookup_verdict(db, kind, key)

    hit = run_async(run)
    if hit is not None:
        logger.info("cache hit for %s %s", kind, key[:12])
    return hit


def remember(kind: str, key: str, verdict: Verdict, witness: Optional[dict] = None) -> bool:
    async def run():
        async with cache_session() as db:
            return await store_verdict(db, kind, key, verdict, witness)

    return run_async(run)


@click.group("cache", cls=HyperlamGroup)
def cache():
    """Manage the verdict cache."""


@cache.command("init")
@pass_app
def init(app: AppContext):
    """Create the cache tables."""
    run_async(init_db)
    emit({"initialized": True})


@cache.command("clear")
@click.option("--kind", type=click.Choice(["prove", "member"]), help="Only this kind of query.")
@pass_app
def clear(app: AppContext, kind: Optional[str]):
    """Drop cached verdicts."""

    async def run():
        async with cache_session() as db:
            return await invalidate_verdicts(db, kind)

    emit({"removed": run_async(run)})
