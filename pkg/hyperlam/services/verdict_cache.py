"""Persistent cache of definitive verdicts.

UNKNOWN results depend on the budgets of the run that produced them and are
never stored.
"""

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Optional

from sqlalchemy import delete, select
from sqlalchemy.ext.asyncio import AsyncSession

from hyperlam.models.verdict import CachedVerdict
from hyperlam.services.outcome import Verdict


@dataclass(frozen=True)
class CacheHit:
    verdict: Verdict
    witness: Optional[dict[str, Any]]


def query_key(*parts: str) -> str:
    """Digest of the canonical keys that identify a query."""
    digest = hashlib.sha256()
    for part in parts:
        digest.update(part.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


async def lookup_verdict(db: AsyncSession, kind: str, key: str) -> Optional[CacheHit]:
    result = await db.execute(
        select(CachedVerdict).where(CachedVerdict.kind == kind, CachedVerdict.query_key == key)
    )
    row = result.scalar_one_or_none()
    if row is None:
        return None
    witness = json.loads(row.witness) if row.witness else None
    return CacheHit(Verdict(row.verdict), witness)


async def store_verdict(
    db: AsyncSession,
    kind: str,
    key: str,
    verdict: Verdict,
    witness: Optional[dict[str, Any]] = None,
) -> bool:
    """Store a definitive verdict, replacing any earlier one. Returns False for UNKNOWN."""
    if not verdict.definitive:
        return False
    await db.execute(
        delete(CachedVerdict).where(CachedVerdict.kind == kind, CachedVerdict.query_key == key)
    )
    db.add(
        CachedVerdict(
            kind=kind,
            query_key=key,
            verdict=verdict.value,
            witness=json.dumps(witness, sort_keys=True) if witness is not None else None,
        )
    )
    await db.commit()
    return True


async def invalidate_verdicts(db: AsyncSession, kind: Optional[str] = None) -> int:
    """Drop cached verdicts, all of them or those of one kind. Returns how many."""
    statement = delete(CachedVerdict)
    if kind is not None:
        statement = statement.where(CachedVerdict.kind == kind)
    result = await db.execute(statement)
    await db.commit()
    return result.rowcount or 0
