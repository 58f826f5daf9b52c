"""Cached definitive verdicts."""

from datetime import datetime
from typing import Optional

from sqlalchemy import DateTime, String, Text, UniqueConstraint
from sqlalchemy.orm import Mapped, mapped_column

from hyperlam.database import Base


class CachedVerdict(Base):
    """A FOUND / NOT_DERIVABLE / NOT_MEMBER verdict for one query.

    `query_key` is a digest of the canonical key of what was asked (a sequent,
    or a lexicon and a graph); `kind` says which command asked it.
    """

    __tablename__ = "cached_verdicts"

    __table_args__ = (UniqueConstraint("kind", "query_key", name="uq_kind_query"),)

    id: Mapped[int] = mapped_column(primary_key=True)
    kind: Mapped[str] = mapped_column(String(16), index=True)
    query_key: Mapped[str] = mapped_column(String(64), index=True)
    verdict: Mapped[str] = mapped_column(String(16))

    # witness document, FOUND only
    witness: Mapped[Optional[str]] = mapped_column(Text, nullable=True)

    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)
