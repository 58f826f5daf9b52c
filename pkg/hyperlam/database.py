"""The SQLite store behind the verdict cache.

Each command run opens its own engine on the configured URL (or an explicit
one) and disposes of it afterwards, so nothing async outlives one event loop.
"""

from contextlib import asynccontextmanager
from typing import AsyncIterator, Optional

from sqlalchemy.ext.asyncio import (
    AsyncEngine,
    AsyncSession,
    async_sessionmaker,
    create_async_engine,
)
from sqlalchemy.orm import DeclarativeBase

from hyperlam.config import get_settings


class Base(DeclarativeBase):
    """Base class for all ORM models."""

    pass


def cache_engine(url: Optional[str] = None) -> AsyncEngine:
    return create_async_engine(url or get_settings().database_url, echo=False)


async def create_tables(engine: AsyncEngine) -> None:
    """Create the cache tables if they do not exist."""
    # registers CachedVerdict on Base.metadata
    from hyperlam.models import verdict  # noqa: F401

    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)


async def init_db(url: Optional[str] = None) -> None:
    engine = cache_engine(url)
    try:
        await create_tables(engine)
    finally:
        await engine.dispose()


@asynccontextmanager
async def cache_session(url: Optional[str] = None) -> AsyncIterator[AsyncSession]:
    """A session on the verdict cache; the tables exist once it is open."""
    engine = cache_engine(url)
    try:
        await create_tables(engine)
        sessions = async_sessionmaker(engine, class_=AsyncSession, expire_on_commit=False)
        async with sessions() as session:
            yield session
    finally:
        await engine.dispose()
