"""Application configuration loaded from environment variables."""

import os
from functools import lru_cache

from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Settings loaded from the environment (and an optional .env file)."""

    def __init__(self):
        self.state_cap: int = int(os.getenv("HYPERLAM_STATE_CAP", "200000"))
        self.star_cap: int = int(os.getenv("HYPERLAM_STAR_CAP", "4"))
        self.max_steps: int = int(os.getenv("HYPERLAM_MAX_STEPS", "12"))
        self.log_level: str = os.getenv("HYPERLAM_LOG_LEVEL", "WARNING").upper()
        self.database_url: str = os.getenv(
            "HYPERLAM_DATABASE_URL", "sqlite+aiosqlite:///./hyperlam.db"
        )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
