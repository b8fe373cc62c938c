"""Settings management for the movement assessment toolkit.

Optional environment variables:
- MAP_THREADS: cap on worker threads used for per-component GP fits
- MAP_VARIANCE_FLOOR: lower bound on the classifier's per-feature standard deviation
- MAP_LOG_LEVEL: logging level name
- MAP_GOAL_TOLERANCE: allowed distance (m) between the final sample and the goal pose
"""

import os
from functools import lru_cache

import psutil
from pydantic import BaseModel, ConfigDict, Field, field_validator


def _default_threads() -> int:
    return max(1, psutil.cpu_count(logical=False) or os.cpu_count() or 1)


class Settings(BaseModel):

    map_threads: int = Field(default_factory=lambda: int(os.getenv('MAP_THREADS') or _default_threads()))
    variance_floor: float = Field(default_factory=lambda: float(os.getenv('MAP_VARIANCE_FLOOR', '1e-4')))
    log_level: str = Field(default_factory=lambda: os.getenv('MAP_LOG_LEVEL', 'INFO'))
    goal_tolerance: float = Field(default_factory=lambda: float(os.getenv('MAP_GOAL_TOLERANCE', '1e-3')))

    model_config = ConfigDict(case_sensitive=True, extra='ignore', validate_default=True)

    @field_validator('map_threads')
    @classmethod
    def _at_least_one(cls, v: int) -> int:
        return max(1, v)

    @field_validator('variance_floor')
    @classmethod
    def _positive_floor(cls, v: float) -> float:
        if v <= 0:
            raise ValueError('variance floor must be positive')
        return v


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance.

    Returns
        Settings instance with validated configuration
    """
    return Settings()
