"""
Configuration settings for the Eisenstein verification engine
"""

from functools import lru_cache
from typing import List

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.models.data_models import LinalgMode


class LinalgSettings(BaseSettings):
    """Linear algebra configuration"""
    mode: LinalgMode = Field(default=LinalgMode.EXACT)
    num_primes: int = Field(default=2)
    prime_bound: int = Field(default=1 << 20)
    seed: int = Field(default=1729)
    # rows x columns above which exact rank falls back to certified specialization
    exact_entry_budget: int = Field(default=400_000)

    model_config = SettingsConfigDict(env_prefix="EISV_LINALG_")


class GeometrySettings(BaseSettings):
    """Finite-field geometry configuration"""
    cache_dir: str = Field(default=".eisv_cache")
    budget: int = Field(default=50_000_000)
    q_values: List[int] = Field(default_factory=lambda: [2, 3])
    use_cache: bool = Field(default=True)

    model_config = SettingsConfigDict(env_prefix="EISV_GEOM_")


class VerifySettings(BaseSettings):
    """Quotient verification configuration"""
    window: int = Field(default=2)
    box_radius: int = Field(default=3)
    max_depth: int = Field(default=9)
    max_rows: int = Field(default=60_000)

    model_config = SettingsConfigDict(env_prefix="EISV_VERIFY_")


class Settings(BaseSettings):
    """Main application settings"""
    log_level: str = Field(default="INFO")
    config_dir: str = Field(default="config")

    linalg: LinalgSettings = Field(default_factory=LinalgSettings)
    geometry: GeometrySettings = Field(default_factory=GeometrySettings)
    verify: VerifySettings = Field(default_factory=VerifySettings)

    model_config = SettingsConfigDict(
        env_prefix="EISV_", env_file=".env", case_sensitive=False, extra="ignore"
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
