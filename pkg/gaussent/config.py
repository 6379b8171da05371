from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="GAUSSENT_", env_file=".env", extra="ignore")

    log_level: str = "WARNING"

    # Gaussian-roof optimizer (sharing)
    seed: int = 0
    roof_grid_points: int = 16
    roof_restarts: int = 8
    roof_agreement: float = 1e-4

    # Teleportation bias search
    fidelity_scan_points: int = 64
    golden_tolerance: float = 1e-8

    # HTTP service
    cors_origins: str = "*"
    host: str = "127.0.0.1"
    port: int = 8000


@lru_cache
def get_settings() -> Settings:
    return Settings()
