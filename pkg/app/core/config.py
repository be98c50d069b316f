"""
Configuration management for the surgery calculator.
Supports environment-specific configurations and validation.
"""

from pathlib import Path
from typing import List
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


PACKAGE_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Application settings with validation and environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="KNOTFLOER_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = Field(default="Knot Floer Surgery Calculator")
    app_version: str = Field(default="1.0.0")
    debug: bool = Field(default=False)
    environment: str = Field(default="development")

    # API Configuration
    api_host: str = Field(default="0.0.0.0")
    api_port: int = Field(default=8000)
    api_workers: int = Field(default=1)
    api_prefix: str = Field(default="/api/v1")

    # CORS Configuration (comma separated)
    cors_origins: str = Field(default="*")
    cors_allow_credentials: bool = Field(default=True)

    # Rate Limiting
    rate_limit_per_minute: int = Field(default=30, description="Compute endpoint requests per client per minute")

    # Engines
    default_engine: str = Field(default="direct", description="closed | direct | both")
    default_format: str = Field(default="text", description="text | json")
    max_workers: int = Field(default=4, ge=1, description="Worker threads used by scans")
    scan_max_genus: int = Field(default=20, ge=1, description="Largest genus a scan will accept")
    verify_max_q: int = Field(default=15, ge=3, description="Default q bound for the torus2 family")
    fixtures_dir: Path = Field(default=PACKAGE_ROOT / "fixtures")

    # Logging Configuration
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="json", description="json | console")

    @property
    def cors_origin_list(self) -> List[str]:
        return [origin.strip() for origin in self.cors_origins.split(",") if origin.strip()]

    @field_validator("default_engine")
    @classmethod
    def check_engine(cls, v: str) -> str:
        if v not in {"closed", "direct", "both"}:
            raise ValueError("default_engine must be one of closed, direct, both")
        return v

    @field_validator("default_format")
    @classmethod
    def check_format(cls, v: str) -> str:
        if v not in {"text", "json"}:
            raise ValueError("default_format must be text or json")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings."""
    return Settings()
