"""
Configuration centralisée avec Pydantic Settings
"""

from typing import Dict, Optional

import psutil
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


def _default_threads() -> int:
    return max(1, min(4, psutil.cpu_count(logical=False) or 1))


class LoggingConfig(BaseSettings):
    level: str = "INFO"
    format: str = "console"
    file_path: Optional[str] = None
    max_size: str = "10MB"
    backup_count: int = 5

    @field_validator("level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v.upper()

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        if v.lower() not in ("json", "console"):
            raise ValueError("Log format must be 'json' or 'console'")
        return v.lower()


class PerformanceConfig(BaseSettings):
    """Nombre de workers pour les calculs indépendants (EQUISYM_THREADS)"""

    threads: int = Field(default_factory=_default_threads, ge=1)

    class Config:
        env_prefix = "EQUISYM_"
        case_sensitive = False


class OracleConfig(BaseSettings):
    max_particles: int = 10
    max_poly_particles: int = 8


class ToleranceConfig(BaseSettings):
    newton_rtol: float = 1e-9
    vandermonde_rtol: float = 1e-12
    reconstruction_rtol: float = 1e-8
    equivariance_atol: float = 1e-12
    antisymmetry_rtol: float = 1e-11
    gradient_rtol: float = 1e-5
    lemma4_slack: float = 1e-12
    as_spot_check_rtol: float = 1e-10
    emlp_mse: float = 1e-3
    ferminet_rel_l2: float = 5e-2
    ferminet_nd_mse: float = 1e-1

    def merged(self, overrides: Optional[Dict[str, float]] = None) -> "ToleranceConfig":
        """Retourne une copie avec les surcharges appliquées"""
        if not overrides:
            return self
        unknown = set(overrides) - set(self.model_fields)
        if unknown:
            raise ValueError(f"Unknown tolerance names: {sorted(unknown)}")
        return self.model_copy(update=dict(overrides))


class Settings(BaseSettings):
    """Configuration principale de la bibliothèque"""

    environment: str = "development"

    logging: LoggingConfig = LoggingConfig()
    performance: PerformanceConfig = PerformanceConfig()
    oracle: OracleConfig = OracleConfig()
    tolerances: ToleranceConfig = ToleranceConfig()

    class Config:
        env_prefix = "EQUISYM_"
        env_file = ".env"
        env_nested_delimiter = "__"
        case_sensitive = False
        extra = "ignore"

    @property
    def is_development(self) -> bool:
        return self.environment.lower() == "development"


def worker_count() -> int:
    """Relit EQUISYM_THREADS à chaque appel pour respecter l'environnement courant"""
    return PerformanceConfig().threads


# Instance globale de configuration
settings = Settings()
