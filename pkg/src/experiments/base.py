"""
Classes de base des suites d'expériences
"""

import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.core.config import ToleranceConfig, settings
from src.core.exceptions import ConfigurationError
from src.core.logging import LoggerMixin


class ExperimentConfig(BaseModel):
    """Configuration d'une exécution; fichier JSON plat, surchargé par la ligne de commande"""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    experiment: str
    n: int = Field(default=3, ge=1)
    d: int = Field(default=1, ge=1)
    box: float = Field(default=1.0, gt=0, alias="D_box")
    seed: Optional[int] = None
    samples: int = Field(default=200, ge=1)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    epochs: Optional[int] = Field(default=None, ge=1)
    lr: Optional[float] = Field(default=None, gt=0)
    batch: Optional[int] = Field(default=None, ge=1)
    width: Optional[int] = Field(default=None, ge=1)
    depth: Optional[int] = Field(default=None, ge=1)
    options: Dict[str, Any] = Field(default_factory=dict)
    out: Path = Path("reports")

    @field_validator("tolerances")
    @classmethod
    def validate_tolerances(cls, v: Dict[str, float]) -> Dict[str, float]:
        ToleranceConfig().merged(v)
        return v

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None, **overrides: Any) -> "ExperimentConfig":
        """Lit le fichier JSON puis applique les surcharges non nulles"""
        data: Dict[str, Any] = {}
        if path is not None:
            try:
                data = json.loads(Path(path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigurationError(f"cannot read config {path}: {e}") from e
            if not isinstance(data, dict):
                raise ConfigurationError(f"config {path} must hold a JSON object")
        if "D_box" in data and "box" in data:
            raise ConfigurationError("give either 'box' or 'D_box', not both")
        data.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e

    def tolerance_set(self) -> ToleranceConfig:
        return settings.tolerances.merged(self.tolerances)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed if self.seed is not None else 0)

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class ExperimentInfo(BaseModel):
    """Informations sur une suite"""
    name: str
    description: str
    requires_seed: bool = False
    oracle: bool = False


class Check(BaseModel):
    """Une assertion: ``value`` comparée à ``threshold``"""
    name: str
    value: Optional[float]
    threshold: Optional[float]
    passed: bool
    enforced: bool = True


class ExperimentResult(BaseModel):
    experiment: str
    config: Dict[str, Any]
    columns: List[str]
    rows: List[Dict[str, Any]] = []
    metrics: Dict[str, Any] = {}
    checks: List[Check] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.enforced)

    def failures(self) -> List[Check]:
        return [check for check in self.checks if check.enforced and not check.passed]


def _finite_or_none(value: float) -> Optional[float]:
    value = float(value)
    return value if math.isfinite(value) else None


class BaseExperiment(ABC, LoggerMixin):
    """Classe de base pour toutes les suites"""

    columns: List[str] = []

    def __init__(self) -> None:
        self._checks: List[Check] = []

    @property
    @abstractmethod
    def info(self) -> ExperimentInfo:
        """Retourne les informations de la suite"""

    @abstractmethod
    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        """Exécute la suite et retourne lignes, métriques et assertions"""

    def check_at_most(self, name: str, value: float, threshold: float, enforced: bool = True) -> Check:
        check = Check(
            name=name,
            value=_finite_or_none(value),
            threshold=threshold,
            passed=bool(value <= threshold),
            enforced=enforced,
        )
        self._checks.append(check)
        if not check.passed:
            self.log_event("check_failed", check=name, value=value, threshold=threshold, enforced=enforced)
        return check

    def check_true(self, name: str, condition: bool, value: Optional[float] = None) -> Check:
        check = Check(name=name, value=value, threshold=None, passed=bool(condition))
        self._checks.append(check)
        if not check.passed:
            self.log_event("check_failed", check=name, value=value)
        return check

    def result(
        self,
        config: ExperimentConfig,
        rows: List[Dict[str, Any]],
        metrics: Optional[Dict[str, Any]] = None,
    ) -> ExperimentResult:
        checks, self._checks = self._checks, []
        return ExperimentResult(
            experiment=self.info.name,
            config=config.echo(),
            columns=list(self.columns),
            rows=rows,
            metrics=metrics or {},
            checks=checks,
        )
