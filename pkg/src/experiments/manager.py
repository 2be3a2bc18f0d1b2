"""
Registre et exécution des suites
"""

from typing import Dict, List, Optional, Tuple, Type

from src.core.config import settings
from src.core.exceptions import ConfigurationError, UnknownExperimentError
from src.core.logging import LoggerMixin

from .base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from .report import report_emit
from .suites import (
    BenchBasesExperiment,
    EmlpUniversalityExperiment,
    FermiNetFitExperiment,
    Gsd1dExperiment,
    GsdNdExperiment,
    InvarianceExperiment,
    Lemma4Experiment,
    NewtonExperiment,
)


class ExperimentManager(LoggerMixin):
    """Gestionnaire des suites d'expériences"""

    def __init__(self) -> None:
        self.experiment_classes: Dict[str, Type[BaseExperiment]] = {}
        self._register_builtin_experiments()

    def _register_builtin_experiments(self) -> None:
        """Enregistre les suites intégrées, dans l'ordre d'affichage"""
        for experiment_class in (
            InvarianceExperiment,
            NewtonExperiment,
            Gsd1dExperiment,
            GsdNdExperiment,
            EmlpUniversalityExperiment,
            FermiNetFitExperiment,
            BenchBasesExperiment,
            Lemma4Experiment,
        ):
            self.register(experiment_class)

    def register(self, experiment_class: Type[BaseExperiment]) -> None:
        name = experiment_class().info.name
        self.experiment_classes[name] = experiment_class

    def list_experiments(self) -> List[ExperimentInfo]:
        return [cls().info for cls in self.experiment_classes.values()]

    def get(self, name: str) -> BaseExperiment:
        if name not in self.experiment_classes:
            known = ", ".join(self.experiment_classes)
            raise UnknownExperimentError(f"unknown experiment {name!r}; known: {known}")
        return self.experiment_classes[name]()

    def validate(self, experiment: BaseExperiment, config: ExperimentConfig) -> None:
        info = experiment.info
        if info.requires_seed and config.seed is None:
            raise ConfigurationError(f"experiment {info.name!r} trains a model and needs --seed")
        if info.oracle and config.n > settings.oracle.max_particles:
            raise ConfigurationError(
                f"experiment {info.name!r} enumerates S_n: n={config.n} exceeds {settings.oracle.max_particles}"
            )

    def run(self, config: ExperimentConfig, emit: bool = True) -> Tuple[ExperimentResult, Optional[Tuple]]:
        """Exécute la suite nommée et écrit ses rapports"""
        experiment = self.get(config.experiment)
        self.validate(experiment, config)
        tolerances = config.tolerance_set()
        self.log_event("experiment_started", experiment=config.experiment, n=config.n, d=config.d, seed=config.seed)
        result = experiment.execute(config, tolerances)
        paths = report_emit(result, config.out) if emit else None
        self.log_event(
            "experiment_finished",
            experiment=config.experiment,
            passed=result.passed,
            rows=len(result.rows),
            failures=[check.name for check in result.failures()],
        )
        return result, paths
