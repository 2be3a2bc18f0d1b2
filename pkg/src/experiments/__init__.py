"""
Suites d'expériences reproductibles et rapports
"""

from .base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from .manager import ExperimentManager
from .report import report_emit

__all__ = [
    "BaseExperiment",
    "ExperimentConfig",
    "ExperimentInfo",
    "ExperimentResult",
    "ExperimentManager",
    "report_emit",
]
