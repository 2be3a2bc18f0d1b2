"""
Suites intégrées
"""

from .bench_bases import BenchBasesExperiment
from .emlp_universality import EmlpUniversalityExperiment
from .ferminet_fit import FermiNetFitExperiment
from .gsd_1d import Gsd1dExperiment
from .gsd_nd import GsdNdExperiment
from .invariance import InvarianceExperiment
from .lemma4 import Lemma4Experiment
from .newton import NewtonExperiment

__all__ = [
    "BenchBasesExperiment",
    "EmlpUniversalityExperiment",
    "FermiNetFitExperiment",
    "Gsd1dExperiment",
    "GsdNdExperiment",
    "InvarianceExperiment",
    "Lemma4Experiment",
    "NewtonExperiment",
]
