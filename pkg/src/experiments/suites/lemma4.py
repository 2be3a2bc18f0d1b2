"""
Suite ``lemma4``: symétriser un approximant ne l'éloigne jamais d'une cible symétrique
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.core.config import ToleranceConfig, worker_count
from src.networks.approximation import orbit_closure, sup_errors
from src.networks.models import MlpModel
from src.symmetry.bases import BasisDescriptor, BasisFamily, polarized_basis

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import uniform_configs

DEFAULT_PAIRS = 20
DEFAULT_POINTS = 1000


class Lemma4Experiment(BaseExperiment):
    columns = ["pair", "sup_f_minus_g", "sup_f_minus_gbar", "holds"]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="lemma4",
            description="sup|f - gbar| <= sup|f - g| for symmetric f and arbitrary MLP g on orbit-closed samples",
            oracle=True,
        )

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        rng = config.rng()
        n, d = config.n, config.d
        pairs = int(config.options.get("pairs", DEFAULT_PAIRS))
        points = int(config.options.get("points", DEFAULT_POINTS))
        base_count = max(1, math.ceil(points / math.factorial(n)))
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n, d)
        width = config.width or 16

        cases = []
        for _ in range(pairs):
            weights = rng.uniform(-1.0, 1.0, size=desc.m)
            perturbation = MlpModel.initialize([n * d, width, 1], activation="tanh", seed=int(rng.integers(2**31)))
            amplitude = float(rng.uniform(0.05, 0.5))

            def f(X, weights=weights) -> float:
                return float(np.tanh(weights @ polarized_basis(desc, X)))

            def g(X, f=f, perturbation=perturbation, amplitude=amplitude) -> float:
                return f(X) + amplitude * perturbation(X)

            samples = orbit_closure(uniform_configs(rng, n, d, config.box, base_count))
            cases.append((f, g, samples))

        # paires indépendantes; map conserve l'ordre des cas
        with ThreadPoolExecutor(max_workers=worker_count()) as executor:
            outcomes = list(executor.map(lambda case: sup_errors(*case, workers=1), cases))

        rows = []
        for pair, errors in enumerate(outcomes):
            rows.append(
                {
                    "pair": pair,
                    "sup_f_minus_g": errors["sup_f_minus_g"],
                    "sup_f_minus_gbar": errors["sup_f_minus_gbar"],
                    "holds": errors["sup_f_minus_gbar"] <= errors["sup_f_minus_g"] + tolerances.lemma4_slack,
                }
            )

        violations = sum(1 for row in rows if not row["holds"])
        self.check_true("inequality_holds_for_all_pairs", violations == 0, float(violations))
        metrics = {
            "pairs": pairs,
            "points_per_pair": base_count * math.factorial(n),
            "max_improvement": max(row["sup_f_minus_g"] - row["sup_f_minus_gbar"] for row in rows),
        }
        return self.result(config, rows, metrics)
