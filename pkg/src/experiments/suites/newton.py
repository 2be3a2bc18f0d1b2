"""
Suite ``newton``: identités de Newton entre sommes de puissances et polynômes élémentaires
"""

import numpy as np

from src.core.config import ToleranceConfig
from src.symmetry.bases import BasisDescriptor, BasisFamily, elementary_symmetric, newton_e_from_p, polarized_basis

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import uniform_configs


def relative_error(value: np.ndarray, reference: np.ndarray) -> float:
    """‖value - reference‖_∞ / max(1, ‖reference‖_∞)"""
    scale = max(1.0, float(np.max(np.abs(reference))))
    return float(np.max(np.abs(value - reference))) / scale


class NewtonExperiment(BaseExperiment):
    """Une taille ``config.n`` par défaut; ``options.sizes`` balaie plusieurs n, ``samples`` tirages chacun"""

    columns = ["n", "sample", "max_abs_error", "relative_error"]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="newton",
            description="newton_e_from_p(polarized_basis(X)) against elementary_symmetric(X), d = 1, n in options.sizes",
        )

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        if config.d != 1:
            self.log_event("newton_forcing_d", requested=config.d)
        sizes = [int(n) for n in config.options.get("sizes", [config.n])]
        rng = config.rng()
        rows = []
        for n in sizes:
            powers = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n, 1)
            elementary = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, n, 1)
            for k, X in enumerate(uniform_configs(rng, n, 1, config.box, config.samples)):
                reference = elementary_symmetric(elementary, X)
                converted = newton_e_from_p(polarized_basis(powers, X))
                rows.append(
                    {
                        "n": n,
                        "sample": k,
                        "max_abs_error": float(np.max(np.abs(converted - reference))),
                        "relative_error": relative_error(converted, reference),
                    }
                )
        worst = max(row["relative_error"] for row in rows)
        self.check_at_most("max_relative_error", worst, tolerances.newton_rtol)
        return self.result(config, rows, {"max_relative_error": worst, "sizes": sizes})
