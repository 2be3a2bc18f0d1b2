"""
Suite ``gsd-nd``: construction par tri lexicographique pour d quelconque,
témoin de discontinuité et construction continue n = 2
"""

from src.core.config import ToleranceConfig
from src.networks.models import MlpModel
from src.symmetry.antisym import (
    AsFunction,
    SignMode,
    continuity_jump,
    gsd_build_nd,
    n2_continuous_gsd,
    slater_det,
)
from src.symmetry.permutation import ParticleConfig, antisymmetrize, apply, transposition

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import uniform_configs


def relative_gap(value: float, reference: float) -> float:
    if reference == 0.0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def _witness_psi(X: ParticleConfig) -> float:
    """ψ(x₁, x₂) = y₁ - y₂ pour d = 2"""
    return float(X.values[1, 0] - X.values[1, 1])


def step_witness(epsilon: float = 1e-7):
    """φ₁ vaut 1 si x₁ < x₂ et 0 sinon quand les secondes coordonnées sont (1, 0)"""
    psi = AsFunction.from_callable(_witness_psi, n=2, d=2)
    below = gsd_build_nd(psi, ParticleConfig([[0.5 - epsilon, 0.5], [1.0, 0.0]]), SignMode.FIRST_COLUMN)
    above = gsd_build_nd(psi, ParticleConfig([[0.5 + epsilon, 0.5], [1.0, 0.0]]), SignMode.FIRST_COLUMN)
    return float(below.entries[0, 0]), float(above.entries[0, 0])


class GsdNdExperiment(BaseExperiment):
    columns = ["sample", "sign_mode", "sorting", "psi", "det", "relative_error", "off_pattern_max", "transposition_error"]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="gsd-nd",
            description="Sorted permuted-diagonal GSD for any d, both sign modes, continuity report",
            oracle=True,
        )

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        rng = config.rng()
        n, d = config.n, config.d
        width = config.width or 16
        chi = MlpModel.initialize([n * d, width, 1], activation="tanh", seed=int(rng.integers(2**31)))

        def psi_value(X: ParticleConfig) -> float:
            return antisymmetrize(chi, X)

        psi = AsFunction.from_callable(psi_value, n, d, seed=int(rng.integers(2**31)))
        modes = [SignMode(config.options["sign_mode"])] if "sign_mode" in config.options else list(SignMode)

        rows = []
        for k, X in enumerate(uniform_configs(rng, n, d, config.box, config.samples)):
            value = psi(X)
            swapped = apply(transposition(n, 0, 1), X) if n > 1 else X
            for mode in modes:
                matrix = gsd_build_nd(psi, X, mode)
                det = slater_det(matrix)
                pattern = [(matrix.sorting(i), i) for i in range(n)]
                off = max(
                    (abs(matrix.entries[j, i]) for j in range(n) for i in range(n) if (j, i) not in pattern),
                    default=0.0,
                )
                flipped = slater_det(gsd_build_nd(psi, swapped, mode)) if n > 1 else -det
                rows.append(
                    {
                        "sample": k,
                        "sign_mode": mode.value,
                        "sorting": str(matrix.sorting),
                        "psi": value,
                        "det": det,
                        "relative_error": relative_gap(det, value),
                        "off_pattern_max": float(off),
                        "transposition_error": abs(flipped + det),
                    }
                )

        worst = max(row["relative_error"] for row in rows)
        self.check_at_most("max_reconstruction_error", worst, tolerances.reconstruction_rtol)
        self.check_at_most("off_pattern_entries", max(row["off_pattern_max"] for row in rows), 0.0)
        self.check_at_most(
            "max_transposition_error", max(row["transposition_error"] for row in rows), 1e-10
        )

        below, above = step_witness()
        self.check_true("step_witness", below == 1.0 and above == 0.0)
        metrics = {
            "max_relative_error": worst,
            "witness_phi1_below": below,
            "witness_phi1_above": above,
        }
        metrics.update(self._continuity_report())
        return self.result(config, rows, metrics)

    def _continuity_report(self):
        """Sauts des entrées de Φ au voisinage de x₁ = x₂ (rapportés, jamais vérifiés)"""
        psi = AsFunction.from_callable(_witness_psi, n=2, d=2)
        X = ParticleConfig([[0.5, 0.5], [1.0, 0.0]])
        sorted_jump = continuity_jump(lambda Y: gsd_build_nd(psi, Y), X, particle=0, axis=0)
        smooth_jump = continuity_jump(lambda Y: n2_continuous_gsd(psi, Y), X, particle=0, axis=0)
        return {
            "sorted_max_entry_jump": sorted_jump["max_entry_jump"],
            "n2_continuous_max_entry_jump": smooth_jump["max_entry_jump"],
        }
