"""
Suite ``gsd-1d``: reconstruction ψ = det Φ avec φ₁ = χ = ψ/Δ et φ_i = x^{i-1}
"""

import math

from src.core.config import ToleranceConfig
from src.core.exceptions import ConfigurationError
from src.symmetry.antisym import AsFunction, chi_from_psi_numeric, gsd_build_1d, slater_det
from src.symmetry.polynomials import is_symmetric, vandermonde_poly

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import random_antisymmetric_poly, separated_configs


class Gsd1dExperiment(BaseExperiment):
    columns = ["sample", "psi", "det", "relative_error", "chi_poly", "chi_numeric", "chi_cross_error"]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="gsd-1d",
            description="Vandermonde-division GSD for d = 1 (options: psi=vandermonde|random, degree)",
        )

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        rng = config.rng()
        n = config.n
        choice = str(config.options.get("psi", "vandermonde"))
        if choice == "vandermonde":
            poly = vandermonde_poly(n)
        elif choice == "random":
            poly = random_antisymmetric_poly(rng, n, int(config.options.get("degree", 3)))
        else:
            raise ConfigurationError(f"unknown psi option {choice!r}; expected 'vandermonde' or 'random'")

        psi = AsFunction.from_polynomial(poly, seed=int(rng.integers(2**31)))
        chi = psi.chi_polynomial()
        gap = float(config.options.get("min_gap", min(0.1, config.box / max(1, n))))
        rows = []
        for k, X in enumerate(separated_configs(rng, n, config.box, config.samples, gap)):
            value = psi(X)
            det = slater_det(gsd_build_1d(psi, X))
            chi_poly = chi.evaluate(X)
            chi_numeric = chi_from_psi_numeric(poly.evaluate, X)
            rows.append(
                {
                    "sample": k,
                    "psi": value,
                    "det": det,
                    "relative_error": abs(det - value) / max(1.0, abs(value)),
                    "chi_poly": chi_poly,
                    "chi_numeric": chi_numeric,
                    "chi_cross_error": abs(chi_numeric - chi_poly) / max(1.0, abs(chi_poly)),
                }
            )

        worst = max(row["relative_error"] for row in rows)
        cross = max(row["chi_cross_error"] for row in rows)
        self.check_at_most("max_reconstruction_error", worst, tolerances.reconstruction_rtol)
        self.check_at_most("max_chi_cross_error", cross, tolerances.reconstruction_rtol)
        chi_scale = math.factorial(n) * max(1.0, chi.max_abs_coefficient())
        self.check_true("chi_is_symmetric", is_symmetric(chi, atol=1e-10 * chi_scale))
        metrics = {
            "psi": choice,
            "psi_terms": len(poly),
            "chi_terms": len(chi),
            "max_relative_error": worst,
            "max_chi_cross_error": cross,
        }
        return self.result(config, rows, metrics)
