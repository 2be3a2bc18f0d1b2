"""
Suite ``invariance``: symétrie architecturale vérifiée sur toutes les permutations
"""

import numpy as np

from src.core.config import ToleranceConfig
from src.networks.heads import HeadKind
from src.networks.models import EquivariantNetwork, UntiedEmlp
from src.symmetry.bases import BasisDescriptor, BasisFamily, basis_vector
from src.symmetry.permutation import apply, enumerate_permutations

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import uniform_configs


class InvarianceExperiment(BaseExperiment):
    """Une ligne par permutation: écarts d'invariance des bases et du réseau"""

    columns = [
        "permutation",
        "polarized_error",
        "elementary_error",
        "emlp_pool_error",
        "emlp_equivariance_error",
        "untied_equivariance_error",
    ]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="invariance",
            description="Permutation invariance of bases and EMLP heads, equivariance of the EMLP stack",
            oracle=True,
        )

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        rng = config.rng()
        n, d = config.n, config.d
        X = uniform_configs(rng, n, d, config.box, 1)[0]
        width = config.width or 16
        network = EquivariantNetwork.initialize(
            n, d, [width] * (config.depth or 2), head=HeadKind.MEAN_POOL, seed=int(rng.integers(2**31))
        )
        untied = UntiedEmlp.initialize(n, d, width, seed=int(rng.integers(2**31)))
        polarized = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n, d)
        elementary = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, n, d)

        base_polarized = basis_vector(polarized, X)
        base_elementary = basis_vector(elementary, X)
        base_pool = network.predict(X)[0]
        base_Y = network.equivariant_output(X).values
        base_untied = untied.equivariant_output(X).values

        perms = list(enumerate_permutations(n))
        moved = [apply(p, X) for p in perms]
        pooled = network.predict(moved)

        rows = []
        for k, (p, Xp) in enumerate(zip(perms, moved)):
            images = list(p.images)
            rows.append(
                {
                    "permutation": str(p),
                    "polarized_error": float(np.max(np.abs(basis_vector(polarized, Xp) - base_polarized))),
                    "elementary_error": float(np.max(np.abs(basis_vector(elementary, Xp) - base_elementary))),
                    "emlp_pool_error": float(np.max(np.abs(pooled[k] - base_pool))),
                    "emlp_equivariance_error": float(
                        np.max(np.abs(network.equivariant_output(Xp).values - base_Y[:, images]))
                    ),
                    "untied_equivariance_error": float(
                        np.max(np.abs(untied.equivariant_output(Xp).values - base_untied[:, images]))
                    ),
                }
            )

        atol = tolerances.equivariance_atol
        for column in ("polarized_error", "elementary_error", "emlp_pool_error", "emlp_equivariance_error"):
            self.check_at_most(f"max_{column}", max(row[column] for row in rows), atol)
        untied_error = max(row["untied_equivariance_error"] for row in rows)
        if n > 1:
            # le témoin sans partage de poids doit casser l'équivariance
            self.check_true("untied_breaks_equivariance", untied_error > atol, untied_error)

        return self.result(config, rows, {"permutations": len(rows), "untied_max_error": untied_error})
