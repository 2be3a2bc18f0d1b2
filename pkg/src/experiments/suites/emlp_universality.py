"""
Suite ``emlp-universality``: apprentissage d'une cible symétrique par EMLP + moyenne,
comparé à la représentation exacte g(Σ η(x_i)) ajustée sur la base polarisée
"""

import numpy as np

from src.core.config import ToleranceConfig
from src.networks.heads import HeadKind
from src.networks.models import EquivariantNetwork, UntiedEmlp, parameter_count
from src.networks.training import TrainingConfig, evaluate_mse, train
from src.symmetry.bases import (
    BasisDescriptor,
    BasisFamily,
    elementary_symmetric,
    fit_outer,
    polarized_basis,
)
from src.symmetry.permutation import apply, enumerate_permutations

from ..base import BaseExperiment, ExperimentConfig, ExperimentInfo, ExperimentResult
from ..sampling import uniform_configs


def second_elementary(n: int, d: int):
    """ϕ(X) = premier polynôme élémentaire de degré 2 (e₂ pour d = 1)"""
    desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, n, d)

    def target(X) -> float:
        return float(elementary_symmetric(desc, X)[d])

    return target


class EmlpUniversalityExperiment(BaseExperiment):
    columns = ["epoch", "loss", "grad_norm"]

    @property
    def info(self) -> ExperimentInfo:
        return ExperimentInfo(
            name="emlp-universality",
            description="Train EMLP + MeanPool on e2 and check exact invariance of the trained net",
            requires_seed=True,
            oracle=True,
        )

    def execute(self, config: ExperimentConfig, tolerances: ToleranceConfig) -> ExperimentResult:
        rng = config.rng()
        n, d = config.n, config.d
        target = second_elementary(n, d)
        train_count = int(config.options.get("train_samples", max(config.samples, 1000)))
        train_set = uniform_configs(rng, n, d, config.box, train_count)
        test_set = uniform_configs(rng, n, d, config.box, config.samples)
        train_X = np.stack([X.values for X in train_set])
        test_X = np.stack([X.values for X in test_set])
        train_y = np.array([target(X) for X in train_set])
        test_y = np.array([target(X) for X in test_set])

        width = config.width or 32
        network = EquivariantNetwork.initialize(
            n, d, [width] * (config.depth or 2), head=HeadKind.MEAN_POOL, seed=config.seed
        )
        training = TrainingConfig(
            lr=config.lr or 3e-3,
            epochs=config.epochs or 600,
            batch=config.batch or 32,
            seed=config.seed,
            lr_decay=float(config.options.get("lr_decay", 0.995)),
        )
        outcome = train(network, train_X, train_y, training)
        test_mse = evaluate_mse(network, test_X, test_y)
        self.check_at_most("test_mse", test_mse, tolerances.emlp_mse)

        # invariance exacte du réseau entraîné
        invariance = 0.0
        untied = UntiedEmlp.initialize(n, d, width, seed=config.seed)
        untied_error = 0.0
        for X in test_set[:10]:
            base = network.predict(X)[0, 0]
            base_untied = untied.equivariant_output(X).values
            for p in enumerate_permutations(n):
                Xp = apply(p, X)
                invariance = max(invariance, abs(network.predict(Xp)[0, 0] - base))
                untied_error = max(
                    untied_error,
                    float(np.max(np.abs(untied.equivariant_output(Xp).values - base_untied[:, list(p.images)]))),
                )
        self.check_at_most("trained_invariance_error", invariance, tolerances.equivariance_atol)
        if n > 1:
            self.check_true("untied_breaks_equivariance", untied_error > tolerances.equivariance_atol, untied_error)

        # représentation exacte par la base polarisée (d = 1: g(p) = (p₁² - p₂)/2)
        metrics = {
            "test_mse": test_mse,
            "final_train_loss": outcome.final_loss,
            "epochs_run": len(outcome.losses),
            "parameters": parameter_count(network),
            "trained_invariance_error": invariance,
            "untied_max_error": untied_error,
        }
        if d == 1:
            desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n, 1)
            betas = np.stack([polarized_basis(desc, X) for X in train_set[:200]])
            fit = fit_outer(betas, train_y[:200], degree=2)
            test_betas = np.stack([polarized_basis(desc, X) for X in test_set])
            outer_error = float(np.max(np.abs(fit.predict(test_betas) - test_y)))
            self.check_at_most("outer_fit_error", outer_error, 1e-10)
            metrics.update(outer_fit_error=outer_error, outer_fit_rank=fit.rank)

        rows = [
            {"epoch": epoch, "loss": loss, "grad_norm": norm}
            for epoch, (loss, norm) in enumerate(zip(outcome.losses, outcome.grad_norms))
        ]
        return self.result(config, rows, metrics)
