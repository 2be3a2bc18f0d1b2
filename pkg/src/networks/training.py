"""
Boucle d'entraînement déterministe (perte quadratique moyenne)
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.core.exceptions import ShapeMismatchError, TrainingDivergedError
from src.core.logging import get_logger

from .optim import OptimizerKind, build_optimizer

logger = get_logger(__name__)


class TrainableModel(Protocol):
    def forward(self, inputs: Any) -> Tuple[np.ndarray, Any]: ...

    def backward(self, cache: Any, grad_out: np.ndarray) -> Dict[str, np.ndarray]: ...

    def parameters(self) -> Dict[str, np.ndarray]: ...

    def predict(self, inputs: Any) -> np.ndarray: ...


class TrainingConfig(BaseModel):
    """Hyperparamètres; ``seed`` fixe le mélange des lots"""

    optimizer: OptimizerKind = OptimizerKind.ADAM
    lr: float = Field(default=1e-2, gt=0)
    epochs: int = Field(default=300, ge=1)
    batch: int = Field(default=32, ge=1)
    seed: int = 0
    lr_decay: float = Field(default=1.0, gt=0, le=1.0)
    log_every: int = Field(default=50, ge=1)
    target_loss: Optional[float] = None


@dataclass
class TrainingResult:
    model: Any
    losses: List[float] = field(default_factory=list)
    grad_norms: List[float] = field(default_factory=list)

    @property
    def final_loss(self) -> float:
        return self.losses[-1] if self.losses else float("nan")


def mse_loss(predictions: np.ndarray, targets: np.ndarray) -> Tuple[float, np.ndarray]:
    """L = moyenne (ŷ - y)², et ∂L/∂ŷ"""
    residual = predictions - targets
    return float(np.mean(residual * residual)), 2.0 * residual / residual.size


def _shaped_targets(targets: np.ndarray, count: int, output_shape: Tuple[int, ...]) -> np.ndarray:
    targets = np.asarray(targets, dtype=np.float64)
    if targets.ndim == 1:
        targets = targets[:, None]
    if targets.shape[0] != count or targets.shape[1:] != tuple(output_shape):
        raise ShapeMismatchError(
            f"{targets.shape} targets for {count} predictions of shape {tuple(output_shape)}"
        )
    return targets


def evaluate_mse(model: TrainableModel, inputs: Any, targets: np.ndarray) -> float:
    predictions = model.predict(inputs)
    loss, _ = mse_loss(predictions, _shaped_targets(targets, predictions.shape[0], predictions.shape[1:]))
    return loss


def train(model: TrainableModel, inputs: np.ndarray, targets: np.ndarray, config: TrainingConfig) -> TrainingResult:
    """Entraîne ``model`` en place; même graine, même trace de perte"""
    inputs = np.asarray(inputs, dtype=np.float64)
    count = inputs.shape[0]
    targets = _shaped_targets(targets, count, model.predict(inputs[:1]).shape[1:])
    rng = np.random.default_rng(config.seed)
    optimizer = build_optimizer(config.optimizer, config.lr)
    params = model.parameters()
    result = TrainingResult(model)
    last_finite: Optional[float] = None

    logger.info(
        "training_started",
        samples=count,
        epochs=config.epochs,
        batch=config.batch,
        optimizer=config.optimizer.value,
        lr=config.lr,
    )

    for epoch in range(config.epochs):
        order = rng.permutation(count)
        epoch_loss = 0.0
        grad_norm = 0.0
        for step, start in enumerate(range(0, count, config.batch)):
            idx = order[start:start + config.batch]
            predictions, cache = model.forward(inputs[idx])
            loss, grad_out = mse_loss(predictions, targets[idx])
            if not math.isfinite(loss):
                logger.error("training_diverged", epoch=epoch, step=step, last_finite_loss=last_finite)
                raise TrainingDivergedError(epoch, step, last_finite)
            last_finite = loss
            grads = model.backward(cache, grad_out)
            grad_norm = math.sqrt(math.fsum(float(np.sum(g * g)) for g in grads.values()))
            optimizer.step(params, grads)
            epoch_loss += loss * idx.size

        epoch_loss /= count
        result.losses.append(epoch_loss)
        result.grad_norms.append(grad_norm)
        optimizer.lr *= config.lr_decay

        if epoch % config.log_every == 0 or epoch == config.epochs - 1:
            logger.info("training_epoch", epoch=epoch, loss=epoch_loss, grad_norm=grad_norm, lr=optimizer.lr)
        if config.target_loss is not None and epoch_loss <= config.target_loss:
            logger.info("training_target_reached", epoch=epoch, loss=epoch_loss)
            break

    logger.info("training_finished", epochs_run=len(result.losses), final_loss=result.final_loss)
    return result
