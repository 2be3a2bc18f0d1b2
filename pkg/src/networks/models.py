"""
Modèles entraînables: MLP plat, réseau équivariant + tête, et le contre-exemple non lié
"""

from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import ShapeMismatchError
from src.core.logging import LoggerMixin
from src.symmetry.permutation import ParticleConfig

from .heads import HeadKind, HeadSpec, head_backward, head_apply
from .layers import (
    dense_stack_backward,
    dense_stack_forward,
    equivariant_stack_backward,
    equivariant_stack_forward,
)
from .params import Activation, EmlpParams, MlpParams, glorot_uniform


def as_batch(X: "ParticleConfig | Sequence[ParticleConfig] | np.ndarray") -> np.ndarray:
    """Normalise en tableau (B, d, n)"""
    if isinstance(X, ParticleConfig):
        return X.values[None, :, :]
    if isinstance(X, np.ndarray):
        array = np.asarray(X, dtype=np.float64)
    else:
        array = np.stack([x.values for x in X])
    if array.ndim == 2:
        array = array[None, :, :]
    if array.ndim != 3:
        raise ShapeMismatchError(f"expected a batch of d×n configurations, got shape {array.shape}")
    return array


class MlpModel(LoggerMixin):
    """MLP sur un vecteur d'entrée plat"""

    def __init__(self, params: MlpParams):
        self.params = params

    @classmethod
    def initialize(
        cls,
        widths: Sequence[int],
        activation: "Activation | str" = Activation.TANH,
        final_linear: bool = True,
        seed: int = 0,
    ) -> "MlpModel":
        return cls(MlpParams.initialize(widths, activation, final_linear, seed))

    def forward(self, inputs: np.ndarray) -> Tuple[np.ndarray, Any]:
        inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        return dense_stack_forward(self.params, inputs)

    def backward(self, cache: Any, grad_out: np.ndarray) -> Dict[str, np.ndarray]:
        grads, _ = dense_stack_backward(self.params, cache, grad_out)
        return grads

    def parameters(self) -> Dict[str, np.ndarray]:
        return dict(self.params.named_arrays())

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        out, _ = self.forward(inputs)
        return out

    def __call__(self, X: ParticleConfig) -> float:
        """Évaluation scalaire sur les coordonnées aplaties (particule, axe)"""
        return float(self.predict(X.flat()[None, :])[0, 0])


class EquivariantNetwork(LoggerMixin):
    """Pile EMLP suivie d'une tête; sans tête, la sortie est la matrice équivariante Y"""

    def __init__(self, params: EmlpParams, head: Optional[HeadSpec] = None, n: Optional[int] = None):
        self.params = params
        self.head = head
        self.n = n
        if head is not None and n is not None:
            head.validate(params.widths[0], params.widths[-1], n)

    @classmethod
    def initialize(
        cls,
        n: int,
        d: int,
        hidden: Sequence[int],
        head: "HeadSpec | HeadKind | str | None" = HeadKind.MEAN_POOL,
        activation: "Activation | str" = Activation.TANH,
        seed: int = 0,
        d_out: Optional[int] = None,
        mixing: Optional[Sequence[bool]] = None,
    ) -> "EquivariantNetwork":
        """Largeurs [d, *hidden, d′]; d′ vaut n pour GsdHead et 1 sinon par défaut"""
        spec = None if head is None else (head if isinstance(head, HeadSpec) else HeadSpec(HeadKind(head)))
        if d_out is None:
            d_out = n if spec is not None and spec.kind is HeadKind.GSD_HEAD else 1
        widths = [d, *hidden, d_out]
        params = EmlpParams.initialize(widths, activation, final_linear=True, seed=seed, mixing=mixing)
        return cls(params, spec, n)

    @property
    def d(self) -> int:
        return self.params.widths[0]

    def forward(self, inputs: "ParticleConfig | Sequence[ParticleConfig] | np.ndarray") -> Tuple[np.ndarray, Any]:
        X = as_batch(inputs)
        if self.n is not None and X.shape[2] != self.n:
            raise ShapeMismatchError(f"network built for n={self.n}, got n={X.shape[2]}")
        Y, stack_cache = equivariant_stack_forward(self.params, X)
        if self.head is None:
            return Y, (stack_cache, None)
        out, head_cache = head_apply(self.head, Y, X)
        return out, (stack_cache, head_cache)

    def backward(self, cache: Any, grad_out: np.ndarray) -> Dict[str, np.ndarray]:
        stack_cache, head_cache = cache
        grad_Y = grad_out if self.head is None else head_backward(self.head, head_cache, grad_out)
        grads, _ = equivariant_stack_backward(self.params, stack_cache, grad_Y)
        return grads

    def parameters(self) -> Dict[str, np.ndarray]:
        return dict(self.params.named_arrays())

    def predict(self, inputs: "ParticleConfig | Sequence[ParticleConfig] | np.ndarray") -> np.ndarray:
        out, _ = self.forward(inputs)
        return out

    def equivariant_output(self, X: ParticleConfig) -> ParticleConfig:
        Y, _ = equivariant_stack_forward(self.params, X.values[None, :, :])
        return ParticleConfig(Y[0])

    def __call__(self, X: ParticleConfig) -> float:
        return float(self.predict(X)[0, 0])


class UntiedEmlp:
    """Couche unique avec W propre à chaque canal: n'est PAS équivariante

    Sert de témoin: le test d'équivariance doit échouer sur ce modèle.
    """

    def __init__(self, W: np.ndarray, V: np.ndarray, u: np.ndarray, activation: "Activation | str" = Activation.TANH):
        self.W = np.asarray(W, dtype=np.float64)  # (n, d′, d)
        self.V = np.asarray(V, dtype=np.float64)
        self.u = np.asarray(u, dtype=np.float64)
        self.activation = Activation(activation)

    @classmethod
    def initialize(cls, n: int, d: int, d_out: int, seed: int = 0) -> "UntiedEmlp":
        rng = np.random.default_rng(seed)
        W = np.stack([glorot_uniform(rng, d_out, d) for _ in range(n)])
        V = glorot_uniform(rng, d_out, d)
        return cls(W, V, rng.uniform(-0.5, 0.5, size=d_out))

    def equivariant_output(self, X: ParticleConfig) -> ParticleConfig:
        H = X.values
        others = H.sum(axis=1, keepdims=True) - H
        Z = np.einsum("nij,jn->in", self.W, H) + self.V @ others + self.u[:, None]
        return ParticleConfig(self.activation.apply(Z))


def parameter_count(model: "MlpModel | EquivariantNetwork") -> int:
    return int(sum(array.size for array in model.parameters().values()))
