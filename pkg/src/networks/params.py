"""
Paramètres des MLP et des MLP équivariants (poids partagés entre particules)
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import ShapeMismatchError


class Activation(str, Enum):
    TANH = "tanh"
    RELU = "relu"

    def apply(self, z: np.ndarray) -> np.ndarray:
        if self is Activation.TANH:
            return np.tanh(z)
        return np.maximum(z, 0.0)

    def derivative(self, z: np.ndarray, a: np.ndarray) -> np.ndarray:
        """σ'(z), à partir de z et de a = σ(z)"""
        if self is Activation.TANH:
            return 1.0 - a * a
        return (z > 0.0).astype(np.float64)


def glorot_uniform(rng: np.random.Generator, fan_out: int, fan_in: int) -> np.ndarray:
    """Uniforme sur (-a, a), a = sqrt(6 / (fan_in + fan_out))"""
    a = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-a, a, size=(fan_out, fan_in))


@dataclass
class DenseLayer:
    W: np.ndarray
    u: np.ndarray

    def __post_init__(self) -> None:
        self.W = np.asarray(self.W, dtype=np.float64)
        self.u = np.asarray(self.u, dtype=np.float64).reshape(-1)
        if self.W.ndim != 2 or self.W.shape[0] != self.u.size:
            raise ShapeMismatchError(f"layer W {self.W.shape} incompatible with u {self.u.shape}")


@dataclass
class EquivariantLayer:
    W: np.ndarray
    V: np.ndarray
    u: np.ndarray

    def __post_init__(self) -> None:
        self.W = np.asarray(self.W, dtype=np.float64)
        self.V = np.asarray(self.V, dtype=np.float64)
        self.u = np.asarray(self.u, dtype=np.float64).reshape(-1)
        if self.W.ndim != 2 or self.W.shape != self.V.shape or self.W.shape[0] != self.u.size:
            raise ShapeMismatchError(
                f"layer W {self.W.shape}, V {self.V.shape}, u {self.u.shape} are inconsistent"
            )


def _check_chain(shapes: Sequence[Tuple[int, int]]) -> None:
    for k in range(1, len(shapes)):
        if shapes[k][1] != shapes[k - 1][0]:
            raise ShapeMismatchError(
                f"layer {k} expects width {shapes[k][1]} but layer {k - 1} produces {shapes[k - 1][0]}"
            )


@dataclass
class MlpParams:
    """Couches (W, u); ``final_linear`` supprime la non-linéarité de la dernière couche"""

    layers: List[DenseLayer]
    activation: Activation = Activation.TANH
    final_linear: bool = True

    def __post_init__(self) -> None:
        if not self.layers:
            raise ShapeMismatchError("an MLP needs at least one layer")
        self.activation = Activation(self.activation)
        _check_chain([layer.W.shape for layer in self.layers])

    @classmethod
    def initialize(
        cls,
        widths: Sequence[int],
        activation: "Activation | str" = Activation.TANH,
        final_linear: bool = True,
        seed: int = 0,
    ) -> "MlpParams":
        if len(widths) < 2:
            raise ShapeMismatchError(f"widths {list(widths)} need an input and an output size")
        rng = np.random.default_rng(seed)
        layers = [
            DenseLayer(glorot_uniform(rng, widths[k + 1], widths[k]), np.zeros(widths[k + 1]))
            for k in range(len(widths) - 1)
        ]
        return cls(layers, Activation(activation), final_linear)

    @property
    def widths(self) -> List[int]:
        return [self.layers[0].W.shape[1]] + [layer.W.shape[0] for layer in self.layers]

    def activated(self, k: int) -> bool:
        return not (self.final_linear and k == len(self.layers) - 1)

    def named_arrays(self) -> List[Tuple[str, np.ndarray]]:
        arrays = []
        for k, layer in enumerate(self.layers):
            arrays.append((f"layers.{k}.W", layer.W))
            arrays.append((f"layers.{k}.u", layer.u))
        return arrays


@dataclass
class EmlpParams:
    """Couches (W, V, u) partagées par les n canaux

    ``mixing[k]`` à False factorise la couche k: V est ignoré et ne reçoit aucun gradient.
    """

    layers: List[EquivariantLayer]
    activation: Activation = Activation.TANH
    final_linear: bool = True
    mixing: Optional[Tuple[bool, ...]] = field(default=None)

    def __post_init__(self) -> None:
        if not self.layers:
            raise ShapeMismatchError("an EMLP needs at least one layer")
        self.activation = Activation(self.activation)
        _check_chain([layer.W.shape for layer in self.layers])
        if self.mixing is None:
            self.mixing = tuple(True for _ in self.layers)
        self.mixing = tuple(bool(flag) for flag in self.mixing)
        if len(self.mixing) != len(self.layers):
            raise ShapeMismatchError(f"{len(self.mixing)} mixing flags for {len(self.layers)} layers")

    @classmethod
    def initialize(
        cls,
        widths: Sequence[int],
        activation: "Activation | str" = Activation.TANH,
        final_linear: bool = True,
        seed: int = 0,
        mixing: Optional[Sequence[bool]] = None,
    ) -> "EmlpParams":
        if len(widths) < 2:
            raise ShapeMismatchError(f"widths {list(widths)} need an input and an output size")
        rng = np.random.default_rng(seed)
        layers = []
        for k in range(len(widths) - 1):
            W = glorot_uniform(rng, widths[k + 1], widths[k])
            V = glorot_uniform(rng, widths[k + 1], widths[k])
            layers.append(EquivariantLayer(W, V, np.zeros(widths[k + 1])))
        return cls(layers, Activation(activation), final_linear, tuple(mixing) if mixing is not None else None)

    @classmethod
    def tied(
        cls,
        widths: Sequence[int],
        activation: "Activation | str" = Activation.TANH,
        final_linear: bool = True,
        seed: int = 0,
    ) -> "EmlpParams":
        """V = W à chaque couche: toutes les colonnes de sortie sont identiques"""
        params = cls.initialize(widths, activation, final_linear, seed)
        for layer in params.layers:
            layer.V = layer.W.copy()
        return params

    @property
    def widths(self) -> List[int]:
        return [self.layers[0].W.shape[1]] + [layer.W.shape[0] for layer in self.layers]

    def activated(self, k: int) -> bool:
        return not (self.final_linear and k == len(self.layers) - 1)

    def named_arrays(self) -> List[Tuple[str, np.ndarray]]:
        arrays = []
        for k, layer in enumerate(self.layers):
            arrays.append((f"layers.{k}.W", layer.W))
            arrays.append((f"layers.{k}.V", layer.V))
            arrays.append((f"layers.{k}.u", layer.u))
        return arrays
