"""
Passes avant/arrière des couches denses et équivariantes, vectorisées sur le lot
"""

from typing import Dict, List, Tuple

import numpy as np

from src.core.exceptions import ShapeMismatchError
from src.symmetry.permutation import ParticleConfig

from .params import EmlpParams, MlpParams

# (entrée de la couche, pré-activation, sortie)
LayerCache = Tuple[np.ndarray, np.ndarray, np.ndarray]


def dense_stack_forward(params: MlpParams, x: np.ndarray) -> Tuple[np.ndarray, List[LayerCache]]:
    """x: (B, d₀) -> (B, d_L)"""
    if x.ndim != 2 or x.shape[1] != params.widths[0]:
        raise ShapeMismatchError(f"expected inputs of shape (B, {params.widths[0]}), got {x.shape}")
    cache: List[LayerCache] = []
    h = x
    for k, layer in enumerate(params.layers):
        z = h @ layer.W.T + layer.u
        a = params.activation.apply(z) if params.activated(k) else z
        cache.append((h, z, a))
        h = a
    return h, cache


def dense_stack_backward(
    params: MlpParams, cache: List[LayerCache], grad_out: np.ndarray
) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    grads: Dict[str, np.ndarray] = {}
    delta = grad_out
    for k in reversed(range(len(params.layers))):
        h, z, a = cache[k]
        if params.activated(k):
            delta = delta * params.activation.derivative(z, a)
        layer = params.layers[k]
        grads[f"layers.{k}.W"] = delta.T @ h
        grads[f"layers.{k}.u"] = delta.sum(axis=0)
        delta = delta @ layer.W
    return grads, delta


def equivariant_stack_forward(params: EmlpParams, X: np.ndarray) -> Tuple[np.ndarray, List[LayerCache]]:
    """X: (B, d₀, n) -> (B, d_L, n); Σ_{j≠i} x_j calculé comme (Σ_j x_j) - x_i"""
    if X.ndim != 3 or X.shape[1] != params.widths[0]:
        raise ShapeMismatchError(f"expected inputs of shape (B, {params.widths[0]}, n), got {X.shape}")
    cache: List[LayerCache] = []
    H = X
    for k, layer in enumerate(params.layers):
        Z = np.einsum("ij,bjn->bin", layer.W, H)
        if params.mixing[k]:
            others = H.sum(axis=2, keepdims=True) - H
            Z = Z + np.einsum("ij,bjn->bin", layer.V, others)
        Z = Z + layer.u[None, :, None]
        A = params.activation.apply(Z) if params.activated(k) else Z
        cache.append((H, Z, A))
        H = A
    return H, cache


def equivariant_stack_backward(
    params: EmlpParams, cache: List[LayerCache], grad_out: np.ndarray
) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    grads: Dict[str, np.ndarray] = {}
    delta = grad_out
    for k in reversed(range(len(params.layers))):
        H, Z, A = cache[k]
        if params.activated(k):
            delta = delta * params.activation.derivative(Z, A)
        layer = params.layers[k]
        grads[f"layers.{k}.W"] = np.einsum("bin,bjn->ij", delta, H)
        grads[f"layers.{k}.u"] = delta.sum(axis=(0, 2))
        grad_H = np.einsum("ij,bin->bjn", layer.W, delta)
        if params.mixing[k]:
            others = H.sum(axis=2, keepdims=True) - H
            grads[f"layers.{k}.V"] = np.einsum("bin,bjn->ij", delta, others)
            back = np.einsum("ij,bin->bjn", layer.V, delta)
            grad_H = grad_H + back.sum(axis=2, keepdims=True) - back
        else:
            grads[f"layers.{k}.V"] = np.zeros_like(layer.V)
        delta = grad_H
    return grads, delta


def mlp_forward(params: MlpParams, x: "np.ndarray | List[float]") -> np.ndarray:
    """ν^L(x) pour un seul vecteur d'entrée"""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    out, _ = dense_stack_forward(params, x)
    return out[0]


def emlp_forward(params: EmlpParams, X: ParticleConfig) -> ParticleConfig:
    """Pile équivariante appliquée à une configuration d×n, sortie d′×n"""
    out, _ = equivariant_stack_forward(params, X.values[None, :, :])
    return ParticleConfig(out[0])
