"""
Têtes appliquées à la sortie équivariante Y (d′×n): pooling symétrique,
produit de Vandermonde et déterminant de Slater généralisé
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np
import scipy.linalg

from src.core.exceptions import HeadSpecError
from src.core.logging import get_logger
from src.symmetry.antisym import lu_determinant
from src.symmetry.polynomials import vandermonde_value

logger = get_logger(__name__)

# Au-delà, le gradient du déterminant ne passe plus par Φ^{-T}
SINGULAR_CONDITION = 1e12
COFACTOR_MAX_N = 4
REGULARIZATION = 1e-10


class HeadKind(str, Enum):
    MEAN_POOL = "mean_pool"
    MAX_POOL = "max_pool"
    VANDERMONDE_PRODUCT = "vandermonde_product"
    GSD_HEAD = "gsd_head"


@dataclass(frozen=True)
class HeadSpec:
    kind: HeadKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", HeadKind(self.kind))

    @property
    def antisymmetric(self) -> bool:
        return self.kind in (HeadKind.VANDERMONDE_PRODUCT, HeadKind.GSD_HEAD)

    def validate(self, d: int, d_out: int, n: int) -> None:
        """Vérifie les contraintes de la tête pour une entrée d×n et une sortie d′×n"""
        if self.kind is HeadKind.VANDERMONDE_PRODUCT and (d != 1 or d_out != 1):
            raise HeadSpecError(f"VandermondeProduct needs d = 1 and d′ = 1, got d={d}, d′={d_out}")
        if self.kind is HeadKind.GSD_HEAD and d_out != n:
            raise HeadSpecError(f"GsdHead needs d′ = n, got d′={d_out}, n={n}")

    def output_size(self, d_out: int) -> int:
        if self.kind in (HeadKind.MEAN_POOL, HeadKind.MAX_POOL):
            return d_out
        return 1


def head_apply(spec: HeadSpec, Y: np.ndarray, X: np.ndarray) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Y: (B, d′, n), X: (B, d, n) -> (B, k)"""
    B, d_out, n = Y.shape
    spec.validate(X.shape[1], d_out, n)
    cache: Dict[str, Any] = {"shape": Y.shape}

    if spec.kind is HeadKind.MEAN_POOL:
        return Y.mean(axis=2), cache

    if spec.kind is HeadKind.MAX_POOL:
        winners = Y.argmax(axis=2)
        cache["winners"] = winners
        return np.take_along_axis(Y, winners[:, :, None], axis=2)[:, :, 0], cache

    if spec.kind is HeadKind.VANDERMONDE_PRODUCT:
        pooled = Y[:, 0, :].mean(axis=1)
        delta = np.array([vandermonde_value(X[b, 0, :]) for b in range(B)])
        cache["delta"] = delta
        return (pooled * delta)[:, None], cache

    # GsdHead: Φ[j, i] = Y[i, j]
    phis = np.transpose(Y, (0, 2, 1))
    dets = np.empty(B)
    factors = []
    for b in range(B):
        dets[b], factor = lu_determinant(phis[b])
        factors.append(factor)
    cache.update(phis=phis, dets=dets, factors=factors)
    return dets[:, None], cache


def cofactor_matrix(phi: np.ndarray) -> np.ndarray:
    """C[j, i] = (-1)^{i+j} det(Φ sans ligne j ni colonne i) = ∂det/∂Φ[j, i]"""
    n = phi.shape[0]
    if n == 1:
        return np.ones((1, 1))
    cof = np.empty_like(phi)
    for j in range(n):
        for i in range(n):
            minor = np.delete(np.delete(phi, j, axis=0), i, axis=1)
            cof[j, i] = (-1.0) ** (i + j) * lu_determinant(minor)[0]
    return cof


def determinant_gradient(phi: np.ndarray, det: float, factor: Any) -> np.ndarray:
    """∂det/∂Φ = det(Φ)·Φ^{-T}, en réutilisant la factorisation LU"""
    n = phi.shape[0]
    condition = float(np.linalg.cond(phi))
    if condition <= SINGULAR_CONDITION and factor is not None:
        inv_t = scipy.linalg.lu_solve(factor, np.eye(n), trans=1, check_finite=False)
        return det * inv_t
    if n <= COFACTOR_MAX_N:
        logger.debug("gsd_cofactor_gradient", n=n, condition=condition)
        return cofactor_matrix(phi)
    logger.warning("gsd_regularized_solve", n=n, condition=condition)
    scale = max(1.0, float(np.max(np.abs(phi))))
    regularized = phi.T + REGULARIZATION * scale * np.eye(n)
    return det * np.linalg.solve(regularized, np.eye(n))


def head_backward(spec: HeadSpec, cache: Dict[str, Any], grad_out: np.ndarray) -> np.ndarray:
    """grad_out: (B, k) -> ∂L/∂Y de forme (B, d′, n)"""
    B, d_out, n = cache["shape"]

    if spec.kind is HeadKind.MEAN_POOL:
        return np.repeat(grad_out[:, :, None] / n, n, axis=2)

    if spec.kind is HeadKind.MAX_POOL:
        grad = np.zeros((B, d_out, n))
        np.put_along_axis(grad, cache["winners"][:, :, None], grad_out[:, :, None], axis=2)
        return grad

    if spec.kind is HeadKind.VANDERMONDE_PRODUCT:
        scale = grad_out[:, 0] * cache["delta"] / n
        return np.repeat(scale[:, None, None], n, axis=2)

    grad = np.empty((B, d_out, n))
    for b in range(B):
        grad_phi = determinant_gradient(cache["phis"][b], cache["dets"][b], cache["factors"][b])
        grad[b] = grad_out[b, 0] * grad_phi.T
    return grad
