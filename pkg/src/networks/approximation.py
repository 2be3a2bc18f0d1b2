"""
Symétrisation d'un approximant par moyenne sur S_n, et vérification de
l'inégalité ‖f - ḡ‖ ≤ ‖f - g‖ sur échantillons
"""

import math
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from src.core.config import settings
from src.symmetry.permutation import (
    ParticleConfig,
    apply,
    check_oracle_size,
    enumerate_permutations,
    inverse,
    orbit_sum,
)
from src.symmetry.polynomials import SparsePolynomial

Approximant = Union[Callable[[ParticleConfig], float], SparsePolynomial]


class SymmetryMode(str, Enum):
    SYMMETRIC = "symmetric"
    EQUIVARIANT = "equivariant"
    ANTISYMMETRIC = "antisymmetric"


def _as_callable(g: Approximant) -> Callable[[ParticleConfig], float]:
    if isinstance(g, SparsePolynomial):
        return g.evaluate
    return g


def symmetrize_approximant(
    g: Approximant,
    X: ParticleConfig,
    mode: "SymmetryMode | str" = SymmetryMode.SYMMETRIC,
    workers: Optional[int] = None,
) -> "float | ParticleConfig":
    """ḡ(X) = (1/n!) Σ_π ρ(π)^{-1} g(S_π X)

    SYMMETRIC: moyenne simple; ANTISYMMETRIC: moyenne pondérée par σ(π);
    EQUIVARIANT: g renvoie une matrice d′×n remise dans l'ordre par π^{-1}.
    """
    mode = SymmetryMode(mode)
    check_oracle_size(X.n, settings.oracle.max_poly_particles)
    if mode is SymmetryMode.EQUIVARIANT:
        total = None
        for p in enumerate_permutations(X.n):
            out = g(apply(p, X))
            values = out if isinstance(out, ParticleConfig) else ParticleConfig(np.asarray(out))
            back = apply(inverse(p), values).values
            total = back.copy() if total is None else total + back
        return ParticleConfig(total / math.factorial(X.n))
    signed = mode is SymmetryMode.ANTISYMMETRIC
    return orbit_sum(_as_callable(g), X, signed=signed, workers=workers) / math.factorial(X.n)


def orbit_closure(samples: Iterable[ParticleConfig]) -> List[ParticleConfig]:
    """Chaque point suivi de toutes ses permutations; le sup échantillonné devient exact"""
    closed = []
    for X in samples:
        closed.extend(apply(p, X) for p in enumerate_permutations(X.n))
    return closed


def _values(out: "float | ParticleConfig | np.ndarray") -> np.ndarray:
    return out.values if isinstance(out, ParticleConfig) else np.asarray(out, dtype=np.float64)


def _gap(a: "float | ParticleConfig | np.ndarray", b: "float | ParticleConfig | np.ndarray") -> float:
    return float(np.max(np.abs(_values(a) - _values(b))))


def sup_errors(
    f: Callable[[ParticleConfig], "float | ParticleConfig | np.ndarray"],
    g: Approximant,
    samples: Sequence[ParticleConfig],
    mode: "SymmetryMode | str" = SymmetryMode.SYMMETRIC,
    workers: Optional[int] = None,
) -> Dict[str, float]:
    """max |f - g| et max |f - ḡ| sur les mêmes points, maximum sur les composantes"""
    g_call = _as_callable(g)
    raw = max(_gap(f(X), g_call(X)) for X in samples)
    symmetrized = max(_gap(f(X), symmetrize_approximant(g_call, X, mode, workers=workers)) for X in samples)
    return {"sup_f_minus_g": raw, "sup_f_minus_gbar": symmetrized}
