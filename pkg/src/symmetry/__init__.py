"""
Représentations exactes des fonctions (anti)symétriques
"""

from .permutation import (
    ParticleConfig,
    Permutation,
    antisymmetrize,
    apply,
    compose,
    enumerate_permutations,
    inverse,
    parity,
    symmetrize,
)
from .polynomials import SparsePolynomial, vandermonde_poly
from .bases import BasisDescriptor, BasisFamily
from .antisym import AsFunction, GsdMatrix, SignMode, slater_det

__all__ = [
    "ParticleConfig",
    "Permutation",
    "antisymmetrize",
    "apply",
    "compose",
    "enumerate_permutations",
    "inverse",
    "parity",
    "symmetrize",
    "SparsePolynomial",
    "vandermonde_poly",
    "BasisDescriptor",
    "BasisFamily",
    "AsFunction",
    "GsdMatrix",
    "SignMode",
    "slater_det",
]
