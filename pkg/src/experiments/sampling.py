"""
Tirages aléatoires reproductibles: configurations, polynômes symétriques et anti-symétriques
"""

from typing import List

import numpy as np

from src.symmetry.permutation import ParticleConfig
from src.symmetry.polynomials import SparsePolynomial, symmetrize_poly, vandermonde_poly


def uniform_configs(rng: np.random.Generator, n: int, d: int, box: float, count: int) -> List[ParticleConfig]:
    """``count`` configurations uniformes sur [-box, box]^{d·n}"""
    return [ParticleConfig(rng.uniform(-box, box, size=(d, n))) for _ in range(count)]


def separated_configs(
    rng: np.random.Generator, n: int, box: float, count: int, min_gap: float = 0.1
) -> List[ParticleConfig]:
    """Configurations d = 1 dont les écarts deux à deux valent au moins ``min_gap``"""
    if (n - 1) * min_gap > 2 * box:
        raise ValueError(f"cannot place {n} particles {min_gap} apart in [-{box}, {box}]")
    configs = []
    while len(configs) < count:
        x = rng.uniform(-box, box, size=n)
        gaps = np.diff(np.sort(x))
        if gaps.size == 0 or gaps.min() >= min_gap:
            configs.append(ParticleConfig(x.reshape(1, -1)))
    return configs


def random_symmetric_poly(rng: np.random.Generator, n: int, degree: int, terms: int = 4) -> SparsePolynomial:
    """Symétrisé d'une combinaison aléatoire de monômes de degré ≤ ``degree`` (d = 1)"""
    p = SparsePolynomial.constant(float(rng.uniform(-1.0, 1.0)), n)
    for _ in range(terms):
        total = int(rng.integers(1, degree + 1)) if degree >= 1 else 0
        exponents = np.zeros(n, dtype=int)
        for _ in range(total):
            exponents[int(rng.integers(0, n))] += 1
        p = p + SparsePolynomial.monomial(tuple(int(e) for e in exponents), float(rng.uniform(-1.0, 1.0)), n=n)
    return symmetrize_poly(p)


def random_antisymmetric_poly(rng: np.random.Generator, n: int, degree: int, terms: int = 4) -> SparsePolynomial:
    """ψ = Δ·(polynôme symétrique aléatoire): anti-symétrique par construction"""
    return vandermonde_poly(n) * random_symmetric_poly(rng, n, degree, terms)
