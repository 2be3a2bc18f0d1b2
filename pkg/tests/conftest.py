"""
Fixtures partagées des tests
"""

import numpy as np
import pytest

from src.core.logging import setup_logging
from src.experiments.sampling import random_antisymmetric_poly
from src.symmetry.permutation import ParticleConfig


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    setup_logging("WARNING")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_config(rng):
    """Fabrique de configurations uniformes sur [-1, 1]"""

    def make(n: int, d: int = 1, box: float = 1.0) -> ParticleConfig:
        return ParticleConfig(rng.uniform(-box, box, size=(d, n)))

    return make


@pytest.fixture
def random_as_poly(rng):
    """Fabrique de polynômes anti-symétriques Δ·(symétrique aléatoire), d = 1"""

    def make(n: int, degree: int = 2):
        return random_antisymmetric_poly(rng, n, degree)

    return make
