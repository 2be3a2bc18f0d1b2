"""
Permutation group machinery and brute-force (anti)symmetrization oracles

Conventions: documentation counts particles from 1 (x_1, ..., x_n) while every
array and ``Permutation.images`` is 0-based. ``Permutation.from_one_based`` and
``Permutation.one_based`` are the only crossing points.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence

import numpy as np

from src.core.config import settings, worker_count
from src.core.exceptions import OracleSizeError, ShapeMismatchError
from src.core.logging import get_logger

logger = get_logger(__name__)

ScalarFunction = Callable[["ParticleConfig"], float]

# orbites plus petites: évaluation séquentielle
PARALLEL_MIN_ORBIT = 24


@dataclass(frozen=True)
class Permutation:
    """Bijection de {0..n-1}; ``images[i]`` est π(i)"""

    images: tuple

    def __post_init__(self) -> None:
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"images {images} do not form a bijection on 0..{len(images) - 1}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        """Construit depuis la notation du papier, ex. (2, 3, 1)"""
        return cls(tuple(int(i) - 1 for i in images))

    @property
    def n(self) -> int:
        return len(self.images)

    def one_based(self) -> tuple:
        return tuple(i + 1 for i in self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def __str__(self) -> str:
        return "(" + ",".join(str(i) for i in self.one_based()) + ")"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p∘q)(i) = p(q(i)); apply(q, apply(p, X)) == apply(compose(p, q), X)"""
    if p.n != q.n:
        raise ShapeMismatchError(f"cannot compose permutations of sizes {p.n} and {q.n}")
    return Permutation(tuple(p.images[j] for j in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, image in enumerate(p.images):
        inv[image] = i
    return Permutation(tuple(inv))


def parity(p: Permutation) -> int:
    """Signe σ(π) par décomposition en cycles: (-1)^(n - #cycles)"""
    seen = [False] * p.n
    cycles = 0
    for start in range(p.n):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = p.images[i]
    return -1 if (p.n - cycles) % 2 else 1


def check_oracle_size(n: int, limit: Optional[int] = None) -> None:
    limit = settings.oracle.max_particles if limit is None else limit
    if n > limit:
        raise OracleSizeError(n, limit)


def enumerate_permutations(n: int) -> Iterator[Permutation]:
    """Toutes les permutations de S_n, une seule fois, en ordre lexicographique"""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    check_oracle_size(n)
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


class ParticleConfig:
    """Matrice d×n de coordonnées; la colonne i est la particule x_i"""

    __slots__ = ("_values",)

    def __init__(self, values: "np.ndarray | Sequence[Sequence[float]]"):
        array = np.array(values, dtype=np.float64)
        if array.ndim == 1:
            array = array.reshape(1, -1)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise ShapeMismatchError(f"expected a non-empty d×n matrix, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("particle coordinates must be finite")
        array.setflags(write=False)
        self._values = array

    @classmethod
    def from_particles(cls, particles: Sequence[Sequence[float]]) -> "ParticleConfig":
        """Une entrée par particule (vecteurs de longueur d)"""
        return cls(np.array(particles, dtype=np.float64).T)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def d(self) -> int:
        return self._values.shape[0]

    @property
    def n(self) -> int:
        return self._values.shape[1]

    def particle(self, i: int) -> np.ndarray:
        return self._values[:, i]

    def flat(self) -> np.ndarray:
        """Coordonnées dans l'ordre (particule, axe): index i·d + a"""
        return self._values.T.reshape(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParticleConfig):
            return NotImplemented
        return self._values.shape == other._values.shape and bool(np.array_equal(self._values, other._values))

    def __hash__(self) -> int:
        return hash((self._values.shape, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"ParticleConfig(d={self.d}, n={self.n}, values={self._values.tolist()})"


def apply(p: Permutation, X: ParticleConfig) -> ParticleConfig:
    """S_π: la colonne i du résultat est la colonne π(i) de X"""
    if p.n != X.n:
        raise ShapeMismatchError(f"permutation of size {p.n} applied to {X.n} particles")
    return ParticleConfig(X.values[:, list(p.images)])


def orbit_values(
    f: ScalarFunction,
    X: ParticleConfig,
    signed: bool = False,
    workers: Optional[int] = None,
) -> List[float]:
    """Valeurs σ(π)^signed · f(S_π X) dans l'ordre d'énumération

    ``workers=None`` prend EQUISYM_THREADS (``worker_count()``).
    """
    perms = list(enumerate_permutations(X.n))
    if workers is None:
        workers = worker_count()

    def term(p: Permutation) -> float:
        value = float(f(apply(p, X)))
        return parity(p) * value if signed else value

    if workers > 1 and len(perms) >= PARALLEL_MIN_ORBIT:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(term, perms))
    return [term(p) for p in perms]


def orbit_sum(f: ScalarFunction, X: ParticleConfig, signed: bool = False, workers: Optional[int] = None) -> float:
    """Σ_π (σ(π)) f(S_π X) sans normalisation; fsum rend la somme indépendante de l'ordre"""
    return math.fsum(orbit_values(f, X, signed=signed, workers=workers))


def symmetrize(f: ScalarFunction, X: ParticleConfig, workers: Optional[int] = None) -> float:
    """(1/n!) Σ_π f(S_π X)"""
    return orbit_sum(f, X, signed=False, workers=workers) / math.factorial(X.n)


def antisymmetrize(f: ScalarFunction, X: ParticleConfig, workers: Optional[int] = None) -> float:
    """(1/n!) Σ_π σ(π) f(S_π X)"""
    return orbit_sum(f, X, signed=True, workers=workers) / math.factorial(X.n)


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation(tuple(int(i) for i in rng.permutation(n)))


def transposition(n: int, i: int, j: int) -> Permutation:
    images = list(range(n))
    images[i], images[j] = images[j], images[i]
    return Permutation(tuple(images))
