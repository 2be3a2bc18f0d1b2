"""
Symmetric basis families and the Newton-identity conversion

Every family shares one descriptor type. Multi-indices over the d axes are in
graded lexicographic order, lowest total degree first, so that d = 1 gives
exactly (x, x², ..., xⁿ).
"""

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import scipy.linalg

from src.core.config import settings
from src.core.exceptions import BasisFamilyError, OracleSizeError, ShapeMismatchError, UnsupportedDimensionError
from src.core.logging import get_logger

from .permutation import ParticleConfig, orbit_sum

logger = get_logger(__name__)

MultiIndex = Tuple[int, ...]


class BasisFamily(str, Enum):
    """Familles de bases symétriques disponibles"""
    POLARIZED_POWER = "polarized_power"
    ELEMENTARY_SYMMETRIC = "elementary_symmetric"
    SORTING = "sorting"
    SYMMETRIZED_MONOMIAL = "symmetrized_monomial"


def graded_multi_indices(d: int, max_degree: int, min_degree: int = 1) -> List[MultiIndex]:
    """Multi-indices p ∈ ℕ₀^d avec min_degree ≤ |p| ≤ max_degree, degré croissant puis lex décroissant"""
    indices: List[MultiIndex] = []
    for degree in range(min_degree, max_degree + 1):
        level = [p for p in itertools.product(range(degree + 1), repeat=d) if sum(p) == degree]
        indices.extend(sorted(level, reverse=True))
    return indices


def _monomial_orbit_representatives(n: int, d: int, max_degree: int) -> List[MultiIndex]:
    """Un représentant trié par orbite de vecteurs d'exposants, 1 ≤ |b| ≤ D"""
    per_particle = graded_multi_indices(d, max_degree, min_degree=0)
    reps = set()
    for combo in itertools.combinations_with_replacement(per_particle, n):
        total = sum(sum(p) for p in combo)
        if 1 <= total <= max_degree:
            ordered = sorted(combo, key=lambda p: (sum(p), p), reverse=True)
            reps.add(tuple(e for p in ordered for e in p))
    return sorted(reps, key=lambda k: (sum(k), tuple(-e for e in k)))


@dataclass(frozen=True)
class BasisDescriptor:
    """Famille de base, tailles et ensemble d'indices"""

    family: BasisFamily
    n: int
    d: int = 1
    degree: Optional[int] = None
    index_set: Tuple[MultiIndex, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, family: "BasisFamily | str", n: int, d: int = 1, degree: Optional[int] = None) -> "BasisDescriptor":
        family = BasisFamily(family)
        if n < 1 or d < 1:
            raise ValueError(f"n and d must be >= 1, got n={n}, d={d}")
        if family in (BasisFamily.POLARIZED_POWER, BasisFamily.ELEMENTARY_SYMMETRIC):
            index_set = graded_multi_indices(d, n)
        elif family is BasisFamily.SORTING:
            if d != 1:
                raise UnsupportedDimensionError("the sorting basis is only continuous for d = 1")
            index_set = [(b,) for b in range(1, n + 1)]
        else:
            if degree is None or degree < 1:
                raise ValueError("the symmetrized monomial basis needs a degree cap D >= 1")
            if n > settings.oracle.max_poly_particles:
                raise OracleSizeError(n, settings.oracle.max_poly_particles)
            index_set = _monomial_orbit_representatives(n, d, degree)
        return cls(family=family, n=n, d=d, degree=degree, index_set=tuple(index_set))

    @property
    def m(self) -> int:
        return len(self.index_set)

    def labels(self) -> List[str]:
        return ["p=" + ",".join(str(e) for e in p) for p in self.index_set]

    def exponent_matrix(self) -> np.ndarray:
        """Exposants sous forme (m, d)"""
        return np.array(self.index_set, dtype=np.int64).reshape(self.m, -1)

    def _require(self, *families: BasisFamily) -> None:
        if self.family not in families:
            raise BasisFamilyError(
                f"operation needs family {[f.value for f in families]}, descriptor is {self.family.value}"
            )

    def _check_config(self, X: ParticleConfig) -> None:
        if (X.n, X.d) != (self.n, self.d):
            raise ShapeMismatchError(
                f"descriptor is for n={self.n}, d={self.d}; configuration has n={X.n}, d={X.d}"
            )


def expected_count(n: int, d: int) -> int:
    """m = C(n+d, d) - 1"""
    return math.comb(n + d, d) - 1


def _monomials(exponents: np.ndarray, points: np.ndarray) -> np.ndarray:
    """points (d, k) -> valeurs (k, m) de Π_a x_a^{p_a}"""
    return np.prod(points.T[:, None, :] ** exponents[None, :, :], axis=2)


def eta(desc: BasisDescriptor, x: Sequence[float]) -> np.ndarray:
    """Gabarit polarisé η(x) = (x^p)_{p ∈ index_set} pour une seule particule"""
    desc._require(BasisFamily.POLARIZED_POWER)
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    if point.size != desc.d:
        raise ShapeMismatchError(f"particle has {point.size} coordinates, descriptor expects d={desc.d}")
    return _monomials(desc.exponent_matrix(), point.reshape(-1, 1))[0]


def polarized_basis(desc: BasisDescriptor, X: ParticleConfig) -> np.ndarray:
    """β(X) = Σ_i η(x_i), en O(m·n·d)"""
    desc._require(BasisFamily.POLARIZED_POWER)
    desc._check_config(X)
    return _monomials(desc.exponent_matrix(), X.values).sum(axis=0)


def all_but_one_basis(desc: BasisDescriptor, X: ParticleConfig) -> np.ndarray:
    """Matrice (m, n) dont la colonne i vaut Σ_{j≠i} η(x_j)

    Le descripteur doit être construit pour n-1 particules (degré ≤ n-1), la
    configuration en contient n.
    """
    desc._require(BasisFamily.POLARIZED_POWER)
    if (desc.n, desc.d) != (X.n - 1, X.d):
        raise ShapeMismatchError(
            f"all-but-one basis needs a descriptor for n-1={X.n - 1}, d={X.d}; got n={desc.n}, d={desc.d}"
        )
    per_particle = _monomials(desc.exponent_matrix(), X.values)
    return (per_particle.sum(axis=0)[None, :] - per_particle).T


def generating_coefficients(X: ParticleConfig, max_degree: Optional[int] = None) -> Dict[MultiIndex, float]:
    """Coefficients de Π_i (1 + Σ_a λ_a x_{a,i}) tronqués au degré total n

    Dictionnaire creux exposants -> coefficient, au plus C(n+d, d) entrées.
    """
    n, d = X.n, X.d
    top = n if max_degree is None else max_degree
    coeffs: Dict[MultiIndex, float] = {(0,) * d: 1.0}
    for i in range(n):
        column = X.values[:, i]
        updated = dict(coeffs)
        for exponents, value in coeffs.items():
            if sum(exponents) >= top:
                continue
            for a in range(d):
                key = exponents[:a] + (exponents[a] + 1,) + exponents[a + 1:]
                updated[key] = updated.get(key, 0.0) + float(column[a]) * value
        coeffs = updated
    return coeffs


def elementary_symmetric(desc: BasisDescriptor, X: ParticleConfig) -> np.ndarray:
    """e_p(X) lus dans le développement du produit générateur"""
    desc._require(BasisFamily.ELEMENTARY_SYMMETRIC)
    desc._check_config(X)
    coeffs = generating_coefficients(X)
    return np.array([coeffs.get(p, 0.0) for p in desc.index_set], dtype=np.float64)


def newton_e_from_p(p: Sequence[float]) -> np.ndarray:
    """Identités de Newton: k·e_k = Σ_{j=1}^{k} (-1)^{j-1} e_{k-j} p_j, e_0 = 1 (d = 1)"""
    power_sums = np.asarray(p, dtype=np.float64).reshape(-1)
    n = power_sums.size
    e = np.zeros(n + 1, dtype=np.float64)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0
        for j in range(1, k + 1):
            sign = 1.0 if j % 2 == 1 else -1.0
            acc += sign * e[k - j] * power_sums[j - 1]
        e[k] = acc / k
    return e[1:]


def sorting_basis(X: ParticleConfig) -> np.ndarray:
    """Statistiques d'ordre x_[1] ≤ ... ≤ x_[n] (d = 1)"""
    if X.d != 1:
        raise UnsupportedDimensionError("sorting particles with d > 1 leads to discontinuous functions")
    return np.sort(X.values[0], kind="stable")


def symmetrized_monomial_basis(desc: BasisDescriptor, X: ParticleConfig) -> np.ndarray:
    """β_b(X) = Σ_π Π_i x_{π(i)}^{b_i}, somme non normalisée"""
    desc._require(BasisFamily.SYMMETRIZED_MONOMIAL)
    desc._check_config(X)
    d = desc.d
    values = []
    for b in desc.index_set:
        exponents = np.array(b, dtype=np.int64).reshape(desc.n, d)

        def monomial(Y: ParticleConfig, exponents: np.ndarray = exponents) -> float:
            return float(np.prod(Y.values.T ** exponents))

        values.append(orbit_sum(monomial, X))
    return np.array(values, dtype=np.float64)


def basis_vector(desc: BasisDescriptor, X: ParticleConfig) -> np.ndarray:
    """Dispatch sur la famille du descripteur"""
    if desc.family is BasisFamily.POLARIZED_POWER:
        return polarized_basis(desc, X)
    if desc.family is BasisFamily.ELEMENTARY_SYMMETRIC:
        return elementary_symmetric(desc, X)
    if desc.family is BasisFamily.SORTING:
        desc._check_config(X)
        return sorting_basis(X)
    return symmetrized_monomial_basis(desc, X)


def write_basis_table(
    desc: BasisDescriptor,
    samples: Iterable[ParticleConfig],
    destination: Union[str, Path, TextIO],
) -> None:
    """CSV: en-tête = libellés des indices, une ligne par configuration"""

    def _write(stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(desc.labels())
        for X in samples:
            writer.writerow([repr(float(v)) for v in basis_vector(desc, X)])

    if isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8", newline="") as stream:
            _write(stream)
    else:
        _write(destination)


def basis_table_csv(desc: BasisDescriptor, samples: Iterable[ParticleConfig]) -> str:
    buffer = io.StringIO()
    write_basis_table(desc, samples, buffer)
    return buffer.getvalue()


class OuterHead(str, Enum):
    POLYNOMIAL = "polynomial"
    MLP = "mlp"


@dataclass
class OuterFit:
    """Fonction externe g ajustée: ϕ(X) ≈ g(β(X))"""

    head: OuterHead
    degree: int
    exponents: np.ndarray
    coefficients: np.ndarray
    scale: np.ndarray
    rank: int
    condition_number: float
    residual: float
    network: Optional[object] = None

    def predict(self, betas: np.ndarray) -> np.ndarray:
        betas = np.atleast_2d(np.asarray(betas, dtype=np.float64))
        if self.head is OuterHead.MLP:
            from src.networks.models import MlpModel

            assert isinstance(self.network, MlpModel)
            return self.network.predict(betas)[:, 0]
        features = _polynomial_features(betas, self.exponents) / self.scale
        return features @ self.coefficients


def _polynomial_features(betas: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    return np.prod(betas[:, None, :] ** exponents[None, :, :], axis=2)


def fit_outer(
    betas: np.ndarray,
    targets: np.ndarray,
    degree: int = 2,
    head: "OuterHead | str" = OuterHead.POLYNOMIAL,
    rcond: float = 1e-10,
    training: Optional[object] = None,
    seed: int = 0,
) -> OuterFit:
    """Ajuste g: β(X) -> ϕ(X) par moindres carrés polynomiaux ou par un MLP"""
    head = OuterHead(head)
    betas = np.atleast_2d(np.asarray(betas, dtype=np.float64))
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if betas.shape[0] != targets.size:
        raise ShapeMismatchError(f"{betas.shape[0]} basis vectors for {targets.size} targets")
    m = betas.shape[1]

    if head is OuterHead.MLP:
        from src.networks.models import MlpModel
        from src.networks.training import TrainingConfig, train

        model = MlpModel.initialize([m, 64, 64, 1], activation="tanh", seed=seed)
        config = training if training is not None else TrainingConfig(seed=seed)
        outcome = train(model, betas, targets, config)
        residual = float(np.max(np.abs(model.predict(betas)[:, 0] - targets)))
        logger.debug(
            "outer_fit_done",
            head=head.value,
            epochs_run=len(outcome.losses),
            final_loss=outcome.final_loss,
            residual=residual,
        )
        return OuterFit(head, degree, np.zeros((0, m)), np.zeros(0), np.ones(0), 0, float("nan"), residual, network=model)

    exponents = np.array(graded_multi_indices(m, degree, min_degree=0), dtype=np.int64).reshape(-1, m)
    if betas.shape[0] < exponents.shape[0]:
        raise ShapeMismatchError(
            f"{betas.shape[0]} samples cannot determine {exponents.shape[0]} coefficients"
        )
    features = _polynomial_features(betas, exponents)
    scale = np.linalg.norm(features, axis=0)
    scale[scale == 0.0] = 1.0
    coefficients, _, rank, singular = scipy.linalg.lstsq(
        features / scale, targets, cond=rcond, lapack_driver="gelsd"
    )
    smallest = singular[-1] if singular.size else 0.0
    condition = float(singular[0] / smallest) if smallest > 0 else float("inf")
    if rank < exponents.shape[0]:
        logger.warning(
            "outer_fit_rank_deficient",
            rank=int(rank),
            unknowns=int(exponents.shape[0]),
            condition_number=condition,
        )
    fit = OuterFit(head, degree, exponents, coefficients, scale, int(rank), condition, 0.0)
    fit.residual = float(np.max(np.abs(fit.predict(betas) - targets)))
    logger.debug("outer_fit_done", degree=degree, rank=int(rank), residual=fit.residual)
    return fit
