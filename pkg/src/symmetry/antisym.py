"""
Anti-symmetric representations: Vandermonde division and generalized Slater determinants
"""

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from src.core.config import settings
from src.core.exceptions import NotAntisymmetricError, ShapeMismatchError, UnsupportedDimensionError
from src.core.logging import get_logger

from .permutation import ParticleConfig, Permutation, apply, parity, random_permutation
from .polynomials import SparsePolynomial, divide_exact, is_antisymmetric, vandermonde_value

logger = get_logger(__name__)


class AsKind(str, Enum):
    ORACLE_POLY = "oracle_poly"
    CALLABLE = "callable"


class SignMode(str, Enum):
    """Répartition de ψ sur la diagonale permutée"""
    NTH_ROOT = "nth_root"
    FIRST_COLUMN = "first_column"


@dataclass
class AsFunction:
    """Fonction anti-symétrique ψ, polynôme exact ou évaluateur opaque"""

    kind: AsKind
    payload: Union[SparsePolynomial, Callable[[ParticleConfig], float]]
    n: int
    d: int = 1
    _chi: Optional[SparsePolynomial] = field(default=None, init=False, repr=False)

    @classmethod
    def from_polynomial(cls, psi: SparsePolynomial, check: bool = True, seed: int = 0) -> "AsFunction":
        fn = cls(AsKind.ORACLE_POLY, psi, psi.n, psi.d)
        if check:
            fn.spot_check(seed=seed)
        return fn

    @classmethod
    def from_callable(
        cls,
        psi: Callable[[ParticleConfig], float],
        n: int,
        d: int = 1,
        check: bool = True,
        seed: int = 0,
    ) -> "AsFunction":
        fn = cls(AsKind.CALLABLE, psi, n, d)
        if check:
            fn.spot_check(seed=seed)
        return fn

    def __call__(self, X: ParticleConfig) -> float:
        if (X.n, X.d) != (self.n, self.d):
            raise ShapeMismatchError(f"ψ is defined for n={self.n}, d={self.d}; got n={X.n}, d={X.d}")
        if self.kind is AsKind.ORACLE_POLY:
            return self.payload.evaluate(X)
        value = float(self.payload(X))
        if math.isnan(value):
            raise ValueError("ψ evaluated to NaN")
        return value

    def spot_check(self, trials: int = 20, rtol: Optional[float] = None, seed: int = 0) -> None:
        """ψ(S_π X) = σ(π)·ψ(X) sur des paires (π, X) aléatoires"""
        rtol = settings.tolerances.as_spot_check_rtol if rtol is None else rtol
        rng = np.random.default_rng(seed)
        for trial in range(trials):
            X = ParticleConfig(rng.uniform(-1.0, 1.0, size=(self.d, self.n)))
            p = random_permutation(self.n, rng)
            base = self(X)
            moved = self(apply(p, X))
            if abs(moved - parity(p) * base) > rtol * max(1.0, abs(base)):
                raise NotAntisymmetricError(
                    f"ψ(S_π X) != σ(π)ψ(X) for π={p} (trial {trial}): {moved} vs {parity(p) * base}"
                )

    def chi_polynomial(self) -> SparsePolynomial:
        if self.kind is not AsKind.ORACLE_POLY:
            raise TypeError("χ polynomial only exists for polynomial ψ")
        if self._chi is None:
            self._chi = chi_from_psi_poly(self.payload)
        return self._chi


@dataclass(frozen=True)
class GsdMatrix:
    """Φ[j, i] = φ_i(x_j | x_{≠j})"""

    entries: np.ndarray
    sorting: Optional[Permutation] = None

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeMismatchError(f"GSD matrix must be square, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def det(self) -> float:
        return slater_det(self)


def _pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def chi_from_psi_poly(psi: SparsePolynomial, atol: Optional[float] = None) -> SparsePolynomial:
    """χ = ψ/Δ par divisions exactes successives, paires (1,2), (1,3), ...

    ``atol`` absorbe les résidus d'arrondi des coefficients flottants; par défaut
    1e-10 relatif au plus grand coefficient de ψ.
    """
    if psi.d != 1:
        raise UnsupportedDimensionError("Vandermonde division is only defined for d = 1")
    scale = max(1.0, psi.max_abs_coefficient())
    if atol is None:
        atol = 1e-10 * scale
    if not is_antisymmetric(psi, atol=max(atol, 1e-12 * math.factorial(psi.n) * scale)):
        raise NotAntisymmetricError("ψ is not anti-symmetric")
    chi = psi
    for i, j in _pairs(psi.n):
        chi = divide_exact(chi, i, j, atol=atol)
    logger.debug("chi_from_psi_poly", n=psi.n, psi_terms=len(psi), chi_terms=len(chi))
    return chi


def coincidence_tolerance(X: ParticleConfig) -> float:
    """τ = 1e-6·(1 + ‖X‖_∞)"""
    return 1e-6 * (1.0 + float(np.max(np.abs(X.values))))


def chi_from_psi_numeric(psi: Callable[[ParticleConfig], float], X: ParticleConfig) -> float:
    """Division récursive par paire; dérivée centrale ∂/∂x_j si |x_j - x_i| < τ

    L'orientation suit Δ = Π_{i<j}(x_j - x_i): la valeur limite est
    ∂ψ_A/∂x_j évaluée en x_j = x_i.
    """
    if X.d != 1:
        raise UnsupportedDimensionError("Vandermonde division is only defined for d = 1")
    tau = coincidence_tolerance(X)
    h = tau

    def evaluate(x: np.ndarray) -> float:
        value = float(psi(ParticleConfig(x.reshape(1, -1))))
        if math.isnan(value):
            raise ValueError("ψ evaluated to NaN")
        return value

    level: Callable[[np.ndarray], float] = evaluate
    for i, j in _pairs(X.n):
        level = _divide_level(level, i, j, tau, h)
    return level(X.values[0].copy())


def _divide_level(
    previous: Callable[[np.ndarray], float], i: int, j: int, tau: float, h: float
) -> Callable[[np.ndarray], float]:
    def divided(x: np.ndarray) -> float:
        gap = x[j] - x[i]
        if abs(gap) >= tau:
            return previous(x) / gap
        plus = x.copy()
        minus = x.copy()
        plus[j] = x[i] + h
        minus[j] = x[i] - h
        return (previous(plus) - previous(minus)) / (2.0 * h)

    return divided


def gsd_build_1d(psi: AsFunction, X: ParticleConfig) -> GsdMatrix:
    """Colonne 1 = χ(X), colonne i = x_j^{i-1}; det = χ·Δ = ψ"""
    if X.d != 1 or psi.d != 1:
        raise UnsupportedDimensionError("gsd_build_1d requires d = 1")
    if X.n != psi.n:
        raise ShapeMismatchError(f"ψ has n={psi.n}, configuration has n={X.n}")
    if psi.kind is AsKind.ORACLE_POLY:
        chi = psi.chi_polynomial().evaluate(X)
    else:
        chi = chi_from_psi_numeric(psi, X)
    x = X.values[0]
    entries = np.vander(x, N=X.n, increasing=True)
    entries[:, 0] = chi
    return GsdMatrix(entries)


def lex_sort_perm(X: ParticleConfig) -> Permutation:
    """π̄ avec x_{π̄(1)} ≤ ... ≤ x_{π̄(n)} en ordre lexicographique, stable"""
    # np.lexsort trie sur la dernière clé en premier
    order = np.lexsort(X.values[::-1])
    return Permutation(tuple(int(i) for i in order))


def gsd_build_nd(psi: AsFunction, X: ParticleConfig, sign_mode: "SignMode | str" = SignMode.FIRST_COLUMN) -> GsdMatrix:
    """Matrice diagonale permutée: Φ[π̄(i), i] ≠ 0 seulement"""
    sign_mode = SignMode(sign_mode)
    if X.n != psi.n or X.d != psi.d:
        raise ShapeMismatchError(f"ψ has n={psi.n}, d={psi.d}; configuration has n={X.n}, d={X.d}")
    n = X.n
    pi_bar = lex_sort_perm(X)
    value = psi(apply(pi_bar, X))
    if sign_mode is SignMode.FIRST_COLUMN:
        diagonal = np.ones(n)
        diagonal[0] = value
    else:
        diagonal = np.full(n, abs(value) ** (1.0 / n))
        diagonal[0] *= np.sign(value)
    entries = np.zeros((n, n))
    for i in range(n):
        entries[pi_bar(i), i] = diagonal[i]
    return GsdMatrix(entries, sorting=pi_bar)


def lu_determinant(entries: np.ndarray) -> Tuple[float, Optional[Tuple[np.ndarray, np.ndarray]]]:
    """Déterminant par LU avec pivot partiel; renvoie aussi la factorisation"""
    n = entries.shape[0]
    if n == 0:
        return 1.0, None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(entries, check_finite=False)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    sign = -1.0 if swaps % 2 else 1.0
    return float(sign * np.prod(np.diag(lu))), (lu, piv)


def slater_det(M: "GsdMatrix | np.ndarray") -> float:
    """det Φ; une matrice singulière donne 0"""
    entries = M.entries if isinstance(M, GsdMatrix) else np.asarray(M, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ShapeMismatchError(f"determinant of non-square matrix {entries.shape}")
    value, _ = lu_determinant(entries)
    return value


def n2_continuous_gsd(psi: AsFunction, X: ParticleConfig) -> GsdMatrix:
    """Φ = [[ψ(x₁,x₂), ½], [ψ(x₂,x₁), ½]], det = ½ψ(x₁,x₂) - ½ψ(x₂,x₁) = ψ(X)"""
    if X.n != 2:
        raise UnsupportedDimensionError("the continuous GSD construction is only known for n = 2")
    swapped = apply(Permutation((1, 0)), X)
    entries = np.array([[psi(X), 0.5], [psi(swapped), 0.5]])
    return GsdMatrix(entries)


def continuity_jump(
    build: Callable[[ParticleConfig], GsdMatrix],
    X: ParticleConfig,
    particle: int,
    axis: int,
    epsilon: float = 1e-7,
) -> Dict[str, float]:
    """Saut maximal des entrées de Φ quand une coordonnée bouge de ±ε (rapporté, jamais vérifié)"""
    plus = X.values.copy()
    minus = X.values.copy()
    plus[axis, particle] += epsilon
    minus[axis, particle] -= epsilon
    jump = np.abs(build(ParticleConfig(plus)).entries - build(ParticleConfig(minus)).entries)
    return {"max_entry_jump": float(np.max(jump)), "epsilon": epsilon}


def vandermonde_determinant(X: ParticleConfig) -> float:
    """Δ(X) pour d = 1"""
    if X.d != 1:
        raise UnsupportedDimensionError("the Vandermonde factor is only defined for d = 1")
    return vandermonde_value(X.values[0])
