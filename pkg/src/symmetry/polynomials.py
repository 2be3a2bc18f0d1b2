"""
Sparse multivariate polynomials over the n·d particle coordinates

Variable k corresponds to particle k // d and axis k % d, so a multi-index is
laid out particle block by particle block.
"""

import math
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import DivisibilityError, OracleSizeError, ShapeMismatchError
from src.core.logging import get_logger

from .permutation import ParticleConfig, enumerate_permutations, parity

logger = get_logger(__name__)

MultiIndex = Tuple[int, ...]


def _power(base: float, exponent: int) -> float:
    """Exponentiation par carrés"""
    result = 1.0
    while exponent:
        if exponent & 1:
            result *= base
        base *= base
        exponent >>= 1
    return result


class SparsePolynomial:
    """Polynôme creux en forme canonique (aucun coefficient nul stocké)"""

    __slots__ = ("_terms", "n", "d")

    def __init__(self, terms: Optional[Mapping[Sequence[int], float]] = None, n: int = 1, d: int = 1):
        if n < 1 or d < 1:
            raise ValueError(f"n and d must be >= 1, got n={n}, d={d}")
        self.n = n
        self.d = d
        canonical: Dict[MultiIndex, float] = {}
        for exponents, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exponents)
            if len(key) != n * d:
                raise ShapeMismatchError(f"multi-index {key} has length {len(key)}, expected {n * d}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            canonical[key] = canonical.get(key, 0.0) + float(coeff)
        self._terms = {k: c for k, c in canonical.items() if c != 0.0}

    # -- constructeurs -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, d: int = 1) -> "SparsePolynomial":
        return cls({}, n, d)

    @classmethod
    def constant(cls, value: float, n: int, d: int = 1) -> "SparsePolynomial":
        return cls({(0,) * (n * d): value}, n, d)

    @classmethod
    def variable(cls, index: int, n: int, d: int = 1) -> "SparsePolynomial":
        """Coordonnée scalaire numéro ``index`` (0-based, ordre particule·d + axe)"""
        exponents = [0] * (n * d)
        exponents[index] = 1
        return cls({tuple(exponents): 1.0}, n, d)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: float = 1.0, n: Optional[int] = None, d: int = 1) -> "SparsePolynomial":
        n = len(exponents) // d if n is None else n
        return cls({tuple(exponents): coeff}, n, d)

    # -- accès ---------------------------------------------------------------

    @property
    def arity(self) -> int:
        return self.n * self.d

    @property
    def terms(self) -> Dict[MultiIndex, float]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[MultiIndex, float]]:
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self._terms), default=0)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # -- arithmétique -------------------------------------------------------

    def _check_compatible(self, other: "SparsePolynomial") -> None:
        if (self.n, self.d) != (other.n, other.d):
            raise ShapeMismatchError(
                f"arity mismatch: (n={self.n}, d={self.d}) vs (n={other.n}, d={other.d})"
            )

    def _coerce(self, other: object) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            self._check_compatible(other)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return SparsePolynomial.constant(float(other), self.n, self.d)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other: object) -> "SparsePolynomial":
        other = self._coerce(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return SparsePolynomial(terms, self.n, self.d)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        return self.scale(-1.0)

    def __sub__(self, other: object) -> "SparsePolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "SparsePolynomial":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "SparsePolynomial":
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        other = self._coerce(other)
        terms: Dict[MultiIndex, float] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                terms[key] = terms.get(key, 0.0) + c1 * c2
        return SparsePolynomial(terms, self.n, self.d)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "SparsePolynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePolynomial.constant(1.0, self.n, self.d)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: float) -> "SparsePolynomial":
        return SparsePolynomial({k: c * v for k, v in self._terms.items()}, self.n, self.d)

    def chop(self, atol: float) -> "SparsePolynomial":
        """Supprime les coefficients |c| <= atol"""
        return SparsePolynomial({k: v for k, v in self._terms.items() if abs(v) > atol}, self.n, self.d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return (self.n, self.d) == (other.n, other.d) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, self.d, tuple(sorted(self._terms.items()))))

    def almost_equal(self, other: "SparsePolynomial", atol: float) -> bool:
        return (self - other).chop(atol).is_zero()

    # -- évaluation ------------------------------------------------------------

    def evaluate(self, X: "ParticleConfig | np.ndarray | Sequence[float]") -> float:
        """Évaluation directe des monômes, dans l'ordre trié des multi-indices"""
        if isinstance(X, ParticleConfig):
            if (X.n, X.d) != (self.n, self.d):
                raise ShapeMismatchError(
                    f"polynomial over n={self.n}, d={self.d} evaluated at n={X.n}, d={X.d}"
                )
            coords = X.flat()
        else:
            coords = np.asarray(X, dtype=np.float64).reshape(-1)
            if coords.size != self.arity:
                raise ShapeMismatchError(f"expected {self.arity} coordinates, got {coords.size}")
        values = []
        for exponents, coeff in self.items():
            term = coeff
            for x, e in zip(coords, exponents):
                if e:
                    term *= _power(float(x), e)
            values.append(term)
        return math.fsum(values)

    def __call__(self, X: "ParticleConfig | np.ndarray | Sequence[float]") -> float:
        return self.evaluate(X)

    # -- actions du groupe symétrique -----------------------------------------

    def permute_particles(self, images: Sequence[int]) -> "SparsePolynomial":
        """p∘S_π: l'exposant de la particule i passe à la particule π(i)"""
        d = self.d
        terms: Dict[MultiIndex, float] = {}
        for k, c in self._terms.items():
            new = [0] * self.arity
            for i, target in enumerate(images):
                new[target * d:(target + 1) * d] = k[i * d:(i + 1) * d]
            key = tuple(new)
            terms[key] = terms.get(key, 0.0) + c
        return SparsePolynomial(terms, self.n, self.d)

    def substitute(self, j: int, i: int) -> "SparsePolynomial":
        """Remplace la variable x_j par x_i"""
        terms: Dict[MultiIndex, float] = {}
        for k, c in self._terms.items():
            new = list(k)
            new[i] += new[j]
            new[j] = 0
            key = tuple(new)
            terms[key] = terms.get(key, 0.0) + c
        return SparsePolynomial(terms, self.n, self.d)

    # -- sérialisation ---------------------------------------------------------

    def to_text(self) -> str:
        """Un terme par ligne: "coeff k1 k2 ... k_nd", trié par multi-index"""
        lines = [" ".join([repr(c)] + [str(e) for e in k]) for k, c in self.items()]
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_text(cls, text: str, n: int, d: int = 1) -> "SparsePolynomial":
        terms: Dict[MultiIndex, float] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != n * d + 1:
                raise ShapeMismatchError(f"line {lineno}: expected {n * d + 1} fields, got {len(fields)}")
            key = tuple(int(f) for f in fields[1:])
            terms[key] = terms.get(key, 0.0) + float(fields[0])
        return cls(terms, n, d)

    def __repr__(self) -> str:
        if not self._terms:
            return f"SparsePolynomial(0, n={self.n}, d={self.d})"
        parts = []
        for k, c in self.items():
            factors = [f"x{v + 1}" + (f"^{e}" if e > 1 else "") for v, e in enumerate(k) if e]
            parts.append(f"{c:g}" + ("*" + "*".join(factors) if factors else ""))
        return f"SparsePolynomial({' + '.join(parts)}, n={self.n}, d={self.d})"


def _orbit_polynomial(p: SparsePolynomial, signed: bool, normalized: bool) -> SparsePolynomial:
    limit = settings.oracle.max_poly_particles
    if p.n > limit:
        raise OracleSizeError(p.n, limit)
    terms: Dict[MultiIndex, float] = {}
    for perm in enumerate_permutations(p.n):
        weight = float(parity(perm)) if signed else 1.0
        for k, c in p.permute_particles(perm.images).items():
            terms[k] = terms.get(k, 0.0) + weight * c
    result = SparsePolynomial(terms, p.n, p.d)
    if normalized:
        result = result.scale(1.0 / math.factorial(p.n))
    return result


def symmetrize_poly(p: SparsePolynomial, normalized: bool = True) -> SparsePolynomial:
    """Somme d'orbite exacte sur S_n agissant par blocs de particules (1/n! si normalisé)"""
    return _orbit_polynomial(p, signed=False, normalized=normalized)


def antisymmetrize_poly(p: SparsePolynomial, normalized: bool = True) -> SparsePolynomial:
    """Somme d'orbite pondérée par σ(π)"""
    return _orbit_polynomial(p, signed=True, normalized=normalized)


def is_symmetric(p: SparsePolynomial, atol: float = 0.0) -> bool:
    """Point fixe de la somme d'orbite non normalisée (évite la division par n!)"""
    orbit = symmetrize_poly(p, normalized=False)
    return orbit.almost_equal(p.scale(float(math.factorial(p.n))), atol)


def is_antisymmetric(p: SparsePolynomial, atol: float = 0.0) -> bool:
    orbit = antisymmetrize_poly(p, normalized=False)
    return orbit.almost_equal(p.scale(float(math.factorial(p.n))), atol)


def vandermonde_poly(n: int) -> SparsePolynomial:
    """Δ(x) = Π_{j<i} (x_i - x_j), développé (d = 1)"""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    result = SparsePolynomial.constant(1.0, n)
    for i in range(n):
        for j in range(i):
            result = result * linear_factor(j, i, n)
    return result


def vandermonde_value(x: "np.ndarray | Sequence[float]") -> float:
    """Forme produit de Δ"""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    value = 1.0
    for i in range(len(x)):
        for j in range(i):
            value *= x[i] - x[j]
    return float(value)


def linear_factor(i: int, j: int, n: int, d: int = 1) -> SparsePolynomial:
    """x_j - x_i"""
    return SparsePolynomial.variable(j, n, d) - SparsePolynomial.variable(i, n, d)


def divide_exact(p: SparsePolynomial, i: int, j: int, atol: float = 0.0) -> SparsePolynomial:
    """Quotient exact q avec q·(x_j - x_i) = p

    p est vu comme polynôme en x_j à coefficients polynomiaux; la division
    synthétique par la racine x_j = x_i élimine le terme dominant à chaque pas.
    """
    if i == j:
        raise ValueError("factor x_j - x_i needs distinct variables")
    if not (0 <= i < p.arity and 0 <= j < p.arity):
        raise ShapeMismatchError(f"variables ({i}, {j}) out of range for arity {p.arity}")
    if not p.substitute(j, i).chop(atol).is_zero():
        logger.debug("divisibility_failed", pair=(i, j), terms=len(p))
        raise DivisibilityError((i, j))

    # coefficients c_k(x_{≠j}) de x_j^k
    by_power: Dict[int, Dict[MultiIndex, float]] = {}
    for k, c in p.items():
        power = k[j]
        rest = list(k)
        rest[j] = 0
        by_power.setdefault(power, {})[tuple(rest)] = c
    if not by_power:
        return SparsePolynomial.zero(p.n, p.d)

    root = SparsePolynomial.variable(i, p.n, p.d)
    top = max(by_power)
    quotient_coeffs: Dict[int, SparsePolynomial] = {}
    carry = SparsePolynomial.zero(p.n, p.d)
    for power in range(top, 0, -1):
        carry = SparsePolynomial(by_power.get(power, {}), p.n, p.d) + root * carry
        quotient_coeffs[power - 1] = carry
    remainder = SparsePolynomial(by_power.get(0, {}), p.n, p.d) + root * carry
    if not remainder.chop(atol).is_zero():
        raise DivisibilityError((i, j), f"non-zero remainder dividing by x_{j} - x_{i}")

    terms: Dict[MultiIndex, float] = {}
    for power, coeff in quotient_coeffs.items():
        for k, c in coeff.items():
            key = list(k)
            key[j] += power
            terms[tuple(key)] = terms.get(tuple(key), 0.0) + c
    return SparsePolynomial(terms, p.n, p.d).chop(atol)
