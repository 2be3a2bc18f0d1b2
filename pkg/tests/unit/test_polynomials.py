import numpy as np
import pytest

from src.core.exceptions import DivisibilityError, OracleSizeError, ShapeMismatchError
from src.symmetry.permutation import ParticleConfig, antisymmetrize
from src.symmetry.polynomials import (
    SparsePolynomial,
    antisymmetrize_poly,
    divide_exact,
    is_antisymmetric,
    is_symmetric,
    linear_factor,
    symmetrize_poly,
    vandermonde_poly,
    vandermonde_value,
)


def x(i: int, n: int) -> SparsePolynomial:
    return SparsePolynomial.variable(i, n)


def random_integer_poly(rng: np.random.Generator, arity: int, degree: int, terms: int = 5) -> SparsePolynomial:
    result = {}
    for _ in range(terms):
        exponents = np.zeros(arity, dtype=int)
        for _ in range(int(rng.integers(0, degree + 1))):
            exponents[rng.integers(arity)] += 1
        result[tuple(exponents)] = float(rng.integers(-5, 6))
    return SparsePolynomial(result, arity)


class TestSparsePolynomial:
    def test_canonical_form_drops_zeros(self):
        p = SparsePolynomial({(1, 0): 2.0, (0, 1): 0.0}, 2)
        assert len(p) == 1
        assert SparsePolynomial({(1, 0): 1.0}, 2) - SparsePolynomial({(1, 0): 1.0}, 2) == SparsePolynomial.zero(2)

    def test_evaluate_examples(self):
        X = ParticleConfig([2.0, 3.0])
        assert SparsePolynomial.constant(1.0, 2).evaluate(X) == 1.0
        assert (x(0, 2) * x(1, 2)).evaluate(X) == 6.0
        p = (x(0, 2) + x(1, 2)) ** 2 - (x(0, 2) ** 2 + x(1, 2) ** 2)
        assert p.evaluate(X) == 12.0
        assert p == SparsePolynomial({(1, 1): 2.0}, 2)

    def test_arity_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            x(0, 2).evaluate(ParticleConfig([1.0, 2.0, 3.0]))
        with pytest.raises(ShapeMismatchError):
            x(0, 2) + x(0, 3)

    def test_difference_of_squares(self):
        n = 2
        assert (x(0, n) - x(1, n)) * (x(0, n) + x(1, n)) == x(0, n) ** 2 - x(1, n) ** 2

    def test_additive_identity(self, rng):
        p = random_integer_poly(rng, 3, 3)
        assert p + SparsePolynomial.zero(3) == p

    def test_distributivity(self, rng):
        for _ in range(200):
            arity = int(rng.integers(1, 7))
            p, q, r = (random_integer_poly(rng, arity, 4) for _ in range(3))
            assert (p + q) * r == p * r + q * r

    def test_text_format(self):
        p = SparsePolynomial({(2, 0): -1.5, (0, 1): 3.0}, 2)
        assert p.to_text() == "3.0 0 1\n-1.5 2 0\n"
        assert SparsePolynomial.from_text(p.to_text(), 2) == p

    def test_from_text_field_count(self):
        with pytest.raises(ShapeMismatchError):
            SparsePolynomial.from_text("1.0 1 2 3\n", 2)


class TestOrbitSums:
    def test_symmetrize_linear(self):
        assert symmetrize_poly(x(0, 2)) == SparsePolynomial({(1, 0): 0.5, (0, 1): 0.5}, 2)

    def test_antisymmetrize_examples(self):
        assert antisymmetrize_poly(x(0, 2) * x(1, 2)).is_zero()
        assert antisymmetrize_poly(x(1, 2)) == SparsePolynomial({(0, 1): 0.5, (1, 0): -0.5}, 2)

    def test_unnormalized_orbit(self):
        assert symmetrize_poly(x(0, 3), normalized=False) == x(0, 3) + x(1, 3) + x(2, 3)

    def test_particle_blocks_move_together(self):
        # d = 2: (x_1 y_1) ne se mélange jamais avec x_2
        p = SparsePolynomial.monomial((1, 1, 0, 0), n=2, d=2)
        sym = symmetrize_poly(p, normalized=False)
        assert sym == SparsePolynomial({(1, 1, 0, 0): 1.0, (0, 0, 1, 1): 1.0}, 2, 2)

    def test_matches_oracle(self, rng, random_config):
        for n in (2, 3, 4, 5):
            p = random_integer_poly(rng, n, 4)
            psi = antisymmetrize_poly(p)
            X = random_config(n)
            expected = antisymmetrize(p.evaluate, X)
            assert abs(psi.evaluate(X) - expected) <= 1e-11 * max(1.0, abs(expected))

    def test_symmetry_predicates(self):
        assert is_symmetric(symmetrize_poly(x(0, 3) ** 2 * x(1, 3)), atol=1e-12)
        assert is_antisymmetric(vandermonde_poly(3))
        assert not is_symmetric(x(0, 3))

    def test_size_guard(self):
        with pytest.raises(OracleSizeError):
            symmetrize_poly(x(0, 9))


class TestVandermonde:
    def test_small_cases(self):
        assert vandermonde_poly(1) == SparsePolynomial.constant(1.0, 1)
        assert vandermonde_poly(2) == x(1, 2) - x(0, 2)

    def test_three_particles(self):
        delta = vandermonde_poly(3)
        assert len(delta) == 6
        assert delta.evaluate(ParticleConfig([1.0, 2.0, 4.0])) == 6.0
        assert vandermonde_value([1.0, 2.0, 4.0]) == 6.0

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_expansion_matches_product(self, n, rng):
        delta = vandermonde_poly(n)
        for _ in range(100):
            point = rng.uniform(-2.0, 2.0, size=n)
            expected = vandermonde_value(point)
            assert abs(delta.evaluate(point) - expected) <= 1e-12 * max(1.0, abs(expected))


class TestDivideExact:
    def test_difference_of_squares(self):
        p = x(1, 2) ** 2 - x(0, 2) ** 2
        assert divide_exact(p, 0, 1) == x(0, 2) + x(1, 2)

    def test_not_divisible(self):
        with pytest.raises(DivisibilityError) as info:
            divide_exact(x(0, 2) * x(1, 2), 0, 1)
        assert info.value.pair == (0, 1)

    def test_quotient_times_factor(self, rng):
        for _ in range(20):
            q = random_integer_poly(rng, 3, 3)
            p = q * linear_factor(0, 2, 3)
            assert divide_exact(p, 0, 2) == q

    def test_full_vandermonde_division_is_symmetric(self, rng):
        n = 3
        psi = antisymmetrize_poly(x(1, n) ** 2 * x(2, n), normalized=False)
        chi = psi
        for i in range(n):
            for j in range(i + 1, n):
                chi = divide_exact(chi, i, j)
        assert is_symmetric(chi)
        for _ in range(20):
            point = rng.uniform(-1.0, 1.0, size=n)
            assert np.isclose(chi.evaluate(point), psi.evaluate(point) / vandermonde_value(point), rtol=1e-9)

    def test_random_antisymmetrized_polynomials_divide_by_vandermonde(self, rng):
        for trial in range(50):
            n = 2 + trial % 4
            p = SparsePolynomial.zero(n)
            for _ in range(3):
                # x^(δ + λ), λ décroissante: l'anti-symétrisé n'est pas nul
                bumps = np.sort(rng.integers(0, 3, size=n))[::-1]
                exponents = tuple(int(n - 1 - k + bumps[k]) for k in range(n))
                p = p + SparsePolynomial.monomial(exponents, float(rng.choice([-3, -2, -1, 1, 2, 3])), n=n)
            psi = antisymmetrize_poly(p, normalized=False)
            chi = psi
            for i in range(n):
                for j in range(i + 1, n):
                    chi = divide_exact(chi, i, j)
            assert is_symmetric(chi)
            assert vandermonde_poly(n) * chi == psi
