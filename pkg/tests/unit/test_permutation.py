import itertools
import math

import numpy as np
import pytest

from src.core.exceptions import OracleSizeError, ShapeMismatchError
from src.symmetry.permutation import (
    ParticleConfig,
    Permutation,
    antisymmetrize,
    apply,
    compose,
    enumerate_permutations,
    inverse,
    parity,
    symmetrize,
    transposition,
)


class TestPermutation:
    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 1))

    def test_one_based_notation(self):
        p = Permutation.from_one_based((2, 3, 1))
        assert p.images == (1, 2, 0)
        assert p.one_based() == (2, 3, 1)
        assert str(p) == "(2,3,1)"

    def test_parity_examples(self):
        assert parity(Permutation.identity(4)) == 1
        assert parity(Permutation.from_one_based((2, 1))) == -1
        assert parity(Permutation.from_one_based((2, 3, 1))) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_parity_is_multiplicative(self, n):
        perms = list(enumerate_permutations(n))
        for p, q in itertools.product(perms, perms):
            assert parity(compose(p, q)) == parity(p) * parity(q)

    def test_inverse(self):
        p = Permutation.from_one_based((3, 1, 4, 2))
        assert compose(p, inverse(p)) == Permutation.identity(4)
        assert compose(inverse(p), p) == Permutation.identity(4)

    def test_compose_matches_successive_application(self, random_config):
        X = random_config(4, 2)
        p = Permutation.from_one_based((2, 4, 1, 3))
        q = Permutation.from_one_based((4, 3, 2, 1))
        assert apply(q, apply(p, X)) == apply(compose(p, q), X)

    def test_compose_size_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            compose(Permutation.identity(2), Permutation.identity(3))


class TestEnumerate:
    def test_small_groups(self):
        assert [p.one_based() for p in enumerate_permutations(1)] == [(1,)]
        assert [p.one_based() for p in enumerate_permutations(2)] == [(1, 2), (2, 1)]

    def test_lexicographic_and_complete(self):
        perms = [p.images for p in enumerate_permutations(4)]
        assert len(perms) == math.factorial(4)
        assert len(set(perms)) == len(perms)
        assert perms == sorted(perms)

    def test_oracle_size_guard(self):
        with pytest.raises(OracleSizeError):
            next(enumerate_permutations(11))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            next(enumerate_permutations(0))


class TestParticleConfig:
    def test_vector_is_one_dimensional(self):
        X = ParticleConfig([1.0, 2.0, 3.0])
        assert (X.d, X.n) == (1, 3)

    def test_from_particles_and_flat_order(self):
        X = ParticleConfig.from_particles([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        assert (X.d, X.n) == (2, 3)
        np.testing.assert_array_equal(X.particle(1), [3.0, 4.0])
        np.testing.assert_array_equal(X.flat(), [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            ParticleConfig([1.0, np.nan])

    def test_values_are_read_only(self):
        X = ParticleConfig([1.0, 2.0])
        with pytest.raises(ValueError):
            X.values[0, 0] = 5.0


class TestApply:
    def test_swap_one_dimensional(self):
        X = ParticleConfig([[1.0, 2.0]])
        assert apply(Permutation.from_one_based((2, 1)), X) == ParticleConfig([[2.0, 1.0]])

    def test_moves_whole_columns(self):
        X = ParticleConfig([[1.0, 2.0, 3.0], [10.0, 20.0, 30.0]])
        Y = apply(Permutation.from_one_based((2, 3, 1)), X)
        np.testing.assert_array_equal(Y.values, [[2.0, 3.0, 1.0], [20.0, 30.0, 10.0]])

    def test_identity(self, random_config):
        X = random_config(5, 3)
        assert apply(Permutation.identity(5), X) == X

    def test_size_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            apply(Permutation.identity(3), ParticleConfig([1.0, 2.0]))


def first(X: ParticleConfig) -> float:
    return float(X.values[0, 0])


def difference(X: ParticleConfig) -> float:
    return float(X.values[0, 0] - X.values[0, 1])


class TestOracle:
    def test_symmetrize_examples(self):
        X = ParticleConfig([1.0, 2.0])
        assert symmetrize(first, X) == 1.5
        assert symmetrize(difference, X) == 0.0

    def test_antisymmetrize_examples(self):
        X = ParticleConfig([1.0, 2.0])
        assert antisymmetrize(first, X) == -0.5
        assert antisymmetrize(lambda Y: float(np.sum(Y.values)), X) == 0.0

    def test_antisymmetric_input_is_fixed(self):
        X = ParticleConfig([0.3, -0.7])
        assert antisymmetrize(difference, X) == difference(X)

    def test_symmetrize_is_bit_exact_invariant(self, rng, random_config):
        f = lambda Y: float(np.sin(Y.values[0, 0]) * Y.values[0, 1] + Y.values[0, 2] ** 3)
        X = random_config(5)
        base = symmetrize(f, X)
        for _ in range(10):
            p = Permutation(tuple(int(i) for i in rng.permutation(5)))
            assert symmetrize(f, apply(p, X)) == base

    def test_antisymmetrize_flips_with_parity(self, random_config):
        f = lambda Y: float(np.exp(Y.values[0, 0]) * Y.values[0, 1] ** 2 - Y.values[0, 3])
        X = random_config(4)
        base = antisymmetrize(f, X)
        for p in enumerate_permutations(4):
            assert abs(antisymmetrize(f, apply(p, X)) - parity(p) * base) <= 1e-12

    def test_workers_do_not_change_result(self, random_config):
        f = lambda Y: float(np.cos(Y.values[0, 0] - 2 * Y.values[0, 1]))
        X = random_config(5)
        assert symmetrize(f, X, workers=4) == symmetrize(f, X, workers=1)

    def test_transposition_is_odd(self):
        assert parity(transposition(5, 1, 3)) == -1
