import math

import numpy as np
import pytest

from src.core.exceptions import BasisFamilyError, ShapeMismatchError, UnsupportedDimensionError
from src.networks.training import TrainingConfig
from src.symmetry.bases import (
    BasisDescriptor,
    BasisFamily,
    OuterHead,
    generating_coefficients,
    all_but_one_basis,
    basis_table_csv,
    elementary_symmetric,
    eta,
    expected_count,
    fit_outer,
    graded_multi_indices,
    newton_e_from_p,
    polarized_basis,
    sorting_basis,
    symmetrized_monomial_basis,
)
from src.symmetry.permutation import ParticleConfig, Permutation, apply, enumerate_permutations, symmetrize


class TestDescriptor:
    def test_graded_order_d2(self):
        assert graded_multi_indices(2, 2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    @pytest.mark.parametrize("n,d", [(1, 1), (3, 1), (2, 2), (3, 2), (2, 3), (4, 3)])
    def test_count(self, n, d):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n, d)
        assert desc.m == expected_count(n, d) == math.comb(n + d, d) - 1

    def test_sorting_needs_d1(self):
        with pytest.raises(UnsupportedDimensionError):
            BasisDescriptor.build(BasisFamily.SORTING, 3, 2)

    def test_symmetrized_monomial_needs_degree(self):
        with pytest.raises(ValueError):
            BasisDescriptor.build(BasisFamily.SYMMETRIZED_MONOMIAL, 3)

    def test_labels(self):
        desc = BasisDescriptor.build("polarized_power", 2, 2)
        assert desc.labels() == ["p=1,0", "p=0,1", "p=2,0", "p=1,1", "p=0,2"]


class TestPolarized:
    def setup_method(self):
        self.desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 3)

    def test_eta(self):
        np.testing.assert_array_equal(eta(self.desc, [2.0]), [2.0, 4.0, 8.0])
        np.testing.assert_array_equal(eta(self.desc, [0.0]), [0.0, 0.0, 0.0])

    def test_eta_d2(self):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 2, 2)
        np.testing.assert_array_equal(eta(desc, [2.0, 3.0]), [2.0, 3.0, 4.0, 6.0, 9.0])

    def test_power_sums(self):
        np.testing.assert_array_equal(polarized_basis(self.desc, ParticleConfig([1.0, 2.0, 3.0])), [6.0, 14.0, 36.0])

    def test_single_particle(self):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 1, 2)
        X = ParticleConfig([[0.5], [-1.5]])
        np.testing.assert_array_equal(polarized_basis(desc, X), eta(desc, [0.5, -1.5]))

    def test_invariance(self, random_config):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 4, 2)
        X = random_config(4, 2)
        base = polarized_basis(desc, X)
        for p in enumerate_permutations(4):
            np.testing.assert_allclose(polarized_basis(desc, apply(p, X)), base, rtol=0, atol=1e-14)

    def test_wrong_family(self):
        desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, 3)
        with pytest.raises(BasisFamilyError):
            eta(desc, [1.0])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            polarized_basis(self.desc, ParticleConfig([1.0, 2.0]))

    def test_all_but_one(self):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 2)
        X = ParticleConfig([1.0, 2.0, 3.0])
        columns = all_but_one_basis(desc, X)
        assert columns.shape == (2, 3)
        np.testing.assert_array_equal(columns[:, 0], [5.0, 13.0])
        np.testing.assert_array_equal(columns[:, 2], [3.0, 5.0])


class TestElementary:
    def test_d1(self):
        desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, 3)
        np.testing.assert_array_equal(elementary_symmetric(desc, ParticleConfig([1.0, 2.0, 3.0])), [6.0, 11.0, 6.0])

    def test_second_elementary_relation(self):
        desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, 2)
        e = elementary_symmetric(desc, ParticleConfig([1.0, 2.0]))
        assert 2 * e[1] == 3.0**2 - 5.0

    def test_d2(self):
        desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, 2, 2)
        X = ParticleConfig.from_particles([[1.0, 0.0], [0.0, 1.0]])
        # ordre (1,0), (0,1), (2,0), (1,1), (0,2)
        np.testing.assert_array_equal(elementary_symmetric(desc, X), [1.0, 1.0, 0.0, 1.0, 0.0])

    def test_d2_matches_orbit_oracle(self, random_config):
        desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, 3, 2)
        X = random_config(3, 2)
        e = elementary_symmetric(desc, X)
        # e_(1,1) = Σ_{i≠j} x_i y_j
        mixed = symmetrize(lambda Y: float(Y.values[0, 0] * Y.values[1, 1]), X) * 6
        assert e[desc.index_set.index((1, 1))] == pytest.approx(mixed, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_generating_product_d3(self, n, rng, random_config):
        desc = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, n, 3)
        for _ in range(10):
            X = random_config(n, 3)
            lam = rng.uniform(-1.0, 1.0, size=3)
            product = float(np.prod(1.0 + lam @ X.values))
            e = elementary_symmetric(desc, X)
            series = 1.0 + sum(float(np.prod(lam ** np.array(p))) * e_p for p, e_p in zip(desc.index_set, e))
            assert abs(series - product) <= 1e-10 * max(1.0, abs(product))

    def test_generating_expansion_is_sparse(self, random_config):
        n, d = 6, 4
        coeffs = generating_coefficients(random_config(n, d))
        assert len(coeffs) == math.comb(n + d, d)
        assert coeffs[(0,) * d] == 1.0
        assert max(sum(p) for p in coeffs) == n


class TestNewton:
    def test_example(self):
        np.testing.assert_allclose(newton_e_from_p([6.0, 14.0, 36.0]), [6.0, 11.0, 6.0], rtol=1e-14)

    def test_single_particle(self):
        np.testing.assert_array_equal(newton_e_from_p([2.5]), [2.5])

    def test_constant_configuration(self):
        n, c = 5, 0.7
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n)
        e = newton_e_from_p(polarized_basis(desc, ParticleConfig([c] * n)))
        expected = [math.comb(n, k) * c**k for k in range(1, n + 1)]
        np.testing.assert_allclose(e, expected, rtol=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_round_trip(self, n, random_config):
        power = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, n)
        elementary = BasisDescriptor.build(BasisFamily.ELEMENTARY_SYMMETRIC, n)
        for _ in range(50):
            X = random_config(n, box=2.0)
            e = elementary_symmetric(elementary, X)
            converted = newton_e_from_p(polarized_basis(power, X))
            assert np.max(np.abs(converted - e) / np.maximum(1.0, np.abs(e))) <= 1e-9


class TestSortingAndMonomials:
    def test_sorting_examples(self):
        np.testing.assert_array_equal(sorting_basis(ParticleConfig([3.0, 1.0, 2.0])), [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(sorting_basis(ParticleConfig([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(sorting_basis(ParticleConfig([2.0, 2.0, 1.0])), [1.0, 2.0, 2.0])

    def test_symmetrized_monomials(self):
        desc = BasisDescriptor.build(BasisFamily.SYMMETRIZED_MONOMIAL, 2, degree=2)
        assert (0, 0) not in desc.index_set
        assert desc.index_set[0] == (1, 0)
        values = symmetrized_monomial_basis(desc, ParticleConfig([2.0, 3.0]))
        assert values[0] == 5.0
        assert values[desc.index_set.index((1, 1))] == 12.0

    def test_symmetrized_monomials_are_invariant(self, random_config):
        desc = BasisDescriptor.build(BasisFamily.SYMMETRIZED_MONOMIAL, 3, 2, degree=2)
        X = random_config(3, 2)
        moved = apply(Permutation.from_one_based((3, 1, 2)), X)
        np.testing.assert_allclose(
            symmetrized_monomial_basis(desc, moved), symmetrized_monomial_basis(desc, X), atol=1e-14
        )

    def test_table_csv(self):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 2)
        text = basis_table_csv(desc, [ParticleConfig([1.0, 2.0]), ParticleConfig([0.0, 0.5])])
        assert text == "p=1,p=2\n3.0,5.0\n0.5,0.25\n"


class TestFitOuter:
    def test_second_elementary_from_power_sums(self, rng):
        desc = BasisDescriptor.build(BasisFamily.POLARIZED_POWER, 3)
        samples = [ParticleConfig(rng.uniform(-1.0, 1.0, size=3)) for _ in range(60)]
        betas = np.array([polarized_basis(desc, X) for X in samples])
        targets = (betas[:, 0] ** 2 - betas[:, 1]) / 2
        fit = fit_outer(betas, targets, degree=2)
        assert fit.residual <= 1e-10
        fresh = polarized_basis(desc, ParticleConfig([0.3, -0.2, 0.9]))
        assert fit.predict(fresh)[0] == pytest.approx(0.3 * -0.2 + 0.3 * 0.9 - 0.2 * 0.9, abs=1e-10)

    def test_coordinate_projection(self, rng):
        betas = rng.uniform(-1.0, 1.0, size=(30, 2))
        fit = fit_outer(betas, betas[:, 1], degree=1)
        assert fit.residual <= 1e-12

    def test_too_few_samples(self):
        with pytest.raises(ShapeMismatchError):
            fit_outer(np.ones((3, 3)), np.ones(3), degree=2)

    def test_mlp_head(self, rng):
        betas = rng.uniform(-1.0, 1.0, size=(64, 2))
        targets = betas[:, 0] * betas[:, 1]
        fit = fit_outer(betas, targets, head="mlp", training=TrainingConfig(epochs=30, lr=1e-2, seed=0))
        assert fit.head is OuterHead.MLP
        assert np.isfinite(fit.residual)
        assert fit.residual == pytest.approx(float(np.max(np.abs(fit.predict(betas) - targets))))
