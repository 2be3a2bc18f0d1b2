import numpy as np
import pytest

from src.core.exceptions import ShapeMismatchError, TrainingDivergedError
from src.networks.heads import HeadKind
from src.networks.models import EquivariantNetwork, MlpModel
from src.networks.optim import SGD, Adam, OptimizerKind, build_optimizer
from src.networks.training import TrainingConfig, evaluate_mse, mse_loss, train


class TestOptimizers:
    def test_sgd_step(self):
        params = {"w": np.array([1.0, 2.0])}
        SGD(0.5).step(params, {"w": np.array([2.0, -2.0])})
        np.testing.assert_array_equal(params["w"], [0.0, 3.0])

    def test_momentum_accumulates(self):
        params = {"w": np.zeros(1)}
        optimizer = SGD(1.0, momentum=0.5)
        optimizer.step(params, {"w": np.ones(1)})
        optimizer.step(params, {"w": np.ones(1)})
        np.testing.assert_array_equal(params["w"], [-2.5])

    def test_adam_first_step_is_lr_sized(self):
        params = {"w": np.array([0.0, 0.0])}
        Adam(0.1).step(params, {"w": np.array([3.0, -0.01])})
        np.testing.assert_allclose(params["w"], [-0.1, 0.1], rtol=1e-5)

    def test_build(self):
        assert isinstance(build_optimizer("sgd", 0.1), SGD)
        assert isinstance(build_optimizer(OptimizerKind.ADAM, 0.1), Adam)
        with pytest.raises(ValueError):
            build_optimizer("sgd", 0.0)


class TestTraining:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.inputs = rng.uniform(-1.0, 1.0, size=(64, 2))

    def test_mse_loss(self):
        loss, grad = mse_loss(np.array([[1.0], [3.0]]), np.array([[0.0], [1.0]]))
        assert loss == 2.5
        np.testing.assert_array_equal(grad, [[1.0], [2.0]])

    def test_constant_target(self):
        model = MlpModel.initialize([2, 1], seed=0)
        config = TrainingConfig(optimizer="sgd", lr=0.1, epochs=3000, batch=64, target_loss=1e-10)
        result = train(model, self.inputs, np.full(64, 3.0), config)
        assert result.final_loss <= 1e-8
        assert evaluate_mse(model, self.inputs, np.full(64, 3.0)) <= 1e-8

    def test_same_seed_same_trace(self):
        config = TrainingConfig(lr=0.01, epochs=5, batch=8, seed=4)
        targets = np.sin(self.inputs.sum(axis=1))
        first = train(MlpModel.initialize([2, 8, 1], seed=1), self.inputs, targets, config)
        second = train(MlpModel.initialize([2, 8, 1], seed=1), self.inputs, targets, config)
        assert first.losses == second.losses
        assert len(first.grad_norms) == 5

    def test_divergence_is_reported(self):
        model = MlpModel.initialize([2, 1], seed=0)
        config = TrainingConfig(optimizer="sgd", lr=1e3, epochs=2000, batch=64)
        with pytest.raises(TrainingDivergedError) as info:
            train(model, self.inputs, np.full(64, 3.0), config)
        assert info.value.last_finite_loss is not None

    def test_target_shape_is_checked(self):
        model = MlpModel.initialize([2, 1], seed=0)
        with pytest.raises(ShapeMismatchError):
            train(model, self.inputs, np.zeros(10), TrainingConfig(epochs=1))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TrainingConfig(lr=-1.0)

    @pytest.mark.slow
    def test_equivariant_network_learns_symmetric_target(self):
        rng = np.random.default_rng(2)
        X = rng.uniform(-1.0, 1.0, size=(400, 1, 3))
        x = X[:, 0, :]
        targets = x[:, 0] * x[:, 1] + x[:, 0] * x[:, 2] + x[:, 1] * x[:, 2]
        network = EquivariantNetwork.initialize(n=3, d=1, hidden=[32, 32], head=HeadKind.MEAN_POOL, seed=3)
        before = evaluate_mse(network, X, targets)
        train(network, X, targets, TrainingConfig(lr=3e-3, epochs=200, batch=32, seed=5))
        assert evaluate_mse(network, X, targets) <= before / 10
