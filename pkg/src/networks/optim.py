"""
Optimiseurs à mise à jour en place (SGD, Adam)
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict

import numpy as np


class OptimizerKind(str, Enum):
    SGD = "sgd"
    ADAM = "adam"


class Optimizer(ABC):
    def __init__(self, lr: float):
        if lr <= 0:
            raise ValueError(f"learning rate must be positive, got {lr}")
        self.lr = lr

    @abstractmethod
    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        """Met à jour ``params`` en place"""


class SGD(Optimizer):
    def __init__(self, lr: float, momentum: float = 0.0):
        super().__init__(lr)
        self.momentum = momentum
        self._velocity: Dict[str, np.ndarray] = {}

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        for name in sorted(params):
            grad = grads[name]
            if self.momentum:
                velocity = self._velocity.setdefault(name, np.zeros_like(grad))
                velocity *= self.momentum
                velocity += grad
                grad = velocity
            params[name] -= self.lr * grad


class Adam(Optimizer):
    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        super().__init__(lr)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._t = 0
        self._m: Dict[str, np.ndarray] = {}
        self._v: Dict[str, np.ndarray] = {}

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        self._t += 1
        correction1 = 1.0 - self.beta1 ** self._t
        correction2 = 1.0 - self.beta2 ** self._t
        for name in sorted(params):
            grad = grads[name]
            m = self._m.setdefault(name, np.zeros_like(grad))
            v = self._v.setdefault(name, np.zeros_like(grad))
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            params[name] -= self.lr * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def build_optimizer(kind: "OptimizerKind | str", lr: float) -> Optimizer:
    kind = OptimizerKind(kind)
    if kind is OptimizerKind.SGD:
        return SGD(lr)
    return Adam(lr)
