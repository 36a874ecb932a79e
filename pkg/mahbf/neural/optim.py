"""
Parameter-update rules. Plain SGD is the default; momentum and Adam exist for ablations.
Every rule clips the global gradient norm first when ``max_grad_norm`` is set.
"""

from enum import Enum
from typing import Optional, Protocol

import numpy as np

from mahbf.lib.exceptions import DivergenceError
from mahbf.neural.mlp import GradientSet, MlpParams, sgd_step


class OptimizerKind(str, Enum):
    SGD = "sgd"
    MOMENTUM = "momentum"
    ADAM = "adam"


def clip_global_norm(grads: GradientSet, max_norm: float) -> GradientSet:
    norm = grads.global_norm()
    if not np.isfinite(norm):
        raise DivergenceError("non-finite gradient norm")
    if norm <= max_norm:
        return grads
    return grads.scaled(max_norm / norm)


class Optimizer(Protocol):
    lr: float

    def step(self, params: MlpParams, grads: GradientSet) -> MlpParams:
        """
        Return updated parameters.

        :raises DivergenceError: on non-finite gradients.
        """
        ...


class SGD:
    def __init__(self, lr: float, max_grad_norm: Optional[float] = 1.0):
        self.lr = lr
        self.max_grad_norm = max_grad_norm

    def _clip(self, grads: GradientSet) -> GradientSet:
        if self.max_grad_norm is None:
            return grads
        return clip_global_norm(grads, self.max_grad_norm)

    def step(self, params: MlpParams, grads: GradientSet) -> MlpParams:
        return sgd_step(params, self._clip(grads), self.lr)


class Momentum(SGD):
    def __init__(
        self, lr: float, beta: float = 0.9, max_grad_norm: Optional[float] = 1.0
    ):
        super().__init__(lr, max_grad_norm)
        self.beta = beta
        self._velocity: Optional[GradientSet] = None

    def step(self, params: MlpParams, grads: GradientSet) -> MlpParams:
        grads = self._clip(grads)
        if self._velocity is None:
            self._velocity = grads
        else:
            self._velocity = self._velocity.scaled(self.beta) + grads
        return sgd_step(params, self._velocity, self.lr)


class Adam(SGD):
    def __init__(
        self,
        lr: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        max_grad_norm: Optional[float] = 1.0,
    ):
        super().__init__(lr, max_grad_norm)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._m: Optional[list[np.ndarray]] = None
        self._v: Optional[list[np.ndarray]] = None
        self._t = 0

    def step(self, params: MlpParams, grads: GradientSet) -> MlpParams:
        grads = self._clip(grads)
        g = list(grads.arrays())
        if self._m is None:
            self._m = [np.zeros_like(a) for a in g]
            self._v = [np.zeros_like(a) for a in g]
        self._t += 1
        self._m = [self.beta1 * m + (1 - self.beta1) * a for m, a in zip(self._m, g)]
        self._v = [self.beta2 * v + (1 - self.beta2) * a**2 for v, a in zip(self._v, g)]
        m_hat = 1.0 - self.beta1**self._t
        v_hat = 1.0 - self.beta2**self._t
        direction = grads.with_arrays(
            (m / m_hat) / (np.sqrt(v / v_hat) + self.eps)
            for m, v in zip(self._m, self._v)
        )
        return sgd_step(params, direction, self.lr)


def make_optimizer(
    kind: OptimizerKind, lr: float, max_grad_norm: Optional[float] = 1.0
) -> Optimizer:
    if kind == OptimizerKind.MOMENTUM:
        return Momentum(lr, max_grad_norm=max_grad_norm)
    if kind == OptimizerKind.ADAM:
        return Adam(lr, max_grad_norm=max_grad_norm)
    return SGD(lr, max_grad_norm=max_grad_norm)
