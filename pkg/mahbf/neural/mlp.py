"""
Fixed-topology fully connected network with exact reverse-mode gradients.

A network has four node layers (input, two hidden, output) joined by three affine maps;
the hidden maps use ReLU and the output map uses tanh, so every output lies in (-1, 1).
All arrays are float64. Inputs may be a single vector or a batch with one sample per row;
gradients of a batch are summed over its rows.

ReLU uses subgradient 0 at exactly 0.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
import numpy.typing as npt

from mahbf.lib.exceptions import ContractViolation, DivergenceError
from mahbf.numerics import RngHandle

Array = npt.NDArray[np.float64]

N_NODE_LAYERS = 4


class Activation(str, Enum):
    RELU = "relu"
    TANH = "tanh"


DEFAULT_ACTIVATIONS = (Activation.RELU, Activation.RELU, Activation.TANH)


def _activate(kind: Activation, z: Array) -> Array:
    if kind == Activation.RELU:
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _activation_grad(kind: Activation, z: Array, a: Array) -> Array:
    if kind == Activation.RELU:
        return (z > 0.0).astype(float)
    return 1.0 - a**2


@dataclass(frozen=True)
class MlpParams:
    """
    Attributes:
        layer_dims (tuple[int, ...]): Node counts (input, hidden, hidden, output).
        weights (tuple[np.ndarray, ...]): One (out, in) matrix per affine map.
        biases (tuple[np.ndarray, ...]): One bias vector per affine map.
        activations (tuple[Activation, ...]): Activation applied after each map.
    """

    layer_dims: tuple[int, ...]
    weights: tuple[Array, ...]
    biases: tuple[Array, ...]
    activations: tuple[Activation, ...] = DEFAULT_ACTIVATIONS

    def __post_init__(self):
        if len(self.layer_dims) != N_NODE_LAYERS:
            raise ContractViolation(
                f"expected {N_NODE_LAYERS} layer sizes, got {self.layer_dims}"
            )
        n_maps = N_NODE_LAYERS - 1
        lengths = {len(self.weights), len(self.biases), len(self.activations)}
        if lengths != {n_maps}:
            raise ContractViolation("weights, biases and activations must match layers")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            shape = (self.layer_dims[i + 1], self.layer_dims[i])
            if w.shape != shape or b.shape != (shape[0],):
                raise ContractViolation(f"layer {i} has shapes {w.shape}, {b.shape}")

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def output_dim(self) -> int:
        return self.layer_dims[-1]

    def arrays(self) -> Iterator[Array]:
        for w, b in zip(self.weights, self.biases):
            yield w
            yield b

    def with_arrays(self, arrays: Sequence[Array]) -> "MlpParams":
        arrays = list(arrays)
        return MlpParams(
            layer_dims=self.layer_dims,
            weights=tuple(arrays[0::2]),
            biases=tuple(arrays[1::2]),
            activations=self.activations,
        )

    def map(self, fn: Callable[..., Array], *others) -> "MlpParams":
        """Apply ``fn`` array-wise across this and congruent parameter/gradient sets."""
        for other in others:
            if other.layer_dims != self.layer_dims:
                raise ContractViolation(
                    f"shape mismatch {self.layer_dims} vs {other.layer_dims}"
                )
        return self.with_arrays(
            fn(*group) for group in zip(self.arrays(), *(o.arrays() for o in others))
        )

    def copy(self) -> "MlpParams":
        return self.map(np.copy)

    def flat(self) -> Array:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())


@dataclass(frozen=True)
class GradientSet:
    """
    Partial derivatives of a scalar loss, shape-congruent with an MlpParams.

    ``input_grad`` is the derivative with respect to the network input (same shape as the
    input that produced it); it is what lets a critic's gradient be chained into an actor.
    """

    layer_dims: tuple[int, ...]
    weights: tuple[Array, ...]
    biases: tuple[Array, ...]
    input_grad: Optional[Array] = None

    def arrays(self) -> Iterator[Array]:
        for w, b in zip(self.weights, self.biases):
            yield w
            yield b

    def with_arrays(self, arrays: Sequence[Array]) -> "GradientSet":
        arrays = list(arrays)
        return GradientSet(
            layer_dims=self.layer_dims,
            weights=tuple(arrays[0::2]),
            biases=tuple(arrays[1::2]),
            input_grad=self.input_grad,
        )

    def scaled(self, factor: float) -> "GradientSet":
        return self.with_arrays(a * factor for a in self.arrays())

    def __add__(self, other: "GradientSet") -> "GradientSet":
        if other.layer_dims != self.layer_dims:
            raise ContractViolation("cannot add gradients of different networks")
        return self.with_arrays(a + b for a, b in zip(self.arrays(), other.arrays()))

    def global_norm(self) -> float:
        return float(np.sqrt(sum(np.sum(a**2) for a in self.arrays())))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())

    def flat(self) -> Array:
        return np.concatenate([a.ravel() for a in self.arrays()])


def init_params(
    layer_dims: Sequence[int],
    rng: RngHandle,
    activations: tuple[Activation, ...] = DEFAULT_ACTIVATIONS,
    output_scale: Optional[float] = None,
) -> MlpParams:
    """
    Weights and biases uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)]. With
    ``output_scale`` the last map is drawn on [-output_scale, output_scale] instead, so a
    fresh network starts with outputs near tanh of its output bias.
    """
    if output_scale is not None and output_scale <= 0:
        raise ContractViolation(f"output scale must be positive, got {output_scale}")
    dims = tuple(int(d) for d in layer_dims)
    n_maps = len(dims) - 1
    weights, biases = [], []
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        bound = 1.0 / np.sqrt(fan_in)
        if output_scale is not None and i == n_maps - 1:
            bound = output_scale
        weights.append(bound * (2.0 * rng.uniform((fan_out, fan_in)) - 1.0))
        biases.append(bound * (2.0 * rng.uniform(fan_out) - 1.0))
    return MlpParams(dims, tuple(weights), tuple(biases), tuple(activations))


def zeros_like(params: MlpParams) -> MlpParams:
    return params.map(np.zeros_like)


def with_output_bias(params: MlpParams, bias: npt.ArrayLike) -> MlpParams:
    bias = np.asarray(bias, dtype=float)
    if bias.shape != (params.output_dim,):
        raise ContractViolation(
            f"output bias of shape {bias.shape}, expected ({params.output_dim},)"
        )
    return MlpParams(
        params.layer_dims,
        params.weights,
        (*params.biases[:-1], bias.copy()),
        params.activations,
    )


def _as_input(params: MlpParams, x: npt.ArrayLike) -> Array:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (params.input_dim,) or x.ndim > 2:
        raise ContractViolation(
            f"input of shape {x.shape} does not match width {params.input_dim}"
        )
    return x


def _trace(params: MlpParams, x: Array) -> tuple[list[Array], list[Array]]:
    pre, post = [], [x]
    a = x
    for w, b, kind in zip(params.weights, params.biases, params.activations):
        z = a @ w.T + b
        a = _activate(kind, z)
        pre.append(z)
        post.append(a)
    return pre, post


def forward(params: MlpParams, x: npt.ArrayLike) -> Array:
    return _trace(params, _as_input(params, x))[1][-1]


def backward(
    params: MlpParams, x: npt.ArrayLike, output_grad: npt.ArrayLike
) -> GradientSet:
    """
    Reverse-mode gradient of ``<output_grad, forward(params, x)>`` with respect to every
    parameter and to the input.
    """
    x = _as_input(params, x)
    delta = np.asarray(output_grad, dtype=float)
    if delta.shape != x.shape[:-1] + (params.output_dim,):
        raise ContractViolation(
            f"output gradient of shape {delta.shape} does not match the network output"
        )
    batched = x.ndim == 2
    pre, post = _trace(params, x)

    n_maps = len(params.weights)
    grad_w: list[Array] = [None] * n_maps  # type: ignore[list-item]
    grad_b: list[Array] = [None] * n_maps  # type: ignore[list-item]
    for i in reversed(range(n_maps)):
        dz = delta * _activation_grad(params.activations[i], pre[i], post[i + 1])
        a_prev = post[i]
        if batched:
            grad_w[i] = dz.T @ a_prev
            grad_b[i] = dz.sum(axis=0)
        else:
            grad_w[i] = np.outer(dz, a_prev)
            grad_b[i] = dz
        delta = dz @ params.weights[i]

    return GradientSet(
        params.layer_dims, tuple(grad_w), tuple(grad_b), input_grad=delta
    )


def sgd_step(params: MlpParams, grads: GradientSet, lr: float) -> MlpParams:
    """θ ← θ - lr ∇θ."""
    if lr <= 0:
        raise ContractViolation(f"learning rate must be positive, got {lr}")
    if grads.layer_dims != params.layer_dims:
        raise ContractViolation("gradient set does not match parameters")
    if not grads.is_finite():
        raise DivergenceError("non-finite gradient; update rejected")
    return params.with_arrays(
        p - lr * g for p, g in zip(params.arrays(), grads.arrays())
    )


def soft_update(target: MlpParams, online: MlpParams, tau: float) -> MlpParams:
    """θ' ← τ θ + (1 - τ) θ'."""
    if not 0.0 <= tau <= 1.0:
        raise ContractViolation(f"tau must lie in [0, 1], got {tau}")
    return target.map(lambda t, o: tau * o + (1.0 - tau) * t, online)
