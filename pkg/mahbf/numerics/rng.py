"""
Seeded random-number contract shared by every stochastic component.

The stream is numpy's counter-based Philox4x64 bit generator. Gaussian variates are NOT
taken from numpy's ziggurat sampler: they are produced by Box–Muller from consecutive
uniform pairs so the consumption order is fixed and documented:

    uniforms u_0, u_1, u_2, u_3, ...  (each in (0, 1])
    z_0 = sqrt(-2 ln u_0) cos(2π u_1),  z_1 = sqrt(-2 ln u_0) sin(2π u_1),  ...

An odd request still consumes a full pair; the unused sine branch is discarded.
"""

from typing import Optional

import numpy as np
import numpy.typing as npt

RNG_ALGORITHM = "philox4x64-boxmuller/1"

Shape = int | tuple[int, ...]


def _count(size: Shape) -> int:
    return int(np.prod(size, dtype=np.int64))


class RngHandle:
    """
    Single-owner random stream.

    Attributes:
        seed (int): The 64-bit seed the stream was created from.
        keys (tuple[int, ...]): Derivation path from the root seed (empty for a root stream).
    """

    def __init__(self, seed: int, keys: tuple[int, ...] = ()):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.keys = tuple(int(k) for k in keys)
        entropy = [self.seed, *self.keys] if self.keys else self.seed
        self._generator = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy))
        )

    def __repr__(self) -> str:
        return f"RngHandle(seed={self.seed}, keys={self.keys})"

    def derive(self, *keys: int) -> "RngHandle":
        """
        Independent sub-stream identified by ``keys``; does not consume from this stream.
        """
        return RngHandle(self.seed, self.keys + tuple(keys))

    def uniform(self, size: Optional[Shape] = None) -> npt.NDArray[np.float64] | float:
        """Uniform variates on [0, 1)."""
        if size is None:
            return float(self._generator.random())
        return self._generator.random(size)

    def uniform_open(self, size: Shape) -> npt.NDArray[np.float64]:
        """Uniform variates on (0, 1]."""
        return 1.0 - self._generator.random(size)

    def normal(self, size: Shape) -> npt.NDArray[np.float64]:
        n = _count(size)
        pairs = (n + 1) // 2
        u = self.uniform_open(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log(u[:, 0]))
        angle = 2.0 * np.pi * u[:, 1]
        z = np.empty((pairs, 2))
        z[:, 0] = radius * np.cos(angle)
        z[:, 1] = radius * np.sin(angle)
        return z.reshape(-1)[:n].reshape(size)

    def complex_normal(
        self, size: Shape, variance: float | npt.ArrayLike = 1.0
    ) -> npt.NDArray[np.complex128]:
        """
        Circularly-symmetric complex Gaussian CN(0, variance).
        Real parts are drawn first, then imaginary parts.
        """
        n = _count(size)
        parts = self.normal(2 * n)
        z = (parts[:n] + 1j * parts[n:]).reshape(size)
        return z * np.sqrt(np.asarray(variance, dtype=float) / 2.0)

    def laplace(self, size: Shape, scale: float) -> npt.NDArray[np.float64]:
        """Zero-mean Laplacian variates by inverse CDF."""
        u = self.uniform_open(size) - 0.5
        # u in (-0.5, 0.5]; clip keeps log finite at the closed end
        magnitude = np.clip(1.0 - 2.0 * np.abs(u), np.finfo(float).tiny, 1.0)
        return -scale * np.sign(u) * np.log(magnitude)

    def integers(self, low: int, high: int, size: Optional[Shape] = None):
        return self._generator.integers(low, high, size=size)
