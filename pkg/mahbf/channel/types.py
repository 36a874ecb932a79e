"""
Types for geometric mmWave channel realizations.

Classes:
    - SteeringNorm: Prefactor convention of the array response.
    - ChannelConfig: Validated channel-model parameters.
    - ChannelMatrix: One K×N_t realization.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from mahbf.numerics import CMatrix, as_cmatrix


class SteeringNorm(str, Enum):
    AS_WRITTEN = "as_written"  # 1/N_t
    UNIT_NORM = "unit_norm"  # 1/sqrt(N_t)


class ChannelConfig(BaseModel):
    """
    Parameters of the clustered geometric channel.

    ``cluster_powers`` defaults to unit power for every cluster; ``angle_spread`` is the
    standard deviation (radians) of the Laplacian ray offsets around each cluster centre.
    """

    n_tx: int = Field(default=64, ge=1)
    n_users: int = Field(default=8, ge=1)
    n_clusters: int = Field(default=10, ge=1)
    n_rays: int = Field(default=8, ge=1)
    spacing_ratio: float = Field(default=0.5, gt=0.0)
    cluster_powers: Optional[list[float]] = None
    angle_spread: float = Field(default=math.radians(10.0), ge=0.0)
    steering_norm: SteeringNorm = SteeringNorm.AS_WRITTEN

    @model_validator(mode="after")
    def _check_cluster_powers(self) -> "ChannelConfig":
        if self.cluster_powers is None:
            self.cluster_powers = [1.0] * self.n_clusters
        if len(self.cluster_powers) != self.n_clusters:
            raise ValueError(
                f"cluster_powers has {len(self.cluster_powers)} entries, "
                f"expected {self.n_clusters}"
            )
        if any(p < 0 for p in self.cluster_powers):
            raise ValueError("cluster_powers must be non-negative")
        if not any(p > 0 for p in self.cluster_powers):
            raise ValueError("cluster_powers must not be all zero")
        return self


@dataclass(frozen=True)
class ChannelMatrix:
    """
    Row k of ``matrix`` is h_k^H.

    Attributes:
        matrix (CMatrix): K×N_t complex channel matrix.
    """

    matrix: CMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_cmatrix(self.matrix, "channel"))

    @property
    def n_users(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_tx(self) -> int:
        return self.matrix.shape[1]

    def user_vector(self, k: int) -> np.ndarray:
        """h_k as a column vector (the conjugate of row k)."""
        return self.matrix[k].conj()

    def scaled(self, factor: complex) -> "ChannelMatrix":
        return ChannelMatrix(self.matrix * factor)

    def row_rank_ok(self, max_condition: float = 1e10) -> bool:
        if self.n_users > self.n_tx:
            return False
        return bool(np.linalg.cond(self.matrix) < max_condition)
