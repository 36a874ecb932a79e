"""
Types for hybrid precoding.

Classes:
    - RewardForm: Which per-user rate expression turns powers into a reward.
    - SystemConfig: RF-chain count, SNR and noise convention.
    - AnalogPrecoder: Phase-shifter network, stored as its phase matrix.
    - PowerAllocation: Water-filling result.
    - HybridSolution: Analog + digital precoder pair with its powers and sum rate.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field

from mahbf.lib.exceptions import ContractViolation
from mahbf.numerics import CMatrix, unvec, vec, wrap_phase


class RewardForm(str, Enum):
    P_OVER_SIGMA2 = "p_over_sigma2"
    P_SQUARED = "p_squared"


class SystemConfig(BaseModel):
    """
    Link-level settings. The noise power is identical for every user and the total transmit
    power is P_t = 10^(SNR_dB / 10) times the noise power.
    """

    n_rf: int = Field(default=8, ge=1)
    snr_db: float = 5.0
    noise_power: float = Field(default=1.0, gt=0.0)

    @property
    def p_total(self) -> float:
        return self.noise_power * 10.0 ** (self.snr_db / 10.0)

    def noise_powers(self, n_users: int) -> npt.NDArray[np.float64]:
        return np.full(n_users, self.noise_power)


@dataclass(frozen=True)
class AnalogPrecoder:
    """
    Attributes:
        phases (np.ndarray): N_t×N_RF phase matrix, stored wrapped onto (-π, π].
    """

    phases: npt.NDArray[np.float64]

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if phases.ndim != 2:
            raise ContractViolation(f"phases must be 2-D, got shape {phases.shape}")
        object.__setattr__(self, "phases", wrap_phase(phases))

    @classmethod
    def from_vector(
        cls, vector: npt.ArrayLike, n_tx: int, n_rf: int
    ) -> "AnalogPrecoder":
        return cls(unvec(np.asarray(vector, dtype=float), n_tx, n_rf))

    @property
    def matrix(self) -> CMatrix:
        return np.exp(1j * self.phases)

    @property
    def n_tx(self) -> int:
        return self.phases.shape[0]

    @property
    def n_rf(self) -> int:
        return self.phases.shape[1]

    def to_vector(self) -> npt.NDArray[np.float64]:
        return vec(self.phases)


@dataclass(frozen=True)
class PowerAllocation:
    powers: npt.NDArray[np.float64]
    mu: float
    effective_gains: npt.NDArray[np.float64]
    noise_powers: npt.NDArray[np.float64]
    p_total: float

    @property
    def used_power(self) -> float:
        return float(np.dot(self.effective_gains, self.powers))

    @classmethod
    def silent(cls, n_users: int, noise_powers, p_total: float) -> "PowerAllocation":
        return cls(
            powers=np.zeros(n_users),
            mu=0.0,
            effective_gains=np.zeros(n_users),
            noise_powers=np.asarray(noise_powers, dtype=float),
            p_total=p_total,
        )


@dataclass(frozen=True)
class HybridSolution:
    """
    Attributes:
        analog (AnalogPrecoder): F_RF.
        digital (CMatrix): N_RF×K digital precoder F_D.
        power (PowerAllocation): Per-user powers.
        sum_rate (float): Achieved sum rate in bits/s/Hz.
        degenerate (bool): True when the effective channel could not be inverted.
    """

    analog: AnalogPrecoder
    digital: CMatrix
    power: PowerAllocation
    sum_rate: float
    degenerate: bool = field(default=False)

    def transmit_power(self) -> float:
        """Tr(F_RF^H F_RF F_D F_D^H)."""
        f = self.analog.matrix @ self.digital
        return float(np.real(np.trace(f.conj().T @ f)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "phases": self.analog.phases.tolist(),
            "digital": {
                "re": self.digital.real.tolist(),
                "im": self.digital.imag.tolist(),
            },
            "powers": self.power.powers.tolist(),
            "mu": self.power.mu,
            "sum_rate": self.sum_rate,
            "degenerate": self.degenerate,
        }
