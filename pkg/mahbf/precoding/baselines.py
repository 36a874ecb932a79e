"""
Reference precoders that bracket the learned hybrid design: the full-digital zero-forcing
upper bound and a random-phase analog control.
"""

import numpy as np
import numpy.typing as npt

from mahbf.channel import ChannelMatrix
from mahbf.lib.exceptions import ContractViolation, DegenerateGeometryError
from mahbf.numerics import RngHandle
from mahbf.precoding.rates import zf_sum_rate
from mahbf.precoding.types import (
    AnalogPrecoder,
    HybridSolution,
    PowerAllocation,
    SystemConfig,
)
from mahbf.precoding.water_filling import water_filling
from mahbf.precoding.zero_forcing import (
    assemble_digital,
    effective_gains,
    right_inverse,
    zf_digital,
)


def precode(
    h: ChannelMatrix, analog: AnalogPrecoder, system: SystemConfig
) -> HybridSolution:
    """
    Zero-forcing digital stage plus water-filling for a given analog precoder.

    :raises DegenerateGeometryError: when H F_RF cannot be inverted.
    """
    f_tilde = zf_digital(h, analog)
    power = water_filling(
        effective_gains(f_tilde, analog), system.noise_powers(h.n_users), system.p_total
    )
    return HybridSolution(
        analog=analog,
        digital=assemble_digital(f_tilde, power),
        power=power,
        sum_rate=zf_sum_rate(power),
    )


def degenerate_solution(
    h: ChannelMatrix, analog: AnalogPrecoder, system: SystemConfig
) -> HybridSolution:
    return HybridSolution(
        analog=analog,
        digital=np.zeros((analog.n_rf, h.n_users), dtype=np.complex128),
        power=PowerAllocation.silent(
            h.n_users, system.noise_powers(h.n_users), system.p_total
        ),
        sum_rate=0.0,
        degenerate=True,
    )


def full_digital_zf_rate(
    h: ChannelMatrix, noise_powers: npt.ArrayLike, p_total: float
) -> float:
    """
    Rate of pseudo-inverse zero forcing with one RF chain per antenna, water-filled over
    the squared column norms of H^H (H H^H)^{-1}.
    """
    if h.n_users > h.n_tx:
        raise ContractViolation(f"{h.n_users} users exceed {h.n_tx} antennas")
    f = right_inverse(h.matrix)
    gains = np.sum(np.abs(f) ** 2, axis=0)
    return zf_sum_rate(water_filling(gains, noise_powers, p_total))


def random_phase_baseline(
    h: ChannelMatrix, system: SystemConfig, rng: RngHandle
) -> HybridSolution:
    """
    Uniformly random analog phases followed by the zero-forcing/water-filling chain.
    Degenerate draws propagate as ``DegenerateGeometryError``.
    """
    phases = -np.pi + 2.0 * np.pi * rng.uniform_open((h.n_tx, system.n_rf))
    return precode(h, AnalogPrecoder(phases), system)


def random_phase_mean_rate(
    h: ChannelMatrix, system: SystemConfig, rng: RngHandle, draws: int
) -> float:
    rates = []
    for _ in range(draws):
        try:
            rates.append(random_phase_baseline(h, system, rng).sum_rate)
        except DegenerateGeometryError:
            rates.append(0.0)
    return float(np.mean(rates)) if rates else 0.0
