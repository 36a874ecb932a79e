import numpy as np
import numpy.typing as npt

from mahbf.channel import ChannelMatrix
from mahbf.lib.exceptions import ContractViolation
from mahbf.numerics import CMatrix
from mahbf.precoding.types import AnalogPrecoder, PowerAllocation, RewardForm


def zf_sum_rate(power: PowerAllocation) -> float:
    """Σ log2(1 + p_k / σ_k²) for an interference-free (zero-forcing) solution."""
    return float(np.sum(np.log2(1.0 + power.powers / power.noise_powers)))


def raw_reward(
    power: PowerAllocation, form: RewardForm = RewardForm.P_OVER_SIGMA2
) -> float:
    if form == RewardForm.P_SQUARED:
        return float(np.sum(np.log2(1.0 + power.powers**2 / power.noise_powers)))
    return zf_sum_rate(power)


def general_sum_rate(
    h: ChannelMatrix,
    f_rf: AnalogPrecoder,
    f_d: CMatrix,
    noise_powers: npt.ArrayLike,
) -> float:
    """Sum rate with the full SINR expression, inter-user interference included."""
    noise = np.asarray(noise_powers, dtype=float)
    if f_d.shape != (f_rf.n_rf, h.n_users) or noise.shape != (h.n_users,):
        raise ContractViolation(
            "digital precoder / noise shapes do not match the channel"
        )
    received = np.abs(h.matrix @ f_rf.matrix @ f_d) ** 2
    signal = np.diag(received)
    interference = received.sum(axis=1) - signal
    return float(np.sum(np.log2(1.0 + signal / (noise + interference))))
