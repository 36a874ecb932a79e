"""
The environment seen by every agent: an action (vectorized analog phases) is turned into a
complete hybrid precoder for the fixed channel and scored by its sum rate.
"""

import numpy as np
import numpy.typing as npt

from mahbf.channel import ChannelMatrix
from mahbf.lib.exceptions import ContractViolation, DegenerateGeometryError
from mahbf.log import logger
from mahbf.precoding import (
    AnalogPrecoder,
    HybridSolution,
    RewardForm,
    SystemConfig,
    degenerate_solution,
    precode,
    raw_reward,
)


def env_step(
    h: ChannelMatrix,
    action: npt.ArrayLike,
    system: SystemConfig,
    reward_form: RewardForm = RewardForm.P_OVER_SIGMA2,
) -> tuple[float, HybridSolution]:
    """
    :return: the raw reward and the hybrid solution. A singular effective channel yields
        reward 0 and a solution flagged ``degenerate``.
    """
    action = np.asarray(action, dtype=float)
    if action.shape != (h.n_tx * system.n_rf,):
        raise ContractViolation(
            f"action has shape {action.shape}, expected ({h.n_tx * system.n_rf},)"
        )
    analog = AnalogPrecoder.from_vector(action, h.n_tx, system.n_rf)
    try:
        solution = precode(h, analog, system)
    except DegenerateGeometryError:
        logger.debug("Degenerate effective channel; reward set to zero")
        return 0.0, degenerate_solution(h, analog, system)
    return raw_reward(solution.power, reward_form), solution


def shape_reward(raw: float, sigma_pred: float, eta: float) -> float:
    """r̄ = r + η σ."""
    if eta < 0:
        raise ContractViolation(f"eta must be non-negative, got {eta}")
    return raw + eta * sigma_pred
