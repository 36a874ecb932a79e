import numpy as np
import numpy.typing as npt

from mahbf.channel import ChannelMatrix
from mahbf.lib.exceptions import (
    ContractViolation,
    DegenerateGeometryError,
    SingularSystemError,
)
from mahbf.numerics import CMatrix, right_pseudo_inverse
from mahbf.precoding.types import AnalogPrecoder, PowerAllocation

MAX_EFFECTIVE_CONDITION = 1e10


def right_inverse(g: CMatrix) -> CMatrix:
    """G^H (G G^H)^{-1} for a wide, full-row-rank G."""
    if np.linalg.cond(g) >= MAX_EFFECTIVE_CONDITION:
        raise DegenerateGeometryError("effective channel is rank deficient")
    try:
        return right_pseudo_inverse(g)
    except SingularSystemError as e:
        raise DegenerateGeometryError(str(e)) from e


def zf_digital(h: ChannelMatrix, f_rf: AnalogPrecoder) -> CMatrix:
    """
    Zero-forcing baseband precoder F̃_D = F_RF^H H^H (H F_RF (H F_RF)^H)^{-1}, so that
    H F_RF F̃_D = I_K.
    """
    if f_rf.n_tx != h.n_tx:
        raise ContractViolation(
            f"analog precoder has {f_rf.n_tx} rows, channel has {h.n_tx} antennas"
        )
    if h.n_users > f_rf.n_rf:
        raise ContractViolation(
            f"{h.n_users} users cannot be served by {f_rf.n_rf} RF chains"
        )
    return right_inverse(h.matrix @ f_rf.matrix)


def effective_gains(f_tilde: CMatrix, f_rf: AnalogPrecoder) -> npt.NDArray[np.float64]:
    """Diagonal of Y = F̃_D^H F_RF^H F_RF F̃_D, i.e. squared column norms of F_RF F̃_D."""
    if f_tilde.shape[0] != f_rf.n_rf:
        raise ContractViolation(
            f"digital precoder has {f_tilde.shape[0]} rows, expected {f_rf.n_rf}"
        )
    return np.sum(np.abs(f_rf.matrix @ f_tilde) ** 2, axis=0)


def assemble_digital(f_tilde: CMatrix, power: PowerAllocation) -> CMatrix:
    """F_D = F̃_D P^{1/2}."""
    if f_tilde.shape[1] != power.powers.shape[0]:
        raise ContractViolation("digital precoder and power vector disagree on K")
    return f_tilde * np.sqrt(power.powers)[None, :]
