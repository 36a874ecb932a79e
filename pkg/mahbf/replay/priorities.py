"""
Priority arithmetic for multi-agent prioritized replay: per-transition priorities, per-agent
priorities derived from the buffers' root sums, and the split of one minibatch across agents.
"""

from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from mahbf.lib.exceptions import ContractViolation
from mahbf.log import logger

DEFAULT_DELTA = 1e-3


def compute_priority(
    q_value: float,
    reward: float,
    access_count: float,
    total_access: float,
    delta: float = DEFAULT_DELTA,
) -> float:
    """
    |Q - r̄| + ρ / max(Σρ, 1) + δ. The absolute value keeps the priority above δ for
    pessimistic critics.
    """
    if delta <= 0:
        raise ContractViolation(f"delta must be positive, got {delta}")
    return abs(q_value - reward) + access_count / max(total_access, 1.0) + delta


def agent_priorities(
    roots: Sequence[float], occupancy: Optional[Sequence[int]] = None
) -> npt.NDArray[np.float64]:
    """
    Softmax over the agents' root priority sums, shifted by the maximum for stability.

    :param occupancy: When given, each root is first divided by its live-leaf count.
    """
    phi = np.asarray(roots, dtype=float)
    if phi.ndim != 1 or phi.size == 0 or not np.all(np.isfinite(phi)):
        raise ContractViolation("roots must be a non-empty finite vector")
    if occupancy is not None:
        phi = phi / np.maximum(np.asarray(occupancy, dtype=float), 1.0)
    weights = np.exp(phi - phi.max())
    return weights / weights.sum()


def _largest_remainder(q: np.ndarray, total: int) -> np.ndarray:
    share = q * total
    counts = np.floor(share).astype(np.int64)
    remainders = share - counts
    shortfall = max(total - int(counts.sum()), 0)
    by_remainder = sorted(range(q.size), key=lambda i: (-remainders[i], i))
    for i in by_remainder[:shortfall]:
        counts[i] += 1
    return counts


def allocate_minibatch(
    q: Sequence[float], total: int, occupancy: Optional[Sequence[int]] = None
) -> list[int]:
    """
    Split a minibatch of ``total`` draws across agents.

    Each agent gets floor(q_i M); the shortfall goes one draw at a time to the largest
    fractional remainders (lowest index on ties). Without ``occupancy`` buffers are
    taken to be unbounded. Otherwise agents cannot be given more draws than they hold
    transitions; any excess is handed to the remaining agents in order of decreasing q,
    so the counts sum to min(M, total live transitions).
    """
    q = np.asarray(q, dtype=float)
    if total < 0:
        raise ContractViolation(f"minibatch size must be non-negative, got {total}")
    if occupancy is None:
        return [int(c) for c in _largest_remainder(q, total)]

    occ = np.asarray(occupancy, dtype=np.int64)
    if occ.shape != q.shape:
        raise ContractViolation("occupancy and agent priorities differ in length")
    if occ.sum() == 0:
        if total:
            logger.warning("All replay buffers are empty; minibatch allocation is zero")
        return [0] * q.size

    target = int(min(total, occ.sum()))
    counts = np.minimum(_largest_remainder(q, total), occ)
    by_priority = sorted(range(q.size), key=lambda i: (-q[i], i))
    while counts.sum() < target:
        for i in by_priority:
            if counts.sum() >= target:
                break
            if counts[i] < occ[i]:
                counts[i] += 1
    return [int(c) for c in counts]

