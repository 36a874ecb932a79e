from mahbf.replay.priorities import (
    DEFAULT_DELTA,
    agent_priorities,
    allocate_minibatch,
    compute_priority,
)
from mahbf.replay.sum_tree import SumTree, Transition

__all__ = [
    "DEFAULT_DELTA",
    "SumTree",
    "Transition",
    "agent_priorities",
    "allocate_minibatch",
    "compute_priority",
]
