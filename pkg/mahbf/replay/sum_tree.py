"""
Per-agent replay buffer stored as a sum-tree.

Leaves hold transitions and their priorities; every internal node holds the sum of its two
children, so the root is the total priority and a proportional draw is a single descent.
The leaf level is padded to a power of two; padding leaves have priority zero and are never
selected. Writes overwrite the oldest slot once the buffer is full (FIFO cursor).
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import numpy.typing as npt

from mahbf.lib.exceptions import ContractViolation
from mahbf.log import logger
from mahbf.numerics import RngHandle


@dataclass
class Transition:
    """
    Attributes:
        state (np.ndarray): Phase vector s^(t).
        action (np.ndarray): Phase vector a^(t).
        reward (float): Shaped reward r̄ in bits/s/Hz.
        next_state (np.ndarray): Phase vector s^(t+1).
        priority (float): Sampling priority, always positive.
        access_count (int): Number of times this transition has been sampled.
        born_iter (int): Learning iteration that produced it.
    """

    state: npt.NDArray[np.float64]
    action: npt.NDArray[np.float64]
    reward: float
    next_state: npt.NDArray[np.float64]
    priority: float
    access_count: int = 0
    born_iter: int = 0

    def __post_init__(self):
        if not self.priority > 0.0:
            raise ContractViolation(f"priority must be positive, got {self.priority}")
        if not (len(self.state) == len(self.action) == len(self.next_state)):
            raise ContractViolation("state, action and next state lengths differ")

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("state", "action", "next_state"):
            data[key] = np.asarray(data[key]).tolist()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Transition":
        return cls(
            state=np.asarray(data["state"], dtype=float),
            action=np.asarray(data["action"], dtype=float),
            reward=float(data["reward"]),
            next_state=np.asarray(data["next_state"], dtype=float),
            priority=float(data["priority"]),
            access_count=int(data["access_count"]),
            born_iter=int(data["born_iter"]),
        )


class SumTree:
    """
    Attributes:
        capacity (int): Maximum number of live transitions.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ContractViolation(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._n_leaves = 1 << (capacity - 1).bit_length()
        # 1-based heap layout: node i has children 2i and 2i + 1, leaves start at n_leaves
        self._tree = np.zeros(2 * self._n_leaves)
        self._data: list[Optional[Transition]] = [None] * capacity
        self._cursor = 0
        self._size = 0
        self._total_access = 0

    def __len__(self) -> int:
        return self._size

    @property
    def root(self) -> float:
        return float(self._tree[1])

    @property
    def occupancy(self) -> int:
        return self._size

    @property
    def total_access(self) -> int:
        return self._total_access

    @property
    def cursor(self) -> int:
        return self._cursor

    def node(self, index: int) -> float:
        return float(self._tree[index])

    def internal_nodes(self) -> range:
        return range(1, self._n_leaves)

    def priorities(self) -> npt.NDArray[np.float64]:
        """Priorities of the occupied slots, in slot order."""
        return self._tree[self._n_leaves : self._n_leaves + self._size].copy()

    def get(self, slot: int) -> Transition:
        transition = self._data[slot]
        if transition is None:
            raise IndexError(f"slot {slot} is empty")
        return transition

    def _set_leaf(self, slot: int, priority: float) -> None:
        i = slot + self._n_leaves
        self._tree[i] = priority
        i //= 2
        while i >= 1:
            self._tree[i] = self._tree[2 * i] + self._tree[2 * i + 1]
            i //= 2

    def push(self, transition: Transition) -> int:
        """
        Store a transition at the write cursor and return its slot.
        """
        slot = self._cursor
        old = self._data[slot]
        if old is not None:
            self._total_access -= old.access_count
        else:
            self._size += 1
        self._data[slot] = transition
        self._total_access += transition.access_count
        self._set_leaf(slot, transition.priority)
        self._cursor = (self._cursor + 1) % self.capacity
        return slot

    def update(self, slot: int, priority: float) -> None:
        if not priority > 0.0:
            raise ContractViolation(f"priority must be positive, got {priority}")
        self.get(slot).priority = priority
        self._set_leaf(slot, priority)

    def _descend(self, u: float) -> int:
        i = 1
        while i < self._n_leaves:
            left = 2 * i
            if u < self._tree[left] or self._tree[left + 1] <= 0.0:
                i = left
            else:
                u -= self._tree[left]
                i = left + 1
        return i - self._n_leaves

    def sample(self, count: int, rng: RngHandle) -> list[tuple[int, Transition]]:
        """
        Draw ``count`` transitions with replacement, each slot with probability
        priority / root. Every draw increments the drawn transition's access count.
        """
        if count < 0:
            raise ContractViolation(f"cannot draw {count} samples")
        if self._size == 0:
            if count:
                logger.warning("Sampling from an empty replay buffer; nothing drawn")
            return []

        draws = []
        for u in rng.uniform(count) * self.root:
            slot = self._descend(float(u))
            transition = self.get(slot)
            transition.access_count += 1
            self._total_access += 1
            draws.append((slot, transition))
        return draws

    def dump_jsonl(self, path: Path | str) -> None:
        """First line: buffer metadata; then one occupied slot per line."""
        with open(path, "w") as file:
            meta = {"capacity": self.capacity, "cursor": self._cursor}
            file.write(json.dumps(meta) + "\n")
            for slot, transition in enumerate(self._data):
                if transition is not None:
                    record = {"slot": slot, **transition.to_dict()}
                    file.write(json.dumps(record) + "\n")

    @classmethod
    def restore_jsonl(cls, path: Path | str) -> "SumTree":
        with open(path, "r") as file:
            meta = json.loads(file.readline())
            tree = cls(int(meta["capacity"]))
            for line in file:
                record = json.loads(line)
                slot = int(record.pop("slot"))
                tree._cursor = slot
                tree.push(Transition.from_dict(record))
        tree._cursor = int(meta["cursor"])
        return tree
