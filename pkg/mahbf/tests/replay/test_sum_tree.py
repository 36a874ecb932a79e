from unittest.mock import patch

import numpy as np
import pytest

from mahbf.lib.exceptions import ContractViolation
from mahbf.numerics import RngHandle
from mahbf.replay import SumTree, Transition


def _transition(priority: float, marker: float = 0.0) -> Transition:
    v = np.full(2, marker)
    return Transition(v, v, marker, v, priority)


def _internal_sums_hold(tree: SumTree) -> bool:
    return all(
        tree.node(i) == pytest.approx(tree.node(2 * i) + tree.node(2 * i + 1))
        for i in tree.internal_nodes()
    )


def test_push_updates_root_and_size():
    tree = SumTree(5)
    for p in (1.0, 2.0, 3.0):
        tree.push(_transition(p))
    assert len(tree) == tree.occupancy == 3
    assert tree.root == pytest.approx(6.0)
    np.testing.assert_array_equal(tree.priorities(), [1.0, 2.0, 3.0])
    assert _internal_sums_hold(tree)


def test_push_overwrites_oldest_when_full():
    tree = SumTree(2)
    assert [tree.push(_transition(p, p)) for p in (1.0, 2.0, 4.0)] == [0, 1, 0]
    assert len(tree) == 2
    assert tree.get(0).reward == 4.0
    assert tree.root == pytest.approx(6.0)
    assert tree.cursor == 1


def test_update_changes_priority():
    tree = SumTree(4)
    tree.push(_transition(1.0))
    tree.push(_transition(1.0))
    tree.update(1, 5.0)
    assert tree.root == pytest.approx(6.0)
    assert tree.get(1).priority == 5.0
    with pytest.raises(ContractViolation):
        tree.update(0, 0.0)
    with pytest.raises(IndexError):
        tree.update(3, 1.0)


def test_sample_counts_accesses():
    tree = SumTree(3)
    for p in (1.0, 1.0, 1.0):
        tree.push(_transition(p))
    draws = tree.sample(10, RngHandle(0))
    assert len(draws) == 10
    assert tree.total_access == 10
    assert sum(tree.get(slot).access_count for slot in range(3)) == 10


def test_sample_never_picks_padding_or_empty_slots():
    tree = SumTree(5)
    tree.push(_transition(1.0))
    tree.push(_transition(3.0))
    slots = {slot for slot, _ in tree.sample(500, RngHandle(1))}
    assert slots == {0, 1}


def test_sample_follows_priorities():
    tree = SumTree(2)
    tree.push(_transition(1.0))
    tree.push(_transition(3.0))
    counts = np.bincount([s for s, _ in tree.sample(20_000, RngHandle(2))])
    assert counts[1] / counts.sum() == pytest.approx(0.75, abs=0.02)


@patch("mahbf.replay.sum_tree.logger.warning")
def test_sample_from_empty_tree_warns(mock_warning):
    assert SumTree(3).sample(4, RngHandle(0)) == []
    mock_warning.assert_called_once_with(
        "Sampling from an empty replay buffer; nothing drawn"
    )


def test_overwrite_forgets_old_accesses():
    tree = SumTree(1)
    tree.push(_transition(1.0))
    tree.sample(3, RngHandle(0))
    assert tree.total_access == 3
    tree.push(_transition(1.0))
    assert tree.total_access == 0


def test_rejects_invalid_arguments():
    with pytest.raises(ContractViolation):
        SumTree(0)
    with pytest.raises(ContractViolation):
        _transition(0.0)
    with pytest.raises(ContractViolation):
        Transition(np.zeros(2), np.zeros(3), 0.0, np.zeros(2), 1.0)
    with pytest.raises(ContractViolation):
        SumTree(2).sample(-1, RngHandle(0))


def test_dump_and_restore(tmp_path):
    tree = SumTree(3)
    for p in (1.0, 2.0, 3.0, 4.0):
        tree.push(_transition(p, p))
    tree.sample(5, RngHandle(3))
    path = tmp_path / "buffer.jsonl"
    tree.dump_jsonl(path)

    restored = SumTree.restore_jsonl(path)
    assert restored.capacity == 3 and restored.cursor == tree.cursor
    np.testing.assert_array_equal(restored.priorities(), tree.priorities())
    assert restored.total_access == tree.total_access
    assert restored.get(0).reward == 4.0
