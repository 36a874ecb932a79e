from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from mahbf.bench.runner import (
    baseline_rng,
    episode_entry,
    point_channel,
    run_episode,
    run_points,
    shared_level_iterations,
)


@dataclass(frozen=True)
class _Point:
    index: int


def _square(point: _Point) -> int:
    return point.index**2


def test_run_points_sequential():
    points = [_Point(i) for i in range(4)]
    assert run_points(_square, points) == [0, 1, 4, 9]


def test_run_points_pool_keeps_point_order(mocker):
    mocker.patch("mahbf.bench.runner.ProcessPoolExecutor", ThreadPoolExecutor)
    points = [_Point(i) for i in reversed(range(5))]
    assert run_points(_square, points, workers=3) == [0, 1, 4, 9, 16]


def test_point_channel_depends_only_on_seed_and_realization(small_spec):
    a = point_channel(small_spec, 0, 0)
    b = point_channel(small_spec.model_copy(update={"snr_grid": [20.0]}), 0, 0)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, point_channel(small_spec, 0, 1).matrix)
    assert not np.array_equal(a.matrix, point_channel(small_spec, 1, 0).matrix)


def test_baseline_stream_is_separate():
    assert baseline_rng(0, 0).keys == (2, 0)


def test_run_episode_uses_requested_snr(small_spec):
    h = point_channel(small_spec, 0, 0)
    low = run_episode(small_spec, h, -10.0, 0, 0)
    high = run_episode(small_spec, h, 20.0, 0, 0)
    assert high.first_rate > low.first_rate


def test_shared_level_uses_lowest_final_rate_per_group():
    traces = {
        ("fast", 0): [1.0, 4.0, 4.0, 5.0],
        ("slow", 0): [1.0, 2.0, 3.0, 4.0],
        ("fast", 1): [9.0, 9.0],
        ("failed", 1): [],
    }
    to_level = shared_level_iterations(traces, lambda key: key[1], 0.0)
    # Group 0 is timed against 4.0, the slower run's final rate
    assert to_level[("fast", 0)] == 2
    assert to_level[("slow", 0)] == 4
    assert to_level[("fast", 1)] == 1
    assert to_level[("failed", 1)] is None


def test_shared_level_tolerance_lowers_the_level():
    traces = {"a": [1.0, 1.9, 2.0], "b": [2.0, 2.0, 2.0]}
    assert shared_level_iterations(traces, lambda key: 0, 0.05) == {"a": 2, "b": 1}


def test_episode_entry(small_spec):
    result = run_episode(small_spec, point_channel(small_spec, 0, 0), 5.0, 0, 0)
    entry = episode_entry({"seed": 0}, result)
    assert entry["seed"] == 0
    assert entry["episode"]["iterations"] == result.iterations
    assert entry["episode"]["solution"]["sum_rate"] == result.final_rate
    assert episode_entry({"seed": 1}, None) == {"seed": 1, "episode": None}
