import numpy as np
import pytest

from mahbf.lib.exceptions import ContractViolation
from mahbf.madrl import env_step, shape_reward
from mahbf.numerics import RngHandle
from mahbf.precoding import AnalogPrecoder, RewardForm, precode, raw_reward


def test_env_step_scores_action(channel, system):
    action = -np.pi + 2.0 * np.pi * RngHandle(1).uniform_open(8)
    reward, solution = env_step(channel, action, system)
    expected = precode(channel, AnalogPrecoder.from_vector(action, 4, 2), system)
    assert reward == pytest.approx(expected.sum_rate)
    assert solution.sum_rate == pytest.approx(reward)
    assert not solution.degenerate


def test_env_step_ignores_whole_turns(channel, system):
    action = -np.pi + 2.0 * np.pi * RngHandle(3).uniform_open(8)
    turned = action.copy()
    turned[[0, 5]] += 2.0 * np.pi
    turned[3] -= 4.0 * np.pi
    reward, solution = env_step(channel, action, system)
    turned_reward, turned_solution = env_step(channel, turned, system)
    assert turned_reward == pytest.approx(reward, rel=1e-9)
    np.testing.assert_allclose(
        turned_solution.analog.matrix, solution.analog.matrix, atol=1e-12
    )


def test_env_step_reward_form(channel, system):
    action = -np.pi + 2.0 * np.pi * RngHandle(2).uniform_open(8)
    reward, solution = env_step(channel, action, system, RewardForm.P_SQUARED)
    assert reward == pytest.approx(raw_reward(solution.power, RewardForm.P_SQUARED))


def test_env_step_degenerate_action(channel, system):
    reward, solution = env_step(channel, np.zeros(8), system)
    assert reward == 0.0
    assert solution.degenerate


def test_env_step_rejects_wrong_shape(channel, system):
    with pytest.raises(ContractViolation):
        env_step(channel, np.zeros(7), system)


def test_shape_reward():
    assert shape_reward(2.0, 0.5, 0.1) == pytest.approx(2.05)
    assert shape_reward(2.0, 0.5, 0.0) == 2.0
    with pytest.raises(ContractViolation):
        shape_reward(2.0, 0.5, -0.1)
