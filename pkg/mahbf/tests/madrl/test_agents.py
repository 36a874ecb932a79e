from unittest.mock import patch

import numpy as np
import pytest

from mahbf.lib.exceptions import ContractViolation, RankDeficiencyError
from mahbf.madrl import (
    act,
    init_agents,
    init_central_nets,
    orthogonal_initial_precoders,
    select_best,
    select_incumbent,
)
from mahbf.madrl.agents import ANCHOR_LIMIT, actor_dims, anchored_actor, critic_dims
from mahbf.madrl.updates import policy
from mahbf.neural import init_params
from mahbf.numerics import RngHandle


def test_initial_precoders_are_orthogonal():
    vectors, precoders = orthogonal_initial_precoders(3, 4, 2, RngHandle(0))
    assert len(precoders) == 3
    for i in range(3):
        for j in range(i):
            assert abs(np.vdot(vectors[i], vectors[j])) < 1e-10
    for v, p in zip(vectors, precoders):
        np.testing.assert_allclose(np.exp(1j * p.to_vector()), np.exp(1j * np.angle(v)))
        assert (p.n_tx, p.n_rf) == (4, 2)


def test_initial_precoders_reject_too_many_agents():
    with pytest.raises(ContractViolation):
        orthogonal_initial_precoders(9, 4, 2, RngHandle(0))


@patch("mahbf.madrl.agents.logger.warning")
@patch(
    "mahbf.madrl.agents.gram_schmidt_orthogonalize",
    side_effect=RankDeficiencyError("dependent"),
)
def test_initial_precoders_give_up_after_retries(mock_gs, mock_warning):
    with pytest.raises(RankDeficiencyError):
        orthogonal_initial_precoders(2, 4, 2, RngHandle(0), retries=2)
    assert mock_gs.call_count == 3
    assert mock_warning.call_count == 3


def test_init_agents(trainer_cfg):
    agents = init_agents(trainer_cfg, 4, 2, RngHandle(1))
    assert [a.index for a in agents] == [0, 1]
    for agent in agents:
        assert agent.actor.layer_dims == (8, 8, 6, 8)
        np.testing.assert_array_equal(agent.target_actor.flat(), agent.actor.flat())
        assert agent.buffer.capacity == 20 and len(agent.buffer) == 0
        np.testing.assert_array_equal(
            agent.current_state, agent.current_analog.to_vector()
        )
    assert not np.array_equal(agents[0].current_state, agents[1].current_state)


def test_network_dimensions(trainer_cfg):
    assert actor_dims(trainer_cfg, 4, 2) == (8, 8, 6, 8)
    assert critic_dims(trainer_cfg, 4, 2) == (16, 8, 6, 1)
    nets = init_central_nets(trainer_cfg, 4, 2, RngHandle(2))
    assert nets.critic.layer_dims == nets.predictive.layer_dims == (16, 8, 6, 1)
    np.testing.assert_array_equal(nets.target_critic.flat(), nets.critic.flat())
    assert not np.array_equal(nets.critic.flat(), nets.predictive.flat())


def test_act_without_noise_draws_nothing(trainer_cfg):
    agent = init_agents(trainer_cfg, 4, 2, RngHandle(0))[0]
    rng = RngHandle(5)
    first = act(agent, 0.0, rng)
    np.testing.assert_array_equal(first, act(agent, 0.0, rng))
    np.testing.assert_array_equal(rng.uniform(3), RngHandle(5).uniform(3))


def test_act_with_noise_stays_in_phase_range(trainer_cfg):
    agent = init_agents(trainer_cfg, 4, 2, RngHandle(0))[0]
    action = act(agent, 10.0, RngHandle(6))
    assert action.shape == (8,)
    assert np.all(action > -np.pi) and np.all(action <= np.pi)


def _acted(trainer_cfg):
    agents = init_agents(trainer_cfg, 4, 2, RngHandle(0))
    for index, agent in enumerate(agents):
        agent.last_state = agent.current_state
        agent.last_action = agent.current_state
        agent.last_solution = f"solution {index}"
    return agents, init_central_nets(trainer_cfg, 4, 2, RngHandle(1))


@patch("mahbf.madrl.agents.q_values", return_value=np.array([0.1, 0.5]))
def test_select_best_picks_highest_q(mock_q, trainer_cfg):
    agents, nets = _acted(trainer_cfg)
    assert select_best(agents, nets) == "solution 1"


@patch("mahbf.madrl.agents.q_values", return_value=np.array([0.5, 0.5]))
def test_select_best_breaks_ties_by_index(mock_q, trainer_cfg):
    agents, nets = _acted(trainer_cfg)
    assert select_best(agents, nets) == "solution 0"


def test_select_best_requires_acted_agents(trainer_cfg):
    agents, nets = _acted(trainer_cfg)
    with pytest.raises(ContractViolation):
        select_best([], nets)
    agents[1].last_solution = None
    with pytest.raises(ContractViolation):
        select_best(agents, nets)


def test_anchored_actors_start_at_their_initial_state(trainer_cfg):
    for agent in init_agents(trainer_cfg, 4, 2, RngHandle(3)):
        expected = np.pi * np.clip(
            agent.current_state / np.pi, -ANCHOR_LIMIT, ANCHOR_LIMIT
        )
        np.testing.assert_allclose(
            policy(agent.actor, agent.current_state), expected, atol=0.1
        )


def test_anchoring_keeps_hidden_layers(trainer_cfg):
    actor = init_params((8, 8, 6, 8), RngHandle(0), output_scale=1e-3)
    anchored = anchored_actor(actor, np.full(8, np.pi))
    np.testing.assert_array_equal(anchored.weights[0], actor.weights[0])
    np.testing.assert_allclose(np.tanh(anchored.biases[-1]), ANCHOR_LIMIT)


def test_unanchored_actors_start_near_zero_phase(trainer_cfg):
    cfg = trainer_cfg.model_copy(update={"anchor_actors": False})
    agent = init_agents(cfg, 4, 2, RngHandle(3))[0]
    assert np.max(np.abs(policy(agent.actor, agent.current_state))) < 0.1


def _observed(trainer_cfg, rates):
    agents = init_agents(trainer_cfg, 4, 2, RngHandle(0))
    for agent, rate in zip(agents, rates):
        agent.observe(
            agent.current_state, agent.current_state, rate, f"best {agent.index}"
        )
        agent.observe(agent.current_state, agent.current_state, rate - 1.0, "worse")
    return agents, init_central_nets(trainer_cfg, 4, 2, RngHandle(1))


def test_observe_keeps_the_incumbent(trainer_cfg):
    agents, _ = _observed(trainer_cfg, [2.0, 3.0])
    assert agents[0].last_solution == "worse"
    assert agents[0].incumbent.solution == "best 0"
    assert agents[0].best_rate == 2.0


def test_select_incumbent_picks_highest_rate(trainer_cfg):
    agents, nets = _observed(trainer_cfg, [2.0, 3.0])
    assert select_incumbent(agents, nets) == "best 1"


@patch("mahbf.madrl.agents.q_values", return_value=np.array([0.1, 0.5]))
def test_select_incumbent_breaks_rate_ties_by_q(mock_q, trainer_cfg):
    agents, nets = _observed(trainer_cfg, [2.0, 2.0])
    assert select_incumbent(agents, nets) == "best 1"
    mock_q.assert_called_once()


def test_select_incumbent_requires_observations(trainer_cfg):
    agents = init_agents(trainer_cfg, 4, 2, RngHandle(0))
    nets = init_central_nets(trainer_cfg, 4, 2, RngHandle(1))
    with pytest.raises(ContractViolation):
        select_incumbent(agents, nets)
