"""
Network updates of one learning iteration.

Networks see phases divided by π, so states and actions share the box (-1, 1]; the actor's
tanh output u maps to the action π·u. Rewards enter targets and priorities divided by the
episode's ``reward_scale`` so that Q-values fit the critic's tanh head.

Losses, with M the total minibatch size and q_i the agent priorities:
    critic      (1/M) Σ_i Σ_m q_i (Q(s, a) - y)²,    y = r + γ Q'(s', A'_i(s'))
    predictive  (1/M) Σ_i Σ_m q_i (Q(s, a) - σ(s, a))²,  Q held constant
    actor i     (q_i / M_i) Σ_m -Q(s, A_i(s))
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from mahbf.lib.exceptions import DivergenceError
from mahbf.log import logger
from mahbf.madrl.types import Agent, CentralNets
from mahbf.neural import GradientSet, MlpParams, backward, forward
from mahbf.neural.optim import Optimizer
from mahbf.replay import Transition

Array = npt.NDArray[np.float64]


@dataclass
class AgentSample:
    """
    Minibatch share drawn from one agent's buffer.

    Attributes:
        agent_index (int): Which buffer the rows came from.
        slots (list[int]): Buffer slots, for priority refresh.
        transitions (list[Transition]): The drawn transitions.
        rewards (np.ndarray): Shaped rewards divided by the reward scale.
    """

    agent_index: int
    slots: list[int]
    transitions: list[Transition]
    states: Array
    actions: Array
    rewards: Array
    next_states: Array

    @classmethod
    def from_draws(
        cls,
        agent_index: int,
        draws: Sequence[tuple[int, Transition]],
        reward_scale: float,
    ) -> "AgentSample":
        slots = [slot for slot, _ in draws]
        transitions = [t for _, t in draws]
        return cls(
            agent_index=agent_index,
            slots=slots,
            transitions=transitions,
            states=np.stack([t.state for t in transitions]),
            actions=np.stack([t.action for t in transitions]),
            rewards=np.array([t.reward for t in transitions]) / reward_scale,
            next_states=np.stack([t.next_state for t in transitions]),
        )

    def __len__(self) -> int:
        return len(self.slots)


def critic_input(states: npt.ArrayLike, actions: npt.ArrayLike) -> Array:
    return np.concatenate(
        [np.asarray(states) / np.pi, np.asarray(actions) / np.pi], axis=-1
    )


def q_values(critic: MlpParams, states: npt.ArrayLike, actions: npt.ArrayLike) -> Array:
    return forward(critic, critic_input(states, actions))[..., 0]


def policy(actor: MlpParams, states: npt.ArrayLike) -> Array:
    """Noise-free action π·A(s/π)."""
    return np.pi * forward(actor, np.asarray(states) / np.pi)


def target_q(next_states: npt.ArrayLike, agent: Agent, nets: CentralNets) -> Array:
    """Q_C'(s', A'_i(s'))."""
    next_actions = policy(agent.target_actor, next_states)
    return q_values(nets.target_critic, next_states, next_actions)


def critic_target(
    reward: npt.ArrayLike,
    next_state: npt.ArrayLike,
    agent: Agent,
    nets: CentralNets,
    gamma: float,
) -> Array | float:
    y = np.asarray(reward, dtype=float) + gamma * target_q(next_state, agent, nets)
    return float(y) if np.ndim(y) == 0 else y


def _check_loss(loss: float, network: str) -> float:
    if not np.isfinite(loss):
        raise DivergenceError(f"non-finite {network} loss")
    return float(loss)


def critic_loss_grad(
    critic: MlpParams,
    samples: Sequence[AgentSample],
    q: Sequence[float],
    targets: Sequence[Array],
) -> tuple[float, GradientSet]:
    total = sum(len(s) for s in samples)
    loss, grads = 0.0, None
    for sample, y in zip(samples, targets):
        weight = q[sample.agent_index]
        x = critic_input(sample.states, sample.actions)
        diff = forward(critic, x)[:, 0] - y
        loss += weight * float(np.sum(diff**2)) / total
        g = backward(critic, x, (2.0 * weight * diff / total)[:, None])
        grads = g if grads is None else grads + g
    return loss, grads


def predictive_loss_grad(
    predictive: MlpParams,
    critic: MlpParams,
    samples: Sequence[AgentSample],
    q: Sequence[float],
) -> tuple[float, GradientSet, GradientSet]:
    """
    :return: loss, its gradient for the predictive network and its gradient for the critic
        (used only when the two are coupled).
    """
    total = sum(len(s) for s in samples)
    loss, grads_p, grads_c = 0.0, None, None
    for sample in samples:
        weight = q[sample.agent_index]
        x = critic_input(sample.states, sample.actions)
        diff = forward(critic, x)[:, 0] - forward(predictive, x)[:, 0]
        loss += weight * float(np.sum(diff**2)) / total
        dloss = (2.0 * weight * diff / total)[:, None]
        gp = backward(predictive, x, -dloss)
        gc = backward(critic, x, dloss)
        grads_p = gp if grads_p is None else grads_p + gp
        grads_c = gc if grads_c is None else grads_c + gc
    return loss, grads_p, grads_c


def actor_objective_grad(
    actor: MlpParams, critic: MlpParams, states: npt.ArrayLike, q_i: float
) -> tuple[float, GradientSet]:
    """
    Objective (q_i / M_i) Σ -Q(s, A(s)) and its gradient with respect to the actor, the
    critic's input gradient chained through the actor output.
    """
    inputs = np.asarray(states, dtype=float) / np.pi
    n = inputs.shape[-1]
    u = forward(actor, inputs)
    x = np.concatenate([inputs, u], axis=-1)
    q_sa = forward(critic, x)[:, 0]
    scale = q_i / len(q_sa)
    objective = -scale * float(np.sum(q_sa))
    through_critic = backward(critic, x, np.full((len(q_sa), 1), -scale))
    grads = backward(actor, inputs, through_critic.input_grad[:, n:])
    return objective, grads


def update_critic(
    nets: CentralNets,
    samples: Sequence[AgentSample],
    q: Sequence[float],
    targets: Sequence[Array],
    optimizer: Optimizer,
    extra_grad: Optional[GradientSet] = None,
) -> float:
    """
    One step on the critic loss; returns the loss before the step.

    :param extra_grad: Gradient added to the critic's own (the coupled predictive term).
    """
    loss, grads = critic_loss_grad(nets.critic, samples, q, targets)
    _check_loss(loss, "critic")
    if extra_grad is not None:
        grads = grads + extra_grad
    nets.critic = optimizer.step(nets.critic, grads)
    return loss


def update_predictive(
    nets: CentralNets,
    samples: Sequence[AgentSample],
    q: Sequence[float],
    optimizer: Optimizer,
) -> tuple[float, GradientSet]:
    """
    One step on the predictive loss with the critic output as a fixed target.

    :return: the loss before the step and the loss gradient with respect to the critic.
    """
    loss, grads_p, grads_c = predictive_loss_grad(
        nets.predictive, nets.critic, samples, q
    )
    _check_loss(loss, "predictive")
    nets.predictive = optimizer.step(nets.predictive, grads_p)
    return loss, grads_c


def update_actor(
    agent: Agent, nets: CentralNets, sample: AgentSample, q_i: float
) -> float:
    """
    One policy-gradient step for ``agent``; the critic is read, never changed. Non-finite
    gradients skip the step with a warning.
    """
    objective, grads = actor_objective_grad(
        agent.actor, nets.critic, sample.states, q_i
    )
    try:
        agent.actor = agent.optimizer.step(agent.actor, grads)
    except DivergenceError as e:
        logger.warning(f"Skipping actor update for agent {agent.index}: {e}")
    return objective
