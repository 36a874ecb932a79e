"""
Construction of the agents and the centralized networks, plus the per-agent acting rule.
"""

from typing import Sequence

import numpy as np
import numpy.typing as npt

from mahbf.lib.exceptions import ContractViolation, RankDeficiencyError
from mahbf.log import logger
from mahbf.madrl.types import Agent, CentralNets, TrainerConfig
from mahbf.madrl.updates import policy, q_values
from mahbf.neural import MlpParams, init_params, make_optimizer, with_output_bias
from mahbf.numerics import RngHandle, gram_schmidt_orthogonalize, vec, wrap_phase
from mahbf.precoding import AnalogPrecoder, HybridSolution
from mahbf.replay import SumTree

# Largest |phase|/π an anchored actor aims for
ANCHOR_LIMIT = 0.9


def orthogonal_initial_precoders(
    n_agents: int, n_tx: int, n_rf: int, rng: RngHandle, retries: int = 5
) -> tuple[list[npt.NDArray[np.complex128]], list[AnalogPrecoder]]:
    """
    Draw ``n_agents`` random complex N_t×N_RF matrices, orthogonalize their vectorizations
    with Gram-Schmidt and keep the entrywise phases as the initial analog precoders.

    Orthogonality holds for the returned vectors, before the unit-modulus projection.

    :raises RankDeficiencyError: if every draw within ``retries`` was rank deficient.
    """
    if n_agents > n_tx * n_rf:
        raise ContractViolation(
            f"{n_agents} agents cannot start orthogonally in dimension {n_tx * n_rf}"
        )
    for attempt in range(retries + 1):
        draws = [vec(rng.complex_normal((n_tx, n_rf))) for _ in range(n_agents)]
        try:
            vectors = gram_schmidt_orthogonalize(draws)
        except RankDeficiencyError as e:
            logger.warning(
                f"Initial precoders rank deficient (attempt {attempt + 1}): {e}"
            )
            continue
        precoders = [
            AnalogPrecoder.from_vector(wrap_phase(np.angle(v)), n_tx, n_rf)
            for v in vectors
        ]
        states = [p.to_vector() for p in precoders]
        if any(
            np.array_equal(states[i], states[j])
            for i in range(n_agents)
            for j in range(i + 1, n_agents)
        ):
            logger.warning("Initial states coincide; redrawing")
            continue
        return vectors, precoders
    raise RankDeficiencyError(
        f"no orthogonal initial precoders after {retries + 1} draws"
    )


def actor_dims(cfg: TrainerConfig, n_tx: int, n_rf: int) -> tuple[int, int, int, int]:
    n = n_tx * n_rf
    return (n, *cfg.hidden, n)


def critic_dims(cfg: TrainerConfig, n_tx: int, n_rf: int) -> tuple[int, int, int, int]:
    return (2 * n_tx * n_rf, *cfg.hidden, 1)


def anchored_actor(actor: MlpParams, state: npt.NDArray[np.float64]) -> MlpParams:
    """
    Move the actor's output bias so that, with a small last layer, π·A(s/π) starts
    close to ``state``. Phases beyond ±ANCHOR_LIMIT·π are pulled in to keep tanh off
    saturation.
    """
    target = np.clip(np.asarray(state) / np.pi, -ANCHOR_LIMIT, ANCHOR_LIMIT)
    return with_output_bias(actor, np.arctanh(target))


def init_agents(
    cfg: TrainerConfig, n_tx: int, n_rf: int, rng: RngHandle
) -> list[Agent]:
    _, precoders = orthogonal_initial_precoders(
        cfg.n_agents, n_tx, n_rf, rng, retries=cfg.init_retries
    )
    agents = []
    for index, analog in enumerate(precoders):
        state = analog.to_vector()
        actor = init_params(
            actor_dims(cfg, n_tx, n_rf), rng, output_scale=cfg.output_init_scale
        )
        if cfg.anchor_actors:
            actor = anchored_actor(actor, state)
        agents.append(
            Agent(
                index=index,
                actor=actor,
                target_actor=actor.copy(),
                buffer=SumTree(cfg.buffer_size),
                current_state=state,
                current_analog=analog,
                optimizer=make_optimizer(
                    cfg.optimizer, cfg.lr_for("actor"), cfg.max_grad_norm
                ),
            )
        )
    return agents


def init_central_nets(
    cfg: TrainerConfig, n_tx: int, n_rf: int, rng: RngHandle
) -> CentralNets:
    dims = critic_dims(cfg, n_tx, n_rf)
    critic = init_params(dims, rng, output_scale=cfg.output_init_scale)
    predictive = init_params(dims, rng, output_scale=cfg.output_init_scale)

    return CentralNets(
        critic=critic,
        target_critic=critic.copy(),
        predictive=predictive,
        target_predictive=predictive.copy(),
    )


def act(agent: Agent, noise_std: float, rng: RngHandle) -> npt.NDArray[np.float64]:
    """
    a = wrap(π·A(s/π) + noise). With ``noise_std`` 0 nothing is drawn from ``rng``.
    """
    action = policy(agent.actor, agent.current_state)
    if noise_std > 0.0:
        action = action + noise_std * rng.normal(action.shape[0])
    return wrap_phase(action)


def q_of_last_actions(
    agents: Sequence[Agent], nets: CentralNets
) -> npt.NDArray[np.float64]:
    states = np.stack([agent.last_state for agent in agents])
    actions = np.stack([agent.last_action for agent in agents])
    return q_values(nets.critic, states, actions)


def select_best(agents: Sequence[Agent], nets: CentralNets) -> HybridSolution:
    """
    Solution of the agent whose last (state, action) pair the critic values most; ties
    go to the lowest index.
    """
    if not agents:
        raise ContractViolation("no agents to select from")
    if any(agent.last_solution is None for agent in agents):
        raise ContractViolation("every agent must have acted before selection")
    best = int(np.argmax(q_of_last_actions(agents, nets)))
    return agents[best].last_solution


def select_incumbent(agents: Sequence[Agent], nets: CentralNets) -> HybridSolution:
    """
    Highest-rate solution any agent has observed. Equal rates go to the agent whose
    incumbent (state, action) pair the critic values most, then to the lowest index.
    """
    if not agents or any(agent.incumbent is None for agent in agents):
        raise ContractViolation("every agent must have acted before selection")
    rates = np.array([agent.incumbent.rate for agent in agents])
    tied = [agent for agent, rate in zip(agents, rates) if rate == rates.max()]
    if len(tied) == 1:
        return tied[0].incumbent.solution
    q = q_values(
        nets.critic,
        np.stack([agent.incumbent.state for agent in tied]),
        np.stack([agent.incumbent.action for agent in tied]),
    )
    return tied[int(np.argmax(q))].incumbent.solution
