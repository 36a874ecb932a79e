"""
The episode loop. Each learning iteration runs, in this order:

    act -> env_step -> critic/predictive feedback -> shaped reward -> store with priority
    -> agent priorities and minibatch split -> predictive, critic and actor updates
    -> priority refresh -> soft target updates -> state advance and stopping check

Three derived random streams are used (initialization, exploration noise, replay sampling),
so switching a feature off never shifts the draws of the others.
"""

import time
from contextlib import contextmanager
from typing import Iterator, Optional, Sequence

import numpy as np

from mahbf.channel import ChannelMatrix
from mahbf.lib.exceptions import (
    ContractViolation,
    DegenerateGeometryError,
    DivergenceError,
)
from mahbf.log import logger
from mahbf.madrl.agents import (
    act,
    init_agents,
    init_central_nets,
    select_best,
    select_incumbent,
)
from mahbf.madrl.env import env_step, shape_reward
from mahbf.madrl.types import (
    EpisodeResult,
    EpisodeStatus,
    IterationRecord,
    TrainerConfig,
)
from mahbf.madrl.updates import (
    AgentSample,
    critic_input,
    critic_target,
    q_values,
    update_actor,
    update_critic,
    update_predictive,
)
from mahbf.neural import forward, make_optimizer, soft_update
from mahbf.numerics import RngHandle, frob_norm_diff
from mahbf.precoding import SystemConfig, full_digital_zf_rate
from mahbf.replay import (
    Transition,
    agent_priorities,
    allocate_minibatch,
    compute_priority,
)

INIT_STREAM, NOISE_STREAM, SAMPLE_STREAM = 0, 1, 2
# Fraction of the discounted return ceiling that the critic's tanh head should reach
SCALE_HEADROOM = 0.8


def auto_reward_scale(h: ChannelMatrix, system: SystemConfig, gamma: float) -> float:
    """
    Divisor that keeps discounted returns of full-digital quality at 0.8 on the critic's
    tanh scale.
    """
    try:
        rate = full_digital_zf_rate(h, system.noise_powers(h.n_users), system.p_total)
    except DegenerateGeometryError:
        rate = h.n_users * float(np.log2(1.0 + system.p_total / system.noise_power))
    return max(rate, 1e-6) / ((1.0 - gamma) * SCALE_HEADROOM)


def iterations_to_level(rates: Sequence[float], level: float) -> int:
    """
    First 1-based iteration whose rate reaches ``level``; the trace length when none
    does and 0 for an empty trace.
    """
    for index, rate in enumerate(rates):
        if rate >= level:
            return index + 1
    return len(rates)


def plateau_iteration(rates: Sequence[float], tolerance: float) -> int:
    """
    First 1-based iteration at which the running maximum of ``rates`` comes within
    ``tolerance`` (relative) of its final value.
    """
    if not rates:
        return 0
    best = np.maximum.accumulate(np.asarray(rates, dtype=float))
    return iterations_to_level(best, best[-1] - tolerance * abs(best[-1]))



class Trainer:
    """
    Owns the agents, the centralized networks and their optimizers for one fixed channel.

    Attributes:
        iteration (int): Completed learning iterations.
        trace (list[IterationRecord]): One record per completed iteration.
        timing (dict[str, float]): Accumulated wall-clock seconds per phase.
    """

    def __init__(
        self, h: ChannelMatrix, system: SystemConfig, cfg: TrainerConfig, rng: RngHandle
    ):
        if h.n_users > system.n_rf:
            raise ContractViolation(f"{h.n_users} users exceed {system.n_rf} RF chains")
        if system.n_rf > h.n_tx:
            raise ContractViolation(f"{system.n_rf} RF chains exceed {h.n_tx} antennas")
        self.h = h
        self.system = system
        self.cfg = cfg
        self.reward_scale = cfg.reward_scale or auto_reward_scale(h, system, cfg.gamma)

        init_rng = rng.derive(INIT_STREAM)
        self._noise_rng = rng.derive(NOISE_STREAM)
        self._sample_rng = rng.derive(SAMPLE_STREAM)

        self.agents = init_agents(cfg, h.n_tx, system.n_rf, init_rng)
        self.nets = init_central_nets(cfg, h.n_tx, system.n_rf, init_rng)
        self.critic_optimizer = make_optimizer(
            cfg.optimizer, cfg.lr_for("critic"), cfg.max_grad_norm
        )
        self.predictive_optimizer = make_optimizer(
            cfg.optimizer, cfg.lr_for("predictive"), cfg.max_grad_norm
        )

        self.iteration = 0
        self.trace: list[IterationRecord] = []
        self.timing = {"act": 0.0, "env": 0.0, "update": 0.0}

    @contextmanager
    def _timed(self, phase: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timing[phase] += time.perf_counter() - start

    def _priority(
        self, q_value: float, reward: float, access_count: int, total: int
    ) -> float:
        if not self.cfg.prioritized_replay:
            return self.cfg.delta
        if not self.cfg.access_frequency:
            access_count, total = 0, 0
        return compute_priority(
            q_value, reward / self.reward_scale, access_count, total, self.cfg.delta
        )

    def _agent_weights(self) -> np.ndarray:
        if not self.cfg.prioritized_replay:
            return np.full(len(self.agents), 1.0 / len(self.agents))
        occupancy = [agent.buffer.occupancy for agent in self.agents]
        return agent_priorities(
            [agent.buffer.root for agent in self.agents],
            occupancy if self.cfg.normalize_roots else None,
        )

    def _draw(self, q: np.ndarray) -> list[AgentSample]:
        occupancy = [agent.buffer.occupancy for agent in self.agents]
        counts = allocate_minibatch(q, self.cfg.minibatch, occupancy)
        samples = []
        for agent, count in zip(self.agents, counts):
            if count == 0:
                continue
            draws = agent.buffer.sample(count, self._sample_rng)
            samples.append(
                AgentSample.from_draws(agent.index, draws, self.reward_scale)
            )
        return samples

    def _learn(
        self, samples: list[AgentSample], q: np.ndarray
    ) -> tuple[float, Optional[float]]:
        cfg, nets = self.cfg, self.nets
        targets = [
            critic_target(
                s.rewards,
                s.next_states,
                self.agents[s.agent_index],
                nets,
                cfg.gamma,
            )
            for s in samples
        ]

        predictive_loss, coupled = None, None
        if cfg.predictive_reward:
            predictive_loss, critic_grad = update_predictive(
                nets, samples, q, self.predictive_optimizer
            )
            if cfg.coupled_gradients:
                coupled = critic_grad
        critic_loss = update_critic(
            nets, samples, q, targets, self.critic_optimizer, coupled
        )

        for sample in samples:
            index = sample.agent_index
            update_actor(self.agents[index], nets, sample, q[index])
        return critic_loss, predictive_loss

    def _refresh_priorities(self, samples: list[AgentSample]) -> None:
        if not self.cfg.prioritized_replay:
            return
        for sample in samples:
            buffer = self.agents[sample.agent_index].buffer
            fresh = q_values(self.nets.critic, sample.states, sample.actions)
            for slot, q_value in zip(sample.slots, fresh):
                transition = buffer.get(slot)
                buffer.update(
                    slot,
                    self._priority(
                        float(q_value),
                        transition.reward,
                        transition.access_count,
                        buffer.total_access,
                    ),
                )

    def _soft_update_targets(self) -> None:
        tau, nets = self.cfg.tau, self.nets
        nets.target_critic = soft_update(nets.target_critic, nets.critic, tau)
        nets.target_predictive = soft_update(
            nets.target_predictive, nets.predictive, tau
        )
        for agent in self.agents:
            agent.target_actor = soft_update(agent.target_actor, agent.actor, tau)

    def step(self) -> IterationRecord:
        """
        Run one learning iteration.

        :raises DivergenceError: on a non-finite critic or predictive loss or gradient.
        """
        cfg = self.cfg
        t = self.iteration + 1

        with self._timed("act"):
            noise_std = cfg.noise.std_at(t)
            actions = [act(agent, noise_std, self._noise_rng) for agent in self.agents]

        with self._timed("env"):
            feedback = [
                env_step(self.h, a, self.system, cfg.reward_form) for a in actions
            ]

        with self._timed("update"):
            states = np.stack([agent.current_state for agent in self.agents])
            x = critic_input(states, np.stack(actions))
            q_now = forward(self.nets.critic, x)[:, 0]
            sigma = forward(self.nets.predictive, x)[:, 0]

            raw_rewards, shaped_rewards = [], []
            for agent, action, (reward, solution), q_value, s in zip(
                self.agents, actions, feedback, q_now, sigma
            ):
                # σ imitates Q, which lives in units of the reward scale
                shaped = shape_reward(
                    reward, float(s) * self.reward_scale, cfg.shaping_weight
                )
                priority = self._priority(
                    float(q_value), shaped, 0, agent.buffer.total_access
                )
                agent.buffer.push(
                    Transition(
                        state=agent.current_state,
                        action=action,
                        reward=shaped,
                        next_state=action,
                        priority=priority,
                        born_iter=t,
                    )
                )
                agent.observe(agent.current_state, action, reward, solution)
                raw_rewards.append(reward)
                shaped_rewards.append(shaped)

            q = self._agent_weights()
            samples = self._draw(q)
            critic_loss, predictive_loss = self._learn(samples, q)
            self._refresh_priorities(samples)
            self._soft_update_targets()

            frob_steps = []
            for agent, action, (_, solution) in zip(self.agents, actions, feedback):
                frob_steps.append(
                    frob_norm_diff(solution.analog.matrix, agent.current_analog.matrix)
                )
                agent.current_state = action
                agent.current_analog = solution.analog

        record = IterationRecord(
            iteration=t,
            raw_rewards=raw_rewards,
            shaped_rewards=shaped_rewards,
            q_values=[float(v) for v in q_now],
            frob_steps=frob_steps,
            critic_loss=critic_loss,
            predictive_loss=predictive_loss,
            best_so_far=max(agent.best_rate for agent in self.agents),
        )
        self.iteration = t
        self.trace.append(record)
        logger.debug(
            f"iter {t}: rates {np.round(raw_rewards, 4).tolist()}, "
            f"critic loss {critic_loss:.3e}, max step {max(frob_steps):.3e}"
        )
        return record

    def converged(self, record: IterationRecord) -> bool:
        return all(step < self.cfg.tau_thres for step in record.frob_steps)

    def run(self) -> EpisodeResult:
        status, error = EpisodeStatus.MAX_ITERS, None
        start = time.perf_counter()
        try:
            while self.iteration < self.cfg.max_iters:
                if self.converged(self.step()):
                    status = EpisodeStatus.CONVERGED
                    break
        except DivergenceError as e:
            logger.warning(f"Episode diverged at iteration {self.iteration + 1}: {e}")
            status, error = EpisodeStatus.DIVERGED, str(e)

        solution, critic_choice = None, None
        if all(agent.last_solution is not None for agent in self.agents):
            critic_choice = select_best(self.agents, self.nets)
            solution = critic_choice
            if self.cfg.keep_incumbent:
                solution = select_incumbent(self.agents, self.nets)

        if status == EpisodeStatus.CONVERGED:
            to_convergence = self.iteration
        else:
            rates = [record.best_so_far for record in self.trace]
            to_convergence = plateau_iteration(rates, self.cfg.settle_tolerance)

        timing = {**self.timing, "total": time.perf_counter() - start}
        return EpisodeResult(
            status=status,
            trace=self.trace,
            solution=solution,
            iterations_to_convergence=to_convergence,
            reward_scale=self.reward_scale,
            timing=timing,
            error=error,
            critic_choice=critic_choice,
        )


def train_episode(
    h: ChannelMatrix, system: SystemConfig, cfg: TrainerConfig, rng: RngHandle
) -> EpisodeResult:
    return Trainer(h, system, cfg, rng).run()
