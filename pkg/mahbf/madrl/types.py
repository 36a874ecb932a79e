"""
Types for the multi-agent hybrid-beamforming trainer.

Classes:
    - NoiseConfig: Gaussian exploration noise on action phases.
    - AblationCase: Named feature subsets used by the convergence experiments.
    - TrainerConfig: Hyperparameters and feature switches of one training episode.
    - Incumbent: The best outcome an agent has observed.
    - Agent: One actor with its target copy, replay buffer and current precoder.
    - CentralNets: Shared critic and predictive networks with their target copies.
    - IterationRecord / EpisodeResult: What an episode reports.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field

from mahbf.neural import MlpParams, OptimizerKind
from mahbf.neural.optim import Optimizer
from mahbf.precoding import AnalogPrecoder, HybridSolution, RewardForm
from mahbf.replay import DEFAULT_DELTA, SumTree


class NoiseConfig(BaseModel):
    enabled: bool = True
    std: float = Field(default=0.3, ge=0.0)
    decay: float = Field(default=0.995, gt=0.0, le=1.0)

    def std_at(self, iteration: int) -> float:
        """Noise standard deviation (radians) at a 1-based learning iteration."""
        if not self.enabled:
            return 0.0
        return self.std * self.decay ** (iteration - 1)


class AblationCase(str, Enum):
    CASE1 = "case1"  # multi-agent exploration only
    CASE2 = "case2"  # + prioritized replay
    CASE3 = "case3"  # + predictive reward
    SINGLE = "single"  # one agent, uniform replay, raw reward


class TrainerConfig(BaseModel):
    n_agents: int = Field(default=2, ge=1)
    max_iters: int = Field(default=300, ge=1)
    gamma: float = Field(default=0.95, ge=0.0, lt=1.0)
    tau: float = Field(default=1e-3, gt=0.0, le=1.0)
    tau_thres: float = Field(default=1e-4, gt=0.0)
    eta: float = Field(default=0.1, ge=0.0)
    delta: float = Field(default=DEFAULT_DELTA, gt=0.0)
    minibatch: int = Field(default=32, ge=1)
    buffer_size: int = Field(default=500, ge=1)
    lr: float = Field(default=1e-3, gt=0.0)
    actor_lr: Optional[float] = Field(default=None, gt=0.0)
    critic_lr: Optional[float] = Field(default=None, gt=0.0)
    predictive_lr: Optional[float] = Field(default=None, gt=0.0)
    optimizer: OptimizerKind = OptimizerKind.ADAM
    max_grad_norm: Optional[float] = Field(default=1.0, gt=0.0)
    hidden: tuple[int, int] = (300, 200)
    output_init_scale: Optional[float] = Field(default=3e-3, gt=0.0)
    anchor_actors: bool = True
    keep_incumbent: bool = True
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    reward_form: RewardForm = RewardForm.P_OVER_SIGMA2
    reward_scale: Optional[float] = Field(default=None, gt=0.0)
    prioritized_replay: bool = True
    predictive_reward: bool = True
    access_frequency: bool = True
    coupled_gradients: bool = False
    normalize_roots: bool = False
    settle_tolerance: float = Field(default=0.01, ge=0.0)
    init_retries: int = Field(default=5, ge=0)

    def lr_for(self, network: str) -> float:
        override = {
            "actor": self.actor_lr,
            "critic": self.critic_lr,
            "predictive": self.predictive_lr,
        }[network]
        return self.lr if override is None else override

    @property
    def shaping_weight(self) -> float:
        return self.eta if self.predictive_reward else 0.0

    def for_case(self, case: AblationCase) -> "TrainerConfig":
        if case == AblationCase.CASE1:
            flags = dict(
                prioritized_replay=False,
                access_frequency=False,
                predictive_reward=False,
            )
        elif case == AblationCase.CASE2:
            flags = dict(
                prioritized_replay=True, access_frequency=True, predictive_reward=False
            )
        elif case == AblationCase.CASE3:
            flags = dict(
                prioritized_replay=True, access_frequency=True, predictive_reward=True
            )
        else:
            flags = dict(
                n_agents=1,
                prioritized_replay=False,
                access_frequency=False,
                predictive_reward=False,
            )
        return self.model_copy(update=flags)


@dataclass(frozen=True)
class Incumbent:
    state: npt.NDArray[np.float64]
    action: npt.NDArray[np.float64]
    rate: float
    solution: HybridSolution


@dataclass
class Agent:
    """
    Attributes:
        index (int): Agent number, 0-based.
        actor (MlpParams): Online actor.
        target_actor (MlpParams): Target actor.
        buffer (SumTree): The agent's prioritized replay buffer.
        current_state (np.ndarray): vec of the phases of the previous-iteration precoder.
        current_analog (AnalogPrecoder): The previous-iteration precoder itself.
        optimizer (Optimizer): Update rule for the actor.
        incumbent (Incumbent): Best (state, action, solution) the agent has seen.
    """

    index: int
    actor: MlpParams
    target_actor: MlpParams
    buffer: SumTree
    current_state: npt.NDArray[np.float64]
    current_analog: AnalogPrecoder
    optimizer: Optional[Optimizer] = None
    last_state: Optional[npt.NDArray[np.float64]] = None
    last_action: Optional[npt.NDArray[np.float64]] = None
    last_solution: Optional[HybridSolution] = None
    incumbent: Optional[Incumbent] = None

    def observe(
        self,
        state: npt.NDArray[np.float64],
        action: npt.NDArray[np.float64],
        rate: float,
        solution: HybridSolution,
    ) -> None:
        """Record an outcome; a strictly higher rate replaces the incumbent."""
        self.last_state = state
        self.last_action = action
        self.last_solution = solution
        if self.incumbent is None or rate > self.incumbent.rate:
            self.incumbent = Incumbent(state, action, rate, solution)

    @property
    def best_rate(self) -> float:
        return self.incumbent.rate if self.incumbent is not None else 0.0


@dataclass
class CentralNets:
    critic: MlpParams
    target_critic: MlpParams
    predictive: MlpParams
    # Soft-updated with the others but never read
    target_predictive: MlpParams


class EpisodeStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    DIVERGED = "diverged"


@dataclass
class IterationRecord:
    iteration: int
    raw_rewards: list[float]
    shaped_rewards: list[float]
    q_values: list[float]
    frob_steps: list[float]
    critic_loss: Optional[float] = None
    predictive_loss: Optional[float] = None
    # Highest raw reward any agent has reached up to and including this iteration
    best_so_far: Optional[float] = None

    @property
    def best_q(self) -> float:
        return max(self.q_values)

    @property
    def selected_agent(self) -> int:
        return int(np.argmax(self.q_values))

    @property
    def selected_rate(self) -> float:
        """Raw reward of the agent the critic rates highest."""
        return self.raw_rewards[self.selected_agent]

    @property
    def best_rate(self) -> float:
        return max(self.raw_rewards)

    def to_dict(self) -> dict[str, Any]:
        return {
            "iter": self.iteration,
            "raw_rewards": self.raw_rewards,
            "shaped_rewards": self.shaped_rewards,
            "q_values": self.q_values,
            "best_q": self.best_q,
            "selected_agent": self.selected_agent,
            "selected_rate": self.selected_rate,
            "frob_steps": self.frob_steps,
            "critic_loss": self.critic_loss,
            "predictive_loss": self.predictive_loss,
            "best_so_far": self.best_so_far,
        }


@dataclass
class EpisodeResult:
    status: EpisodeStatus
    trace: list[IterationRecord]
    solution: Optional[HybridSolution]
    iterations_to_convergence: int
    reward_scale: float
    timing: dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None
    # What the critic picks among the last (state, action) pairs
    critic_choice: Optional[HybridSolution] = None

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def first_rate(self) -> float:
        """Best raw reward at the first learning iteration."""
        return self.trace[0].best_rate if self.trace else 0.0

    @property
    def final_rate(self) -> float:
        return self.solution.sum_rate if self.solution is not None else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "iterations_to_convergence": self.iterations_to_convergence,
            "reward_scale": self.reward_scale,
            "trace": [record.to_dict() for record in self.trace],
            "solution": self.solution.to_dict() if self.solution else None,
            "critic_choice": (
                self.critic_choice.to_dict() if self.critic_choice else None
            ),
            "timing": self.timing,
            "error": self.error,
        }
