from mahbf.madrl.agents import (
    act,
    init_agents,
    init_central_nets,
    orthogonal_initial_precoders,
    select_best,
    select_incumbent,
)
from mahbf.madrl.env import env_step, shape_reward
from mahbf.madrl.trainer import (
    Trainer,
    iterations_to_level,
    plateau_iteration,
    train_episode,
)
from mahbf.madrl.types import (
    AblationCase,
    Agent,
    CentralNets,
    EpisodeResult,
    EpisodeStatus,
    Incumbent,
    IterationRecord,
    NoiseConfig,
    TrainerConfig,
)
from mahbf.madrl.updates import (
    critic_target,
    update_actor,
    update_critic,
    update_predictive,
)

__all__ = [
    "AblationCase",
    "Agent",
    "CentralNets",
    "EpisodeResult",
    "EpisodeStatus",
    "Incumbent",
    "IterationRecord",
    "NoiseConfig",
    "Trainer",
    "TrainerConfig",
    "act",
    "critic_target",
    "env_step",
    "init_agents",
    "init_central_nets",
    "iterations_to_level",
    "orthogonal_initial_precoders",
    "plateau_iteration",
    "select_best",
    "select_incumbent",
    "shape_reward",
    "train_episode",
    "update_actor",
    "update_critic",
    "update_predictive",
]
