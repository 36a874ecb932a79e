from mahbf.neural.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from mahbf.neural.mlp import (
    Activation,
    GradientSet,
    MlpParams,
    backward,
    forward,
    init_params,
    sgd_step,
    soft_update,
    with_output_bias,
    zeros_like,
)
from mahbf.neural.optim import OptimizerKind, clip_global_norm, make_optimizer

__all__ = [
    "Activation",
    "Checkpoint",
    "GradientSet",
    "MlpParams",
    "OptimizerKind",
    "backward",
    "clip_global_norm",
    "forward",
    "init_params",
    "load_checkpoint",
    "make_optimizer",
    "save_checkpoint",
    "sgd_step",
    "soft_update",
    "with_output_bias",
    "zeros_like",
]
