"""
JSON checkpoints: layer sizes, activations, flat parameter array (weights then bias per
layer, row-major), the seed the network was initialized from and the update-step count.
"""

import json
from pathlib import Path
from typing import NamedTuple

import numpy as np

from mahbf.lib.exceptions import ContractViolation
from mahbf.neural.mlp import Activation, MlpParams

CHECKPOINT_VERSION = 1


class Checkpoint(NamedTuple):
    params: MlpParams
    seed: int
    step: int


def checkpoint_to_dict(params: MlpParams, seed: int, step: int) -> dict:
    return {
        "version": CHECKPOINT_VERSION,
        "layer_dims": list(params.layer_dims),
        "activations": [a.value for a in params.activations],
        "params": params.flat().tolist(),
        "seed": seed,
        "step": step,
    }


def checkpoint_from_dict(data: dict) -> Checkpoint:
    if data.get("version") != CHECKPOINT_VERSION:
        raise ContractViolation(
            f"unsupported checkpoint version {data.get('version')}"
        )
    dims = tuple(data["layer_dims"])
    flat = np.asarray(data["params"], dtype=float)
    arrays, offset = [], 0
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        for shape in ((fan_out, fan_in), (fan_out,)):
            size = int(np.prod(shape))
            arrays.append(flat[offset : offset + size].reshape(shape))
            offset += size
    if offset != flat.size:
        raise ContractViolation(
            f"checkpoint holds {flat.size} values, expected {offset}"
        )
    params = MlpParams(
        layer_dims=dims,
        weights=tuple(arrays[0::2]),
        biases=tuple(arrays[1::2]),
        activations=tuple(Activation(a) for a in data["activations"]),
    )
    return Checkpoint(params=params, seed=int(data["seed"]), step=int(data["step"]))


def save_checkpoint(path: Path | str, params: MlpParams, seed: int, step: int) -> None:
    with open(path, "w") as file:
        json.dump(checkpoint_to_dict(params, seed, step), file)


def load_checkpoint(path: Path | str) -> Checkpoint:
    with open(path, "r") as file:
        return checkpoint_from_dict(json.load(file))
