"""
JSON exchange format for channel realizations: a list of matrices, each a list of rows,
each row a list of ``{"re": float, "im": float}`` objects.
"""

import json
from pathlib import Path
from typing import Iterable

import numpy as np

from mahbf.channel.types import ChannelMatrix


def channel_to_json(h: ChannelMatrix) -> list[list[dict[str, float]]]:
    return [
        [{"re": float(z.real), "im": float(z.imag)} for z in row] for row in h.matrix
    ]


def channel_from_json(rows: list[list[dict[str, float]]]) -> ChannelMatrix:
    return ChannelMatrix(
        np.array([[complex(e["re"], e["im"]) for e in row] for row in rows])
    )


def dump_channels(path: Path | str, channels: Iterable[ChannelMatrix]) -> None:
    with open(path, "w") as file:
        json.dump([channel_to_json(h) for h in channels], file)


def load_channels(path: Path | str) -> list[ChannelMatrix]:
    with open(path, "r") as file:
        return [channel_from_json(m) for m in json.load(file)]
