import json

import numpy as np

from mahbf.channel import ChannelConfig, dump_channels, generate_channel, load_channels
from mahbf.channel.io import channel_from_json, channel_to_json
from mahbf.channel.types import ChannelMatrix
from mahbf.numerics import RngHandle


def test_channel_json_layout():
    h = ChannelMatrix(np.array([[1.0 + 2.0j, -0.5j]]))
    assert channel_to_json(h) == [[{"re": 1.0, "im": 2.0}, {"re": 0.0, "im": -0.5}]]
    restored = channel_from_json(channel_to_json(h))
    np.testing.assert_array_equal(restored.matrix, h.matrix)


def test_dump_and_load_channels(tmp_path):
    cfg = ChannelConfig(n_tx=4, n_users=2, n_clusters=2, n_rays=2)
    rng = RngHandle(0)
    channels = [generate_channel(cfg, rng) for _ in range(2)]
    path = tmp_path / "channels.json"

    dump_channels(path, channels)
    data = json.loads(path.read_text())
    assert len(data) == 2 and len(data[0]) == 2 and len(data[0][0]) == 4

    loaded = load_channels(path)
    for original, restored in zip(channels, loaded):
        np.testing.assert_array_equal(original.matrix, restored.matrix)
