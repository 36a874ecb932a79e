import pytest

from mahbf.channel import ChannelConfig, draw_channel
from mahbf.madrl import NoiseConfig, TrainerConfig
from mahbf.numerics import RngHandle
from mahbf.precoding import SystemConfig


@pytest.fixture
def channel():
    cfg = ChannelConfig(n_tx=4, n_users=2, n_clusters=2, n_rays=3)
    return draw_channel(cfg, RngHandle(0))


@pytest.fixture
def system():
    return SystemConfig(n_rf=2, snr_db=5.0)


@pytest.fixture
def trainer_cfg():
    return TrainerConfig(
        n_agents=2,
        max_iters=6,
        hidden=(8, 6),
        minibatch=4,
        buffer_size=20,
        noise=NoiseConfig(std=0.2),
    )
