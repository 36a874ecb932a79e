from mahbf.channel.geometric import (
    channel_from_paths,
    draw_channel,
    generate_channel,
    steering_vector,
)
from mahbf.channel.io import dump_channels, load_channels
from mahbf.channel.types import ChannelConfig, ChannelMatrix, SteeringNorm

__all__ = [
    "ChannelConfig",
    "ChannelMatrix",
    "SteeringNorm",
    "channel_from_paths",
    "draw_channel",
    "dump_channels",
    "generate_channel",
    "load_channels",
    "steering_vector",
]
