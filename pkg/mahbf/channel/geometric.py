"""
Clustered geometric channel model for a uniform linear array at the base station.

Random draws for one realization are consumed in this order (vectorized over users):
cluster-centre uniforms (K·N_cl), ray-offset Laplacians (K·N_cl·N_ray), then complex path
gains (K·N_cl·N_ray, real parts before imaginary parts).
"""

import numpy as np
import numpy.typing as npt

from mahbf.channel.types import ChannelConfig, ChannelMatrix, SteeringNorm
from mahbf.lib.exceptions import ContractViolation, DegenerateGeometryError
from mahbf.log import logger
from mahbf.numerics import RngHandle


def steering_vector(
    phi: float | npt.ArrayLike,
    n_tx: int,
    spacing_ratio: float,
    norm: SteeringNorm = SteeringNorm.AS_WRITTEN,
) -> npt.NDArray[np.complex128]:
    """
    Array response g(φ). Broadcasts over ``phi``: the antenna index is the last axis.
    """
    scale = 1.0 / n_tx if norm == SteeringNorm.AS_WRITTEN else 1.0 / np.sqrt(n_tx)
    m = np.arange(n_tx)
    phase = 2.0 * np.pi * spacing_ratio * np.sin(np.asarray(phi, dtype=float))
    return scale * np.exp(1j * phase[..., None] * m)


def channel_from_paths(
    cfg: ChannelConfig, gains: npt.ArrayLike, angles: npt.ArrayLike
) -> ChannelMatrix:
    """
    Evaluate h_k = sqrt(N_t / (N_cl N_ray)) Σ α_ij g(φ_ij) for every user.

    :param gains: complex path gains of shape (K, N_cl, N_ray).
    :param angles: angles of departure (radians), same shape.
    """
    gains = np.asarray(gains, dtype=np.complex128)
    angles = np.asarray(angles, dtype=float)
    expected = (cfg.n_users, cfg.n_clusters, cfg.n_rays)
    if gains.shape != expected or angles.shape != expected:
        raise ContractViolation(f"path arrays must have shape {expected}")

    g = steering_vector(angles, cfg.n_tx, cfg.spacing_ratio, cfg.steering_norm)
    h = np.sqrt(cfg.n_tx / (cfg.n_clusters * cfg.n_rays)) * np.einsum(
        "kij,kijm->km", gains, g
    )
    # rows of H are h_k^H
    return ChannelMatrix(h.conj())


def generate_channel(cfg: ChannelConfig, rng: RngHandle) -> ChannelMatrix:
    shape = (cfg.n_users, cfg.n_clusters, cfg.n_rays)
    centres = -np.pi / 2 + np.pi * rng.uniform((cfg.n_users, cfg.n_clusters))
    offsets = rng.laplace(shape, cfg.angle_spread / np.sqrt(2.0))
    angles = centres[..., None] + offsets
    variances = np.asarray(cfg.cluster_powers, dtype=float)[None, :, None]
    gains = rng.complex_normal(shape) * np.sqrt(variances)
    return channel_from_paths(cfg, gains, angles)


def draw_channel(
    cfg: ChannelConfig, rng: RngHandle, retries: int = 10
) -> ChannelMatrix:
    """
    Draw a realization whose rows are linearly independent, redrawing degenerate ones.
    """
    for attempt in range(retries + 1):
        h = generate_channel(cfg, rng)
        if h.row_rank_ok():
            return h
        logger.warning(f"Degenerate channel draw (attempt {attempt + 1}); redrawing")
    raise DegenerateGeometryError(
        f"no full-row-rank channel after {retries + 1} draws"
    )
