import numpy as np
import pytest

from mahbf.channel import ChannelConfig, ChannelMatrix, draw_channel
from mahbf.lib.exceptions import ContractViolation, DegenerateGeometryError
from mahbf.numerics import RngHandle
from mahbf.precoding import (
    AnalogPrecoder,
    assemble_digital,
    effective_gains,
    water_filling,
    zf_digital,
)
from mahbf.precoding.zero_forcing import right_inverse

CFG = ChannelConfig(n_tx=8, n_users=3, n_clusters=3, n_rays=4)


def _setup(seed: int = 0):
    rng = RngHandle(seed)
    h = draw_channel(CFG, rng)
    analog = AnalogPrecoder(-np.pi + 2.0 * np.pi * rng.uniform_open((8, 3)))
    return h, analog


def test_zero_forcing_inverts_effective_channel():
    h, analog = _setup()
    f_tilde = zf_digital(h, analog)
    np.testing.assert_allclose(h.matrix @ analog.matrix @ f_tilde, np.eye(3), atol=1e-9)


def test_effective_gains_are_column_powers():
    h, analog = _setup(1)
    f_tilde = zf_digital(h, analog)
    gains = effective_gains(f_tilde, analog)
    expected = [np.linalg.norm(analog.matrix @ f_tilde[:, k]) ** 2 for k in range(3)]
    np.testing.assert_allclose(gains, expected)


def test_assembled_precoder_meets_power_budget():
    h, analog = _setup(2)
    f_tilde = zf_digital(h, analog)
    power = water_filling(effective_gains(f_tilde, analog), np.ones(3), 5.0)
    f_d = assemble_digital(f_tilde, power)
    f = analog.matrix @ f_d
    assert np.real(np.trace(f.conj().T @ f)) == pytest.approx(5.0)


def test_zf_digital_checks_dimensions():
    h, analog = _setup()
    with pytest.raises(ContractViolation):
        zf_digital(h, AnalogPrecoder(np.zeros((4, 3))))
    with pytest.raises(ContractViolation):
        zf_digital(h, AnalogPrecoder(np.zeros((8, 2))))


def test_identical_columns_are_degenerate():
    h, _ = _setup()
    with pytest.raises(DegenerateGeometryError):
        zf_digital(h, AnalogPrecoder(np.zeros((8, 3))))


def test_right_inverse_rejects_rank_deficient_matrix():
    with pytest.raises(DegenerateGeometryError):
        right_inverse(np.ones((2, 4), dtype=complex))


def test_right_inverse_of_identity_rows():
    g = ChannelMatrix(np.eye(2, 4)).matrix
    np.testing.assert_allclose(g @ right_inverse(g), np.eye(2), atol=1e-12)


def test_right_inverse_of_ill_conditioned_effective_channel():
    rng = RngHandle(3)
    u, _ = np.linalg.qr(rng.complex_normal((2, 2)))
    v, _ = np.linalg.qr(rng.complex_normal((4, 2)))
    g = u @ np.diag([1.0, 1e-7]) @ v.conj().T
    np.testing.assert_allclose(g @ right_inverse(g), np.eye(2), atol=1e-6)

    with pytest.raises(DegenerateGeometryError):
        right_inverse(u @ np.diag([1.0, 1e-11]) @ v.conj().T)
