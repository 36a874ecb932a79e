import numpy as np
import pytest

from mahbf.numerics import RngHandle


def test_same_seed_gives_same_stream():
    a, b = RngHandle(7), RngHandle(7)
    np.testing.assert_array_equal(a.uniform(5), b.uniform(5))
    np.testing.assert_array_equal(a.normal(3), b.normal(3))


def test_different_seeds_differ():
    assert not np.array_equal(RngHandle(1).uniform(5), RngHandle(2).uniform(5))


def test_derive_does_not_consume_parent():
    parent = RngHandle(3)
    parent.derive(0).uniform(10)
    np.testing.assert_array_equal(parent.uniform(4), RngHandle(3).uniform(4))


def test_derived_streams_are_reproducible_and_distinct():
    root = RngHandle(11)
    np.testing.assert_array_equal(
        root.derive(1, 2).uniform(4), RngHandle(11).derive(1, 2).uniform(4)
    )
    assert not np.array_equal(root.derive(1).uniform(4), root.derive(2).uniform(4))
    assert root.derive(1, 2).keys == (1, 2)


def test_uniform_scalar_and_ranges():
    rng = RngHandle(0)
    assert isinstance(rng.uniform(), float)
    closed = rng.uniform(1000)
    assert closed.min() >= 0.0 and closed.max() < 1.0
    open_ = rng.uniform_open(1000)
    assert open_.min() > 0.0 and open_.max() <= 1.0


def test_normal_odd_count_consumes_full_pair():
    odd, even = RngHandle(5), RngHandle(5)
    odd.normal(3)
    even.normal(4)
    np.testing.assert_array_equal(odd.uniform(2), even.uniform(2))


def test_normal_matches_box_muller_of_uniform_pairs():
    z = RngHandle(9).normal(2)
    u = RngHandle(9).uniform_open(2)
    radius = np.sqrt(-2.0 * np.log(u[0]))
    np.testing.assert_allclose(
        z, [radius * np.cos(2 * np.pi * u[1]), radius * np.sin(2 * np.pi * u[1])]
    )


def test_normal_shape():
    assert RngHandle(0).normal((3, 4)).shape == (3, 4)


def test_complex_normal_variance():
    z = RngHandle(21).complex_normal(200_000, variance=2.0)
    assert np.mean(np.abs(z) ** 2) == pytest.approx(2.0, rel=0.02)
    assert abs(np.mean(z)) < 0.02


def test_complex_normal_draws_real_parts_first():
    z = RngHandle(4).complex_normal(3)
    parts = RngHandle(4).normal(6)
    np.testing.assert_allclose(z.real, parts[:3] / np.sqrt(2.0))
    np.testing.assert_allclose(z.imag, parts[3:] / np.sqrt(2.0))


def test_laplace_scale():
    x = RngHandle(8).laplace(200_000, 0.5)
    assert np.all(np.isfinite(x))
    assert np.mean(np.abs(x)) == pytest.approx(0.5, rel=0.02)


def test_integers_bounds():
    values = RngHandle(2).integers(1, 4, size=500)
    assert set(np.unique(values)) == {1, 2, 3}


def test_seed_is_masked_to_64_bits():
    assert RngHandle(-1).seed == 0xFFFFFFFFFFFFFFFF
