import numpy as np
import pytest

from scglue.scalespace import (
    ConfigurationError, GridConfig, HalfCylinderFunction, TruncationError, WeightSequence,
    analytic_norm_exponential, band_limited_pair, fractional_rotate, level_norm, level_norms,
    make_pair, pair_combination, pair_difference_sup, quadrature_weights, smooth_bump, zero_pair,
)


def test_zero_element_has_zero_norm_at_every_level():
    u = zero_pair()
    assert all(level_norm(u, m) == 0.0 for m in range(4))


def test_constant_only_norm_is_abs_c():
    g = GridConfig()
    z = np.zeros((g.n_s, g.n_theta, 2))
    u = make_pair([1.0, 0.0], z, z)
    assert all(level_norm(u, m) == 1.0 for m in range(4))
    broken = make_pair([3.0, -1.0], z, z)
    assert level_norm(broken, 2) == pytest.approx(np.sqrt(10.0), rel=1e-15)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_exponential_mode_matches_closed_form(m):
    w = WeightSequence()
    h = 1 / 8
    g = GridConfig(32, h, 60.0, 1)
    s = np.arange(g.n_s) * h
    r = (np.exp(-s)[:, None] * np.sin(2 * np.pi * g.t_grid)[None, :])[:, :, None]
    half = HalfCylinderFunction("plus", np.zeros(1), r, h, check_decay=False)
    oracle = analytic_norm_exponential(w.deltas[m], 3 + m)
    assert abs(level_norm(half, m) - oracle) / oracle <= 1e-6


def test_norms_are_monotone_in_level(rng):
    u = band_limited_pair(rng)
    n = level_norms(u)
    assert all(a <= b for a, b in zip(n, n[1:]))


def test_bump_pair_norm_equals_half_norm(rng):
    g = GridConfig()
    s = np.arange(g.n_s) * g.h_s
    rp = (smooth_bump(s, 10.0)[:, None] * np.cos(2 * np.pi * g.t_grid)[None, :])[:, :, None]
    rp = np.repeat(rp, 2, axis=2)
    u = make_pair(np.zeros(2), rp, np.zeros_like(rp))
    half = HalfCylinderFunction("plus", np.zeros(2), rp, g.h_s)
    assert level_norm(u, 1) == pytest.approx(level_norm(half, 1), rel=1e-15)


def test_level_and_grid_errors(rng):
    u = band_limited_pair(rng)
    with pytest.raises(ConfigurationError):
        level_norm(u, 4)
    with pytest.raises(ConfigurationError):
        level_norm(u, 0, grid=GridConfig(n_theta=16))
    with pytest.raises(ConfigurationError):
        WeightSequence((0.2, 0.1))
    with pytest.raises(ConfigurationError):
        GridConfig(n_theta=12)


def test_truncation_is_rejected():
    g = GridConfig()
    r = np.ones((g.n_s, g.n_theta, g.N))
    with pytest.raises(TruncationError):
        make_pair(np.zeros(2), r, np.zeros_like(r))


def test_fractional_rotate():
    t = np.arange(32) / 32
    u = np.sin(2 * np.pi * t)
    assert np.array_equal(fractional_rotate(u, 0.0), u)
    assert np.max(np.abs(fractional_rotate(u, 0.25) - np.sin(2 * np.pi * (t - 0.25)))) <= 1e-13
    theta = 0.3141
    back = fractional_rotate(fractional_rotate(u, theta), 1 - theta)
    assert np.max(np.abs(back - u)) <= 1e-12


def test_quadrature_integrates_polynomials_exactly():
    w = quadrature_weights(81, 0.125)
    s = np.arange(81) * 0.125
    assert w @ s**3 == pytest.approx(10.0**4 / 4, rel=1e-13)


def test_pair_arithmetic(rng):
    u, v = band_limited_pair(rng), band_limited_pair(rng)
    w = pair_combination([2.0, -1.0], [u, v])
    assert np.allclose(w.c, 2 * u.c - v.c, rtol=0, atol=1e-15)
    assert pair_difference_sup(u, u) == 0.0
    assert pair_difference_sup(pair_combination([1.0, 0.0], [u, v]), u) == 0.0
