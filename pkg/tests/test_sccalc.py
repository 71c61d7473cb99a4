import numpy as np
import pytest

from scglue.gluing import GluingChart, GluingParameter, grid_for_modulus
from scglue.sccalc import (
    ScMap, chain_rule_defect, compose, fd_derivative, frechet_second_difference, identity_map,
    sc1_ratio, shift_map, triangle_wave,
)
from scglue.scalespace import GridConfig, band_limited_pair


def test_fd_identity_and_quadratic(rng):
    x, h = rng.normal(size=2), rng.normal(size=2)
    assert np.max(np.abs(fd_derivative(identity_map(), x, h).estimate - h)) <= 1e-12
    sq = ScMap(lambda y: np.array([y @ y]))
    x, h = rng.normal(size=5), rng.normal(size=5)
    assert abs(fd_derivative(sq, x, h).estimate[0] - 2 * x @ h) <= 1e-10


def test_fd_flags_kink():
    f = ScMap(lambda y: np.sign(y) * np.sqrt(np.abs(y)))
    r = fd_derivative(f, np.zeros(1), np.ones(1))
    assert not r.converged and r.note


def test_fd_on_gluing_retraction_has_second_order(rng):
    g = grid_for_modulus(0.217, GridConfig(16))
    chart = GluingChart(g)
    a = GluingParameter.polar(0.22, 0.1)
    u = band_limited_pair(rng, g, center=a.R / 2, support=6.0)
    du = band_limited_pair(rng, g, center=a.R / 2, support=4.0)
    r = fd_derivative(chart.retraction(min_modulus=0.0), chart.to_vec(a, u),
                      chart.to_vec(1e-3j, du))
    assert np.all(np.isfinite(r.estimate)) and r.order >= 1.8


def test_sc1_ratio_linear_and_cubic(rng):
    A = rng.normal(size=(3, 3))
    lin = ScMap(lambda y: A @ y, derivative=lambda y, h: A @ h)
    assert sc1_ratio(lin, rng.normal(size=3), rng.normal(size=3)).verdict
    cube = ScMap(lambda y: y**3, derivative=lambda y, h: 3 * y**2 * h)
    rep = sc1_ratio(cube, np.ones(1), np.ones(1))
    assert rep.verdict and rep.slope == pytest.approx(1.0, abs=0.05)
    eps = np.asarray(rep.scales)
    assert np.allclose(rep.ratios, 3 * eps + eps**2, rtol=1e-6)


def test_shift_map_is_sc1_on_smooth_data(rng):
    n = 64
    t = np.arange(n) / n
    x = np.concatenate([[0.3], np.cos(2 * np.pi * t) + 0.5 * np.sin(6 * np.pi * t)])
    h = np.concatenate([[1.0], np.sin(4 * np.pi * t)])
    rep = sc1_ratio(shift_map(n), x, h)
    assert rep.verdict and rep.slope >= 0.9


def test_second_differences():
    n = 2**13
    t = np.arange(n) / n
    shifts = [2.0**-k for k in range(1, 13)]
    assert np.allclose(frechet_second_difference(triangle_wave(t), shifts), 8.0, rtol=1e-12)
    sine = frechet_second_difference(np.sin(2 * np.pi * t), shifts)
    assert sine[-1] == pytest.approx((2 * np.pi) ** 2 * shifts[-1], rel=1e-3)
    assert not np.any(frechet_second_difference(np.full(n, 2.5), shifts))


def test_chain_rule_examples(rng):
    A, B = rng.normal(size=(3, 3)), rng.normal(size=(2, 3))
    f, g = ScMap(lambda y: A @ y), ScMap(lambda y: B @ y)
    samples = [(rng.normal(size=3), rng.normal(size=3)) for _ in range(4)]
    assert chain_rule_defect(f, g, samples).max_defect <= 1e-12
    f2 = ScMap(lambda y: np.array([y[0], y[0] ** 2]))
    g2 = ScMap(lambda y: np.array([y[0] * y[1]]))
    samples = [(rng.normal(size=1), np.ones(1)) for _ in range(4)]
    assert chain_rule_defect(f2, g2, samples).max_defect <= 1e-8


def test_compose_uses_chain_rule_derivative():
    f = ScMap(lambda y: 2 * y, derivative=lambda y, h: 2 * h)
    g = ScMap(lambda y: y**2, derivative=lambda y, h: 2 * y * h)
    gf = compose(g, f)
    assert gf.derivative(np.array([1.5]), np.array([1.0]))[0] == 12.0
