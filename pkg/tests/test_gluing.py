import numpy as np
import pytest

from scglue.gluing import (
    DEFAULT_CUTOFF, EXPONENTIAL, ConfigurationError, CutoffModel, GluedFunction, GluingParameter,
    ResourceError, max_collar_modulus, preglue, restrict_pm, retract, section_H,
)
from scglue.records import aligned_modulus
from scglue.scalespace import (
    GridConfig, band_limited_pair, level_norm, make_pair, smooth_bump, zero_pair,
)


def test_profile_values():
    assert EXPONENTIAL.forward(1.0) == 0.0
    assert EXPONENTIAL.forward(0.25) == pytest.approx(np.exp(4) - np.e, abs=1e-12)
    assert abs(EXPONENTIAL.inverse(EXPONENTIAL.forward(0.2)) - 0.2) <= 1e-12
    with pytest.raises(ValueError):
        EXPONENTIAL.forward(0.0)


def test_cutoff_values():
    b = DEFAULT_CUTOFF
    assert b(-2.0) == 1.0 and b(1.0) == 0.0
    assert b(0.0) == 0.5
    s = np.linspace(-3, 3, 1001)
    for beta in (b, CutoffModel(2.0)):
        assert np.max(np.abs(beta(s) + beta(-s) - 1)) <= 1e-12


def test_preglue_at_zero_is_identity(rng):
    u = band_limited_pair(rng)
    assert preglue(0j, u) is u
    a, w = section_H(u)
    assert a.is_zero and w is u


def test_constant_pair_glues_to_constant():
    c = np.array([0.7, -2.0])
    v = preglue(GluingParameter.polar(0.22, 0.3), zero_pair(c=c))
    assert np.max(np.abs(v.values - c)) <= 1e-14
    a, w = section_H(v)
    assert np.max(np.abs(w.c - c)) <= 1e-14
    assert np.max(np.abs(w.plus.r)) <= 1e-14 and np.max(np.abs(w.minus.r)) <= 1e-14


def test_bump_survives_gluing_on_its_support():
    a = GluingParameter.polar(0.22, 0.0)
    g = GridConfig()
    s = np.arange(g.n_s) * g.h_s
    bump = smooth_bump(s, a.R / 2 - 1)
    rp = np.repeat((bump[:, None] * np.ones(g.n_theta))[:, :, None], 2, axis=2)
    u = make_pair(np.zeros(2), rp, np.zeros_like(rp))
    v = preglue(a, u)
    inside = v.s <= a.R / 2 - 1
    assert np.max(np.abs(v.values[inside, :, 0] - np.interp(v.s[inside], s, bump)[:, None])) < 1e-3
    assert not np.any(v.values[v.s >= a.R / 2 + 1])


@pytest.mark.parametrize("angle", [0.0, 0.37])
def test_section_identity(rng, angle):
    a = GluingParameter.polar(0.24, angle)
    u = band_limited_pair(rng)
    v = preglue(a, u)
    _, w = section_H(v)
    v2 = preglue(a, w)
    diff = GluedFunction(a, v2.values - v.values, v.h)
    assert level_norm(diff, 0) <= 1e-10 * level_norm(v, 0)


def test_retraction_idempotent(rng):
    u = band_limited_pair(rng)
    r1 = retract(GluingParameter.polar(0.2, 0.1), u)
    r2 = retract(*r1)
    assert np.max(np.abs(r2[1].flat() - r1[1].flat())) <= 1e-10


def test_restrictions():
    c = np.array([1.0, 2.0])
    v = preglue(GluingParameter.polar(0.2), zero_pair(c=c))
    for side in ("plus", "minus"):
        assert np.max(np.abs(restrict_pm(v, side) - c)) <= 1e-14
    with pytest.raises(ConfigurationError):
        restrict_pm(v, "middle")


def test_bump_restriction_bookkeeping():
    # on an aligned modulus the glued grid contains the collar grid, so no resampling
    a = GluingParameter.polar(aligned_modulus(0.2, 0.25), 0.1)
    assert abs(a.a) <= max_collar_modulus()
    g = GridConfig()
    s = np.arange(g.n_s) * g.h_s
    rp = np.repeat((smooth_bump(s, 10.0)[:, None] * np.ones(g.n_theta))[:, :, None], 2, axis=2)
    u = make_pair(np.zeros(2), rp, np.zeros_like(rp))
    v = preglue(a, u)
    assert np.max(np.abs(restrict_pm(v, "plus") - restrict_pm(u, "plus"))) <= 1e-12
    assert np.max(np.abs(restrict_pm(v, "minus"))) <= 1e-12
    assert np.array_equal(restrict_pm(preglue(0j, u), "plus"), restrict_pm(u, "plus"))


def test_long_neck_is_refused(rng):
    with pytest.raises(ResourceError, match=r"\|a\| >="):
        preglue(GluingParameter.polar(0.1), band_limited_pair(rng))


def test_parameter_domain():
    with pytest.raises(ConfigurationError):
        GluingParameter(0.25)
    a = GluingParameter(-0.2j)
    assert a.theta == pytest.approx(0.75)
