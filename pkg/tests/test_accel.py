import os
import subprocess
import sys

import numpy as np
import pytest

from scglue import _accel
from scglue.scalespace import band_limited_pair, fd_operator, level_norms

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba unavailable")


@needs_numba
def test_backends_agree(rng):
    xi = rng.uniform(-1, 1, 500)
    a = _accel.bump_integral(xi, np.ones_like(xi), 1.0, backend="numpy")
    b = _accel.bump_integral(xi, np.ones_like(xi), 1.0, backend="numba")
    assert np.max(np.abs(a - b)) <= 1e-13
    f = rng.normal(size=(100, 64))
    interior, offset, left, right = fd_operator(3, 4)
    a = _accel.stencil_apply(f, interior, offset, left, right, backend="numpy")
    b = _accel.stencil_apply(f, interior, offset, left, right, backend="numba")
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(a))
    w = rng.uniform(size=100)
    a = _accel.weighted_energy(f, w, backend="numpy")
    b = _accel.weighted_energy(f, w, backend="numba")
    assert abs(a - b) <= 1e-13 * a


@needs_numba
def test_level_norm_independent_of_backend(rng, monkeypatch):
    u = band_limited_pair(rng)
    fast = level_norms(u)
    monkeypatch.setattr(_accel, "HAVE_NUMBA", False)
    slow = level_norms(u)
    assert np.allclose(fast, slow, rtol=1e-13, atol=0)


def test_backend_flags(monkeypatch):
    monkeypatch.setattr(_accel, "HAVE_NUMBA", False)
    assert _accel.backend_name() == "numpy"
    with pytest.raises(RuntimeError):
        _accel.weighted_energy(np.ones((3, 2)), np.ones(3), backend="numba")
    with pytest.raises(ValueError):
        _accel.weighted_energy(np.ones((3, 2)), np.ones(3), backend="cuda")


def test_env_flag_disables_numba():
    env = dict(os.environ, SCGLUE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from scglue import _accel; print(_accel.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
