"""Hot numeric kernels with an optional numba backend.

Every kernel has a pure-numpy twin.  The numba versions are used when numba
imports cleanly and ``SCGLUE_DISABLE_NUMBA`` is unset (or ``0``).  Both paths
are kept numerically interchangeable; ``tests/test_accel.py`` holds them to
1e-13 agreement and ``benchmarks/bench_kernels.py`` times them.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a soft dependency
    numba = None

_DISABLED = os.environ.get("SCGLUE_DISABLE_NUMBA", "0") not in ("", "0")
HAVE_NUMBA = numba is not None and not _DISABLED

if HAVE_NUMBA:
    _threads = os.environ.get("SCGLUE_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))

# Gauss-Legendre rule used for the cut-off integral; 64 nodes resolve the
# flat bump to ~1e-15.
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------- cut-off --

def _bump_integral_py(lo, hi, sharpness, nodes, weights):
    """Integral of exp(-k/(1-x^2)) over [lo, hi] for arrays lo, hi in [-1, 1]."""
    half = 0.5 * (hi - lo)[:, None]
    x = half * nodes[None, :] + 0.5 * (hi + lo)[:, None]
    inside = np.abs(x) < 1.0
    xx = np.where(inside, x, 0.0)
    vals = np.where(inside, np.exp(-sharpness / (1.0 - xx * xx)), 0.0)
    return (half[:, 0]) * (vals @ weights)


def _bump_integral_nb(lo, hi, sharpness, nodes, weights):
    out = np.empty(lo.shape[0])
    for i in range(lo.shape[0]):
        half = 0.5 * (hi[i] - lo[i])
        mid = 0.5 * (hi[i] + lo[i])
        acc = 0.0
        for j in range(nodes.shape[0]):
            x = half * nodes[j] + mid
            if -1.0 < x < 1.0:
                acc += weights[j] * np.exp(-sharpness / (1.0 - x * x))
        out[i] = half * acc
    return out


_bump_integral_jit = _njit(_bump_integral_nb)


def bump_integral(lo, hi, sharpness, backend=None):
    lo = np.ascontiguousarray(lo, dtype=float)
    hi = np.ascontiguousarray(hi, dtype=float)
    if _use_numba(backend):
        return _bump_integral_jit(lo, hi, float(sharpness), GL_NODES, GL_WEIGHTS)
    return _bump_integral_py(lo, hi, float(sharpness), GL_NODES, GL_WEIGHTS)


# ------------------------------------------------------- banded stencils --

def _stencil_apply_py(f, interior, offset, left, right):
    n = f.shape[0]
    w = interior.shape[0]
    out = np.zeros_like(f)
    nl = left.shape[0]
    nr = right.shape[0]
    lo = nl
    hi = n - nr
    for j in range(w):
        out[lo:hi] += interior[j] * f[lo - offset + j:hi - offset + j]
    wl = left.shape[1]
    out[:nl] = left @ f[:wl]
    wr = right.shape[1]
    out[n - nr:] = right @ f[n - wr:]
    return out


def _stencil_apply_nb(f, interior, offset, left, right):
    n, m = f.shape
    w = interior.shape[0]
    nl = left.shape[0]
    nr = right.shape[0]
    wl = left.shape[1]
    wr = right.shape[1]
    out = np.zeros((n, m))
    for i in range(nl, n - nr):
        for j in range(w):
            c = interior[j]
            row = i - offset + j
            for k in range(m):
                out[i, k] += c * f[row, k]
    for i in range(nl):
        for j in range(wl):
            c = left[i, j]
            for k in range(m):
                out[i, k] += c * f[j, k]
    for i in range(nr):
        for j in range(wr):
            c = right[i, j]
            row = n - wr + j
            for k in range(m):
                out[n - nr + i, k] += c * f[row, k]
    return out


_stencil_apply_jit = _njit(_stencil_apply_nb)


def stencil_apply(f, interior, offset, left, right, backend=None):
    """Apply a banded finite-difference operator along axis 0 of a 2-D array.

    Rows ``[nl, n-nr)`` use the centred ``interior`` stencil (anchored at
    ``offset``); the first ``nl`` and last ``nr`` rows use the dense closure
    blocks ``left`` (acting on the first columns) and ``right``.
    """
    f = np.ascontiguousarray(f, dtype=float)
    if _use_numba(backend):
        return _stencil_apply_jit(f, interior, int(offset), left, right)
    return _stencil_apply_py(f, interior, int(offset), left, right)


# ------------------------------------------------------- weighted energy --

def _weighted_energy_py(f, weights):
    return float(weights @ np.sum(f * f, axis=1))


def _weighted_energy_nb(f, weights):
    n, m = f.shape
    total = 0.0
    for i in range(n):
        acc = 0.0
        for k in range(m):
            acc += f[i, k] * f[i, k]
        total += weights[i] * acc
    return total


_weighted_energy_jit = _njit(_weighted_energy_nb)


def weighted_energy(f, weights, backend=None):
    """sum_i weights[i] * sum_k f[i, k]**2 for a 2-D array ``f``."""
    f = np.ascontiguousarray(f, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    if _use_numba(backend):
        return float(_weighted_energy_jit(f, weights))
    return _weighted_energy_py(f, weights)


def _use_numba(backend):
    if backend is None:
        return HAVE_NUMBA
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable or disabled")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown backend {backend!r}")


def backend_name():
    return "numba" if HAVE_NUMBA else "numpy"
