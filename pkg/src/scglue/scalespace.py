"""Discretized sc-scales of weighted Sobolev spaces on half-cylinders.

A half-cylinder function is stored as an asymptotic constant ``c`` in R^N plus
a decaying part ``r`` sampled on the axial grid ``{0, h, ..., s_cut}`` and the
angular grid ``{j / n_theta}``.  Arrays are laid out ``(n_s, n_theta, N)``.
On the minus side row ``k`` holds ``s' = -k h``, so both halves share the same
layout and are indexed by ``|s|``.

Level ``m`` of the scale is the weighted space with ``3 + m`` derivatives and
weight ``exp(delta_m |s|)``.  The discrete norm differentiates spectrally in
``t`` and with fourth-order finite differences in ``s``; see ``level_norm``.
"""
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.interpolate import make_interp_spline

from . import _accel

TRUNCATION_TOL = 1e-8
_ALIGN_TOL = 1e-9


class ConfigurationError(ValueError):
    """Inconsistent grid, level, or weight configuration."""


class TruncationError(ValueError):
    """A decaying part is not negligible at the truncation length."""


@dataclass(frozen=True)
class WeightSequence:
    deltas: tuple = (0.1, 0.2, 0.3, 0.4)

    def __post_init__(self):
        d = tuple(float(x) for x in self.deltas)
        object.__setattr__(self, "deltas", d)
        if len(d) < 2:
            raise ConfigurationError("need at least two weights (max_level >= 1)")
        if d[0] <= 0 or any(b <= a for a, b in zip(d, d[1:])):
            raise ConfigurationError(f"weights must be positive and strictly increasing: {d}")

    @property
    def max_level(self):
        return len(self.deltas) - 1

    def check_level(self, m):
        if not (isinstance(m, (int, np.integer)) and 0 <= m <= self.max_level):
            raise ConfigurationError(f"level {m!r} outside 0..{self.max_level}")
        return int(m)


@dataclass(frozen=True)
class GridConfig:
    n_theta: int = 32
    h_s: float = 0.25
    s_cut: float = 60.0
    N: int = 2

    def __post_init__(self):
        n = self.n_theta
        if n < 8 or n & (n - 1):
            raise ConfigurationError(f"n_theta must be a power of two >= 8, got {n}")
        if not self.h_s > 0:
            raise ConfigurationError("h_s must be positive")
        if self.s_cut < 8:
            raise ConfigurationError("s_cut must be >= 8")
        if self.N < 1:
            raise ConfigurationError("target dimension N must be >= 1")

    @property
    def n_s(self):
        return int(round(self.s_cut / self.h_s)) + 1

    def s_grid(self, h=None, length=None):
        h = self.h_s if h is None else h
        length = self.s_cut if length is None else length
        return np.arange(int(np.ceil(length / h - 1e-12)) + 1) * h

    @property
    def t_grid(self):
        return np.arange(self.n_theta) / self.n_theta


DEFAULT_WEIGHTS = WeightSequence()
DEFAULT_GRID = GridConfig()


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class HalfCylinderFunction:
    """``c + r`` on one half-cylinder; ``r`` has shape ``(n_s, n_theta, N)``."""

    side: str
    c: np.ndarray
    r: np.ndarray
    h: float
    check_decay: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.side not in ("plus", "minus"):
            raise ConfigurationError(f"side must be 'plus' or 'minus', got {self.side!r}")
        if not isinstance(self.c, np.ndarray) or self.c.flags.writeable:
            object.__setattr__(self, "c", _frozen(self.c))
        if not isinstance(self.r, np.ndarray) or self.r.flags.writeable:
            object.__setattr__(self, "r", _frozen(self.r))
        if self.r.ndim != 3 or self.r.shape[2] != self.c.shape[0]:
            raise ConfigurationError(f"r has shape {self.r.shape}, c has shape {self.c.shape}")
        if self.r.shape[0] < 6:
            raise ConfigurationError("need at least 6 axial samples")
        if self.check_decay:
            tail = float(np.max(np.abs(self.r[-1])))
            if tail > TRUNCATION_TOL:
                raise TruncationError(
                    f"{self.side} decaying part is {tail:.3e} at s_cut={self.s_cut:g} "
                    f"(tolerance {TRUNCATION_TOL:g})")

    @property
    def n_s(self):
        return self.r.shape[0]

    @property
    def n_theta(self):
        return self.r.shape[1]

    @property
    def N(self):
        return self.r.shape[2]

    @property
    def s_cut(self):
        return (self.n_s - 1) * self.h

    @property
    def s(self):
        """Axial coordinates of the rows (negative on the minus side)."""
        s = np.arange(self.n_s) * self.h
        return s if self.side == "plus" else -s

    @property
    def values(self):
        return self.c[None, None, :] + self.r

    @cached_property
    def _spline(self):
        x = np.arange(self.n_s) * self.h
        flat = self.r.reshape(self.n_s, -1)
        return make_interp_spline(x, flat, k=5, axis=0)

    def sample(self, dist):
        """Decaying part at axial distances ``|s|`` (rows beyond the cut are 0).

        Grid-aligned requests are answered by exact row lookup; anything else
        goes through a quintic interpolating spline in ``s``.
        """
        dist = np.asarray(dist, dtype=float)
        out = np.zeros((dist.size, self.n_theta, self.N))
        if dist.size == 0:
            return out
        if np.any(dist < -1e-9 * self.h):
            raise ConfigurationError("negative axial distance requested")
        pos = dist / self.h
        idx = np.rint(pos)
        inside = dist <= self.s_cut + 1e-9 * self.h
        aligned = np.abs(pos - idx) <= _ALIGN_TOL
        take = inside & aligned
        out[take] = self.r[idx[take].astype(int)]
        interp = inside & ~aligned
        if np.any(interp):
            vals = self._spline(np.clip(dist[interp], 0.0, self.s_cut))
            out[interp] = vals.reshape(-1, self.n_theta, self.N)
        return out

    def full(self, dist):
        return self.c[None, None, :] + self.sample(dist)

    def with_r(self, r, h=None, check_decay=True):
        return HalfCylinderFunction(self.side, self.c, r, self.h if h is None else h,
                                    check_decay=check_decay)


@dataclass(frozen=True, eq=False)
class EPair:
    """A matched pair ``(u_plus, u_minus)`` sharing one asymptotic constant."""

    plus: HalfCylinderFunction
    minus: HalfCylinderFunction

    def __post_init__(self):
        if self.plus.side != "plus" or self.minus.side != "minus":
            raise ConfigurationError("EPair needs (plus, minus) halves")
        if self.plus.c is not self.minus.c:
            raise ConfigurationError("EPair halves must share their constant")
        if self.plus.r.shape[1:] != self.minus.r.shape[1:]:
            raise ConfigurationError("EPair halves have different angular/target shapes")

    @property
    def c(self):
        return self.plus.c

    @property
    def N(self):
        return self.plus.N

    @property
    def n_theta(self):
        return self.plus.n_theta

    def flat(self):
        return np.concatenate([self.c, self.plus.r.ravel(), self.minus.r.ravel()])

    def scaled(self, alpha):
        return make_pair(alpha * self.c, alpha * self.plus.r, alpha * self.minus.r,
                         h=(self.plus.h, self.minus.h))


def make_pair(c, r_plus, r_minus, grid=None, h=None, check_decay=True):
    """Build an element of E; the two halves share the constant ``c``.

    ``h`` is the axial spacing (a scalar or a (plus, minus) tuple); it defaults
    to ``grid.h_s``.  Raises ``TruncationError`` when a decaying part exceeds
    the truncation tolerance at its last row.
    """
    grid = DEFAULT_GRID if grid is None else grid
    c = _frozen(np.atleast_1d(c))
    r_plus = np.asarray(r_plus, dtype=float)
    r_minus = np.asarray(r_minus, dtype=float)
    if h is None:
        hp = hm = grid.h_s
    elif np.ndim(h) == 0:
        hp = hm = float(h)
    else:
        hp, hm = (float(x) for x in h)
    for name, r, hh in (("plus", r_plus, hp), ("minus", r_minus, hm)):
        if r.ndim != 3 or r.shape[1] != grid.n_theta or r.shape[2] != grid.N:
            raise ConfigurationError(
                f"{name} grid shape {r.shape} does not match n_theta={grid.n_theta}, N={grid.N}")
        if hh > grid.h_s * (1 + 1e-12):
            raise ConfigurationError(f"{name} spacing {hh} coarser than h_s={grid.h_s}")
    if c.shape != (grid.N,):
        raise ConfigurationError(f"constant has shape {c.shape}, expected ({grid.N},)")
    return EPair(HalfCylinderFunction("plus", c, r_plus, hp, check_decay),
                 HalfCylinderFunction("minus", c, r_minus, hm, check_decay))


def zero_pair(grid=None, c=None):
    grid = DEFAULT_GRID if grid is None else grid
    z = np.zeros((grid.n_s, grid.n_theta, grid.N))
    return make_pair(np.zeros(grid.N) if c is None else c, z, z, grid)


# ------------------------------------------------------------ stencils --

def fornberg_weights(z, x, m):
    """Finite-difference weights for derivatives 0..m at ``z`` on nodes ``x``.

    Returns an array ``(len(x), m + 1)``; column ``k`` holds the weights of
    the k-th derivative.  Fornberg's recursive algorithm.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


@lru_cache(maxsize=256)
def fd_operator(k, accuracy=4):
    """Banded stencil for the k-th derivative at unit spacing.

    Interior rows use the centred stencil of the requested accuracy; the
    closure rows use one-sided stencils with ``k + accuracy`` nodes.  Returns
    ``(interior, offset, left, right)`` in the layout ``_accel.stencil_apply``
    expects (left/right blocks are dense over their first/last nodes).
    """
    if k == 0:
        one = np.ones(1)
        return one, 0, np.zeros((0, 1)), np.zeros((0, 1))
    half = (k + 1) // 2 - 1 + accuracy // 2
    nodes = np.arange(-half, half + 1, dtype=float)
    interior = fornberg_weights(0.0, nodes, k)[:, k]
    width = k + accuracy
    left = np.zeros((half, width))
    right = np.zeros((half, width))
    onesided = np.arange(width, dtype=float)
    for i in range(half):
        left[i] = fornberg_weights(float(i), onesided, k)[:, k]
        right[half - 1 - i] = fornberg_weights(float(width - 1 - i), onesided, k)[:, k]
    for arr in (interior, left, right):
        arr.flags.writeable = False
    return interior, half, left, right


def d_s(f, k, h):
    """k-th axial derivative of ``f`` (axis 0) with 4th-order differences."""
    if k == 0:
        return np.asarray(f, dtype=float)
    interior, offset, left, right = fd_operator(k)
    shape = f.shape
    flat = np.asarray(f, dtype=float).reshape(shape[0], -1)
    if shape[0] < interior.size + 2 * offset:
        raise ConfigurationError("axial grid too short for the derivative stencil")
    return _accel.stencil_apply(flat, interior, offset, left, right).reshape(shape) / h ** k


# Gregory coefficients gamma_k of the end-correction series.
_GREGORY = (1 / 12, 1 / 24, 19 / 720, 3 / 160, 863 / 60480, 275 / 24192)


@lru_cache(maxsize=64)
def _gregory_endcorrection(order):
    """Left-end node corrections (unit spacing) from differences up to ``order``."""
    from math import comb
    corr = np.zeros(order + 1)
    for k in range(1, order + 1):
        for j in range(k + 1):
            corr[j] -= (-1) ** j * _GREGORY[k - 1] * comb(k, j)
    return corr


@lru_cache(maxsize=256)
def quadrature_weights(n, h, order=5):
    """Trapezoid weights on ``n`` equispaced nodes with Gregory end corrections."""
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    q = min(order, len(_GREGORY), n // 2 - 1)
    if q > 0:
        corr = _gregory_endcorrection(q) * h
        m = corr.size
        w[:m] += corr
        w[n - m:] += corr[::-1]
    w.flags.writeable = False
    return w


# -------------------------------------------------------- angular tools --

def _t_axis(a, axis):
    if axis is None:
        return 0 if a.ndim == 1 else a.ndim - 2
    return axis % a.ndim


def fractional_rotate(u, theta, axis=None):
    """Return ``u(., t - theta)`` by trigonometric interpolation.

    Exact (to round-off) for trigonometric polynomials of degree below
    ``n_theta / 2``.  The angular axis defaults to ``-2`` for arrays laid out
    ``(..., n_theta, N)`` and to ``0`` for 1-D input.
    """
    u = np.asarray(u, dtype=float)
    ax = _t_axis(u, axis)
    theta = float(theta) % 1.0
    if theta == 0.0:
        return u.copy()
    n = u.shape[ax]
    k = np.arange(n // 2 + 1)
    phase = np.exp(-2j * np.pi * k * theta)
    shape = [1] * u.ndim
    shape[ax] = k.size
    coef = np.fft.rfft(u, axis=ax) * phase.reshape(shape)
    return np.fft.irfft(coef, n=n, axis=ax)


def angular_derivative(u, order=1, axis=None):
    u = np.asarray(u, dtype=float)
    ax = _t_axis(u, axis)
    n = u.shape[ax]
    k = np.arange(n // 2 + 1).astype(float)
    mult = (2j * np.pi * k) ** order
    if order > 0 and n % 2 == 0:
        mult[-1] = 0.0
    shape = [1] * u.ndim
    shape[ax] = k.size
    return np.fft.irfft(np.fft.rfft(u, axis=ax) * mult.reshape(shape), n=n, axis=ax)


def _mode_multiplicity(n):
    mult = np.full(n // 2 + 1, 2.0)
    mult[0] = 1.0
    if n % 2 == 0:
        mult[-1] = 1.0
    return mult


# --------------------------------------------------------------- norms --

def _spectral_amplitudes(r, h, K):
    """Per axial order k: row-wise amplitudes ``A_k`` and angular frequencies.

    ``sum_cols (A_k * freq**j)**2`` over a row is ``mean_t |d_s^k d_t^j r|^2``
    (exact for the trigonometric interpolant, by Parseval).  The Nyquist mode
    is dropped from t-derivatives.
    """
    n_s, n_t, N = r.shape
    mult = np.sqrt(_mode_multiplicity(n_t))
    freq = 2.0 * np.pi * np.arange(n_t // 2 + 1)
    amps = []
    for k in range(K + 1):
        coef = np.fft.rfft(d_s(r, k, h), axis=1) / n_t
        amps.append((np.abs(coef) * mult[None, :, None]).reshape(n_s, -1))
    col_freq = np.repeat(freq, N)
    nyq = np.zeros_like(col_freq, dtype=bool)
    if n_t % 2 == 0:
        nyq[-N:] = True
    return amps, col_freq, nyq


def _term_order(K):
    return [(k, j) for k in range(K + 1) for j in range(K + 1) if k + j <= K]


def _half_terms(half, m, weights, K_top):
    amps, col_freq, nyq = _spectral_amplitudes(half.r, half.h, K_top)
    scaled = {}
    for k, j in _term_order(K_top):
        f = amps[k] * col_freq[None, :] ** j
        if j > 0:
            f[:, nyq] = 0.0
        scaled[(k, j)] = f
    q = quadrature_weights(half.n_s, half.h)
    s = np.arange(half.n_s) * half.h
    out = {}
    for mm in range(m + 1):
        w = q * np.exp(2.0 * weights.deltas[mm] * s) if weights is not None else q
        out[mm] = {kj: _accel.weighted_energy(scaled[kj], w) for kj in _term_order(3 + mm)}
    return out


def level_norm(u, m, weights=None, grid=None):
    """Level-m norm of a half-cylinder function, an ``EPair``, or a glued map.

    ``(|c|^2 + sum_{|alpha| <= 3+m} int e^{2 delta_m |s|} |d^alpha r|^2)^(1/2)``
    with spectral t-derivatives, 4th-order s-differences and Gregory-corrected
    trapezoid quadrature in s.  Terms are accumulated in a fixed order so that
    ``level_norm(u, m) <= level_norm(u, m + 1)`` holds exactly in floating
    point.  Glued maps (objects with a ``param`` attribute) use the unweighted
    norm on ``[0, R] x S^1`` and carry no constant.
    """
    weights = DEFAULT_WEIGHTS if weights is None else weights
    m = weights.check_level(m)
    return level_norms(u, weights, grid, top=m)[m]


def level_norms(u, weights=None, grid=None, top=None):
    """All level norms ``0..top`` at once (shares the derivative work)."""
    weights = DEFAULT_WEIGHTS if weights is None else weights
    top = weights.max_level if top is None else weights.check_level(top)
    if grid is not None:
        _check_grid(u, grid)
    K = 3 + top
    if hasattr(u, "param"):
        halves = [(u.as_half(), None)]
        c2 = 0.0
    elif isinstance(u, EPair):
        halves = [(u.plus, weights), (u.minus, weights)]
        c2 = float(u.c @ u.c)
    elif isinstance(u, HalfCylinderFunction):
        halves = [(u, weights)]
        c2 = float(u.c @ u.c)
    else:
        raise TypeError(f"no level norm for {type(u).__name__}")
    terms = [_half_terms(hf, top, w, K) for hf, w in halves]
    norms = []
    for mm in range(top + 1):
        total = c2
        for kj in _term_order(K):
            for t in terms:
                total += t[mm].get(kj, 0.0)
        norms.append(float(np.sqrt(total)))
    return norms


def _check_grid(u, grid):
    if isinstance(u, EPair):
        parts = [u.plus, u.minus]
    elif isinstance(u, HalfCylinderFunction):
        parts = [u]
    else:
        parts = [u.as_half()]
    for p in parts:
        if p.n_theta != grid.n_theta or p.N != grid.N:
            raise ConfigurationError(
                f"grid mismatch: function has n_theta={p.n_theta}, N={p.N}; "
                f"config has n_theta={grid.n_theta}, N={grid.N}")
        if p.h > grid.h_s * (1 + 1e-12):
            raise ConfigurationError(f"axial spacing {p.h} coarser than h_s={grid.h_s}")


# ---------------------------------------------------- pair arithmetic --

def resample_half(half, h, n_s):
    """Resample a half onto spacing ``h`` with ``n_s`` rows (zero past the cut)."""
    return half.sample(np.arange(n_s) * h)


def pair_difference_sup(u, v):
    """Sup-norm distance of the full values of two pairs on the finer grid."""
    if u.N != v.N or u.n_theta != v.n_theta:
        raise ConfigurationError("pairs live in different target/angular grids")
    dist = float(np.max(np.abs(u.c - v.c)))
    for a, b in ((u.plus, v.plus), (u.minus, v.minus)):
        h = min(a.h, b.h)
        length = max(a.s_cut, b.s_cut)
        n = int(np.ceil(length / h - 1e-9)) + 1
        ra, rb = resample_half(a, h, n), resample_half(b, h, n)
        dist = max(dist, float(np.max(np.abs(ra - rb))))
    return dist


def pair_combination(coeffs, pairs):
    """sum_i coeffs[i] * pairs[i]; all pairs must share axial grids."""
    first = pairs[0]
    c = sum(a * p.c for a, p in zip(coeffs, pairs))
    n_p = max(p.plus.n_s for p in pairs)
    n_m = max(p.minus.n_s for p in pairs)
    rp = np.zeros((n_p,) + first.plus.r.shape[1:])
    rm = np.zeros((n_m,) + first.minus.r.shape[1:])
    for a, p in zip(coeffs, pairs):
        if p.plus.h != first.plus.h or p.minus.h != first.minus.h:
            raise ConfigurationError("linear combination needs a common axial spacing")
        rp[:p.plus.n_s] += a * p.plus.r
        rm[:p.minus.n_s] += a * p.minus.r
    grid = GridConfig(n_theta=first.n_theta, h_s=max(first.plus.h, first.minus.h),
                      s_cut=max(8.0, (n_p - 1) * first.plus.h), N=first.N)
    return make_pair(c, rp, rm, grid, h=(first.plus.h, first.minus.h), check_decay=False)


def analytic_norm_exponential(delta, K, rate=1.0, freq=1):
    """Closed-form level norm of ``exp(-rate s) sin(2 pi freq t)`` on [0, inf).

    sum_{k + j <= K} rate^(2k) (2 pi freq)^(2j) / 2 * 1 / (2 rate - 2 delta);
    used as an independent oracle for ``level_norm``.
    """
    total = 0.0
    for k in range(K + 1):
        for j in range(K - k + 1):
            total += rate ** (2 * k) * (2 * np.pi * freq) ** (2 * j) * 0.5 / (2 * rate - 2 * delta)
    return float(np.sqrt(total))


def band_limited_pair(rng, grid=None, n_modes=4, support=20.0, scale=1.0, with_constant=True,
                      decay=None, center=None):
    """Random smooth element of E with angular degree < n_modes.

    The s-profile is a smooth compact bump of radius about ``support`` around
    ``center`` (default 0), or, when ``decay`` is given, ``exp(-decay s)`` cut
    off smoothly before ``s_cut``.
    """
    grid = DEFAULT_GRID if grid is None else grid
    s = np.arange(grid.n_s) * grid.h_s
    t = grid.t_grid
    halves = []
    for _ in range(2):
        r = np.zeros((grid.n_s, grid.n_theta, grid.N))
        for comp in range(grid.N):
            for mode in range(n_modes):
                a, b = rng.normal(size=2) * scale / (1 + mode) ** 2
                width = support * rng.uniform(0.4, 1.0)
                if decay is None:
                    x = s if center is None else np.abs(s - center)
                    prof = smooth_bump(x, width) * (1 + 0.3 * rng.normal() * (s - (center or 0)) / width)
                else:
                    prof = np.exp(-decay * s) * smooth_bump(s, grid.s_cut - 2.0)
                ang = a * np.cos(2 * np.pi * mode * t) + b * np.sin(2 * np.pi * mode * t)
                r[:, :, comp] += prof[:, None] * ang[None, :]
        halves.append(r)
    c = rng.normal(size=grid.N) * scale if with_constant else np.zeros(grid.N)
    return make_pair(c, halves[0], halves[1], grid)


def smooth_bump(s, width):
    """C-infinity profile equal to 1 near 0 and vanishing for s >= width."""
    x = np.asarray(s, dtype=float) / width
    out = np.zeros_like(x)
    inside = x < 1.0
    xi = x[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi * xi))
    return out


__all__ = [
    "ConfigurationError", "TruncationError", "WeightSequence", "GridConfig",
    "HalfCylinderFunction", "EPair", "make_pair", "zero_pair", "level_norm", "level_norms",
    "fractional_rotate", "angular_derivative", "fornberg_weights", "fd_operator", "d_s",
    "quadrature_weights", "pair_difference_sup", "pair_combination",
    "analytic_norm_exponential", "band_limited_pair", "smooth_bump", "DEFAULT_GRID",
    "DEFAULT_WEIGHTS",
]
