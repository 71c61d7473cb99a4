"""Cylinder gluing: profiles, cut-offs, pre-gluing, an explicit section H.

A gluing parameter ``a`` (complex, ``|a| < 1/4``) fixes a neck length
``R = phi(|a|)`` and a twist ``theta = arg(a) / 2 pi``.  Pre-gluing a matched
pair ``u = (u+, u-)`` produces a function on the finite cylinder
``Z_a = [0, R] x S^1``:

    v(s, t) = beta(s - R/2) u+(s, t) + beta(R/2 - s) u-(s - R, t - theta).

``section_H`` is a right inverse: ``preglue(a, section_H(v)) == v`` up to
round-off, so ``r = section_H o preglue`` is idempotent.

Glued grids use ``n_R`` (even) intervals of length ``h_R = R / n_R <= h_s``.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _accel
from .sccalc import Scale, ScMap
from .scalespace import (
    DEFAULT_GRID, DEFAULT_WEIGHTS, ConfigurationError, EPair, GridConfig, HalfCylinderFunction,
    fractional_rotate, level_norm, make_pair,
)

R_MAX = 1000.0
COLLAR_LENGTH = 50.0
MIN_SECTION_R = 8.0


class ResourceError(RuntimeError):
    """The neck is too long to discretize within the configured budget."""


# ------------------------------------------------------------- profiles --

@dataclass(frozen=True)
class GluingProfile:
    """``exponential``: R = e^(1/s) - e.  ``inverse_test``: R = 1/s - 4 (test only)."""

    kind: str = "exponential"

    def __post_init__(self):
        if self.kind not in ("exponential", "inverse_test"):
            raise ConfigurationError(f"unknown gluing profile {self.kind!r}")

    def forward(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s <= 0) or np.any(s > 1):
            raise ValueError("gluing profile is defined on (0, 1]")
        if self.kind == "exponential":
            with np.errstate(over="ignore"):
                out = np.exp(1.0 / s) - np.e
        else:
            out = 1.0 / s - 4.0
        return float(out) if out.ndim == 0 else out

    def inverse(self, R):
        R = np.asarray(R, dtype=float)
        if self.kind == "exponential":
            out = 1.0 / np.log(R + np.e)
        else:
            out = 1.0 / (R + 4.0)
        return float(out) if out.ndim == 0 else out


EXPONENTIAL = GluingProfile("exponential")
INVERSE_TEST = GluingProfile("inverse_test")


def profile_phi(s, kind="exponential"):
    return GluingProfile(kind).forward(s)


def profile_inverse(R, kind="exponential"):
    return GluingProfile(kind).inverse(R)


# -------------------------------------------------------------- cut-off --

@dataclass(frozen=True)
class CutoffModel:
    """beta(s) = int_s^1 psi / int_-1^1 psi with psi(x) = exp(-k / (1 - x^2)).

    Any sharpness ``k > 0`` gives an admissible cut-off (1 below -1, 0 above 1,
    beta(s) + beta(-s) = 1).  Values are computed for ``s >= 0`` and mirrored,
    so the symmetry holds to one rounding.
    """

    sharpness: float = 1.0

    def __post_init__(self):
        if not self.sharpness > 0:
            raise ConfigurationError("cut-off sharpness must be positive")

    @property
    def total(self):
        return _bump_total(self.sharpness)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.empty_like(flat)
        x = np.abs(flat)
        inner = x < 1.0
        xi = x[inner]
        upper = _accel.bump_integral(xi, np.ones_like(xi), self.sharpness) / self.total
        val = np.zeros_like(x)
        val[inner] = upper
        pos = flat >= 0
        out[pos] = val[pos]
        out[~pos] = 1.0 - val[~pos]
        out[flat == 0] = 0.5
        return out.reshape(s.shape) if s.ndim else float(out[0])


@lru_cache(maxsize=16)
def _bump_total(sharpness):
    half = _accel.bump_integral(np.zeros(1), np.ones(1), sharpness)[0]
    return 2.0 * half


DEFAULT_CUTOFF = CutoffModel()


def cutoff_beta(s, cutoff=None):
    return (DEFAULT_CUTOFF if cutoff is None else cutoff)(s)


# ------------------------------------------------------------ parameter --

@dataclass(frozen=True)
class GluingParameter:
    a: complex = 0j
    profile: GluingProfile = EXPONENTIAL

    def __post_init__(self):
        a = complex(self.a)
        object.__setattr__(self, "a", a)
        if not abs(a) < 0.25:
            raise ConfigurationError(f"gluing parameter needs |a| < 1/4, got |a|={abs(a)}")

    @property
    def is_zero(self):
        return self.a == 0

    @property
    def R(self):
        return math.inf if self.is_zero else self.profile.forward(abs(self.a))

    @property
    def theta(self):
        if self.is_zero:
            return 0.0
        return (math.atan2(self.a.imag, self.a.real) / (2 * math.pi)) % 1.0

    @classmethod
    def polar(cls, modulus, angle_fraction=0.0, profile=EXPONENTIAL):
        return cls(modulus * np.exp(2j * np.pi * angle_fraction), profile)


def as_param(a):
    return a if isinstance(a, GluingParameter) else GluingParameter(a)


def glued_grid(R, h_s):
    """Even number of intervals ``n_R`` with spacing ``R / n_R <= h_s``."""
    n = 2 * int(math.ceil(R / (2 * h_s) - 1e-9))
    return n, R / n


@dataclass(frozen=True, eq=False)
class GluedFunction:
    """Grid function on ``Z_a``; rows are ``s = k h``, ``k = 0..n_R``."""

    param: GluingParameter
    values: np.ndarray
    h: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        n = v.shape[0] - 1
        if v.ndim != 3 or abs(n * self.h - self.R) > 1e-9 * self.R:
            raise ConfigurationError(f"glued grid {v.shape} with h={self.h} does not cover [0, {self.R}]")

    @property
    def R(self):
        return self.param.R

    @property
    def n_R(self):
        return self.values.shape[0] - 1

    @property
    def n_theta(self):
        return self.values.shape[1]

    @property
    def N(self):
        return self.values.shape[2]

    @property
    def s(self):
        return np.arange(self.n_R + 1) * self.h

    def as_half(self):
        c = np.zeros(self.N)
        return HalfCylinderFunction("plus", c, self.values, self.h, check_decay=False)


def param_of(v):
    """p_B: read the gluing parameter carried by a glued object."""
    if isinstance(v, EPair):
        return GluingParameter(0j)
    return v.param


# ------------------------------------------------------------ pre-gluing --

def chart_values(a, u, side, dist, cutoff=None):
    """Values of ``preglue(a, u)`` seen from one end of the neck.

    ``side='plus'`` returns ``v(s, t)`` at ``s = dist``; ``side='minus'``
    returns ``v(R - d, t + theta)`` at ``d = dist`` (the minus-chart
    coordinates).  For ``a = 0`` this reads ``u+`` or ``u-`` directly.
    """
    a = as_param(a)
    dist = np.atleast_1d(np.asarray(dist, dtype=float))
    if a.is_zero:
        half = u.plus if side == "plus" else u.minus
        return half.full(dist)
    beta = DEFAULT_CUTOFF if cutoff is None else cutoff
    R, theta = a.R, a.theta
    if np.any(dist > R * (1 + 1e-12)):
        raise ConfigurationError("chart request beyond the neck length")
    near, far = (u.plus, u.minus) if side == "plus" else (u.minus, u.plus)
    twist = theta if side == "plus" else -theta
    w_near = beta(dist - R / 2)
    w_far = beta(R / 2 - dist)
    out = np.empty((dist.size, u.n_theta, u.N))
    out[:] = (w_near + w_far)[:, None, None] * u.c[None, None, :]
    rows = w_near != 0
    if np.any(rows):
        out[rows] += w_near[rows, None, None] * near.sample(dist[rows])
    rows = w_far != 0
    if np.any(rows):
        far_vals = fractional_rotate(far.sample(np.maximum(R - dist[rows], 0.0)), twist)
        out[rows] += w_far[rows, None, None] * far_vals
    return out


def preglue(a, u, cutoff=None, h_s=None, R_max=R_MAX):
    """The pre-gluing map; ``a = 0`` returns ``u`` itself."""
    a = as_param(a)
    if a.is_zero:
        return u
    R = a.R
    if R > R_max:
        bound = a.profile.inverse(R_max)
        raise ResourceError(f"neck length R={R:.4g} exceeds R_max={R_max:g}; "
                            f"use |a| >= {bound:.4f}")
    h_s = max(u.plus.h, u.minus.h) if h_s is None else h_s
    n, h = glued_grid(R, h_s)
    s = np.arange(n + 1) * h
    return GluedFunction(a, chart_values(a, u, "plus", s, cutoff), h)


def section_H(v, plateau=None):
    """Right inverse of ``preglue``: returns ``(a, u)`` with ``preglue(a, u) = v``.

    The common constant is the mean of ``v`` over the middle circle.  Each
    half keeps ``v`` up to ``R/2 + 1`` and is blended to the constant by a
    fixed plateau cut-off, reaching it by ``R/2 + 3``.  Because the plateau
    equals 1 wherever the gluing cut-off is non-zero, ``preglue o section_H``
    is the identity for every admissible gluing cut-off.
    """
    if isinstance(v, EPair):
        return GluingParameter(0j), v
    plateau = DEFAULT_CUTOFF if plateau is None else plateau
    a, R, h, n = v.param, v.R, v.h, v.n_R
    if R < MIN_SECTION_R:
        raise ConfigurationError(f"section needs R >= {MIN_SECTION_R:g}, got {R:.4g}")
    vals = v.values
    c = vals[n // 2].mean(axis=0)
    s = np.arange(n + 1) * h
    keep = plateau(s - R / 2 - 2.0)[:, None, None]
    r_plus = keep * (vals - c)
    r_minus = keep * (fractional_rotate(vals[::-1], -a.theta) - c)
    r_plus[-1] = 0.0
    r_minus[-1] = 0.0
    grid = GridConfig(n_theta=v.n_theta, h_s=h, s_cut=max(8.0, R), N=v.N)
    return a, make_pair(c, r_plus, r_minus, grid, h=h)


def retract(a, u, cutoff=None, h_s=None):
    """The gluing retraction ``r = section_H o preglue`` on ``B x E``."""
    return section_H(preglue(a, u, cutoff, h_s))


def retract_fixed_grid(a, u, grid=None, cutoff=None, plateau=None):
    """``r(a, u)`` sampled on the fixed axial grid of ``grid`` (spacing ``h_s``).

    Same map as ``retract`` but evaluated at ``|s| = k h_s`` through the
    chart formulas, so nearby parameters share one grid.  Used wherever the
    retraction is differentiated in ``a``.
    """
    a = as_param(a)
    grid = DEFAULT_GRID if grid is None else grid
    if a.is_zero:
        return a, u
    plateau = DEFAULT_CUTOFF if plateau is None else plateau
    R = a.R
    if R / 2 + 3 > grid.s_cut:
        raise ConfigurationError(f"grid s_cut={grid.s_cut} too short for R={R:.4g} "
                                 f"(needs {R / 2 + 3:.4g})")
    mid = 0.5 * (chart_values(a, u, "plus", [R / 2], cutoff)[0].mean(axis=0)
                 + chart_values(a, u, "minus", [R / 2], cutoff)[0].mean(axis=0))
    s = np.arange(grid.n_s) * grid.h_s
    keep = plateau(s - R / 2 - 2.0)
    live = keep != 0
    halves = []
    for side in ("plus", "minus"):
        r = np.zeros((grid.n_s, u.n_theta, u.N))
        r[live] = keep[live, None, None] * (chart_values(a, u, side, s[live], cutoff) - mid)
        halves.append(r)
    return a, make_pair(mid, halves[0], halves[1], grid)


def middle_mean(a, u, cutoff=None):
    a = as_param(a)
    if a.is_zero:
        raise ConfigurationError("no middle circle at a = 0")
    return 0.5 * (chart_values(a, u, "plus", [a.R / 2], cutoff)[0].mean(axis=0)
                  + chart_values(a, u, "minus", [a.R / 2], cutoff)[0].mean(axis=0))


# ---------------------------------------------------------- restrictions --

def collar_grid(h_s, L_r=COLLAR_LENGTH):
    return np.arange(int(round(L_r / h_s)) + 1) * h_s


def restrict_pm(v, side, L_r=COLLAR_LENGTH, h_s=None):
    """Restriction of a glued object to the collar ``Sigma^+`` or ``Sigma^-``.

    Returns values ``(n_collar, n_theta, N)`` on ``|s| = 0, h_s, ..., L_r``;
    the minus collar is read in minus-chart coordinates ``(s' + R, t' + theta)``.
    """
    if side not in ("plus", "minus"):
        raise ConfigurationError(f"side must be 'plus' or 'minus', got {side!r}")
    if isinstance(v, EPair):
        h_s = max(v.plus.h, v.minus.h) if h_s is None else h_s
        half = v.plus if side == "plus" else v.minus
        return half.full(collar_grid(h_s, L_r))
    if L_r > v.R:
        raise ConfigurationError(f"collar length {L_r} exceeds neck length {v.R:.4g}")
    h_s = DEFAULT_GRID.h_s if h_s is None else h_s
    d = collar_grid(h_s, L_r)
    half = v.as_half()
    if side == "plus":
        return half.sample(d)
    return fractional_rotate(half.sample(np.clip(v.R - d, 0.0, v.R)), -v.param.theta)


def restrict_composite(a, u, side, L_r=COLLAR_LENGTH, cutoff=None):
    """``p^pm o preglue`` evaluated directly from ``(a, u)`` on the collar grid."""
    h_s = max(u.plus.h, u.minus.h)
    return chart_values(a, u, side, collar_grid(h_s, L_r), cutoff)


def max_collar_modulus(L_r=COLLAR_LENGTH, profile=EXPONENTIAL):
    """Largest |a| whose neck leaves the collar (plus a unit margin) untouched by gluing."""
    return profile.inverse(2 * L_r + 4)


# ---------------------------------------------------------- flat chart --

def grid_for_modulus(modulus, base=None, profile=EXPONENTIAL):
    """``base`` with ``s_cut`` extended so ``retract_fixed_grid`` fits at ``|a| >= modulus``."""
    base = DEFAULT_GRID if base is None else base
    need = profile.forward(modulus) / 2 + 4
    s_cut = max(base.s_cut, base.h_s * math.ceil(need / base.h_s))
    return GridConfig(base.n_theta, base.h_s, s_cut, base.N)


@dataclass(frozen=True)
class GluingChart:
    """Flat coordinates ``[Re a, Im a, c, r+, r-]`` on ``B x E`` over a fixed grid."""

    grid: GridConfig = DEFAULT_GRID
    weights: object = DEFAULT_WEIGHTS
    profile: GluingProfile = EXPONENTIAL

    @property
    def shape(self):
        return (self.grid.n_s, self.grid.n_theta, self.grid.N)

    @property
    def dim(self):
        return 2 + self.grid.N + 2 * int(np.prod(self.shape))

    def to_vec(self, a, u):
        a = as_param(a).a
        return np.concatenate([[a.real, a.imag], u.c, u.plus.r.ravel(), u.minus.r.ravel()])

    def from_vec(self, x):
        N, size = self.grid.N, int(np.prod(self.shape))
        a = GluingParameter(complex(x[0], x[1]), self.profile)
        c = x[2:2 + N]
        rp = x[2 + N:2 + N + size].reshape(self.shape)
        rm = x[2 + N + size:].reshape(self.shape)
        return a, make_pair(c, rp, rm, self.grid, check_decay=False)

    def norm(self, x, m):
        a, u = self.from_vec(x)
        return float(np.hypot(abs(a.a), level_norm(u, m, self.weights)))

    @property
    def scale(self):
        return Scale(self.norm, "BxE")

    def in_domain(self, x, min_modulus=0.0):
        mod = float(np.hypot(x[0], x[1]))
        if not (mod < 0.25 and (mod == 0 or mod >= min_modulus)):
            return False
        return mod == 0 or self.profile.forward(mod) / 2 + 3 <= self.grid.s_cut

    def retraction(self, cutoff=None, min_modulus=0.15):
        """The gluing retraction as an ``ScMap`` on flat coordinates."""
        def ev(x):
            a, u = self.from_vec(x)
            return self.to_vec(*retract_fixed_grid(a, u, self.grid, cutoff))

        return ScMap(ev, self.scale, self.scale, lambda x: self.in_domain(x, min_modulus),
                     name="gluing_retraction")


__all__ = [
    "grid_for_modulus", "GluingChart",
    "R_MAX", "COLLAR_LENGTH", "ResourceError", "GluingProfile", "EXPONENTIAL", "INVERSE_TEST",
    "profile_phi", "profile_inverse", "CutoffModel", "DEFAULT_CUTOFF", "cutoff_beta",
    "GluingParameter", "as_param", "glued_grid", "GluedFunction", "param_of", "chart_values",
    "preglue", "section_H", "retract", "retract_fixed_grid", "middle_mean", "collar_grid",
    "restrict_pm", "restrict_composite", "max_collar_modulus",
]
