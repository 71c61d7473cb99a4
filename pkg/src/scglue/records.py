"""Concrete imprinting records used by the suites and tests.

* the cylinder gluing ``B x E -> X`` with collar restrictions and the
  parameter projection as submersion target;
* the quotients ``R -> S^1`` and ``S^1 -> S^1/(t ~ t + 1/2)`` with branch
  sections;
* a toy quotient of glued maps onto their even angular modes;
* a corner-carrying pattern ``V x R -> V x S^1 -> V``.
"""
import numpy as np

from .gluing import (
    COLLAR_LENGTH, DEFAULT_CUTOFF, EXPONENTIAL, GluedFunction, GluingChart, GluingParameter,
    as_param, collar_grid, grid_for_modulus, max_collar_modulus, param_of, preglue,
    restrict_composite, section_H,
)
from .imprint import (
    ImprintingRecord, LocalSection, Restriction, SubmersionData, pullback_admissible,
)
from .quadrant import EPS0
from .sccalc import fd_derivative, sc1_ratio
from .scalespace import (
    DEFAULT_GRID, ConfigurationError, EPair, GridConfig, band_limited_pair, make_pair,
    pair_difference_sup,
)


# ------------------------------------------------------------ gluing --

def aligned_modulus(modulus, h_s, profile=EXPONENTIAL):
    """A modulus near ``modulus`` whose neck length is a multiple of ``2 h_s``.

    On such necks the glued grid coincides with the collar grid, so the
    restrictions commute with pre-gluing to round-off.
    """
    R = profile.forward(modulus)
    R = 2 * h_s * max(1, round(R / (2 * h_s)))
    return profile.inverse(R)


def gluing_x_distance(x, y):
    return abs(as_param(x[0]).a - as_param(y[0]).a) + pair_difference_sup(x[1], y[1])


def gluing_y_distance(v, w):
    if isinstance(v, EPair) and isinstance(w, EPair):
        return pair_difference_sup(v, w)
    if isinstance(v, EPair) or isinstance(w, EPair):
        return float("inf")
    da = abs(v.param.a - w.param.a)
    if v.values.shape != w.values.shape:
        return da + 1.0
    return da + float(np.max(np.abs(v.values - w.values)))


def collar_adjuster(side, L_r=COLLAR_LENGTH, cutoff=None):
    """Shift the decaying part of ``u^side`` so its collar restriction hits a target.

    The correction equals the defect on the collar nodes and is faded out over
    one unit past the collar, so only the ``side`` restriction moves.
    """
    cutoff = DEFAULT_CUTOFF if cutoff is None else cutoff

    def adjust(x, target):
        a, u = x
        half = u.plus if side == "plus" else u.minus
        d = np.asarray(target) - restrict_composite(a, u, side, L_r)
        n_c = d.shape[0]
        s = np.arange(half.n_s) * half.h
        if abs(collar_grid(half.h, L_r)[-1] - L_r) > 1e-9 or half.n_s < n_c:
            raise ConfigurationError("collar grid does not match the pair's axial grid")
        ext = np.zeros_like(half.r)
        ext[:n_c] = d
        tail = (s > L_r) & (s <= L_r + 1)
        ext[tail] = cutoff(2 * (s[tail] - L_r) - 1)[:, None, None] * d[-1][None]
        rp, rm = (half.r + ext, u.minus.r) if side == "plus" else (u.plus.r, half.r + ext)
        grid = GridConfig(u.n_theta, max(u.plus.h, u.minus.h),
                          max(8.0, (max(u.plus.n_s, u.minus.n_s) - 1) * half.h), u.N)
        return a, make_pair(u.c, rp, rm, grid, h=(u.plus.h, u.minus.h))

    return adjust


def gluing_record(grid=None, moduli=(0.2, 0.22, 0.249), angles=None, include_zero=True,
                  restrictions=True, L_r=COLLAR_LENGTH, cutoff=None, aligned=None,
                  sc1=True, name="gluing", profile=EXPONENTIAL):
    """The gluing imprinting ``B x E -> X`` as a record.

    Samples draw ``a`` from ``moduli`` (times random or given angle
    fractions) and, when ``include_zero``, from ``a = 0``.  Restrictions
    ``plus`` and ``minus`` read the collars of length ``L_r``; they need
    every neck to leave the collar untouched (``R >= 2 L_r + 4``).  The
    submersion target is the parameter projection ``p_B`` with
    ``rho_bar((a, u), a') = (a', u)``.
    """
    grid = DEFAULT_GRID if grid is None else grid
    if aligned is None:
        aligned = restrictions
    mods = tuple(aligned_modulus(m, grid.h_s, profile) if aligned else m for m in moduli)
    if restrictions and max(mods) > max_collar_modulus(L_r, profile):
        raise ConfigurationError(
            f"collar restrictions of length {L_r} need |a| <= {max_collar_modulus(L_r, profile):.4f}")

    def sample_a(rng):
        k = int(rng.integers(len(mods) + (1 if include_zero else 0)))
        if k == len(mods):
            return GluingParameter(0j, profile)
        ang = rng.uniform() if angles is None else angles[int(rng.integers(len(angles)))]
        return GluingParameter(mods[k] * np.exp(2j * np.pi * ang), profile)

    def sample_x(rng):
        a = sample_a(rng)
        center = None
        if not a.is_zero and a.R / 2 + 4 < grid.s_cut and rng.uniform() < 0.5:
            center = a.R / 2
        u = band_limited_pair(rng, grid, support=8.0 if center else 20.0, center=center)
        return a, u

    restr = {}
    if restrictions:
        for side in ("plus", "minus"):
            restr[side] = Restriction(
                (lambda x, side=side: restrict_composite(x[0], x[1], side, L_r, cutoff)),
                collar_adjuster(side, L_r))

    def oplus(x):
        return preglue(x[0], x[1], cutoff, h_s=None)

    def H(y):
        return section_H(y)

    def sample_z(rng):
        return sample_a(rng).a

    sub = SubmersionData(
        lambda y: param_of(y).a,
        lambda x, z: (GluingParameter(z, profile), x[1]),
        sample_z, lambda z1, z2: abs(complex(z1) - complex(z2)), lambda z: 0)

    probe = None
    if sc1:
        nonzero = [m for m in mods if m > 0]

        def probe(rng):
            m = max(nonzero)
            g = grid_for_modulus(m - 0.003, GridConfig(min(grid.n_theta, 16), grid.h_s,
                                                       grid.s_cut, grid.N), profile)
            chart = GluingChart(g, profile=profile)
            a = GluingParameter.polar(m, rng.uniform(), profile)
            u = band_limited_pair(rng, g, center=a.R / 2, support=6.0)
            du = band_limited_pair(rng, g, center=a.R / 2, support=4.0)
            f = chart.retraction(cutoff, min_modulus=0.0)
            x = chart.to_vec(a, u)
            h = chart.to_vec(1e-3 * np.exp(2j * np.pi * rng.uniform()), du)
            fd = fd_derivative(f, x, h)
            return [sc1_ratio(f, x, h, Dfh=fd.estimate)]

    def section_ok(y):
        return isinstance(y, EPair) or y.R >= 8

    return ImprintingRecord(
        name, oplus, (LocalSection(section_ok, H, "H"),), sample_x, gluing_x_distance,
        gluing_y_distance, restr, sub, lambda x: 0, probe)


def real_slice_pullback(rec, a0=None):
    """Pull the gluing record back to parameters on the real axis (or to ``a = a0``)."""
    if a0 is None:
        def member(y):
            return param_of(y).a.imag == 0

        def sub(x):
            return GluingParameter(complex(as_param(x[0]).a.real), as_param(x[0]).profile), x[1]

        name = f"{rec.name}|Im a=0"
    else:
        a0 = as_param(a0)

        def member(y):
            return param_of(y).a == a0.a

        def sub(x):
            return a0, x[1]

        name = f"{rec.name}|a={a0.a.real:.4g}"
    return pullback_admissible(rec, member, sub, name=name)


# ----------------------------------------------------------- quotients --

def circle_distance(s, t):
    d = abs(float(s) - float(t)) % 1.0
    return min(d, 1.0 - d)


def _scalar_distance(x, y):
    return abs(float(np.asarray(x).ravel()[0]) - float(np.asarray(y).ravel()[0]))


def circle_quotient_record():
    """``R -> S^1 = R/Z`` with the two branch sections on (0.05, 0.95) and its shift."""
    def oplus(x):
        return float(x) % 1.0

    secs = (LocalSection(lambda y: 0.05 < y < 0.95, lambda y: float(y), "branch0"),
            LocalSection(lambda y: y < 0.45 or y > 0.55,
                         lambda y: float(y) if y < 0.5 else float(y) - 1.0, "branch1"))
    return ImprintingRecord("R->S1", oplus, secs, lambda rng: float(rng.uniform(-3, 3)),
                            _scalar_distance, circle_distance)


def antipodal_record():
    """``S^1 -> S^1/(t ~ t + 1/2)`` realized as ``t -> 2t mod 1``."""
    def oplus(t):
        return (2.0 * float(t)) % 1.0

    def h1(z):
        zz = z if z < 0.5 else z - 1.0
        return (zz / 2.0) % 1.0

    secs = (LocalSection(lambda z: 0.05 < z < 0.95, lambda z: z / 2.0, "half0"),
            LocalSection(lambda z: z < 0.45 or z > 0.55, h1, "half1"))
    return ImprintingRecord("S1->S1/pm", oplus, secs, lambda rng: float(rng.uniform()),
                            circle_distance, circle_distance)


def even_modes(y):
    """Keep the even angular Fourier modes of a glued object."""
    def proj(a):
        c = np.fft.rfft(a, axis=1)
        c[:, 1::2] = 0.0
        return np.fft.irfft(c, n=a.shape[1], axis=1)

    if isinstance(y, EPair):
        g = GridConfig(y.n_theta, max(y.plus.h, y.minus.h),
                       max(8.0, (max(y.plus.n_s, y.minus.n_s) - 1) * y.plus.h), y.N)
        return make_pair(y.c, proj(y.plus.r), proj(y.minus.r), g, h=(y.plus.h, y.minus.h),
                         check_decay=False)
    return GluedFunction(y.param, proj(y.values), y.h)


def even_mode_record(base):
    """Quotient of the glued space onto even angular modes; section = inclusion."""
    return ImprintingRecord(
        "even_modes", even_modes, (LocalSection(lambda y: True, lambda y: y, "incl"),),
        lambda rng: base.oplus(base.sample_x(rng)), gluing_y_distance, gluing_y_distance)


# ---------------------------------------------------- corner patterns --

def corner_circle_record():
    """``V x R -> V x S^1`` with ``V = [0, inf)``; target ``P(v, y) = v``.

    ``rho_bar((v, x), v') = (v', x)``; degeneracy counts ``v = 0``.
    """
    def sample_x(rng):
        v = 0.0 if rng.uniform() < 0.3 else float(rng.exponential())
        return np.array([v, rng.uniform(-3, 3)])

    def oplus(x):
        return np.array([x[0], x[1] % 1.0])

    def dist_y(p, q):
        return max(abs(p[0] - q[0]), circle_distance(p[1], q[1]))

    secs = (LocalSection(lambda y: 0.05 < y[1] < 0.95, lambda y: np.array([y[0], y[1]]), "b0"),
            LocalSection(lambda y: y[1] < 0.45 or y[1] > 0.55,
                         lambda y: np.array([y[0], y[1] if y[1] < 0.5 else y[1] - 1.0]), "b1"))
    def sample_z(rng):
        return 0.0 if rng.uniform() < 0.3 else float(rng.exponential())

    def deg(v):
        return int(float(v) <= EPS0)

    sub = SubmersionData(lambda y: float(y[0]), lambda x, z: np.array([z, x[1]]), sample_z,
                         lambda a, b: abs(a - b), deg)
    return ImprintingRecord("VxR->VxS1", oplus, secs, sample_x, _vec_dist, dist_y,
                            {}, sub, lambda x: deg(x[0]))


def _vec_dist(p, q):
    return float(np.max(np.abs(np.asarray(p) - np.asarray(q))))


__all__ = [
    "aligned_modulus", "gluing_x_distance", "gluing_y_distance", "collar_adjuster",
    "gluing_record", "real_slice_pullback", "circle_distance", "circle_quotient_record",
    "antipodal_record", "even_modes", "even_mode_record", "corner_circle_record",
]
