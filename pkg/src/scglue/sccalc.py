"""Numerical sc-differentiability checks.

Maps act on flat numpy vectors.  A ``Scale`` supplies the level norms of the
source and target; finite-dimensional spaces carry the constant scale (every
level norm is the Euclidean norm).

Everything here produces consistency evidence from finite samples.  Nothing
proves smoothness.
"""
from dataclasses import dataclass, field

import numpy as np

from .scalespace import angular_derivative, fractional_rotate

DEFAULT_STEPS = tuple(2.0 ** -k for k in range(3, 13))
SC1_SCALES = tuple(2.0 ** -k for k in range(1, 13))
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Scale:
    """Level norms ``norm(x, m)`` of a (discretized) sc-Banach space."""

    norm: object
    name: str = "euclidean"

    def __call__(self, x, m=0):
        return float(self.norm(np.asarray(x, dtype=float), m))


EUCLIDEAN = Scale(lambda x, m: np.linalg.norm(x), "euclidean")


@dataclass(frozen=True)
class ScMap:
    """A map between scale spaces; ``derivative(x, h)`` is optional."""

    eval: object
    source: Scale = EUCLIDEAN
    target: Scale = EUCLIDEAN
    domain: object = None
    derivative: object = None
    name: str = "f"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.domain is not None and not self.domain(x):
            raise ValueError(f"{self.name}: point outside the domain")
        return np.asarray(self.eval(x), dtype=float)


def compose(g, f, name=None):
    """``g o f``; the analytic derivative is the chain rule when both have one."""
    deriv = None
    if f.derivative is not None and g.derivative is not None:
        deriv = lambda x, h: g.derivative(f(x), f.derivative(x, h))  # noqa: E731
    return ScMap(lambda x: g(f(x)), f.source, g.target, f.domain, deriv,
                 name or f"{g.name}o{f.name}")


def identity_map(scale=EUCLIDEAN):
    return ScMap(lambda x: x, scale, scale, derivative=lambda x, h: np.asarray(h, dtype=float),
                 name="id")


# ------------------------------------------------------ directional FD --

@dataclass
class FDResult:
    estimate: np.ndarray
    error: float
    order: float
    steps: tuple
    converged: bool
    note: str = ""


def fd_derivative(f, x, h, steps=DEFAULT_STEPS, richardson=2):
    """Richardson-extrapolated central difference of ``f`` at ``x`` along ``h``.

    ``order`` is the empirical convergence order of the raw central
    differences (about 2 for smooth maps), read from ratios of successive
    differences that sit above the round-off floor.  When every difference is
    below the floor the quotient is exact and ``order`` is ``inf``.  An order
    below 0.5 flags the absence of a classical directional derivative.
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    steps = tuple(sorted(steps, reverse=True))
    quots, noise = [], []
    for eps in steps:
        fp, fm = f(x + eps * h), f(x - eps * h)
        quots.append((fp - fm) / (2 * eps))
        scale = max(float(np.max(np.abs(fp), initial=0.0)), float(np.max(np.abs(fm), initial=0.0)))
        noise.append(64 * _EPS * max(scale, 1e-300) / eps)
    diffs = [float(np.max(np.abs(a - b), initial=0.0)) for a, b in zip(quots, quots[1:])]
    logs = []
    for i in range(len(diffs) - 1):
        if diffs[i] > noise[i + 1] and diffs[i + 1] > noise[i + 2]:
            logs.append(np.log(diffs[i] / diffs[i + 1]) / np.log(steps[i] / steps[i + 1]))
    if logs:
        order = float(np.median(logs))
    elif max(diffs, default=0.0) <= max(noise):
        order = float("inf")
    else:
        order = 0.0
    factor = 2.0 ** richardson
    ratio = (steps[0] / steps[1]) ** richardson if len(steps) > 1 else factor
    rich = [(ratio * b - a) / (ratio - 1) for a, b in zip(quots, quots[1:])]
    if len(rich) > 1:
        errs = [float(np.max(np.abs(a - b), initial=0.0)) + noise[i + 1]
                for i, (a, b) in enumerate(zip(rich, rich[1:]))]
        best = int(np.argmin(errs))
        estimate, error = rich[best], errs[best]
    else:
        estimate, error = quots[-1], noise[-1]
    converged = order >= 0.5
    note = "" if converged else "no classical directional derivative"
    return FDResult(estimate, error, order, steps, converged, note)


def directional(f, x, h, steps=DEFAULT_STEPS):
    """``Df(x) h`` from the analytic derivative when present, else by FD."""
    if f.derivative is not None:
        return np.asarray(f.derivative(np.asarray(x, float), np.asarray(h, float)), dtype=float)
    return fd_derivative(f, x, h, steps).estimate


def tangent_map(f, x, h, steps=DEFAULT_STEPS):
    """``Tf(x, h) = (f(x), Df(x) h)``."""
    return f(x), directional(f, x, h, steps)


# ------------------------------------------------------------ sc1 ratio --

@dataclass
class Sc1Report:
    op: str
    scales: list
    ratios: list
    slope: float
    residual: float
    verdict: bool
    truncated: bool = False
    note: str = ""
    samples: int = field(default=0)

    def to_dict(self):
        return {"op": self.op, "samples": self.samples, "ratios": list(self.ratios),
                "slope": self.slope, "verdict": self.verdict}


def sc1_ratio(f, x, h, scales=SC1_SCALES, Dfh=None, window=6, zero_tol=1e-12):
    """Remainder ratios ``|f(x+eh) - f(x) - e Df(x)h|_0 / |eh|_1`` for shrinking ``e``.

    The verdict is positive when the log-log slope over the last ``window``
    points is at least 0.5 with residual at most 0.2, or when every ratio is
    at round-off level (zero remainder).  Points where ``x + e h`` leaves the
    domain truncate the sequence.
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    fx = f(x)
    Dfh = directional(f, x, h) if Dfh is None else np.asarray(Dfh, dtype=float)
    h1 = f.source(h, 1)
    used, ratios, truncated = [], [], False
    for e in scales:
        xe = x + e * h
        if f.domain is not None and not f.domain(xe):
            truncated = True
            continue
        rem = f(xe) - fx - e * Dfh
        ratios.append(f.target(rem, 0) / (e * h1))
        used.append(e)
    ratio_scale = max(1.0, f.target(fx, 0)) / max(h1, 1e-300)
    if len(ratios) >= 2 and max(ratios) <= zero_tol * ratio_scale:
        return Sc1Report(f.name, used, ratios, float("inf"), 0.0, True, truncated,
                         "zero remainder", len(ratios))
    tail_e = np.log(np.asarray(used[-window:]))
    tail_r = np.asarray(ratios[-window:])
    if len(tail_r) < 3 or np.any(tail_r <= 0):
        return Sc1Report(f.name, used, ratios, float("nan"), float("nan"), False, truncated,
                         "too few usable ratios", len(ratios))
    coef, res, *_ = np.polyfit(tail_e, np.log(tail_r), 1, full=True)
    slope = float(coef[0])
    resid = float(np.sqrt(res[0] / len(tail_r))) if len(res) else 0.0
    verdict = slope >= 0.5 and resid <= 0.2
    return Sc1Report(f.name, used, ratios, slope, resid, verdict, truncated, "", len(ratios))


# ----------------------------------------------- Frechet obstruction --

def frechet_second_difference(u, shifts):
    """``max_t |u(t+h) + u(t-h) - 2u(t)| / |h|`` for each shift ``h``.

    ``u`` is a grid function on S^1 (``n`` samples of ``t = j/n``); every
    shift must be a multiple of ``1/n`` so the shifted grids are exact
    permutations.  A ratio bounded below as ``h -> 0`` certifies that the
    shift map is not Frechet differentiable at ``u`` in C^0.
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    out = []
    for h in shifts:
        k = h * n
        if abs(k - round(k)) > 1e-9 or round(k) == 0:
            raise ValueError(f"shift {h} is not a non-zero multiple of 1/{n}")
        k = int(round(k))
        second = np.roll(u, -k, axis=0) + np.roll(u, k, axis=0) - 2 * u
        out.append(float(np.max(np.abs(second))) / abs(h))
    return out


def triangle_wave(t, slope=4.0):
    """Period-1 tent with the given slope: value 1 at t=0, minimum at t=1/2."""
    t = np.asarray(t, dtype=float) % 1.0
    return 1.0 - slope * np.minimum(t, 1.0 - t)


# ------------------------------------------- shift map on C^k(S^1) --

def ck_scale(n, base=0):
    """C^(base+m) norms of ``(c, u)`` with ``u`` sampled on ``n`` points of S^1.

    ``|x|_m = |c| + sum_{j <= base+m} max |u^(j)|``, derivatives spectral.
    """
    def norm(x, m):
        c, u = x[:-n], x[-n:]
        total = float(np.sum(np.abs(c)))
        for j in range(base + m + 1):
            total += float(np.max(np.abs(angular_derivative(u, j) if j else u)))
        return total
    return Scale(norm, f"C^{base}(S^1)")


def sup_scale(n, base=0):
    """C^(base+m) norms of a bare grid function on S^1."""
    def norm(x, m):
        return sum(float(np.max(np.abs(angular_derivative(x, j) if j else x)))
                   for j in range(base + m + 1))
    return Scale(norm, f"C^{base}(S^1)")


def shift_map(n, base=0):
    """``Phi(c, u)(t) = u(t + c)`` on ``R x C^base(S^1)``, with its derivative."""
    def ev(x):
        return fractional_rotate(x[1:], -x[0])

    def deriv(x, h):
        du = angular_derivative(x[1:], 1)
        return fractional_rotate(du * h[0] + h[1:], -x[0])

    return ScMap(ev, ck_scale(n, base), sup_scale(n, base), derivative=deriv, name="shift")


# ---------------------------------------------------------- chain rule --

@dataclass
class ChainReport:
    max_defect: float
    worst_sample: int
    defects: list


def chain_rule_defect(f, g, samples, steps_outer=DEFAULT_STEPS, steps_inner=None, relative=False):
    """Max over samples of ``|T(g o f)(x, h) - (Tg o Tf)(x, h)|_0``.

    Both sides are estimated by FD with independent step schedules (the
    inner one shifted by half a dyadic step).  With ``relative=True`` the
    defect is divided by ``max(1, |D(g o f)(x) h|_0)``.
    """
    steps_inner = tuple(1.5 * e for e in steps_outer) if steps_inner is None else steps_inner
    gf = ScMap(lambda x: g(f(x)), f.source, g.target, f.domain, name=f"{g.name}o{f.name}")
    defects = []
    for x, h in samples:
        x = np.asarray(x, dtype=float)
        lhs = fd_derivative(gf, x, h, steps_outer).estimate
        dfh = fd_derivative(f, x, h, steps_inner).estimate
        rhs = fd_derivative(g, f(x), dfh, steps_inner).estimate
        base = g.target(g(f(x)) - gf(x), 0)
        d = g.target(lhs - rhs, 0) + base
        if relative:
            d /= max(1.0, g.target(lhs, 0))
        defects.append(float(d))
    worst = int(np.argmax(defects)) if defects else -1
    return ChainReport(max(defects, default=0.0), worst, defects)


__all__ = [
    "Scale", "EUCLIDEAN", "ScMap", "compose", "identity_map", "FDResult", "fd_derivative",
    "directional", "tangent_map", "Sc1Report", "sc1_ratio", "frechet_second_difference",
    "triangle_wave", "ck_scale", "sup_scale", "shift_map", "ChainReport", "chain_rule_defect",
    "DEFAULT_STEPS", "SC1_SCALES",
]
