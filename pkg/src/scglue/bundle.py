"""Strong-bundle filtrations, section classes and SB imprintings.

The bi-filtration ``(E <| F)_{m,k} = E_m x F_k`` (``0 <= k <= m+1``) is
probed on a Fourier-Sobolev scale over S^1: an element is sampled on ``2K``
points and ``|u|_m^2 = sum_k (1+k)^(2m) |u_k|^2``.  Membership of a fixed
element in a level is decided by a resolution sweep: the norm stays bounded
(small growth exponent in K) exactly when the element lies in that level.
Test inputs are "sharp" at a level: in it, but not in the next one.

SB imprintings reuse ``imprint`` records whose points are ``(base, fiber)``
pairs, plus accessors for the fiber slot and generic linear operations.
"""
from dataclasses import dataclass

import numpy as np

from .gluing import GluedFunction, as_param, preglue, retract, section_H
from .imprint import (
    ImprintingRecord, LocalSection, Report, Restriction, SubmersionWitness, disjoint_union_imprinting,
    plumb, product_imprinting, submersion_verify, verify_imprinting,
)
from .quadrant import rotating_projector
from .records import gluing_x_distance, gluing_y_distance
from .scalespace import DEFAULT_GRID, EPair, band_limited_pair, pair_combination, pair_difference_sup

RESOLUTIONS = (64, 128, 256, 512, 1024)
SHARP_MARGIN = 0.25
GROWTH_TOL = 0.25


# ------------------------------------------------------ Fourier scale --

def sobolev_norm(x, m):
    """``(sum_k w_k (1+k)^(2m) |x_k|^2)^(1/2)`` from samples of ``x`` on S^1."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    c = np.fft.rfft(x) / n
    mult = np.full(c.size, 2.0)
    mult[0] = 1.0
    if n % 2 == 0:
        mult[-1] = 1.0
    k = np.arange(c.size)
    return float(np.sqrt(np.sum(mult * (1.0 + k) ** (2 * m) * np.abs(c) ** 2)))


def sharp_element(K, level, seed=0, margin=SHARP_MARGIN):
    """Samples on ``2K`` points of ``sum_k (1+k)^(-level-1/2-margin) cos(2 pi k t + phase_k)``.

    The phases depend on ``seed`` only, so the same element is resolved more
    finely as ``K`` grows.  It lies in level ``level`` and not in ``level+1``.
    """
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0, 2 * np.pi, max(RESOLUTIONS) + 1)
    n = 2 * K
    coef = np.zeros(K + 1, dtype=complex)
    k = np.arange(K)
    coef[:K] = (1.0 + k) ** (-level - 0.5 - margin) * np.exp(1j * phases[:K]) * n / 2
    coef[0] = n * np.cos(phases[0])
    return np.fft.irfft(coef, n=n)


def square_wave(n):
    t = np.arange(n) / n
    return np.where(t < 0.5, 1.0, -1.0)


def growth_exponent(values, resolutions):
    """Least-squares slope of ``log value`` against ``log K``."""
    v = np.log(np.maximum(np.asarray(values, dtype=float), 1e-300))
    k = np.log(np.asarray(resolutions, dtype=float))
    return float(np.polyfit(k, v, 1)[0])


@dataclass(frozen=True)
class BiFilteredSpace:
    """``E <| F`` over the Fourier scale; fiber norms may use an offset scale."""

    max_level: int = 3
    fiber_shift: int = 0

    def admissible(self):
        return [(m, k) for m in range(self.max_level + 1) for k in range(m + 2)]

    def norm(self, u, h, m, k):
        if not 0 <= k <= m + 1:
            raise ValueError(f"bi-level ({m}, {k}) is not admissible")
        return sobolev_norm(u, m) + sobolev_norm(h, k + self.fiber_shift)

    def diagonal(self, m):
        return [(m, m), (m, m + 1)]


@dataclass(frozen=True)
class SbMap:
    """``Phi(u, h) = (f(u), phi(u) h)`` with ``phi(u)`` linear in ``h``."""

    f: object
    phi: object
    name: str = "Phi"

    def __call__(self, u, h):
        return self.f(u), self.phi(u, h)


def identity_sb():
    return SbMap(lambda u: u, lambda u, h: h, "identity")


def smoothing_sb():
    """Fiber multiplier ``h_k -> h_k / (1+k)``: an sc+ operator gaining one level."""
    def phi(u, h):
        n = h.shape[0]
        c = np.fft.rfft(h)
        return np.fft.irfft(c / (1.0 + np.arange(c.size)), n=n)
    return SbMap(lambda u: u, phi, "smoothing")


def rough_multiplier_sb():
    """Fiber map ``h -> g h`` with ``g`` a square wave (level 0 only)."""
    return SbMap(lambda u: u, lambda u, h: square_wave(h.shape[0]) * h, "square_wave_multiplier")


def bilevel_check(Phi, space=None, resolutions=RESOLUTIONS, gain=0, growth_tol=GROWTH_TOL,
                  n_linearity=1000, seed=0):
    """Bi-level preservation table of ``Phi`` by resolution sweep.

    For each admissible ``(m, k)`` the input is ``(u, h)`` sharp at ``(m, k)``
    and the output is measured at ``(m, k + gain)``.  ``gain = 1`` probes the
    sc+ property.  Returns ``(report, rows)`` with rows
    ``(m, k, preserved, growth)``; fiber linearity is checked on random
    triples at the coarsest resolution.
    """
    space = BiFilteredSpace() if space is None else space
    rows = []
    for m, k in space.admissible():
        out = []
        for K in resolutions:
            u = sharp_element(K, m, seed)
            h = sharp_element(K, k, seed + 1)
            fu, ph = Phi(u, h)
            out.append(sobolev_norm(fu, m) + sobolev_norm(ph, k + gain))
        g = growth_exponent(out, resolutions)
        rows.append((m, k, bool(g <= growth_tol), g))
    rep = Report(f"bilevel:{Phi.name}")
    diag = [r for r in rows if r[1] in (r[0], r[0] + 1)]
    rep.add("diagonal_preserved", float(sum(not r[2] for r in diag)), 0.0, len(diag),
            "strong bundle diagonal filtrations")
    rep.add("double_preserved", float(sum(not r[2] for r in rows)), 0.0, len(rows),
            "strong bundle double filtration")
    rng = np.random.default_rng(seed)
    K = resolutions[0]
    worst = 0.0
    u = sharp_element(K, 1, seed)
    for _ in range(n_linearity):
        h1, h2 = rng.normal(size=(2, 2 * K))
        a = rng.normal()
        lhs = Phi.phi(u, a * h1 + h2)
        rhs = a * Phi.phi(u, h1) + Phi.phi(u, h2)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs)))))
    rep.add("fiber_linearity", worst, 1e-12, n_linearity, "strong bundle map")
    return rep, rows


def diagonal_implies_double(rows):
    """True when every admissible row passes whenever all diagonal rows pass."""
    diag_ok = all(p for m, k, p, _ in rows if k in (m, m + 1))
    return (not diag_ok) or all(p for _, _, p, _ in rows)


# ----------------------------------------------------------- sections --

def classify_section(s, max_level=3, resolutions=RESOLUTIONS, growth_tol=GROWTH_TOL, seed=0,
                     base=None):
    """Classify a section of ``E <| F`` as ``sc_plus``, ``sc`` or ``neither``.

    ``s(u, K)`` returns fiber samples on ``2K`` points; ``base(K, m)`` gives
    the base point sharp at level ``m`` (default: ``sharp_element``).  A level
    is ``sc`` when the fiber stays bounded at level ``m`` and ``sc+`` when it
    stays bounded at ``m + 1``.
    """
    base = (lambda K, m: sharp_element(K, m, seed)) if base is None else base
    table = []
    for m in range(max_level + 1):
        same, up = [], []
        for K in resolutions:
            h = s(base(K, m), K)
            same.append(sobolev_norm(h, m) + 1e-300)
            up.append(sobolev_norm(h, m + 1) + 1e-300)
        g0, g1 = growth_exponent(same, resolutions), growth_exponent(up, resolutions)
        table.append({"m": m, "sc": g0 <= growth_tol, "sc_plus": g1 <= growth_tol,
                      "growth_m": g0, "growth_m1": g1})
    if all(r["sc_plus"] for r in table):
        verdict = "sc_plus"
    elif all(r["sc"] for r in table):
        verdict = "sc"
    else:
        verdict = "neither"
    return verdict, table


def zero_section(u, K):
    return np.zeros(2 * K)


def smooth_constant_section(u, K):
    t = np.arange(2 * K) / (2 * K)
    return np.cos(2 * np.pi * t) + 0.5 * np.sin(6 * np.pi * t)


def diagonal_section(u, K):
    """``s(u) = u`` viewed in the fiber: lands in level m exactly when u does."""
    return np.array(u, dtype=float)


def sharp_constant_section(level, seed=7):
    def s(u, K):
        return sharp_element(K, level, seed)
    return s


# ---------------------------------------------------- generic linear --

def vlin(alpha, a, b):
    """``alpha * a + b`` for arrays, pairs, glued maps and nested tuples."""
    if isinstance(a, tuple):
        return tuple(vlin(alpha, x, y) for x, y in zip(a, b))
    if isinstance(a, EPair):
        return pair_combination([alpha, 1.0], [a, b])
    if isinstance(a, GluedFunction):
        if a.param != b.param or a.values.shape != b.values.shape:
            raise ValueError("glued fibers over different parameters")
        return GluedFunction(a.param, alpha * a.values + b.values, a.h)
    return alpha * np.asarray(a, dtype=float) + np.asarray(b, dtype=float)


def vdist(a, b):
    if isinstance(a, tuple):
        return max((vdist(x, y) for x, y in zip(a, b)), default=0.0)
    if isinstance(a, EPair):
        return pair_difference_sup(a, b)
    if isinstance(a, GluedFunction):
        return float(np.max(np.abs(a.values - b.values)))
    return float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float)), initial=0.0))


# --------------------------------------------------- SB retractions --

def sb_retraction_check(R, samples, distance=None, tol=1e-10, name="R"):
    """Check an SB retraction ``R(x, h) = (r(x), phi_x h)``.

    Idempotence of ``R`` and of the base retraction ``r``, covering
    ``pr o R = r o pr``, and fiber linearity on pairs of samples sharing a
    base.  Returns ``(report, model)`` with the sampled ``K`` (R-image),
    ``O`` (r-image) and the projection between them.
    """
    distance = vdist if distance is None else distance
    rep = Report(f"sb_retraction:{name}")
    idem = base_idem = cover = lin = 0.0
    K, O = [], []
    for i, (x, h) in enumerate(samples):
        h_alt = samples[(i + 1) % len(samples)][1]
        y, k = R(x, h)
        y2, k2 = R(y, k)
        idem = max(idem, distance(y2, y), distance(k2, k))
        y3, _ = R(y, h)
        base_idem = max(base_idem, distance(y3, y))
        yz, _ = R(x, vlin(-1.0, h, h))
        cover = max(cover, distance(yz, y))
        _, k_sum = R(x, vlin(2.0, h, h_alt))
        _, k_alt = R(x, h_alt)
        lin = max(lin, distance(k_sum, vlin(2.0, k, k_alt)))
        K.append((y, k))
        O.append(y)
    n = len(samples)
    rep.add("R_idempotent", idem, tol, n, "strong bundle retraction")
    rep.add("base_idempotent", base_idem, tol, n, "strong bundle retraction")
    rep.add("covers_base_retraction", cover, tol, n, "strong bundle retraction")
    rep.add("fiber_linearity", lin, tol, n, "strong bundle retraction")
    model = {"K": K, "O": O, "projection": lambda yk: yk[0]}
    return rep, model


def splicing_bundle_retraction(projector):
    """``R((a, e), h) = ((a, pi_a e), pi_a h)`` for a family of matrices ``pi_a``."""
    def R(x, h):
        a, e = x
        P = projector(a)
        return (np.asarray(a, dtype=float), P @ e), P @ h
    return R


def gluing_bundle_retraction():
    """``R((a, u), h) = (r(a, u), phi_a h)`` with ``phi_a`` the linear part of ``r``."""
    def R(x, h):
        a, u = x
        return retract(a, u), retract(a, h)[1]
    return R


# ------------------------------------------------------------ VBL sets --

@dataclass(frozen=True)
class VblSet:
    """A surjection ``pr: total -> base`` with vector-space fibers.

    ``sample(rng)`` returns a total point; ``sample_over(rng, y)`` a random
    fiber element over the base point ``y``; ``fiber(total)`` reads the
    vector part and ``make(y, v)`` builds a total point.
    """

    pr: object
    sample: object
    sample_over: object
    fiber: object
    make: object
    name: str = "vbl"


def vbl_axioms_check(V, n=100, rng=None, tol=1e-12):
    rng = np.random.default_rng(4) if rng is None else rng
    worst = 0.0
    surj = 0.0
    for _ in range(n):
        t = V.sample(rng)
        y = V.pr(t)
        a, b, c = (V.sample_over(rng, y) for _ in range(3))
        al, be = rng.normal(size=2)
        worst = max(worst,
                    vdist(vlin(1.0, vlin(1.0, a, b), c), vlin(1.0, a, vlin(1.0, b, c))),
                    vdist(vlin(al, vlin(1.0, a, b), vlin(0.0, a, a)),
                          vlin(al, a, vlin(al, b, vlin(0.0, a, a)))),
                    vdist(vlin(al + be, a, vlin(0.0, a, a)), vlin(al, a, vlin(be, a, vlin(0.0, a, a)))))
        surj = max(surj, vdist(V.pr(V.make(y, a)), y))
    rep = Report(f"vbl:{V.name}")
    rep.add("vector_space_axioms", worst, tol, n, "Definition: vector-bundle-like set")
    rep.add("projection_consistent", surj, tol, n, "Definition: vector-bundle-like set")
    return rep


@dataclass(frozen=True)
class VblFiberProduct:
    """``Y x_B Y'`` for fiberwise linear ``Phi: Y -> B``, ``Phi': Y' -> B``."""

    left: VblSet
    right: VblSet
    Phi: object
    Phi_r: object
    tol: float = 1e-9

    def member(self, t, t2):
        b, b2 = self.Phi(t), self.Phi_r(t2)
        return vdist(b, b2) <= self.tol

    def margin(self, t, t2):
        return vdist(self.Phi(t), self.Phi_r(t2))


def vbl_fiber_product(V, V2, Phi, Phi_r, tol=1e-9):
    return VblFiberProduct(V, V2, Phi, Phi_r, tol)


def linear_fiber_dimension(A, B, tol=1e-10):
    """Dimension of ``{(h, h') : A h = B h'}`` for matrices A, B (exact rank count)."""
    M = np.hstack([np.atleast_2d(A), -np.atleast_2d(B)])
    rank = np.linalg.matrix_rank(M, tol=tol)
    return M.shape[1] - rank


# --------------------------------------------------------- SB records --

@dataclass(frozen=True)
class SbImprintingRecord:
    """An imprinting of total spaces, fiberwise linear over a base imprinting.

    Points are nested tuples; ``get_x``/``set_x`` (and ``get_y``/``set_y``)
    read and replace the fiber part, ``sample_fiber(rng, X)`` draws a new
    admissible fiber over the base of ``X``.  ``base_distance`` compares base
    points (default ``vdist``).
    """

    record: ImprintingRecord
    get_x: object
    set_x: object
    get_y: object
    set_y: object
    sample_fiber: object
    base_x: object = None
    with_base_x: object = None
    base_distance: object = None

    @property
    def name(self):
        return self.record.name


def sb_imprint_verify(sb, n_samples=10, n_linearity=50, rng=None, tol=1e-10):
    """Base imprinting checks on the total spaces plus fiber linearity of ``oplus`` and ``H``."""
    rng = np.random.default_rng(5) if rng is None else rng
    rec = sb.record
    rep = Report(f"sb_imprinting:{rec.name}")
    rep.extend(verify_imprinting(rec, n_samples, rng, check_sc1=False), "total.")
    lin_o = lin_h = 0.0
    for _ in range(n_linearity):
        X = rec.sample_x(rng)
        f1 = sb.get_x(X)
        f2 = sb.sample_fiber(rng, X)
        al = float(rng.normal())
        X2 = sb.set_x(X, f2)
        Xs = sb.set_x(X, vlin(al, f1, f2))
        o1, o2, os_ = (sb.get_y(rec.oplus(p)) for p in (X, X2, Xs))
        lin_o = max(lin_o, vdist(os_, vlin(al, o1, o2)) / max(1.0, _scale(os_)))
        Y1, Y2 = rec.oplus(X), rec.oplus(X2)
        g1, g2 = sb.get_y(Y1), sb.get_y(Y2)
        Ys = sb.set_y(Y1, vlin(al, g1, g2))
        h1, h2, hs = (sb.get_x(rec.canonical(p)) for p in (Y1, Y2, Ys))
        lin_h = max(lin_h, vdist(hs, vlin(al, h1, h2)) / max(1.0, _scale(hs)))
    rep.add("oplus_fiber_linear", lin_o, tol, n_linearity, "Definition: SB imprinting")
    rep.add("H_fiber_linear", lin_h, tol, n_linearity, "Definition: SB imprinting")
    return rep


def _scale(v):
    return vdist(v, vlin(-1.0, v, v))


def gluing_sb_record(base, grid=None, name=None):
    """``(B x E) <| E -> X <| X``: the gluing applied to base and fiber alike.

    Fibers over ``(a, u)`` are pairs ``h`` glued with the same ``a``;
    restrictions stack base and fiber collars, and the adjusters shift both.
    """
    def oplus(X):
        (a, u), h = X
        return base.oplus((a, u)), preglue(a, h)

    def H(Y):
        v, k = Y
        return base.canonical(v), section_H(k)[1]

    grid = DEFAULT_GRID if grid is None else grid

    def fiber(rng):
        return band_limited_pair(rng, grid, support=15.0)

    def sample_x(rng):
        return base.sample_x(rng), fiber(rng)

    restr = {}
    for label, res in base.restrictions.items():
        def pbar(X, res=res):
            (a, u), h = X
            return np.stack([res.pbar((a, u)), res.pbar((a, h))])

        def adjust(X, target, res=res):
            (a, u), h = X
            a1, u1 = res.adjust((a, u), target[0])
            _, h1 = res.adjust((a, h), target[1])
            return (a1, u1), h1
        restr[label] = Restriction(pbar, adjust)

    def ydist(p, q):
        return max(gluing_y_distance(p[0], q[0]), gluing_y_distance(p[1], q[1]))

    def xdist(p, q):
        return abs(as_param(p[0][0]).a - as_param(q[0][0]).a) + max(
            pair_difference_sup(p[0][1], q[0][1]), pair_difference_sup(p[1], q[1]))

    rec = ImprintingRecord(
        name or f"{base.name}<|", oplus, (LocalSection(lambda Y: True, H, "H<|"),), sample_x,
        xdist, ydist, restr, None, None)
    return SbImprintingRecord(
        rec, lambda X: X[1], lambda X, f: (X[0], f), lambda Y: Y[1], lambda Y, f: (Y[0], f),
        lambda rng, X: fiber(rng), lambda X: X[0], lambda X, x: (x, X[1]), gluing_x_distance)


def splicing_sb_record(k=1, name="splicing<|"):
    """Finite-dimensional SB record from the rotating rank-1 splicing.

    ``X = [0,inf)^k x R^2`` with fiber R^2; ``oplus`` is the SB retraction
    itself, the image is the retract, and ``H`` is the inclusion.
    """
    def R(X):
        (a, e), h = X
        P = rotating_projector(a, k)
        return (np.asarray(a, float), P @ e), P @ h

    def sample_x(rng):
        a = np.where(rng.uniform(size=k) < 0.3, 0.0, rng.uniform(0, 0.25, k))
        return (a, rng.normal(size=2)), rng.normal(size=2)

    def d(p, q):
        return vdist(p, q)

    rec = ImprintingRecord(name, R, (LocalSection(lambda Y: True, lambda Y: Y, "incl"),),
                           sample_x, d, d)
    return SbImprintingRecord(rec, lambda X: X[1], lambda X, f: (X[0], f), lambda Y: Y[1],
                              lambda Y, f: (Y[0], f), lambda rng, X: rng.normal(size=2),
                              lambda X: X[0], lambda X, x: (x, X[1]))


def sb_product(A, B, name=None):
    rec = product_imprinting(A.record, B.record, name)
    return SbImprintingRecord(
        rec, lambda X: (A.get_x(X[0]), B.get_x(X[1])),
        lambda X, f: (A.set_x(X[0], f[0]), B.set_x(X[1], f[1])),
        lambda Y: (A.get_y(Y[0]), B.get_y(Y[1])),
        lambda Y, f: (A.set_y(Y[0], f[0]), B.set_y(Y[1], f[1])),
        lambda rng, X: (A.sample_fiber(rng, X[0]), B.sample_fiber(rng, X[1])))


def sb_coproduct(A, B, name=None):
    rec = disjoint_union_imprinting(A.record, B.record, name)
    parts = (A, B)
    return SbImprintingRecord(
        rec, lambda X: parts[X[0]].get_x(X[1]), lambda X, f: (X[0], parts[X[0]].set_x(X[1], f)),
        lambda Y: parts[Y[0]].get_y(Y[1]), lambda Y, f: (Y[0], parts[Y[0]].set_y(Y[1], f)),
        lambda rng, X: parts[X[0]].sample_fiber(rng, X[1]))


def rank_zero_sb(base_record):
    """Trivial rank-0 bundle over an imprinting: fibers are empty arrays."""
    def oplus(X):
        return base_record.oplus(X[0]), np.zeros(0)

    rec = ImprintingRecord(
        f"{base_record.name}<|0", oplus,
        tuple(LocalSection((lambda Y, s=s: s.contains(Y[0])), (lambda Y, s=s: (s.H(Y[0]), np.zeros(0))),
                           s.name) for s in base_record.sections),
        lambda rng: (base_record.sample_x(rng), np.zeros(0)),
        lambda p, q: base_record.x_distance(p[0], q[0]),
        lambda p, q: base_record.y_distance(p[0], q[0]))
    return SbImprintingRecord(rec, lambda X: X[1], lambda X, f: (X[0], f), lambda Y: Y[1],
                              lambda Y, f: (Y[0], f), lambda rng, X: np.zeros(0))


def sb_plumb(A, B, i0, i0r, name=None):
    """SB plumbing: the base plumbing on total spaces; fibers must match on the collar too."""
    holder = plumb(A.record, B.record, i0, i0r, name)
    rec = holder.record

    def sample_fiber(rng, X):
        f = (A.sample_fiber(rng, X[0]), B.sample_fiber(rng, X[1]))
        return prod_get(holder.sigma(prod_set(X, f)))

    def prod_get(X):
        return A.get_x(X[0]), B.get_x(X[1])

    def prod_set(X, f):
        return A.set_x(X[0], f[0]), B.set_x(X[1], f[1])

    sb = SbImprintingRecord(
        rec, prod_get, prod_set, lambda Y: (A.get_y(Y[0]), B.get_y(Y[1])),
        lambda Y, f: (A.set_y(Y[0], f[0]), B.set_y(Y[1], f[1])), sample_fiber)
    return sb, holder


def bundle_projection_witness(sb):
    """Fiber-keeping retraction ``rho((x, h), x') = (x', h)`` for ``pr: X <| F -> X``."""
    if sb.base_x is None or sb.with_base_x is None:
        raise ValueError("record does not expose its base slot")
    rec = sb.record
    return SubmersionWitness(sb.base_x, sb.with_base_x, rec.x_distance,
                             sb.base_distance or vdist)


def verify_bundle_projection(sb, n=10, rng=None, tol=1e-12):
    rng = np.random.default_rng(6) if rng is None else rng
    w = bundle_projection_witness(sb)
    xs = [sb.record.sample_x(rng) for _ in range(n)]
    zs = [sb.base_x(sb.record.sample_x(rng)) for _ in range(n)]
    return submersion_verify(w, xs, zs, tol=tol, name=f"pr:{sb.name}")


__all__ = [
    "RESOLUTIONS", "sobolev_norm", "sharp_element", "square_wave", "growth_exponent",
    "BiFilteredSpace", "SbMap", "identity_sb", "smoothing_sb", "rough_multiplier_sb",
    "bilevel_check", "diagonal_implies_double", "classify_section", "zero_section",
    "smooth_constant_section", "diagonal_section", "sharp_constant_section", "vlin", "vdist",
    "sb_retraction_check", "splicing_bundle_retraction", "gluing_bundle_retraction", "VblSet",
    "vbl_axioms_check", "VblFiberProduct", "vbl_fiber_product", "linear_fiber_dimension",
    "SbImprintingRecord", "sb_imprint_verify", "gluing_sb_record", "splicing_sb_record",
    "sb_product", "sb_coproduct", "rank_zero_sb", "sb_plumb", "bundle_projection_witness",
    "verify_bundle_projection",
]
