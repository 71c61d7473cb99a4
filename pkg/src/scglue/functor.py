"""Construction functors: post-composition of gluing elements with maps of R^N.

``X(N)`` is the space of pairs (or glued maps) with values in ``R^N`` and
``X(f) u = f o u``.  Images are finite proxies: every grid value plus the
asymptotic constant.  The extension to an embedded manifold ``M`` uses a
closed-form closest-point retraction ``r`` of a tubular neighborhood ``U``.
"""
from dataclasses import dataclass, field

import numpy as np

from .gluing import GluedFunction
from .imprint import Report
from .quadrant import DomainViolation
from .sccalc import Scale, ScMap, fd_derivative, sc1_ratio
from .scalespace import EPair, GridConfig, band_limited_pair, level_norm, make_pair

_ULP_TOL = 4 * np.finfo(float).eps


class EvaluationError(ArithmeticError):
    """A pushforward produced a non-finite value; ``location`` names the first one."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


# ----------------------------------------------------------- morphisms --

@dataclass(frozen=True)
class Morphism:
    """A smooth map ``R^n_in -> R^n_out`` acting on the last axis."""

    fn: object
    n_in: int
    n_out: int
    name: str = "f"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n_in:
            raise ValueError(f"{self.name}: expected {self.n_in} components, got {x.shape[-1]}")
        return np.asarray(self.fn(x), dtype=float)


def identity_morphism(n):
    return Morphism(lambda x: x, n, n, "id")


def compose_morphisms(g, f):
    if g.n_in != f.n_out:
        raise ValueError(f"cannot compose {g.name} after {f.name}")
    return Morphism(lambda x: g(f(x)), f.n_in, g.n_out, f"{g.name}o{f.name}")


def linear_morphism(A, name="A"):
    A = np.asarray(A, dtype=float)
    return Morphism(lambda x: x @ A.T, A.shape[1], A.shape[0], name)


def random_polynomial_morphism(rng, n_in, n_out, scale=0.3, name="p"):
    """``x -> A x + b + scale * B (x * x)`` with random coefficients."""
    A = rng.normal(size=(n_out, n_in))
    B = rng.normal(size=(n_out, n_in))
    b = rng.normal(size=n_out)
    return Morphism(lambda x: x @ A.T + b + scale * (x * x) @ B.T, n_in, n_out, name)


def far_bump_morphism(f, radius=1.2, direction=None):
    """``g = f + w(|x|) v`` with ``w`` vanishing identically on ``|x| <= radius``."""
    v = np.ones(f.n_out) if direction is None else np.asarray(direction, dtype=float)

    def g(x):
        rho = np.linalg.norm(x, axis=-1)
        w = np.zeros_like(rho)
        out = rho > radius
        w[out] = np.exp(-1.0 / (rho[out] - radius))
        return f(x) + w[..., None] * v

    return Morphism(g, f.n_in, f.n_out, f"{f.name}+bump")


# --------------------------------------------------------- pushforward --

def _full_values(u):
    if isinstance(u, EPair):
        return u.c, u.plus.c + u.plus.r, u.minus.c + u.minus.r
    if isinstance(u, GluedFunction):
        return None, u.values, None
    raise TypeError(f"not a gluing element: {type(u).__name__}")


def _pair_like(u, c, rp, rm):
    """A pair on the axial grids of ``u`` with the given constant and decaying parts."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    h = max(u.plus.h, u.minus.h)
    g = GridConfig(u.n_theta, h, max(8.0, (max(u.plus.n_s, u.minus.n_s) - 1) * h), c.shape[0])
    return make_pair(c, rp, rm, g, h=(u.plus.h, u.minus.h), check_decay=False)


def _checked(f, x, where):
    y = f(x)
    bad = ~np.isfinite(y)
    if np.any(bad):
        loc = tuple(int(i) for i in np.argwhere(bad)[0])
        raise EvaluationError(f"{f.name} is not finite on the {where} at index {loc}", (where, loc))
    return y


def pushforward(f, u):
    """``f_#(u) = f o u``.

    The constant maps to ``f(c)`` and the decaying parts become
    ``f(c + r) - f(c)``.  When ``f`` fixes every sampled value bit for bit
    the element itself is returned, so identities act exactly.
    """
    c, vp, vm = _full_values(u)
    if isinstance(u, GluedFunction):
        w = _checked(f, vp, "glued grid")
        if w.shape == vp.shape and np.array_equal(w, vp):
            return u
        return GluedFunction(u.param, w, u.h)
    fc = _checked(f, c, "constant")
    wp = _checked(f, vp, "plus half")
    wm = _checked(f, vm, "minus half")
    if fc.shape == c.shape and np.array_equal(fc, c) and np.array_equal(wp, vp) \
            and np.array_equal(wm, vm):
        return u
    return _pair_like(u, fc, wp - fc, wm - fc)


@dataclass(frozen=True)
class ImageProxy:
    """Finite stand-in for ``im(u)``: grid values and asymptotic constants."""

    points: np.ndarray

    def contained_in(self, margin_fn):
        """``(ok, margin)`` where ``margin_fn`` is positive inside the open set."""
        m = float(np.min(margin_fn(self.points)))
        return m > 0, m


def image_of(u):
    c, vp, vm = _full_values(u)
    n = vp.shape[-1]
    parts = [vp.reshape(-1, n)]
    if c is not None:
        parts = [c.reshape(1, n), vp.reshape(-1, n), vm.reshape(-1, n)]
    return ImageProxy(np.concatenate(parts))


def ball_margin(center, radius):
    center = np.asarray(center, dtype=float)
    return lambda p: radius - np.linalg.norm(p - center, axis=-1)


def openness_check(u, center, radius, rng, n=20, grid=None):
    """Perturbations below half the margin keep the image proxy inside the ball."""
    ok, m = image_of(u).contained_in(ball_margin(center, radius))
    if not ok:
        return False, m, 0
    worst = np.inf
    for _ in range(n):
        g = grid or GridConfig(u.n_theta, u.plus.h, (u.plus.n_s - 1) * u.plus.h, u.N)
        d = band_limited_pair(rng, g)
        s = 0.49 * m / max(float(np.max(np.abs(image_of(d).points))), 1e-300)
        v = _pair_like(u, u.c + s * d.c, u.plus.r + s * d.plus.r, u.minus.r + s * d.minus.r)
        worst = min(worst, image_of(v).contained_in(ball_margin(center, radius))[1])
    return bool(worst > 0), m, n


@dataclass(frozen=True)
class ConstructionFunctor:
    """The gluing construction functor ``N -> X(N)`` with ``X(f) = f_#``."""

    name: str = "gluing"

    def space(self, N):
        return f"X(R^{N})"

    def push(self, f, u):
        return pushforward(f, u)

    def image(self, u):
        return image_of(u)


GLUING_FUNCTOR = ConstructionFunctor()


@dataclass(frozen=True)
class Tagged:
    """An element of ``X(N)`` carried with the name of its finite set ``N``."""

    label: str
    element: object


def identify(u, label):
    """The natural identification ``X(N) -> X(R^N)`` is a relabeling."""
    return Tagged(label, u)


def unidentify(t):
    return t.element


def element_distance(u, v):
    _, up, um = _full_values(u)
    _, vp, vm = _full_values(v)
    if up.shape != vp.shape:
        return np.inf
    d = float(np.max(np.abs(up - vp)))
    if um is not None:
        d = max(d, float(np.max(np.abs(um - vm))), float(np.max(np.abs(u.c - v.c))))
    return d


def verify_functor_axioms(F, elements, pairs, local_pairs=(), tol=1e-14):
    """Functoriality and the image/locality axioms on a sample corpus.

    ``pairs`` are composable ``(f, g)``; ``local_pairs`` are ``(f, g, u)``
    with ``f = g`` on ``image_of(u)``, which must give equal pushforwards.
    """
    rep = Report(f"functor:{F.name}")
    idd = comp = img = 0.0
    n_comp = 0
    for u in elements:
        n = u.N
        pu = F.push(identity_morphism(n), u)
        idd = max(idd, 0.0 if pu is u else element_distance(pu, u) + 1.0)
        for f, g in pairs:
            if f.n_in != n:
                continue
            lhs = F.push(compose_morphisms(g, f), u)
            rhs = F.push(g, F.push(f, u))
            comp = max(comp, element_distance(lhs, rhs) / max(1.0, _sup(lhs)))
            img = max(img, float(np.max(np.abs(F.image(F.push(f, u)).points - f(F.image(u).points)))))
            n_comp += 1
    rep.add("identity_exact", idd, 0.0, len(elements), "Definition: construction functor")
    rep.add("composition", comp, tol, n_comp, "Definition: construction functor")
    rep.add("image_equivariance", img, tol, n_comp, "Definition: construction functor (2)")
    loc = pre = 0.0
    for f, g, u in local_pairs:
        pts = F.image(u).points
        pre = max(pre, float(np.max(np.abs(f(pts) - g(pts)))))
        loc = max(loc, element_distance(F.push(f, u), F.push(g, u)))
    rep.add("locality_premise", pre, 0.0, len(local_pairs), "Definition: construction functor (3)")
    rep.add("locality_exact", loc, 0.0, len(local_pairs), "Definition: construction functor (3)")
    return rep


def _sup(u):
    return float(np.max(np.abs(image_of(u).points)))


def pushforward_sc1(f, u, du, weights=None):
    """sc1 spot check of ``f_#`` near ``u`` along ``du`` on the flat pair vector."""
    n_p = u.plus.r.size

    def unflat(x):
        c = x[:u.N]
        rp = x[u.N:u.N + n_p].reshape(u.plus.r.shape)
        rm = x[u.N + n_p:].reshape(u.minus.r.shape)
        return _pair_like(u, c, rp, rm)

    def push_flat(x):
        return pushforward(f, unflat(x)).flat()

    src = Scale(lambda x, m: level_norm(unflat(x), m, weights), "E")
    tgt_shape = pushforward(f, u)
    n_t = tgt_shape.plus.r.size

    def tnorm(x, m):
        c = x[:f.n_out]
        rp = x[f.n_out:f.n_out + n_t].reshape(tgt_shape.plus.r.shape)
        rm = x[f.n_out + n_t:].reshape(tgt_shape.minus.r.shape)
        return level_norm(_pair_like(u, c, rp, rm), m, weights)

    F = ScMap(push_flat, src, Scale(tnorm, "E'"), name=f"{f.name}#")
    x, h = u.flat(), du.flat()
    fd = fd_derivative(F, x, h)
    return sc1_ratio(F, x, h, Dfh=fd.estimate)


# ------------------------------------------------------------ manifolds --

@dataclass(frozen=True)
class ManifoldEmbedding:
    """A closed-form embedding ``phi: M -> R^N`` with a tubular retraction.

    ``margin(x) > 0`` exactly on the tubular neighborhood ``U``;
    ``retract`` is the closest-point map and fixes points already on
    ``phi(M)`` (within a few ulps) bit for bit.
    """

    tag: str
    N: int
    phi: object
    margin: object
    closest: object
    on_manifold: object
    sample_param: object = field(default=None, repr=False)

    def in_tube(self, x):
        return self.margin(np.asarray(x, dtype=float)) > 0

    def retract(self, x):
        x = np.asarray(x, dtype=float)
        y = self.closest(x)
        keep = self.on_manifold(x)
        return np.where(keep[..., None], x, y)


def _unit(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def sphere_embedding():
    return ManifoldEmbedding(
        "sphere", 3,
        lambda p: np.stack([np.cos(p[..., 0]) * np.sin(p[..., 1]), np.sin(p[..., 0]) * np.sin(p[..., 1]),
                            np.cos(p[..., 1])], axis=-1),
        lambda x: 0.5 - np.abs(np.linalg.norm(x, axis=-1) - 1.0),
        _unit,
        lambda x: np.abs(np.linalg.norm(x, axis=-1) - 1.0) <= _ULP_TOL,
        lambda rng, n: np.stack([rng.uniform(0, 2 * np.pi, n), np.arccos(rng.uniform(-1, 1, n))], -1))


def circle_embedding():
    return ManifoldEmbedding(
        "circle", 2,
        lambda p: np.stack([np.cos(p[..., 0]), np.sin(p[..., 0])], axis=-1),
        lambda x: 0.5 - np.abs(np.linalg.norm(x, axis=-1) - 1.0),
        _unit,
        lambda x: np.abs(np.linalg.norm(x, axis=-1) - 1.0) <= _ULP_TOL,
        lambda rng, n: rng.uniform(0, 2 * np.pi, (n, 1)))


def tilted_circle_embedding(alpha=0.7):
    """The unit circle in the plane spanned by ``e1`` and ``(0, cos alpha, sin alpha)``."""
    e2 = np.array([0.0, np.cos(alpha), np.sin(alpha)])
    nrm = np.cross(np.array([1.0, 0.0, 0.0]), e2)

    def split(x):
        z = x @ nrm
        return x - z[..., None] * nrm, z

    def margin(x):
        p, z = split(x)
        return np.minimum(0.5 - np.abs(np.linalg.norm(p, axis=-1) - 1.0), 0.5 - np.abs(z))

    def on(x):
        p, z = split(x)
        return (np.abs(np.linalg.norm(p, axis=-1) - 1.0) <= _ULP_TOL) & (np.abs(z) <= _ULP_TOL)

    return ManifoldEmbedding(
        "tilted_circle", 3,
        lambda p: np.cos(p[..., :1]) * np.array([1.0, 0.0, 0.0]) + np.sin(p[..., :1]) * e2,
        margin, lambda x: _unit(split(x)[0]), on,
        lambda rng, n: rng.uniform(0, 2 * np.pi, (n, 1)))


def torus_embedding(major=2.0, minor=0.5):
    def core(x):
        xy = x[..., :2]
        q = major * xy / np.linalg.norm(xy, axis=-1, keepdims=True)
        return np.concatenate([q, np.zeros(x.shape[:-1] + (1,))], axis=-1)

    def dist(x):
        return np.linalg.norm(x - core(x), axis=-1)

    def phi(p):
        th, ps = p[..., 0], p[..., 1]
        rr = major + minor * np.cos(ps)
        return np.stack([rr * np.cos(th), rr * np.sin(th), minor * np.sin(ps)], axis=-1)

    def closest(x):
        c = core(x)
        return c + minor * _unit(x - c)

    return ManifoldEmbedding(
        "torus", 3, phi, lambda x: 0.5 * minor - np.abs(dist(x) - minor), closest,
        lambda x: np.abs(dist(x) - minor) <= _ULP_TOL * major,
        lambda rng, n: rng.uniform(0, 2 * np.pi, (n, 2)))


EMBEDDINGS = {"sphere": sphere_embedding, "circle": circle_embedding, "torus": torus_embedding,
              "tilted_circle": tilted_circle_embedding}


def verify_embedding(emb, rng, n=1000, tol=1e-12):
    rep = Report(f"embedding:{emb.tag}")
    p = emb.phi(emb.sample_param(rng, n))
    x = p + rng.uniform(-0.2, 0.2, p.shape) * (0.5 if emb.tag == "torus" else 1.0)
    x = x[emb.in_tube(x)]
    r1 = emb.retract(x)
    r2 = emb.retract(r1)
    rep.add("r_idempotent", float(np.max(np.abs(r2 - r1))), tol, len(x), "Proposition: extension of functors")
    rep.add("r_fixes_manifold", float(np.max(np.abs(emb.retract(p) - p))), 0.0, n,
            "Proposition: extension of functors")
    return rep


# ----------------------------------------------------- manifold elements --

@dataclass(frozen=True)
class ManifoldElement:
    """A representative ``u`` in ``X(R^N)`` with ``im(u)`` on ``phi(M)``."""

    rep: object
    tag: str


def shell_valued_pair(rng, emb, grid=None, amplitude=None):
    """A pair whose image lies in the tubular neighborhood (not on M).

    The default sup-amplitude per component is ``0.4 margin(c) / sqrt(N)``,
    which keeps every value inside the tube.
    """
    grid = GridConfig(N=emb.N) if grid is None else GridConfig(grid.n_theta, grid.h_s, grid.s_cut, emb.N)
    c = emb.phi(emb.sample_param(rng, 1))[0]
    if amplitude is None:
        amplitude = 0.4 * float(emb.margin(c)) / np.sqrt(emb.N)
    d = band_limited_pair(rng, grid, with_constant=False)
    s = amplitude / max(float(np.max(np.abs(image_of(d).points))), 1e-300)
    return make_pair(c, s * d.plus.r, s * d.minus.r, grid)


@dataclass(frozen=True)
class ManifoldOps:
    """``X(M)`` membership, the retraction ``X(R)`` and class transitions."""

    functor: ConstructionFunctor
    emb: ManifoldEmbedding
    tol: float = 1e-12

    def morphism(self):
        return Morphism(self.emb.retract, self.emb.N, self.emb.N, f"R_{self.emb.tag}")

    def member(self, u):
        pts = image_of(u).points
        return bool(np.max(np.abs(self.emb.retract(pts) - pts)) <= self.tol)

    def retraction(self, u):
        ok, m = image_of(u).contained_in(self.emb.margin)
        if not ok:
            raise DomainViolation(f"image leaves the tubular neighborhood of {self.emb.tag} "
                                  f"(margin {m:.3e})", m)
        return self.functor.push(self.morphism(), u)

    def element(self, u):
        v = self.retraction(u)
        return ManifoldElement(v, self.emb.tag)

    def transition(self, e, f, other):
        """Class of ``e`` in the other embedding, via ``f`` with ``f = psi o phi^-1`` on ``phi(M)``."""
        v = self.functor.push(f, e.rep)
        if not ManifoldOps(self.functor, other, self.tol).member(v):
            raise DomainViolation("transition map does not land on the target embedding")
        return ManifoldElement(v, other.tag)


def extend_to_manifold(F, emb, tol=1e-12):
    return ManifoldOps(F, emb, tol)


def verify_manifold_extension(ops, rng, n=10, grid=None, tol=1e-12):
    rep = Report(f"extension:{ops.emb.tag}")
    idem = fix = 0.0
    for _ in range(n):
        u = shell_valued_pair(rng, ops.emb, grid)
        v = ops.retraction(u)
        w = ops.retraction(v)
        idem = max(idem, element_distance(w, v))
        fix = max(fix, 0.0 if w is v else element_distance(w, v) + 1.0)
    rep.add("XR_idempotent", idem, tol, n, "Proposition: extension of functors")
    rep.add("XR_identity_on_embedded", fix, 0.0, n, "Proposition: extension of functors")
    return rep


def circle_transition_maps(alpha=0.7):
    """``f: R^2 -> R^3`` and ``h: R^3 -> R^2`` between the flat and tilted circles."""
    e2 = np.array([0.0, np.cos(alpha), np.sin(alpha)])
    f = Morphism(lambda x: x[..., :1] * np.array([1.0, 0.0, 0.0]) + x[..., 1:2] * e2, 2, 3, "f")
    h = Morphism(lambda y: np.stack([y[..., 0], y @ e2], axis=-1), 3, 2, "h")
    return f, h


def verify_transition(F, rng, n=10, grid=None, alpha=0.7, tol=1e-12):
    flat, tilted = circle_embedding(), tilted_circle_embedding(alpha)
    ops, ops2 = extend_to_manifold(F, flat), extend_to_manifold(F, tilted)
    f, h = circle_transition_maps(alpha)
    worst = 0.0
    for _ in range(n):
        e = ops.element(shell_valued_pair(rng, flat, grid))
        e2 = ops.transition(e, f, tilted)
        back = ops2.transition(e2, h, flat)
        worst = max(worst, element_distance(back.rep, e.rep))
    rep = Report("transition:circle")
    rep.add("round_trip", worst, tol, n, "Proposition: extension of functors")
    return rep


# ------------------------------------------------- SB functor corpus --

def tangent_projection(p, h):
    """``pi_p h = h - (p . h) p`` pointwise for unit ``p``."""
    return h - np.sum(p * h, axis=-1, keepdims=True) * p


def sphere_sb_retraction(ops):
    """``(u, h) -> (X(R) u, pi_{R(u)} h)`` over the sphere extension."""
    def R(u, h):
        v = ops.retraction(u)
        cv, vp, vm = _full_values(v)
        ch, hp, hm = _full_values(h)
        kc = tangent_projection(cv, ch)
        return v, _pair_like(h, kc, tangent_projection(vp, hp) - kc, tangent_projection(vm, hm) - kc)
    return R


__all__ = [
    "EvaluationError", "Morphism", "identity_morphism", "compose_morphisms", "linear_morphism",
    "random_polynomial_morphism", "far_bump_morphism", "pushforward", "ImageProxy", "image_of",
    "ball_margin", "openness_check", "ConstructionFunctor", "GLUING_FUNCTOR", "Tagged", "identify",
    "unidentify", "element_distance", "verify_functor_axioms", "pushforward_sc1",
    "ManifoldEmbedding", "sphere_embedding", "circle_embedding", "tilted_circle_embedding",
    "torus_embedding", "EMBEDDINGS", "verify_embedding", "ManifoldElement", "shell_valued_pair",
    "ManifoldOps", "extend_to_manifold", "verify_manifold_extension", "circle_transition_maps",
    "verify_transition", "tangent_projection", "sphere_sb_retraction",
]
