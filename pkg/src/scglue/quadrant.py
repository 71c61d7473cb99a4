"""Partial quadrants, the degeneracy index, E_x, and retraction checks.

Points of ``C = [0, inf)^n (+) W`` are stored as flat vectors whose first
``n`` entries are the corner coordinates.  A coordinate counts as zero when
it is at most ``EPS0`` (absolute).
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .sccalc import fd_derivative

EPS0 = 1e-9


class DomainViolation(ValueError):
    """A point lies outside the quadrant or a map leaves its domain."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConstructionError(ValueError):
    """A splicing family failed its idempotence check at construction."""


@dataclass(frozen=True)
class PartialQuadrant:
    n: int
    w_dim: int = 0

    def __post_init__(self):
        if self.n < 0 or self.w_dim < 0:
            raise ValueError("quadrant dimensions must be non-negative")

    @property
    def dim(self):
        return self.n + self.w_dim

    def point(self, r, w=()):
        return QuadrantPoint(r, w)

    def contains(self, x, eps0=EPS0):
        x = np.asarray(x, dtype=float)
        return x.shape == (self.dim,) and bool(np.all(x[:self.n] >= -eps0))

    def product(self, other):
        return PartialQuadrant(self.n + other.n, self.w_dim + other.w_dim)


@dataclass(frozen=True)
class QuadrantPoint:
    r: np.ndarray
    w: np.ndarray = field(default_factory=lambda: np.zeros(0))
    eps0: float = EPS0

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.r, dtype=float))
        if np.any(r < -self.eps0):
            bad = int(np.argmin(r))
            raise DomainViolation(f"corner coordinate r[{bad}]={r[bad]} below -{self.eps0}", r)
        object.__setattr__(self, "r", np.maximum(r, 0.0))
        object.__setattr__(self, "w", np.atleast_1d(np.asarray(self.w, dtype=float)))

    @property
    def n(self):
        return self.r.size

    def corner_set(self):
        return tuple(int(i) for i in np.flatnonzero(self.r <= self.eps0))

    def vector(self):
        return np.concatenate([self.r, self.w])

    def __mul__(self, other):
        """Product point in ``C x C'`` (corner coordinates first)."""
        return QuadrantPoint(np.concatenate([self.r, other.r]), np.concatenate([self.w, other.w]),
                             min(self.eps0, other.eps0))


def degeneracy_index(x, n=None, eps0=EPS0):
    """Number of corner coordinates of ``x`` that vanish (up to ``eps0``).

    ``x`` is a ``QuadrantPoint`` or a flat vector whose first ``n`` entries
    are the corner coordinates.
    """
    if isinstance(x, QuadrantPoint):
        r = x.r
    else:
        r = np.asarray(x, dtype=float)[:n]
    if np.any(r < -eps0):
        raise DomainViolation("point lies outside the partial quadrant", r)
    return int(np.count_nonzero(r <= eps0))


@dataclass(frozen=True)
class ExSubspace:
    """``E_x = R^(x) (+) W``: the coordinate directions that stay inside C."""

    n: int
    w_dim: int
    free: tuple

    @property
    def dim(self):
        return len(self.free) + self.w_dim

    def basis(self):
        cols = list(self.free) + list(range(self.n, self.n + self.w_dim))
        B = np.zeros((self.n + self.w_dim, len(cols)))
        B[cols, np.arange(len(cols))] = 1.0
        return B

    def contains(self, v, tol=1e-12):
        v = np.asarray(v, dtype=float)
        frozen = [i for i in range(self.n) if i not in self.free]
        return bool(np.all(np.abs(v[frozen]) <= tol * max(1.0, np.max(np.abs(v), initial=0.0))))


def ex_subspace(x, w_dim=None, eps0=EPS0):
    if isinstance(x, QuadrantPoint):
        r, w_dim = x.r, x.w.size if w_dim is None else w_dim
    else:
        raise TypeError("ex_subspace expects a QuadrantPoint")
    free = tuple(int(i) for i in np.flatnonzero(r > eps0))
    return ExSubspace(r.size, w_dim, free)


# -------------------------------------------------------- retractions --

def _vec_distance(x, y):
    return float(np.max(np.abs(np.asarray(x, float) - np.asarray(y, float)), initial=0.0))


@dataclass(frozen=True)
class RetractionMap:
    """A self-map ``r`` of an open ``U`` in a quadrant, claimed idempotent.

    ``corner`` extracts the corner coordinates of a point (defaults to the
    first ``n`` entries of a flat vector); ``distance`` compares points.
    """

    map: object
    n: int
    domain: object = None
    sampler: object = None
    claimed_tame: bool = False
    corner: object = None
    distance: object = _vec_distance
    name: str = "r"

    def __call__(self, x):
        return self.map(x)

    def corners(self, x):
        if self.corner is not None:
            return np.asarray(self.corner(x), dtype=float)
        return np.asarray(x, dtype=float)[:self.n]


@dataclass
class RetractionReport:
    name: str
    samples: int
    idempotence: float
    degeneracy_preserved: bool
    tame: object = None
    complement_dim: int = -1
    conditioning: float = float("nan")
    witness: object = None

    def passed(self, tol=1e-10):
        ok = self.idempotence <= tol and self.degeneracy_preserved
        return ok and self.tame is not False

    def to_dict(self):
        return {"name": self.name, "samples": self.samples, "idempotence": self.idempotence,
                "degeneracy_preserved": self.degeneracy_preserved, "tame": self.tame,
                "complement_dim": self.complement_dim, "conditioning": self.conditioning}


def verify_retraction(r, samples, check_tame=False, eps0=EPS0, fd_steps=None):
    """Idempotence defect, degeneracy preservation and (optionally) tameness.

    The tame check needs flat finite-dimensional points: at each retract
    point ``o = r(x)`` the tangent ``T_o O`` is the range of the FD Jacobian
    of ``r`` and a complement is sought inside ``E_o``.  It succeeds when
    ``T_o O + E_o`` spans ``E``; the complement returned is ``ker Dr(o)``
    when that already lies in ``E_o`` and a completion from ``E_o`` otherwise.
    """
    worst, witness, preserved = 0.0, None, True
    tame, comp_dim, cond = (None, -1, float("nan"))
    conds = []
    for x in samples:
        if r.domain is not None and not r.domain(x):
            raise DomainViolation(f"{r.name}: sample outside U", x)
        o = r(x)
        if r.domain is not None and not r.domain(o):
            raise DomainViolation(f"{r.name}: r(x) leaves U", x)
        d = r.distance(r(o), o)
        if d > worst:
            worst, witness = d, x
        dx = degeneracy_index(r.corners(x), eps0=eps0)
        do = degeneracy_index(r.corners(o), eps0=eps0)
        if dx != do:
            preserved = False
            witness = x
        if check_tame:
            ok, k, c = _tame_at(r, np.asarray(o, dtype=float), eps0, fd_steps)
            conds.append(c)
            comp_dim = k
            if not ok:
                tame = False
                witness = x
            elif tame is None:
                tame = True
    if conds:
        cond = float(min(conds))
    return RetractionReport(r.name, len(samples), worst, preserved, tame, comp_dim, cond, witness)


def jacobian(f, x, steps=None):
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = 1.0
        kw = {} if steps is None else {"steps": steps}
        cols.append(fd_derivative(f, x, e, **kw).estimate)
    return np.stack(cols, axis=1)


def _tame_at(r, o, eps0, fd_steps):
    n, dim = r.n, o.size
    J = jacobian(r, o, fd_steps)
    U, sv, _ = np.linalg.svd(J)
    rank = int(np.sum(sv > 1e-7 * max(1.0, sv[0])))
    T = U[:, :rank]
    point = QuadrantPoint(o[:n], o[n:], eps0)
    Eo = ex_subspace(point, dim - n, eps0).basis()
    # for a linear projector, ker Dr = range(I - Dr)
    K = np.linalg.svd(np.eye(dim) - J)[0][:, :dim - rank]
    frozen = list(point.corner_set())
    if np.all(np.abs(K[frozen]) <= 1e-7):
        A = K
    else:
        A = _complete(T, Eo)
        if A is None:
            return False, -1, 0.0
    M = np.hstack([T, A])
    if M.shape[1] != dim:
        return False, A.shape[1], 0.0
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s[-1] > 1e-8), A.shape[1], float(s[-1] / s[0])


def _complete(T, Eo):
    """Greedy basis of a complement of span(T) drawn from the columns of ``Eo``."""
    cols = [T[:, i] for i in range(T.shape[1])]
    picked = []
    for j in range(Eo.shape[1]):
        trial = np.stack(cols + picked + [Eo[:, j]], axis=1)
        if np.linalg.matrix_rank(trial, tol=1e-9) == trial.shape[1]:
            picked.append(Eo[:, j])
    if len(cols) + len(picked) != T.shape[0]:
        return None
    return np.stack(picked, axis=1) if picked else np.zeros((T.shape[0], 0))


# ----------------------------------------------------------- splicings --

@dataclass(frozen=True)
class SplicingFamily:
    """Projections ``pi_a`` on a fiber space, parameters in ``[0,inf)^k x R^(p-k)``."""

    k: int
    p: int
    projection: object
    fiber_dim: int = -1
    kind: str = ""

    def degeneracy(self, a, eps0=EPS0):
        """d(a, e) = number of vanishing corner parameters."""
        return degeneracy_index(np.asarray(a, dtype=float)[:self.k], eps0=eps0)

    def __call__(self, a, e):
        return self.projection(a, e)


def rotation_angle(a, k):
    """Flat angle ``sum_i exp(-1/a_i)`` over the corner parameters (0 at a_i = 0)."""
    a = np.asarray(a, dtype=float)[:k]
    pos = a > 0
    return float(np.sum(np.exp(-1.0 / a[pos])))


def rotating_projector(a, k):
    th = rotation_angle(a, k)
    v = np.array([np.cos(th), np.sin(th)])
    return np.outer(v, v)


def make_splicing(kind, k=1, a=None, grid=None, samples=None, tol=1e-10):
    """Build a splicing and its retraction ``r(a, e) = (a, pi_a e)``.

    ``rotating_rank1``: projections onto the line at angle
    ``sum_i exp(-1/a_i)`` in R^2; at ``a = 0`` the angle is 0, the limit of
    the family, so the family is smooth up to the corner.  Points are flat
    vectors ``[a_1..a_k, e_1, e_2]``.

    ``gluing_induced``: ``pi_a(e) = section_H(preglue(a, e))`` at a fixed
    gluing parameter ``a``; points are pairs ``(a, EPair)``.
    """
    if kind == "rotating_rank1":
        fam = SplicingFamily(k, k, lambda a, e: rotating_projector(a, k) @ np.asarray(e, float),
                             2, kind)

        def rmap(x):
            x = np.asarray(x, dtype=float)
            return np.concatenate([x[:k], fam(x[:k], x[k:])])

        def dom(x):
            return bool(np.all(np.asarray(x)[:k] >= -EPS0))

        r = RetractionMap(rmap, n=k, domain=dom, claimed_tame=True, name="rotating_rank1")
        rng = np.random.default_rng(0)
        probe = [np.concatenate([rng.uniform(0, 0.25, k), rng.normal(size=2)]) for _ in range(8)]
        probe.append(np.concatenate([np.zeros(k), rng.normal(size=2)]))
    elif kind == "gluing_induced":
        from .gluing import as_param, retract
        from .scalespace import band_limited_pair, pair_difference_sup
        a0 = as_param(0.22 if a is None else a)

        def proj(aa, e):
            return retract(aa, e)[1]

        fam = SplicingFamily(0, 2, proj, -1, kind)

        def rmap(x):
            return retract(x[0], x[1])

        def dist(x, y):
            return abs(as_param(x[0]).a - as_param(y[0]).a) + pair_difference_sup(x[1], y[1])

        r = RetractionMap(rmap, n=0, corner=lambda x: np.zeros(0), distance=dist,
                          name="gluing_induced")
        rng = np.random.default_rng(0)
        probe = [(a0, band_limited_pair(rng, grid, center=a0.R / 2, support=8))]
    else:
        raise ValueError(f"unknown splicing kind {kind!r}")
    for x in probe if samples is None else samples:
        o = r(x)
        if r.distance(r(o), o) > tol:
            raise ConstructionError(f"{kind}: projection family is not idempotent")
    return fam, r


# ------------------------------------------------------- corner lattice --

def corner_lattice_rows(n, m):
    """Exhaustive additivity check over ``{0,1}^n x {0,1}^m``.

    Rows are ``(coords, d, passed)`` with ``d`` the degeneracy of the product
    point and ``passed`` whether it equals ``d_C + d_C'``.
    """
    rows = []
    for bits in product((0.0, 1.0), repeat=n + m):
        x = QuadrantPoint(bits[:n]) if n else QuadrantPoint(np.zeros(0))
        y = QuadrantPoint(bits[n:]) if m else QuadrantPoint(np.zeros(0))
        d = degeneracy_index(x * y)
        rows.append((bits, d, d == degeneracy_index(x) + degeneracy_index(y)))
    return rows


def degeneracy_inequality(embed, model_n, ambient_n, samples, eps0=EPS0):
    """Check ``d_A(p) <= d_X(embed(p))`` for a sub-model ``A`` embedded in ``X``.

    ``samples`` are points of A's own quadrant model (first ``model_n``
    entries corner coordinates).  Returns ``(all_ok, rows)``.
    """
    rows = []
    for p in samples:
        dA = degeneracy_index(p, model_n, eps0)
        dX = degeneracy_index(embed(p), ambient_n, eps0)
        rows.append((dA, dX))
    return all(a <= b for a, b in rows), rows


__all__ = [
    "EPS0", "DomainViolation", "ConstructionError", "PartialQuadrant", "QuadrantPoint",
    "degeneracy_index", "ExSubspace", "ex_subspace", "RetractionMap", "RetractionReport",
    "verify_retraction", "jacobian", "SplicingFamily", "rotation_angle", "rotating_projector",
    "make_splicing", "corner_lattice_rows", "degeneracy_inequality",
]
