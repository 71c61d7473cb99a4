"""Imprinting records and their combinators.

An ``ImprintingRecord`` packages a surjection ``oplus: X -> Y`` with finitely
many local sections ``H`` (``oplus o H = Id`` on ``V``), restriction maps
given upstairs as ``pbar_i = p_i o oplus``, and an optional submersion target
``f: Y -> Z`` with a split retraction ``rho_bar`` for ``f o oplus``.

Points are opaque; every record supplies its own distances.  Elements of
``Y`` are compared through canonical representatives ``H(y)``.

Combinators (compose, product, disjoint union, pullback, plumbing) build new
records from old ones without touching the inputs.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .quadrant import RetractionMap, verify_retraction

TOL = 1e-10
MEMBERSHIP_TOL = 1e-9


class ImprintingError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class LocalSection:
    contains: object
    H: object
    name: str = "H"


@dataclass(frozen=True)
class Restriction:
    """``pbar(x)`` into a grid space; ``adjust(x, target)`` moves x so ``pbar`` hits target.

    ``adjust`` must leave every other restriction of the record unchanged;
    it is what makes fibered products along this restriction plumbable.
    """

    pbar: object
    adjust: object = None


def _max_abs(a, b):
    return float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float)), initial=0.0))


@dataclass(frozen=True)
class SubmersionData:
    """Target ``f: Y -> Z`` and ``rho_bar(x, z)`` for ``f o oplus`` upstairs."""

    f: object
    rho_bar: object
    sample_z: object
    z_distance: object = _max_abs
    degeneracy_z: object = None


@dataclass(frozen=True)
class ImprintingRecord:
    name: str
    oplus: object
    sections: tuple
    sample_x: object
    x_distance: object = _max_abs
    y_distance: object = _max_abs
    restrictions: dict = field(default_factory=dict)
    submersion: object = None
    degeneracy_x: object = None
    sc1_probe: object = None

    def section_for(self, y):
        for s in self.sections:
            if s.contains(y):
                return s
        return None

    def canonical(self, y):
        """Canonical representative ``H(y)`` of a Y element."""
        s = self.section_for(y)
        if s is None:
            raise ImprintingError(f"{self.name}: no local section covers the point", y)
        return s.H(y)

    def retract(self, x):
        return self.canonical(self.oplus(x))

    def same(self, y1, y2, tol=TOL):
        return self.y_distance(y1, y2) <= tol

    def restrict(self, label, y):
        """``p_label(y) = pbar_label(H(y))``."""
        return self.restrictions[label].pbar(self.canonical(y))

    def degeneracy_y(self, y):
        return 0 if self.degeneracy_x is None else self.degeneracy_x(self.canonical(y))


# ----------------------------------------------------------- reports --

@dataclass
class Check:
    name: str
    defect: float
    threshold: float
    samples: int
    ref: str = ""
    passed: bool = None
    witness: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(self.defect <= self.threshold)

    def to_dict(self):
        return {"name": self.name, "paper_ref": self.ref, "samples": self.samples,
                "defect": float(self.defect), "threshold": float(self.threshold),
                "pass": bool(self.passed)}


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, *args, **kw):
        c = Check(*args, **kw)
        self.checks.append(c)
        return c

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(replace(c, name=prefix + c.name))
        return self

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def _samples(rec, rng, n):
    return [rec.sample_x(rng) for _ in range(n)]


def verify_imprinting(rec, n_samples=20, rng=None, samples=None, tol=TOL, check_sc1=True):
    """Section identity, idempotence of ``H o oplus``, sc1 evidence, transitions."""
    rng = np.random.default_rng(0) if rng is None else rng
    xs = _samples(rec, rng, n_samples) if samples is None else list(samples)
    rep = Report(f"imprinting:{rec.name}")
    sec_def = idem_def = trans_def = 0.0
    wit = [None, None, None]
    uncovered = 0
    n_trans = 0
    for x in xs:
        y = rec.oplus(x)
        covering = [s for s in rec.sections if s.contains(y)]
        if not covering:
            uncovered += 1
            continue
        for s in covering:
            hx = s.H(y)
            d = rec.y_distance(rec.oplus(hx), y)
            if d > sec_def:
                sec_def, wit[0] = d, x
            again = s.H(rec.oplus(hx))
            d = rec.x_distance(again, hx)
            if d > idem_def:
                idem_def, wit[1] = d, x
        for s in covering:
            o = s.H(y)
            for s2 in covering:
                if s2 is s:
                    continue
                n_trans += 1
                back = s.H(rec.oplus(s2.H(rec.oplus(o))))
                d = rec.x_distance(back, o)
                if d > trans_def:
                    trans_def, wit[2] = d, x
    rep.add("oplus_H_identity", sec_def, tol, len(xs), "Definition: imprinting", witness=wit[0])
    rep.add("H_oplus_idempotent", idem_def, tol, len(xs), "Definition: imprinting", witness=wit[1])
    rep.add("sections_cover_samples", float(uncovered), 0.0, len(xs), "Definition: imprinting")
    rep.add("transition_consistency", trans_def, tol, n_trans, "Theorem: imprinting method",
            witness=wit[2])
    if check_sc1 and rec.sc1_probe is not None:
        reports = rec.sc1_probe(rng)
        worst = min((r.slope for r in reports), default=float("inf"))
        ok = all(r.verdict for r in reports)
        rep.add("retraction_sc1_slope", -worst if np.isfinite(worst) else -1.0, -0.5,
                len(reports), "Definition: sc differentiable", passed=ok)
    return rep


# ------------------------------------------------------ combinators --

def identity_record(sampler, name="identity", distance=_max_abs):
    return ImprintingRecord(name, lambda x: x, (LocalSection(lambda y: True, lambda y: y, "Id"),),
                            sampler, distance, distance)


def compose_imprintings(rec1, rec2, name=None, n_samples=20, rng=None):
    """``oplus2 o oplus1`` with sections ``H1 o H2``; plus the equivalence report.

    ``rec2`` is an imprinting ``Y -> Z`` whose samples come from ``rec1``.
    The reverse construction ``H2' = oplus1 o H`` is verified too, and the
    two retractions on ``Y`` are compared on samples.
    """
    rng = np.random.default_rng(1) if rng is None else rng
    secs, pairs = [], []
    for s2 in rec2.sections:
        for s1 in rec1.sections:
            pairs.append((s1, s2))
            secs.append(LocalSection(
                (lambda z, s1=s1, s2=s2: s2.contains(z) and s1.contains(s2.H(z))),
                (lambda z, s1=s1, s2=s2: s1.H(s2.H(z))),
                f"{s1.name}o{s2.name}"))
    comp = ImprintingRecord(
        name or f"{rec2.name}o{rec1.name}", lambda x: rec2.oplus(rec1.oplus(x)), tuple(secs),
        rec1.sample_x, rec1.x_distance, rec2.y_distance, dict(rec1.restrictions),
        None, rec1.degeneracy_x, rec1.sc1_probe)
    derived = ImprintingRecord(
        f"{rec2.name}[via {rec1.name}]", rec2.oplus,
        tuple(LocalSection(s.contains, (lambda z, s=s: rec1.oplus(s.H(z))), f"oplus1o{s.name}")
              for s in comp.sections),
        lambda r: rec1.oplus(rec1.sample_x(r)), rec1.y_distance, rec2.y_distance)
    xs = _samples(rec1, rng, n_samples)
    report = Report(f"compose:{comp.name}")
    vc = verify_imprinting(comp, samples=xs, check_sc1=False)
    for c in vc.checks:
        if c.name == "sections_cover_samples" and c.defect > 0:
            raise ImprintingError(f"{comp.name}: section domains need refinement "
                                  f"({int(c.defect)} uncovered samples)")
    report.extend(vc, "composite.")
    report.extend(verify_imprinting(derived, samples=[rec1.oplus(x) for x in xs],
                                    check_sc1=False), "reverse.")
    worst = 0.0
    for x in xs:
        z = rec2.oplus(rec1.oplus(x))
        for s, (_, s2) in zip(comp.sections, pairs):
            if s.contains(z):
                worst = max(worst, rec1.y_distance(rec1.oplus(s.H(z)), s2.H(z)))
    report.add("retracts_agree", worst, 1e-12, len(xs), "Theorem: equivalence of composing imprintings")
    return comp, report


def _pair_dist(d1, d2):
    return lambda p, q: max(d1(p[0], q[0]), d2(p[1], q[1]))


def product_imprinting(rec, rec2, name=None):
    """``oplus x oplus'`` on ``X x X'`` with sections ``H x H'`` on ``V x V'``.

    Restrictions are re-indexed ``(1, i)`` and ``(2, i')``; submersion targets
    (when both exist) combine componentwise.
    """
    secs = tuple(
        LocalSection((lambda y, a=a, b=b: a.contains(y[0]) and b.contains(y[1])),
                     (lambda y, a=a, b=b: (a.H(y[0]), b.H(y[1]))), f"{a.name}x{b.name}")
        for a in rec.sections for b in rec2.sections)
    restr = {}
    for tag, r in ((1, rec), (2, rec2)):
        for label, res in r.restrictions.items():
            restr[(tag,) + _as_tuple(label)] = _lift_restriction(res, tag - 1)
    sub = None
    if rec.submersion is not None and rec2.submersion is not None:
        s1, s2 = rec.submersion, rec2.submersion
        dz = None
        if s1.degeneracy_z is not None and s2.degeneracy_z is not None:
            dz = lambda z: s1.degeneracy_z(z[0]) + s2.degeneracy_z(z[1])  # noqa: E731
        sub = SubmersionData(
            lambda y: (s1.f(y[0]), s2.f(y[1])),
            lambda x, z: (s1.rho_bar(x[0], z[0]), s2.rho_bar(x[1], z[1])),
            lambda r: (s1.sample_z(r), s2.sample_z(r)),
            _pair_dist(s1.z_distance, s2.z_distance), dz)
    deg = None
    if rec.degeneracy_x is not None or rec2.degeneracy_x is not None:
        d1 = rec.degeneracy_x or (lambda x: 0)
        d2 = rec2.degeneracy_x or (lambda x: 0)
        deg = lambda x: d1(x[0]) + d2(x[1])  # noqa: E731
    return ImprintingRecord(
        name or f"{rec.name}x{rec2.name}", lambda x: (rec.oplus(x[0]), rec2.oplus(x[1])), secs,
        lambda r: (rec.sample_x(r), rec2.sample_x(r)), _pair_dist(rec.x_distance, rec2.x_distance),
        _pair_dist(rec.y_distance, rec2.y_distance), restr, sub, deg)


def _as_tuple(label):
    return label if isinstance(label, tuple) else (label,)


def _lift_restriction(res, slot):
    def pbar(x):
        return res.pbar(x[slot])

    adjust = None
    if res.adjust is not None:
        def adjust(x, target):
            parts = list(x)
            parts[slot] = res.adjust(x[slot], target)
            return tuple(parts)
    return Restriction(pbar, adjust)


def disjoint_union_imprinting(rec, rec2, name=None):
    """Ordered disjoint union: elements are ``(0, a)`` or ``(1, b)``."""
    recs = (rec, rec2)

    def tagged_dist(dists):
        def d(p, q):
            return dists[p[0]](p[1], q[1]) if p[0] == q[0] else float("inf")
        return d

    secs = tuple(
        LocalSection((lambda y, t=t, s=s: y[0] == t and s.contains(y[1])),
                     (lambda y, t=t, s=s: (t, s.H(y[1]))), f"{t}:{s.name}")
        for t, r in enumerate(recs) for s in r.sections)

    def sample(r):
        t = int(r.integers(2))
        return (t, recs[t].sample_x(r))

    return ImprintingRecord(
        name or f"{rec.name}+{rec2.name}", lambda x: (x[0], recs[x[0]].oplus(x[1])), secs, sample,
        tagged_dist([r.x_distance for r in recs]), tagged_dist([r.y_distance for r in recs]))


def pullback_admissible(rec, member_y, sub_retraction, phi=None, phi_inv=None, e=None,
                        e_inv=None, name=None, n_check=20, rng=None, submersion=None,
                        restrictions=None):
    """Pull ``rec`` back along an injective ``phi: Y' -> Y``.

    ``member_y`` decides ``y in phi(Y')``; ``sub_retraction`` is a retraction
    of X onto ``X' = oplus^-1(phi(Y'))`` (checked idempotent and checked to
    land in ``X'``).  ``e: X'_model -> X`` defaults to the inclusion.  The
    result has ``oplus' = phi^-1 o oplus o e`` and ``H' = e^-1 o H o phi``.
    """
    rng = np.random.default_rng(2) if rng is None else rng
    ident = lambda v: v  # noqa: E731
    phi, phi_inv = phi or ident, phi_inv or ident
    e, e_inv = e or ident, e_inv or ident
    r = RetractionMap(sub_retraction, n=0, corner=lambda x: np.zeros(0), distance=rec.x_distance,
                      name=f"sub:{name or rec.name}")
    xs = _samples(rec, rng, n_check)
    vr = verify_retraction(r, xs)
    if vr.idempotence > TOL:
        raise ImprintingError("sub-retraction is not idempotent", vr.witness)
    for x in xs:
        if not member_y(rec.oplus(sub_retraction(x))):
            raise ImprintingError("sub-retraction image leaves the preimage of phi(Y')", x)
    secs = tuple(LocalSection((lambda y, s=s: s.contains(phi(y))),
                              (lambda y, s=s: e_inv(s.H(phi(y)))), s.name)
                 for s in rec.sections)
    restr = dict(rec.restrictions) if restrictions is None else restrictions
    restr = {k: Restriction((lambda x, v=v: v.pbar(e(x))),
                            None if v.adjust is None else
                            (lambda x, t, v=v: e_inv(sub_retraction(v.adjust(e(x), t)))))
             for k, v in restr.items()}
    sub = submersion
    if sub is None and rec.submersion is not None:
        s0 = rec.submersion
        sub = SubmersionData(lambda y: s0.f(phi(y)),
                             lambda x, z: e_inv(s0.rho_bar(e(x), z)),
                             s0.sample_z, s0.z_distance, s0.degeneracy_z)
    deg = None if rec.degeneracy_x is None else (lambda x: rec.degeneracy_x(e(x)))
    return ImprintingRecord(
        name or f"pullback:{rec.name}", lambda x: phi_inv(rec.oplus(e(x))), secs,
        lambda rr: e_inv(sub_retraction(rec.sample_x(rr))),
        lambda p, q: rec.x_distance(e(p), e(q)),
        lambda p, q: rec.y_distance(phi(p), phi(q)), restr, sub, deg)


# ---------------------------------------------------------- plumbing --

@dataclass(frozen=True)
class FiberedProductRecord:
    left: ImprintingRecord
    right: ImprintingRecord
    i0: object
    i0r: object
    record: ImprintingRecord
    tol: float = MEMBERSHIP_TOL

    def member_x(self, x):
        a = self.left.restrictions[self.i0].pbar(x[0])
        b = self.right.restrictions[self.i0r].pbar(x[1])
        return _max_abs(a, b) <= self.tol

    def member_y(self, y):
        a = self.left.restrict(self.i0, y[0])
        b = self.right.restrict(self.i0r, y[1])
        return _max_abs(a, b) <= self.tol

    def sigma(self, x):
        target = self.left.restrictions[self.i0].pbar(x[0])
        return (x[0], self.right.restrictions[self.i0r].adjust(x[1], target))


def plumb(left, right, i0, i0r, name=None, n_check=20, rng=None):
    """Fibered product of two records along ``p_i0 = p'_i0'``.

    The plumbing retraction moves the right factor so that its ``i0'``
    restriction matches the left's ``i0`` restriction.  The restriction index
    set of the result is ``{(1, i): i != i0} u {(2, i'): i' != i0'}``.
    """
    if i0 not in left.restrictions or i0r not in right.restrictions:
        raise ImprintingError(f"unknown restriction index {i0!r} / {i0r!r}")
    if right.restrictions[i0r].adjust is None:
        raise ImprintingError("right restriction has no adjuster; not plumbable")
    prod = product_imprinting(left, right)
    holder = FiberedProductRecord(left, right, i0, i0r, prod)
    restr = {k: v for k, v in prod.restrictions.items()
             if k != (1,) + _as_tuple(i0) and k != (2,) + _as_tuple(i0r)}
    rec = pullback_admissible(prod, holder.member_y, holder.sigma,
                              name=name or f"{left.name}[{_fmt(i0)}|{_fmt(i0r)}]{right.name}",
                              n_check=n_check, rng=rng, restrictions=restr)
    return replace(holder, record=rec)


def _fmt(label):
    return ".".join(str(p) for p in _as_tuple(label))


# --------------------------------------------------------- submersions --

@dataclass(frozen=True)
class SubmersionWitness:
    """Split retraction ``rho(x, z) = (rho_bar(x, z), z)`` onto the graph of ``p``."""

    p: object
    rho_bar: object
    x_distance: object = _max_abs
    z_distance: object = _max_abs

    def rho(self, x, z):
        return self.rho_bar(x, z), z


def product_projection_witness():
    """``rho((x, y), x') = ((x', y), x')`` for ``pr_1: X x Y -> X``."""
    return SubmersionWitness(lambda w: w[0], lambda w, x2: (x2, w[1]), _pair_dist(_max_abs, _max_abs))


def submersion_verify(w, xs, zs, x0=None, z0=None, degeneracy_x=None, degeneracy_z=None,
                      tol=1e-12, name="submersion"):
    """Idempotence, graph fixing and the derived local section and fiber retraction.

    ``xs`` and ``zs`` are paired samples near the graph.  ``psi(z) = rho_bar(x0, z)``
    must satisfy ``p o psi = Id``; ``tau(x) = rho_bar(x, z0)`` must be an
    idempotent map into the fiber over ``z0``.
    """
    rep = Report(f"submersion:{name}")
    x0 = xs[0] if x0 is None else x0
    z0 = w.p(x0) if z0 is None else z0
    idem = graph = onto = sec = fib = tau_idem = 0.0
    deg_ok = True
    for x, z in zip(xs, zs):
        rx = w.rho_bar(x, z)
        idem = max(idem, w.x_distance(w.rho_bar(rx, z), rx))
        onto = max(onto, w.z_distance(w.p(rx), z))
        graph = max(graph, w.x_distance(w.rho_bar(x, w.p(x)), x))
        sec = max(sec, w.z_distance(w.p(w.rho_bar(x0, z)), z))
        t = w.rho_bar(x, z0)
        fib = max(fib, w.z_distance(w.p(t), z0))
        tau_idem = max(tau_idem, w.x_distance(w.rho_bar(t, z0), t))
        if degeneracy_x is not None and degeneracy_z is not None:
            deg_ok &= degeneracy_x(x) >= degeneracy_z(w.p(x))
    n = len(xs)
    rep.add("rho_idempotent", idem, tol, n, "Definition: submersion property")
    rep.add("rho_onto_graph", onto, tol, n, "Definition: submersion property")
    rep.add("rho_fixes_graph", graph, tol, n, "Definition: submersion property")
    rep.add("psi_is_section", sec, tol, n, "Proposition: submersions and implied diffeomorphisms")
    rep.add("tau_into_fiber", fib, tol, n, "Proposition: fibers of submersions")
    rep.add("tau_idempotent", tau_idem, tol, n, "Proposition: fibers of submersions")
    if degeneracy_x is not None and degeneracy_z is not None:
        rep.add("degeneracy_inequality", 0.0 if deg_ok else 1.0, 0.0, n,
                "Proposition: degeneracy inequality and submersions")
    return rep


@dataclass(frozen=True)
class FiberedSubmersion:
    """``X x_Y Z`` for ``p: X -> Y`` submersive and ``f: Z -> Y``."""

    w: SubmersionWitness
    f: object
    z_distance: object = _max_abs
    tol: float = MEMBERSHIP_TOL

    def member(self, xz):
        return self.w.z_distance(self.w.p(xz[0]), self.f(xz[1])) <= self.tol

    def sigma(self, xz):
        x, z = xz
        return self.w.rho_bar(x, self.f(z)), z

    def delta(self, xz, z2):
        """Split retraction for ``pr_2`` on the fibered product."""
        x, _ = xz
        return (self.w.rho_bar(x, self.f(z2)), z2), z2

    def distance(self, p, q):
        return max(self.w.x_distance(p[0], q[0]), self.z_distance(p[1], q[1]))


def fibered_product_submersion(w, f, xs, zs, z2s, z_distance=_max_abs, tol=1e-12,
                               name="fibered_product"):
    """Check ``sigma`` and ``delta`` on samples; returns ``(FiberedSubmersion, Report)``."""
    fp = FiberedSubmersion(w, f, z_distance)
    rep = Report(f"fibered:{name}")
    s_idem = s_mem = s_fix = d_idem = d_graph = d_fix = 0.0
    for x, z, z2 in zip(xs, zs, z2s):
        p = fp.sigma((x, z))
        s_idem = max(s_idem, fp.distance(fp.sigma(p), p))
        s_mem = max(s_mem, w.z_distance(w.p(p[0]), f(p[1])))
        s_fix = max(s_fix, fp.distance(fp.sigma(p), p))
        q, zz = fp.delta(p, z2)
        q2, zz2 = fp.delta(q, zz)
        d_idem = max(d_idem, fp.distance(q2, q), z_distance(zz2, zz))
        d_graph = max(d_graph, z_distance(q[1], zz), w.z_distance(w.p(q[0]), f(q[1])))
        q3, _ = fp.delta(p, p[1])
        d_fix = max(d_fix, fp.distance(q3, p))
    n = len(xs)
    ref = "Proposition: fibered products, projections and submersions"
    rep.add("sigma_idempotent", s_idem, tol, n, ref)
    rep.add("sigma_membership", s_mem, tol, n, ref)
    rep.add("sigma_fixes_members", s_fix, tol, n, ref)
    rep.add("delta_idempotent", d_idem, tol, n, ref)
    rep.add("delta_onto_graph", d_graph, tol, n, ref)
    rep.add("delta_fixes_graph", d_fix, tol, n, ref)
    return fp, rep


def downstairs_witness(rec):
    """``delta(y, z) = (oplus(rho_bar(H(y), z)), z)`` for ``f: Y -> Z``."""
    sub = rec.submersion
    return SubmersionWitness(sub.f, lambda y, z: rec.oplus(sub.rho_bar(rec.canonical(y), z)),
                             rec.y_distance, sub.z_distance)


def submersion_imprinting_verify(rec, n_samples=20, rng=None, samples=None, corner_map=None,
                                 tol=TOL):
    """Imprinting-submersion checks for a record with a submersion target.

    Builds the downstairs retraction from the upstairs witness and checks it,
    plus ``pbar_i o rho_bar = pbar_i`` for every restriction.  With
    ``corner_map = (p, d_V)`` it also checks ``d_Y(y) = d_V(p(H(y)))``.
    """
    if rec.submersion is None:
        raise ImprintingError(f"{rec.name} has no submersion target")
    rng = np.random.default_rng(3) if rng is None else rng
    sub = rec.submersion
    xs = _samples(rec, rng, n_samples) if samples is None else list(samples)
    zs = [sub.sample_z(rng) for _ in xs]
    rep = Report(f"imprinting_submersion:{rec.name}")
    up = SubmersionWitness(lambda x: sub.f(rec.oplus(x)), sub.rho_bar, rec.x_distance,
                           sub.z_distance)
    up_rep = submersion_verify(up, xs, zs, tol=tol, name="upstairs")
    rep.extend(up_rep, "upstairs.")
    w = downstairs_witness(rec)
    ys = [rec.oplus(x) for x in xs]
    idem = graph = onto = 0.0
    for y, z in zip(ys, zs):
        d1 = w.rho_bar(y, z)
        idem = max(idem, rec.y_distance(w.rho_bar(d1, z), d1))
        onto = max(onto, sub.z_distance(sub.f(d1), z))
        graph = max(graph, rec.y_distance(w.rho_bar(y, sub.f(y)), y))
    ref = "Theorem: imprinting-submersion yields submersions"
    rep.add("delta_idempotent", idem, tol, len(ys), ref)
    rep.add("delta_onto_graph", onto, tol, len(ys), ref)
    rep.add("delta_fixes_graph", graph, tol, len(ys), ref)
    for label, res in rec.restrictions.items():
        worst = 0.0
        for x, z in zip(xs, zs):
            worst = max(worst, _max_abs(res.pbar(sub.rho_bar(x, z)), res.pbar(x)))
        rep.add(f"restriction_compatible[{_fmt(label)}]", worst, MEMBERSHIP_TOL, len(xs),
                "Definition: imprinting-submersion with restrictions")
    if corner_map is not None:
        p, dV = corner_map
        bad = sum(rec.degeneracy_y(y) != dV(p(rec.canonical(y))) for y in ys)
        rep.add("tame_degeneracy_match", float(bad), 0.0, len(ys),
                "Theorem: tame imprintings and manifold submersions")
    return rep


def section_retraction(g, f, us, ys, distance=_max_abs, y_distance=_max_abs, tol=1e-12):
    """``r = g o f`` for ``f o g = Id``: idempotent with image ``g(Y)``."""
    rep = Report("section_retraction")
    idem = max((distance(g(f(g(f(u)))), g(f(u))) for u in us), default=0.0)
    left = max((y_distance(f(g(y)), y) for y in ys), default=0.0)
    rep.add("r_idempotent", idem, tol, len(us), "Corollary: induced sub-M-polyfold structures")
    rep.add("f_g_identity", left, tol, len(ys), "Corollary: induced sub-M-polyfold structures")
    return rep


__all__ = [
    "TOL", "MEMBERSHIP_TOL", "ImprintingError", "LocalSection", "Restriction", "SubmersionData",
    "ImprintingRecord", "Check", "Report", "verify_imprinting", "identity_record",
    "compose_imprintings", "product_imprinting", "disjoint_union_imprinting",
    "pullback_admissible", "FiberedProductRecord", "plumb", "SubmersionWitness",
    "product_projection_witness", "submersion_verify", "FiberedSubmersion",
    "fibered_product_submersion", "downstairs_witness", "submersion_imprinting_verify",
    "section_retraction",
]
