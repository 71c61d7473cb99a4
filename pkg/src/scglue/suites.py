"""Named check suites and the JSON verdict report.

Every suite takes a ``RunConfig`` and returns a ``Report``.  Randomness
comes from one 64-bit seed: the generator for a suite component ``name``
is ``default_rng(SeedSequence([seed, crc32(name)]))``, so suites draw
independent streams and adding a suite never shifts another's samples.
"""
import json
import zlib
from dataclasses import dataclass

import numpy as np

from . import _accel
from .bundle import (
    BiFilteredSpace, bilevel_check, classify_section, diagonal_implies_double, diagonal_section,
    gluing_bundle_retraction, gluing_sb_record, identity_sb, linear_fiber_dimension,
    rough_multiplier_sb, sb_coproduct, sb_imprint_verify, sb_plumb, sb_product,
    sb_retraction_check, sharp_constant_section, smooth_constant_section, smoothing_sb,
    splicing_bundle_retraction, splicing_sb_record, vdist, verify_bundle_projection,
    zero_section,
)
from .functor import (
    GLUING_FUNCTOR, EMBEDDINGS, extend_to_manifold, far_bump_morphism, linear_morphism,
    random_polynomial_morphism, shell_valued_pair, sphere_embedding, verify_embedding,
    verify_functor_axioms, verify_manifold_extension, verify_transition, element_distance,
    sphere_sb_retraction, identify, unidentify,
)
from .gluing import (
    EXPONENTIAL, INVERSE_TEST, DEFAULT_CUTOFF, CutoffModel, GluedFunction, GluingChart,
    GluingParameter, grid_for_modulus, preglue, retract, section_H,
)
from .imprint import (
    Report, compose_imprintings, disjoint_union_imprinting, plumb, product_imprinting,
    product_projection_witness, fibered_product_submersion, submersion_imprinting_verify,
    submersion_verify, verify_imprinting, SubmersionWitness,
)
from .quadrant import (
    EPS0, corner_lattice_rows, degeneracy_inequality, make_splicing,
    verify_retraction, rotating_projector,
)
from .records import (
    antipodal_record, circle_quotient_record, corner_circle_record, even_mode_record,
    gluing_record, gluing_x_distance, real_slice_pullback,
)
from .sccalc import (
    ScMap, chain_rule_defect, fd_derivative, frechet_second_difference, sc1_ratio, shift_map,
    sup_scale, triangle_wave,
)
from .scalespace import (
    DEFAULT_GRID, DEFAULT_WEIGHTS, GridConfig, WeightSequence, band_limited_pair, level_norm,
)
from .serialize import grid_dict, weights_dict

SCHEMA = 1
PHI_QUARTER = 51.8798  # quoted digits of the profile at |a| = 1/4


def rng_for(seed, name):
    """Independent generator for component ``name`` under the run seed."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1),
                                                         zlib.crc32(name.encode())]))


@dataclass(frozen=True)
class RunConfig:
    """Everything a suite may read.  ``scale`` shrinks sample counts (1.0 = full)."""

    suite: str = "gluing"
    grid: GridConfig = DEFAULT_GRID
    weights: WeightSequence = DEFAULT_WEIGHTS
    moduli: tuple = (0.2, 0.22, 0.249)
    angles: int = 4
    n: int = 8
    pairs: int = 20
    samples: int = 1000
    seed: int = 0
    scale: float = 1.0
    out: str = None

    def count(self, full, least=1):
        return max(least, int(round(full * self.scale)))


# --------------------------------------------------------------- profile --

def suite_profile(cfg):
    rep = Report("profile")
    rng = rng_for(cfg.seed, "profile")
    phi = EXPONENTIAL.forward(0.25)
    rep.add("phi_quarter_closed_form", abs(phi - (np.exp(4.0) - np.e)), 1e-9, 1,
            "Section: gluing parameters, profile")
    rep.add("phi_quarter_quoted", abs(phi - PHI_QUARTER), 1e-4, 1, "Section: gluing parameters")
    mods = rng.uniform(0.0, 0.25, cfg.count(10000))
    mods = mods[mods > 0]
    low = float(np.min(EXPONENTIAL.forward(mods)))
    rep.add("phi_exceeds_51", max(0.0, 51.0 - low), 0.0, len(mods),
            "Section: gluing parameters, phi(|a|) > 51")
    s = np.linspace(0.05, 1.0, 200)
    for prof in (EXPONENTIAL, INVERSE_TEST):
        rt = float(np.max(np.abs(prof.inverse(prof.forward(s)) - s)))
        rep.add(f"inverse_round_trip[{prof.kind}]", rt, 1e-12, len(s), "Section: gluing parameters")
    rep.add("phi_one_zero", abs(EXPONENTIAL.forward(1.0)), 0.0, 1, "Section: gluing parameters")
    return rep


def suite_cutoff(cfg):
    rep = Report("cutoff")
    rng = rng_for(cfg.seed, "cutoff")
    n = cfg.count(10000)
    for name, beta in (("default", DEFAULT_CUTOFF), ("sharp2", CutoffModel(2.0))):
        lo = rng.uniform(-5, -1, n)
        hi = rng.uniform(1, 5, n)
        mid = rng.uniform(-1.5, 1.5, n)
        rep.add(f"one_left[{name}]", float(np.max(np.abs(beta(lo) - 1.0))), 0.0, n,
                "Section: gluing, cut-off function")
        rep.add(f"zero_right[{name}]", float(np.max(np.abs(beta(hi)))), 0.0, n,
                "Section: gluing, cut-off function")
        sym = float(np.max(np.abs(beta(mid) + beta(-mid) - 1.0)))
        rep.add(f"symmetry[{name}]", sym, 1e-12, n, "Section: gluing, cut-off function")
        d = np.diff(beta(np.linspace(-1, 1, 2001)))
        rep.add(f"monotone[{name}]", float(max(0.0, np.max(d))), 0.0, 2000,
                "Section: gluing, cut-off function")
    return rep


# ---------------------------------------------------------------- gluing --

def gluing_params(moduli, angles, rng=None):
    fr = np.arange(angles) / angles if rng is None else rng.uniform(size=angles)
    return [GluingParameter.polar(m, f) for m in moduli for f in fr]


def _glued_diff(v, w):
    return GluedFunction(v.param, w.values - v.values, v.h)


def gluing_sc1_point(modulus, angle, rng, grid=DEFAULT_GRID, weights=None):
    """sc1 remainder ratios of the gluing retraction at one base point."""
    g = grid_for_modulus(modulus - 0.003, GridConfig(min(grid.n_theta, 16), grid.h_s, grid.s_cut,
                                                     grid.N))
    chart = GluingChart(g, weights or DEFAULT_WEIGHTS)
    a = GluingParameter.polar(modulus, angle)
    u = band_limited_pair(rng, g, center=a.R / 2, support=6.0)
    du = band_limited_pair(rng, g, center=a.R / 2, support=4.0)
    f = chart.retraction(min_modulus=0.0)
    x = chart.to_vec(a, u)
    h = chart.to_vec(1e-3 * np.exp(2j * np.pi * rng.uniform()), du)
    fd = fd_derivative(f, x, h)
    return sc1_ratio(f, x, h, Dfh=fd.estimate), fd


def suite_gluing(cfg, parts=("section", "zero", "sc1", "imprinting")):
    rep = Report("gluing")
    rng = rng_for(cfg.seed, "gluing")
    grid = cfg.grid
    params = gluing_params(cfg.moduli, cfg.angles)
    if "section" in parts:
        n_pairs = cfg.count(cfg.pairs)
        rel = idem = 0.0
        for _ in range(n_pairs):
            u = band_limited_pair(rng, grid)
            for a in params:
                v = preglue(a, u)
                _, w = section_H(v)
                v2 = preglue(a, w)
                rel = max(rel, level_norm(_glued_diff(v, v2), 0) / max(level_norm(v, 0), 1e-300))
                r1 = retract(a, u)
                r2 = retract(*r1)
                idem = max(idem, float(np.max(np.abs(
                    np.concatenate([r2[1].flat() - r1[1].flat()])))))
        n = n_pairs * len(params)
        rep.add("section_identity_H3_rel", rel, 1e-10, n, "Proposition: gluing section H")
        rep.add("retraction_idempotent", idem, 1e-10, n, "Proposition: gluing retraction")
    if "zero" in parts:
        bad = 0
        n0 = cfg.count(cfg.pairs)
        for _ in range(n0):
            u = band_limited_pair(rng, grid)
            v = preglue(0j, u)
            same = all(np.array_equal(p, q) for p, q in
                       ((v.c, u.c), (v.plus.r, u.plus.r), (v.minus.r, u.minus.r)))
            bad += not same
        rep.add("recovery_at_zero_bitwise", float(bad), 0.0, n0, "Section: pre-gluing, a = 0")
    if "sc1" in parts:
        mods = np.linspace(0.18, 0.249, cfg.count(5, least=2))
        worst = np.inf
        orders, sc1 = [], []
        for m in mods:
            r, fd = gluing_sc1_point(float(m), float(rng.uniform()), rng, grid, cfg.weights)
            worst = min(worst, r.slope if r.verdict else -1.0)
            orders.append(fd.order)
            sc1.append(r.to_dict())
        rep.add("sc1_slope", max(0.0, 0.5 - worst), 0.0, len(mods),
                "Theorem: gluing retraction is sc-smooth (consistency evidence)")
        rep.extras["sc1_min_slope"] = worst
        rep.extras["fd_orders"] = [float(o) for o in orders]
        rep.extras["sc1_reports"] = sc1
    if "imprinting" in parts:
        rec = gluing_record(grid, moduli=(0.19, 0.21), name="gluing")
        rep.extend(verify_imprinting(rec, cfg.count(10, 3), rng), "imprinting.")
        rep.extend(submersion_imprinting_verify(rec, cfg.count(8, 3), rng), "submersion.")
    return rep


# ---------------------------------------------------------------- sccalc --

def _smooth_periodic(n, rng, modes=4):
    t = np.arange(n) / n
    u = np.zeros(n)
    for k in range(1, modes + 1):
        u += rng.normal() / k**2 * np.cos(2 * np.pi * k * t + rng.uniform(0, 2 * np.pi))
    return u


def suite_sccalc(cfg, parts=("shift", "chain")):
    rep = Report("sccalc")
    rng = rng_for(cfg.seed, "sccalc")
    if "shift" in parts:
        n = 2**13
        tri = triangle_wave(np.arange(n) / n)
        ratios = frechet_second_difference(tri, [2.0**-k for k in range(1, 13)])
        rep.add("triangle_second_difference", max(0.0, 1.0 - min(ratios)), 0.0, len(ratios),
                "Exercise: shift map not Frechet differentiable")
        rep.extras["triangle_ratios"] = ratios
        m = 64
        Phi = shift_map(m)
        worst = np.inf
        for _ in range(cfg.count(3)):
            x = np.concatenate([[rng.uniform()], _smooth_periodic(m, rng)])
            h = np.concatenate([[rng.normal()], _smooth_periodic(m, rng)])
            r = sc1_ratio(Phi, x, h)
            worst = min(worst, r.slope if r.verdict else -1.0)
        rep.add("shift_smooth_sc1_slope", max(0.0, 0.9 - worst), 0.0, cfg.count(3),
                "Exercise: shift map is sc1")
        rep.extras["shift_min_slope"] = worst
    if "chain" in parts:
        for name, (f, g, samples, rel) in chain_corpus(rng, cfg).items():
            c = chain_rule_defect(f, g, samples, relative=rel)
            rep.add(f"chain_rule[{name}]", c.max_defect, 1e-6, len(samples), "Theorem: sc chain rule")
    return rep


def chain_corpus(rng, cfg):
    """Catalogued ``(f, g, samples, relative)`` for the chain-rule check."""
    out = {}
    A = rng.normal(size=(4, 4))
    f = ScMap(lambda x: np.sin(x) + x * x, name="sin+sq")
    g = ScMap(lambda x: A @ np.exp(0.3 * x), name="Aexp")
    out["smooth_R4"] = (f, g, [(rng.normal(size=4), rng.normal(size=4)) for _ in range(4)], False)
    m = 64
    sh = shift_map(m)
    cube = ScMap(lambda u: u**3, sup_scale(m), sup_scale(m), name="cube")
    samples = [(np.concatenate([[rng.uniform()], _smooth_periodic(m, rng)]),
                np.concatenate([[rng.normal()], _smooth_periodic(m, rng)])) for _ in range(3)]
    out["shift_then_cube"] = (sh, cube, samples, False)
    mod = 0.22
    g0 = grid_for_modulus(mod - 0.003, GridConfig(16, cfg.grid.h_s, cfg.grid.s_cut, cfg.grid.N))
    chart = GluingChart(g0)
    r = chart.retraction(min_modulus=0.0)
    sq = ScMap(lambda x: np.array([x @ x]), name="norm2")
    gs = []
    for _ in range(2):
        a = GluingParameter.polar(mod, rng.uniform())
        u = band_limited_pair(rng, g0, center=a.R / 2, support=6.0)
        du = band_limited_pair(rng, g0, center=a.R / 2, support=4.0)
        gs.append((chart.to_vec(a, u), chart.to_vec(1e-3 * np.exp(2j * np.pi * rng.uniform()), du)))
    out["gluing_retraction_then_norm2"] = (r, sq, gs, True)
    return out


# -------------------------------------------------------------- quadrant --

def suite_quadrant(cfg):
    rep = Report("quadrant")
    rng = rng_for(cfg.seed, "quadrant")
    total = bad = 0
    for n in range(cfg.n + 1):
        for m in range(cfg.n + 1 - n):
            rows = corner_lattice_rows(n, m)
            total += len(rows)
            bad += sum(not r[2] for r in rows)
    rep.add("corner_lattice_additivity", float(bad), 0.0, total,
            "Lemma: degeneracy index of products")
    k = 2
    _, r = make_splicing("rotating_rank1", k=k)
    ns = cfg.count(cfg.samples)
    xs = []
    for _ in range(ns):
        a = np.where(rng.uniform(size=k) < 0.4, 0.0, rng.uniform(0, 0.25, k))
        xs.append(np.concatenate([a, rng.normal(size=2)]))
    rr = verify_retraction(r, xs)
    rep.add("splicing_preserves_degeneracy", 0.0 if rr.degeneracy_preserved else 1.0, 0.0, ns,
            "Lemma: retractions preserve degeneracy")
    rep.add("splicing_idempotent", rr.idempotence, 1e-12, ns, "Definition: splicing")
    tame = verify_retraction(r, xs[:cfg.count(20)], check_tame=True)
    rep.add("splicing_tame", 0.0 if tame.tame else 1.0, 0.0, len(xs[:cfg.count(20)]),
            "Definition: tame retraction")
    scen = {
        "diagonal": (lambda p: np.array([p[0], p[0]]), 1, 2),
        "slice": (lambda p: np.array([p[0], 1.0]), 1, 2),
        "line_into_corner": (lambda p: np.array([p[0] ** 2, 0.0, p[0]]), 0, 2),
        "face": (lambda p: np.array([p[0], 0.0, p[1]]), 1, 2),
    }
    for name, (emb, mn, an) in scen.items():
        pts = []
        for _ in range(cfg.count(200)):
            p = np.array([0.0 if rng.uniform() < 0.3 else rng.uniform(0, 2), rng.normal()])
            if mn == 0:
                p[0] = rng.normal() if rng.uniform() < 0.7 else 0.0
            pts.append(p)
        ok, _ = degeneracy_inequality(emb, mn, an, pts)
        rep.add(f"degeneracy_inequality[{name}]", 0.0 if ok else 1.0, 0.0, len(pts),
                "Proposition: degeneracy inequality for sub-M-polyfolds")
    return rep


def corner_lattice_csv(n, m):
    lines = ["coords,d,passed"]
    for bits, d, ok in corner_lattice_rows(n, m):
        lines.append(f"{''.join(str(int(b)) for b in bits)},{d},{int(ok)}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ submersion --

def suite_submersion(cfg):
    rep = Report("submersion")
    rng = rng_for(cfg.seed, "submersion")
    n = cfg.count(cfg.samples)
    w = product_projection_witness()
    xs = [(rng.normal(size=2), rng.normal(size=3)) for _ in range(n)]
    zs = [rng.normal(size=2) for _ in range(n)]
    rep.extend(submersion_verify(w, xs, zs, name="product"), "product.")
    B = rng.normal(size=(2, 3))
    f = lambda z: np.tanh(B @ z)  # noqa: E731
    zs3 = [rng.normal(size=3) for _ in range(n)]
    z2s = [rng.normal(size=3) for _ in range(n)]
    _, fr = fibered_product_submersion(w, f, xs, zs3, z2s)
    rep.extend(fr, "fibered.")
    # quadrant factor: [0, inf) x R -> [0, inf) with degeneracy
    wq = SubmersionWitness(lambda x: x[:1], lambda x, z: np.concatenate([z, x[1:]]))
    qx, qz = [], []
    for _ in range(n):
        v = 0.0 if rng.uniform() < 0.3 else rng.exponential()
        qx.append(np.array([v, rng.normal()]))
        qz.append(np.array([0.0 if rng.uniform() < 0.3 else rng.exponential()]))
    deg = lambda x: int(x[0] <= EPS0)  # noqa: E731
    rep.extend(submersion_verify(wq, qx, qz, degeneracy_x=deg, degeneracy_z=deg, name="corner"),
               "corner.")
    return rep


# --------------------------------------------------------------- imprint --

def _collar_records(grid, names=("L", "M", "R")):
    return [gluing_record(grid, moduli=(0.19, 0.21), name=nm, sc1=False) for nm in names]


def plumbing_associativity(cfg, n_tuples=None, n_canonical=None, rng=None):
    """Triple plumbing L[-|+]M[-|+]R bracketed both ways."""
    rng = rng_for(cfg.seed, "plumbing") if rng is None else rng
    L, M, R = _collar_records(cfg.grid)
    LM = plumb(L, M, "minus", "plus")
    A = plumb(LM.record, R, (2, "minus"), "plus")
    MR = plumb(M, R, "minus", "plus")
    B = plumb(L, MR.record, "minus", (1, "plus"))
    pool = 12
    xs = [[rec.sample_x(rng) for _ in range(pool)] for rec in (L, M, R)]
    n_tuples = cfg.count(cfg.samples) if n_tuples is None else n_tuples
    n_canonical = cfg.count(40) if n_canonical is None else n_canonical
    adjM, adjR = M.restrictions["plus"].adjust, R.restrictions["plus"].adjust
    pL = [L.restrictions["minus"].pbar(x) for x in xs[0]]
    pM = M.restrictions["minus"].pbar

    disagree = members = compared = 0
    canon = 0.0
    for _ in range(n_tuples):
        i, j, k = rng.integers(pool, size=3)
        x1, x2, x3 = xs[0][i], xs[1][j], xs[2][k]
        mode = rng.integers(3)
        if mode > 0:
            x2 = adjM(x2, pL[i])
            x3 = adjR(x3, pM(x2) * (1.0001 if mode == 2 else 1.0))
        in_a = LM.member_x((x1, x2)) and A.member_x(((x1, x2), x3))
        in_b = MR.member_x((x2, x3)) and B.member_x((x1, (x2, x3)))
        disagree += in_a != in_b
        members += in_a
        if in_a and in_b and compared < n_canonical:
            compared += 1
            ya = A.record.canonical(A.record.oplus(((x1, x2), x3)))
            yb = B.record.canonical(B.record.oplus((x1, (x2, x3))))
            canon = max(canon, gluing_x_distance(ya[0][0], yb[0]),
                        gluing_x_distance(ya[0][1], yb[1][0]), gluing_x_distance(ya[1], yb[1][1]))
    rep = Report("plumbing_associativity")
    ref = "Proposition: fiber products of fiber products"
    rep.add("membership_agreement", float(disagree), 0.0, n_tuples, ref)
    rep.add("canonical_agreement", canon, 1e-12, compared, ref)
    rep.extras["members"] = int(members)
    return rep


def _imprint_gluing(cfg, rng):
    rep = Report("imprint.gluing")
    rec = gluing_record(cfg.grid, moduli=(0.19, 0.21))
    rep.extend(verify_imprinting(rec, cfg.count(10, 3), rng))
    rep.extend(submersion_imprinting_verify(rec, cfg.count(8, 3), rng), "submersion.")
    return rep


def _imprint_circle(cfg, rng):
    rep = Report("imprint.circle")
    c, a = circle_quotient_record(), antipodal_record()
    rep.extend(verify_imprinting(c, cfg.count(200), rng), "circle.")
    rep.extend(verify_imprinting(a, cfg.count(200), rng), "antipodal.")
    _, cr = compose_imprintings(c, a, n_samples=cfg.count(200), rng=rng)
    rep.extend(cr, "compose.")
    return rep


def _imprint_product(cfg, rng):
    rep = Report("imprint.product")
    c, a = circle_quotient_record(), antipodal_record()
    rep.extend(verify_imprinting(product_imprinting(c, a), cfg.count(100), rng), "product.")
    rep.extend(verify_imprinting(disjoint_union_imprinting(c, a), cfg.count(100), rng), "coproduct.")
    return rep


def _imprint_pullback(cfg, rng):
    rep = Report("imprint.pullback")
    rec = gluing_record(cfg.grid, moduli=(0.2, 0.22), angles=(0.0, 0.03, 0.47, 0.5),
                        restrictions=False, sc1=False)
    rep.extend(verify_imprinting(real_slice_pullback(rec), cfg.count(6, 3), rng), "real_slice.")
    rep.extend(verify_imprinting(real_slice_pullback(rec, 0.22), cfg.count(4, 2), rng), "fixed_a.")
    return rep


def _imprint_even(cfg, rng):
    rep = Report("imprint.even_modes")
    base = gluing_record(cfg.grid, moduli=(0.2, 0.22), restrictions=False, sc1=False)
    rep.extend(verify_imprinting(even_mode_record(base), cfg.count(4, 2), rng))
    return rep


def _imprint_corner(cfg, rng):
    rep = Report("imprint.corner")
    rec = corner_circle_record()
    rep.extend(verify_imprinting(rec, cfg.count(100), rng))
    rep.extend(submersion_imprinting_verify(
        rec, cfg.count(100), rng, corner_map=(lambda x: x[0], lambda v: int(v <= EPS0))),
        "submersion.")
    return rep


def _imprint_plumbing(cfg, rng):
    rep = Report("imprint.plumbing")
    L, M, _ = _collar_records(cfg.grid)
    LM = plumb(L, M, "minus", "plus")
    rep.extend(verify_imprinting(LM.record, cfg.count(6, 3), rng, check_sc1=False), "LM.")
    rep.extend(plumbing_associativity(cfg, cfg.count(200), cfg.count(10), rng), "assoc.")
    return rep


IMPRINT_CASES = {
    "gluing": _imprint_gluing, "circle": _imprint_circle, "product": _imprint_product,
    "pullback": _imprint_pullback, "even_modes": _imprint_even, "corner": _imprint_corner,
    "plumbing": _imprint_plumbing,
}


def suite_imprint(cfg, case=None):
    cases = list(IMPRINT_CASES) if case is None else [case]
    rep = Report("imprint" if case is None else f"imprint.{case}")
    for c in cases:
        sub = IMPRINT_CASES[c](cfg, rng_for(cfg.seed, f"imprint.{c}"))
        rep.extend(sub, "" if case else f"{c}.")
    return rep


# ---------------------------------------------------------------- bundle --

SB_MAPS = {"identity": (identity_sb, 0), "smoothing": (smoothing_sb, 0),
           "smoothing_plus": (smoothing_sb, 1)}


def bilevel_tables(cfg):
    out = {}
    for name, (mk, gain) in SB_MAPS.items():
        out[name] = bilevel_check(mk(), BiFilteredSpace(3), gain=gain,
                                  n_linearity=cfg.count(cfg.samples), seed=cfg.seed)
    return out


def bilevel_csv(rows):
    lines = ["m,k,preserved,norm_ratio"]
    for m, k, ok, g in rows:
        lines.append(f"{m},{k},{int(ok)},{g!r}")
    return "\n".join(lines) + "\n"


def sb_plumbing_associativity(cfg, rng, n=None):
    L, M, R = (gluing_sb_record(r, cfg.grid) for r in _collar_records(cfg.grid))
    LM, _ = sb_plumb(L, M, "minus", "plus")
    A, ha = sb_plumb(LM, R, (2, "minus"), "plus")
    MR, _ = sb_plumb(M, R, "minus", "plus")
    B, hb = sb_plumb(L, MR, "minus", (1, "plus"))
    n = cfg.count(6, 2) if n is None else n
    worst = 0.0
    agree = 0
    for _ in range(n):
        X = A.record.sample_x(rng)
        (x1, x2), x3 = X
        Xb = (x1, (x2, x3))
        agree += hb.member_x(Xb)
        ya = A.record.canonical(A.record.oplus(X))
        yb = B.record.canonical(B.record.oplus(Xb))
        for p, q in ((ya[0][0], yb[0]), (ya[0][1], yb[1][0]), (ya[1], yb[1][1])):
            worst = max(worst, gluing_x_distance(p[0], q[0]), vdist(p[1], q[1]))
    rep = Report("sb_plumbing")
    ref = "Proposition: SB fiber products of fiber products"
    rep.add("membership_agreement", float(n - agree), 0.0, n, ref)
    rep.add("canonical_agreement", worst, 1e-12, n, ref)
    rep.extend(sb_imprint_verify(LM, cfg.count(4, 2), cfg.count(5, 2), rng), "LM.")
    return rep


def suite_bundle(cfg):
    rep = Report("bundle")
    rng = rng_for(cfg.seed, "bundle")
    ref = "Definition: strong bundle filtrations"
    tables = bilevel_tables(cfg)
    for name, (r, rows) in tables.items():
        rep.extend(r, f"{name}.")
        rep.add(f"{name}.diagonal_implies_double", 0.0 if diagonal_implies_double(rows) else 1.0,
                0.0, len(rows), ref)
    rough, rows = bilevel_check(rough_multiplier_sb(), BiFilteredSpace(3), n_linearity=10,
                                seed=cfg.seed)
    flagged = [(m, k) for m, k, ok, _ in rows if not ok]
    rep.add("rough_multiplier_flagged", 0.0 if (0, 1) in flagged else 1.0, 0.0, len(rows), ref)
    sref = "Definition: sc and sc+ sections"
    for name, s, want in (("zero", zero_section, "sc_plus"),
                          ("smooth_constant", smooth_constant_section, "sc_plus"),
                          ("diagonal", diagonal_section, "sc"),
                          ("level1_only", sharp_constant_section(1), "neither")):
        v, _ = classify_section(s, seed=cfg.seed)
        rep.add(f"section_class[{name}]", 0.0 if v == want else 1.0, 0.0, 1, sref)
    # SB retractions
    ident = lambda x, h: (x, h)  # noqa: E731
    samp = [(rng.normal(size=3), rng.normal(size=2)) for _ in range(cfg.count(50))]
    rep.extend(sb_retraction_check(ident, samp, name="identity")[0], "sbr_identity.")
    samp = [((rng.uniform(0, 0.25, 1) * (rng.uniform() > 0.3), rng.normal(size=2)), rng.normal(size=2))
            for _ in range(cfg.count(200))]
    rep.extend(sb_retraction_check(splicing_bundle_retraction(lambda a: rotating_projector(a, 1)),
                                   samp, name="splicing")[0], "sbr_splicing.")
    g = grid_for_modulus(0.22, cfg.grid)
    gs = []
    for _ in range(cfg.count(4, 2)):
        a = GluingParameter.polar(0.22, rng.uniform())
        gs.append(((a, band_limited_pair(rng, g, center=a.R / 2, support=6.0)),
                   band_limited_pair(rng, g, center=a.R / 2, support=6.0)))
    dist = lambda p, q: gluing_x_distance(p, q) if isinstance(p, tuple) else vdist(p, q)  # noqa: E731
    rep.extend(sb_retraction_check(gluing_bundle_retraction(), gs, distance=dist,
                                   name="gluing")[0], "sbr_gluing.")
    # VBL fiber products: coordinate projections of trivial bundles R x R^2 -> R x R
    P = np.array([[1.0, 0.0]])
    dim = linear_fiber_dimension(P, P)
    rep.add("vbl_fiber_product_dimension", float(abs(dim - 3)), 0.0, 1,
            "Definition: fiber products of VBL sets")
    S = splicing_sb_record()
    rep.extend(sb_imprint_verify(S, cfg.count(20), cfg.count(cfg.samples), rng), "sb_splicing.")
    rep.extend(sb_imprint_verify(sb_product(S, S), cfg.count(10), cfg.count(100), rng), "sb_product.")
    rep.extend(sb_imprint_verify(sb_coproduct(S, S), cfg.count(10), cfg.count(100), rng),
               "sb_coproduct.")
    Lsb = gluing_sb_record(_collar_records(cfg.grid, ("L",))[0], cfg.grid)
    rep.extend(verify_bundle_projection(Lsb, cfg.count(5, 2), rng), "projection.")
    rep.extend(sb_plumbing_associativity(cfg, rng), "sb_plumbing.")
    return rep


# --------------------------------------------------------------- functor --

def functor_corpus(cfg, rng):
    S = sphere_embedding()
    ops = extend_to_manifold(GLUING_FUNCTOR, S)
    grid = GridConfig(cfg.grid.n_theta, cfg.grid.h_s, min(cfg.grid.s_cut, 30.0), 3)
    on = [ops.element(shell_valued_pair(rng, S, grid)).rep for _ in range(cfg.count(4, 2))]
    shell = [shell_valued_pair(rng, S, grid) for _ in range(cfg.count(2))]
    pairs = [(random_polynomial_morphism(rng, 3, 3), random_polynomial_morphism(rng, 3, 2))
             for _ in range(cfg.count(3))]
    pairs += [(linear_morphism(rng.normal(size=(3, 3))), linear_morphism(rng.normal(size=(3, 3))))
              for _ in range(cfg.count(3))]
    return ops, grid, on, shell, pairs


def suite_functor(cfg, checks=("axioms", "retraction", "transition")):
    rep = Report("functor")
    rng = rng_for(cfg.seed, "functor")
    ops, grid, on, shell, pairs = functor_corpus(cfg, rng)
    if "axioms" in checks:
        f = random_polynomial_morphism(rng, 3, 3, name="q")
        local = [(f, far_bump_morphism(f), u) for u in on]
        rep.extend(verify_functor_axioms(GLUING_FUNCTOR, on + shell, pairs, local), "axioms.")
        t = identify(on[0], "N")
        rep.add("identification_round_trip", 0.0 if unidentify(t) is on[0] else 1.0, 0.0, 1,
                "Section: construction functors, natural identification")
    if "retraction" in checks:
        for tag in ("sphere", "circle", "torus"):
            emb = EMBEDDINGS[tag]()
            rep.extend(verify_embedding(emb, rng, cfg.count(cfg.samples)), f"{tag}.")
            rep.extend(verify_manifold_extension(extend_to_manifold(GLUING_FUNCTOR, emb), rng,
                                                 cfg.count(4, 2), grid), f"{tag}.")
        R = sphere_sb_retraction(ops)
        samp = [(shell_valued_pair(rng, ops.emb, grid), band_limited_pair(rng, grid))
                for _ in range(cfg.count(3, 2))]
        rep.extend(sb_retraction_check(R, samp, distance=element_distance, name="sphere_sb")[0],
                   "sb_sphere.")
    if "transition" in checks:
        rep.extend(verify_transition(GLUING_FUNCTOR, rng, cfg.count(5, 2), grid), "transition.")
    return rep


# ---------------------------------------------------------------- runner --

def _all(cfg):
    rep = Report("all")
    for name in ("profile", "cutoff", "gluing", "sccalc", "quadrant", "submersion", "imprint",
                 "bundle", "functor"):
        rep.extend(SUITES[name](cfg), f"{name}.")
    return rep


SUITES = {
    "profile": suite_profile, "cutoff": suite_cutoff, "gluing": suite_gluing,
    "sccalc": suite_sccalc, "quadrant": suite_quadrant, "submersion": suite_submersion,
    "imprint": suite_imprint, "bundle": suite_bundle, "functor": suite_functor,
    "plumbing": lambda cfg: plumbing_associativity(cfg), "all": _all,
}


class UnknownSuite(KeyError):
    pass


def resolve(name):
    if name in SUITES:
        return SUITES[name]
    if name.startswith("imprint."):
        case = name.split(".", 1)[1]
        if case in IMPRINT_CASES:
            return lambda cfg: suite_imprint(cfg, case)
    raise UnknownSuite(name)


def suite_names():
    return sorted(SUITES) + [f"imprint.{c}" for c in IMPRINT_CASES]


def run_suite(cfg):
    rep = resolve(cfg.suite)(cfg)
    rep.name = cfg.suite
    return rep


def environment(cfg):
    return {"grid": grid_dict(cfg.grid), "weights": weights_dict(cfg.weights), "seed": cfg.seed,
            "moduli": list(cfg.moduli), "scale": cfg.scale, "backend": _accel.backend_name()}


def verdict_report(cfg, rep):
    checks = [c.to_dict() for c in rep.checks]
    n_pass = sum(c["pass"] for c in checks)
    return {
        "schema": SCHEMA,
        "suite": cfg.suite,
        "environment": environment(cfg),
        "checks": checks,
        "extras": _jsonable(rep.extras),
        "totals": {"checks": len(checks), "passed": n_pass, "failed": len(checks) - n_pass},
        "pass": n_pass == len(checks),
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items())}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if np.isfinite(v) else str(v)
    if isinstance(x, (np.integer, int, bool, np.bool_)):
        return x.item() if hasattr(x, "item") else x
    return x if isinstance(x, str) or x is None else repr(x)


def dumps_report(obj):
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1, allow_nan=False) + "\n"


def merge_reports(objs):
    totals = {"checks": 0, "passed": 0, "failed": 0}
    files = []
    for name, o in objs:
        t = o["totals"]
        for k in totals:
            totals[k] += int(t[k])
        files.append({"file": name, "suite": o.get("suite"), **t})
    return {"schema": SCHEMA, "files": files, "totals": totals, "pass": totals["failed"] == 0}


__all__ = [
    "SCHEMA", "rng_for", "RunConfig", "SUITES", "IMPRINT_CASES", "UnknownSuite", "resolve",
    "suite_names", "run_suite", "verdict_report", "dumps_report", "merge_reports",
    "environment", "gluing_params", "gluing_sc1_point", "chain_corpus", "plumbing_associativity",
    "sb_plumbing_associativity", "corner_lattice_csv", "bilevel_tables", "bilevel_csv",
    "functor_corpus", "suite_profile", "suite_cutoff", "suite_gluing", "suite_sccalc",
    "suite_quadrant", "suite_submersion", "suite_imprint", "suite_bundle", "suite_functor",
]
