import numpy as np
import pytest

from scglue.imprint import (
    ImprintingError, LocalSection, Restriction, SubmersionWitness, compose_imprintings,
    disjoint_union_imprinting, fibered_product_submersion, identity_record, plumb,
    product_imprinting, product_projection_witness, pullback_admissible,
    submersion_imprinting_verify, submersion_verify, verify_imprinting, ImprintingRecord,
)
from scglue.records import (
    antipodal_record, circle_quotient_record, corner_circle_record, even_mode_record,
    gluing_record, real_slice_pullback,
)
from scglue.scalespace import GridConfig


def _vec_identity():
    return identity_record(lambda r: r.normal(size=3))


def test_identity_record_has_zero_defects(rng):
    rep = verify_imprinting(_vec_identity(), 20, rng, check_sc1=False)
    assert rep.passed and all(c.defect == 0.0 for c in rep.checks)


def test_circle_quotient_and_chain(rng):
    c, a = circle_quotient_record(), antipodal_record()
    assert verify_imprinting(c, 200, rng).passed
    _, rep = compose_imprintings(c, a, n_samples=200, rng=rng)
    assert rep.passed and rep.check("retracts_agree").defect <= 1e-12


def test_compose_with_identity_is_the_record(rng):
    c = circle_quotient_record()
    ident = identity_record(lambda r: float(r.uniform()), distance=c.y_distance)
    comp, rep = compose_imprintings(c, ident, n_samples=50, rng=rng)
    assert rep.passed
    for x in rng.uniform(-3, 3, 20):
        assert comp.oplus(x) == c.oplus(x)


def test_product_and_disjoint_union(rng):
    c = circle_quotient_record()
    prod = product_imprinting(c, _vec_identity())
    assert verify_imprinting(prod, 50, rng, check_sc1=False).passed
    x = (1.3, np.array([1.0, 2.0, 3.0]))
    y = prod.oplus(x)
    assert y[0] == pytest.approx(0.3) and np.array_equal(y[1], x[1])
    du = disjoint_union_imprinting(c, antipodal_record())
    assert verify_imprinting(du, 100, rng).passed
    assert du.oplus((1, 0.3))[0] == 1


def test_pullback_along_identity(rng):
    c = circle_quotient_record()
    pb = pullback_admissible(c, lambda y: True, lambda x: x, rng=rng)
    for x in rng.uniform(-3, 3, 20):
        assert pb.oplus(x) == c.oplus(x) and pb.retract(x) == c.retract(x)


def test_pullback_rejects_bad_subretraction(rng):
    c = circle_quotient_record()
    with pytest.raises(ImprintingError):
        pullback_admissible(c, lambda y: True, lambda x: 2 * x, rng=rng)


def test_gluing_record_and_slices(rng):
    # |a| = 0.24 is past the collar bound, so this record carries no restrictions
    rec = gluing_record(GridConfig(), moduli=(0.2, 0.24), include_zero=True, restrictions=False)
    assert verify_imprinting(rec, 5, rng).passed
    rec = gluing_record(GridConfig(), moduli=(0.19, 0.21))
    assert submersion_imprinting_verify(rec, 4, rng).passed
    base = gluing_record(GridConfig(), moduli=(0.2, 0.22), angles=(0.0, 0.03, 0.47, 0.5),
                         restrictions=False, sc1=False)
    once = real_slice_pullback(base)
    assert verify_imprinting(once, 3, rng).passed
    twice = real_slice_pullback(once)
    for _ in range(3):
        x = once.sample_x(rng)
        assert once.x_distance(once.retract(x), twice.retract(x)) <= 1e-12
    assert verify_imprinting(even_mode_record(base), 2, rng).passed


def test_projection_submersion_is_exact(rng):
    w = product_projection_witness()
    xs = [(rng.normal(size=2), rng.normal(size=2)) for _ in range(50)]
    zs = [rng.normal(size=2) for _ in range(50)]
    rep = submersion_verify(w, xs, zs)
    assert rep.passed and max(c.defect for c in rep.checks) == 0.0


def test_parabola_fibered_product(rng):
    w = SubmersionWitness(lambda x: x[:1], lambda x, z: np.concatenate([z, x[1:]]))
    f = lambda z: z**2  # noqa: E731
    xs = [rng.normal(size=2) for _ in range(50)]
    zs = [rng.normal(size=1) for _ in range(50)]
    fp, rep = fibered_product_submersion(w, f, xs, zs, zs[::-1])
    assert rep.passed and rep.check("sigma_idempotent").defect == 0.0
    x, z = fp.sigma((xs[0], zs[0]))
    assert x[0] == z[0] ** 2 and x[1] == xs[0][1]


def test_constant_target_gives_fiber_times_z(rng):
    w = product_projection_witness()
    y0 = np.array([0.5, -1.0])
    xs = [(rng.normal(size=2), rng.normal(size=1)) for _ in range(20)]
    zs = [rng.normal(size=3) for _ in range(20)]
    fp, rep = fibered_product_submersion(w, lambda z: y0, xs, zs, zs[::-1])
    assert rep.passed
    (x, z) = fp.sigma((xs[0], zs[0]))
    assert np.array_equal(x[0], y0) and np.array_equal(x[1], xs[0][1])


def test_corner_pattern_submersion(rng):
    rec = corner_circle_record()
    rep = submersion_imprinting_verify(rec, 100, rng,
                                       corner_map=(lambda x: x[0], lambda v: int(v <= 1e-12)))
    assert rep.passed


def _point_record(name):
    """R^2 with a restriction to a single point (constant)."""
    rec = identity_record(lambda r: r.normal(size=2), name=name)
    const = Restriction(lambda x: np.zeros(1), lambda x, t: x)
    return ImprintingRecord(rec.name, rec.oplus, rec.sections, rec.sample_x,
                            restrictions={"pt": const})


def test_plumbing_along_a_point_is_the_product(rng):
    L, R = _point_record("L"), _point_record("R")
    fp = plumb(L, R, "pt", "pt", rng=rng)
    xs = [(L.sample_x(rng), R.sample_x(rng)) for _ in range(20)]
    assert all(fp.member_x(x) for x in xs)
    assert verify_imprinting(fp.record, samples=xs, check_sc1=False).passed


def test_plumbing_gluing_records(rng):
    grid = GridConfig()
    L = gluing_record(grid, moduli=(0.19, 0.21), name="L", sc1=False)
    R = gluing_record(grid, moduli=(0.19, 0.21), name="R", sc1=False)
    fp = plumb(L, R, "minus", "plus", rng=rng)
    x1, x2 = L.sample_x(rng), R.sample_x(rng)
    assert not fp.member_x((x1, x2))
    assert fp.member_x(fp.sigma((x1, x2)))
    assert verify_imprinting(fp.record, 3, rng, check_sc1=False).passed
    with pytest.raises(ImprintingError):
        plumb(L, R, "middle", "plus")


def test_uncovered_point_raises():
    rec = ImprintingRecord("empty", lambda x: x, (LocalSection(lambda y: False, lambda y: y),),
                           lambda r: 0.0)
    with pytest.raises(ImprintingError):
        rec.canonical(1.0)
