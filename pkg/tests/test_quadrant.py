import numpy as np
import pytest

from scglue.quadrant import (
    DomainViolation, QuadrantPoint, RetractionMap, corner_lattice_rows, degeneracy_index,
    degeneracy_inequality, ex_subspace, make_splicing, rotating_projector, verify_retraction,
)


def test_degeneracy_index():
    assert degeneracy_index(QuadrantPoint([0, 0, 1.5], [2.0])) == 2
    assert degeneracy_index(QuadrantPoint([1, 2, 3])) == 0
    assert degeneracy_index(QuadrantPoint([0, 1]) * QuadrantPoint([0, 0])) == 3
    with pytest.raises(DomainViolation):
        QuadrantPoint([-0.5, 1.0])


def test_ex_subspace():
    assert ex_subspace(QuadrantPoint([1.0, 2.0], [0.0])).dim == 3
    e = ex_subspace(QuadrantPoint([0.0, 0.0], [1.0, 1.0]))
    assert e.free == () and e.dim == 2
    e = ex_subspace(QuadrantPoint([0.0, 3.0], [1.0]))
    assert e.free == (1,) and e.contains([0.0, 5.0, -1.0]) and not e.contains([1.0, 0.0, 0.0])


def test_identity_retraction_is_tame(rng):
    r = RetractionMap(lambda x: np.asarray(x, float), n=1)
    xs = [np.array([0.0, 1.0]), np.array([0.5, -1.0])]
    rep = verify_retraction(r, xs, check_tame=True)
    assert rep.idempotence == 0.0 and rep.degeneracy_preserved and rep.tame
    assert rep.complement_dim == 0


def test_rotating_splicing(rng):
    fam, r = make_splicing("rotating_rank1", k=2)
    assert np.array_equal(rotating_projector(np.zeros(2), 2), np.diag([1.0, 0.0]))
    assert fam.degeneracy([0.0, 0.5]) == 1
    xs = [np.concatenate([rng.uniform(0, 0.25, 2) * (rng.uniform(size=2) > 0.4),
                          rng.normal(size=2)]) for _ in range(200)]
    rep = verify_retraction(r, xs)
    assert rep.idempotence <= 1e-12 and rep.degeneracy_preserved
    tame = verify_retraction(r, xs[:5], check_tame=True)
    assert tame.tame and tame.complement_dim == 1


def test_gluing_induced_splicing(rng):
    from scglue.gluing import GluingParameter
    from scglue.scalespace import band_limited_pair
    _, r = make_splicing("gluing_induced", a=0.22)
    xs = [(GluingParameter.polar(m, rng.uniform()), band_limited_pair(rng)) for m in (0.2, 0.24)]
    rep = verify_retraction(r, xs)
    assert rep.idempotence <= 1e-10 and rep.degeneracy_preserved


def test_corner_lattice_exhaustive():
    for n in range(5):
        for m in range(5 - n):
            rows = corner_lattice_rows(n, m)
            assert len(rows) == 2 ** (n + m) and all(ok for *_, ok in rows)


def test_degeneracy_inequality():
    emb = lambda p: np.array([p[0], p[0]])  # noqa: E731
    ok, rows = degeneracy_inequality(emb, 1, 2, [np.array([0.0]), np.array([1.0])])
    assert ok and rows == [(1, 2), (0, 0)]


def test_retraction_leaving_domain_is_reported():
    r = RetractionMap(lambda x: x - 1.0, n=1, domain=lambda x: x[0] >= 0)
    with pytest.raises(DomainViolation):
        verify_retraction(r, [np.array([0.5])])
