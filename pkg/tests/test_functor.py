import numpy as np
import pytest

from scglue.functor import (
    EMBEDDINGS, GLUING_FUNCTOR, EvaluationError, Morphism, ball_margin, circle_transition_maps,
    element_distance, extend_to_manifold, far_bump_morphism, identity_morphism, image_of,
    linear_morphism, openness_check, pushforward, pushforward_sc1, random_polynomial_morphism,
    shell_valued_pair, sphere_embedding, verify_embedding, verify_functor_axioms,
    verify_manifold_extension, verify_transition,
)
from scglue.gluing import GluingParameter, preglue
from scglue.quadrant import DomainViolation
from scglue.scalespace import GridConfig, band_limited_pair, level_norm, zero_pair

GRID3 = GridConfig(32, 0.25, 30.0, 3)


def test_identity_pushforward_is_exact(rng):
    u = band_limited_pair(rng, GRID3)
    assert pushforward(identity_morphism(3), u) is u
    v = preglue(GluingParameter.polar(0.22), band_limited_pair(rng))
    assert pushforward(identity_morphism(2), v) is v


def test_linear_pushforward(rng):
    u = band_limited_pair(rng, GRID3)
    A = rng.normal(size=(2, 3))
    w = pushforward(linear_morphism(A), u)
    assert np.allclose(w.c, A @ u.c, rtol=0, atol=1e-14)
    assert np.max(np.abs(w.plus.r - u.plus.r @ A.T)) <= 1e-13
    assert level_norm(w, 0) <= np.linalg.norm(A, 2) * level_norm(u, 0) * (1 + 1e-12)


def test_sphere_projection_lands_on_sphere(rng):
    S = sphere_embedding()
    u = shell_valued_pair(rng, S, GRID3)
    v = pushforward(Morphism(S.retract, 3, 3), u)
    assert np.max(np.abs(np.linalg.norm(image_of(v).points, axis=1) - 1)) <= 1e-12


def test_constant_image_and_openness(rng):
    c = np.array([0.1, -0.2, 0.3])
    u = zero_pair(GRID3, c)
    assert np.all(image_of(u).points == c)
    ok, margin, _ = openness_check(band_limited_pair(rng, GRID3, scale=0.1), np.zeros(3), 5.0, rng)
    assert ok and margin > 0


def test_nonfinite_pushforward_names_location(rng):
    u = band_limited_pair(rng, GRID3)
    bad = Morphism(lambda x: np.where(x > 0.5, np.inf, x), 3, 3, "blowup")
    with pytest.raises(EvaluationError) as exc:
        pushforward(bad, u)
    assert exc.value.location is not None


def test_functor_axioms(rng):
    S = sphere_embedding()
    ops = extend_to_manifold(GLUING_FUNCTOR, S)
    on = [ops.element(shell_valued_pair(rng, S, GRID3)).rep for _ in range(2)]
    pairs = [(linear_morphism(rng.normal(size=(3, 3))), linear_morphism(rng.normal(size=(3, 3)))),
             (random_polynomial_morphism(rng, 3, 3), random_polynomial_morphism(rng, 3, 2))]
    f = random_polynomial_morphism(rng, 3, 3)
    local = [(f, far_bump_morphism(f), u) for u in on]
    rep = verify_functor_axioms(GLUING_FUNCTOR, on, pairs, local)
    assert rep.passed
    assert rep.check("identity_exact").defect == 0.0
    assert rep.check("locality_exact").defect == 0.0


def test_far_bump_differs_off_the_sphere():
    f = identity_morphism(3)
    g = far_bump_morphism(f)
    assert np.array_equal(g(np.array([0.0, 0.0, 1.0])), f(np.array([0.0, 0.0, 1.0])))
    assert not np.array_equal(g(np.array([0.0, 0.0, 2.0])), f(np.array([0.0, 0.0, 2.0])))


@pytest.mark.parametrize("tag", sorted(EMBEDDINGS))
def test_embeddings_and_extension(rng, tag):
    emb = EMBEDDINGS[tag]()
    assert verify_embedding(emb, rng, 200).passed
    grid = GridConfig(16, 0.25, 30.0, emb.N)
    ops = extend_to_manifold(GLUING_FUNCTOR, emb)
    rep = verify_manifold_extension(ops, rng, 2, grid)
    assert rep.passed and rep.check("XR_idempotent").defect <= 1e-12
    e = ops.element(shell_valued_pair(rng, emb, grid))
    assert ops.member(e.rep) and ops.retraction(e.rep) is e.rep


def test_retraction_outside_tube_is_refused(rng):
    ops = extend_to_manifold(GLUING_FUNCTOR, sphere_embedding())
    with pytest.raises(DomainViolation):
        ops.retraction(zero_pair(GRID3, np.zeros(3)))


def test_circle_transition_round_trip(rng):
    assert verify_transition(GLUING_FUNCTOR, rng, 3, GridConfig(16, 0.25, 30.0, 2)).passed
    f, h = circle_transition_maps()
    x = np.array([[np.cos(0.4), np.sin(0.4)]])
    assert np.max(np.abs(h(f(x)) - x)) <= 1e-15


def test_pushforward_is_sc1(rng):
    g = GridConfig(16, 0.25, 30.0, 3)
    u = band_limited_pair(rng, g, scale=0.3)
    du = band_limited_pair(rng, g, scale=0.3)
    rep = pushforward_sc1(random_polynomial_morphism(rng, 3, 3), u, du)
    assert rep.verdict


def test_element_distance_of_mismatched_shapes(rng):
    u = band_limited_pair(rng, GRID3)
    v = band_limited_pair(rng, GridConfig(32, 0.25, 20.0, 3))
    assert element_distance(u, v) == np.inf
    assert ball_margin(np.zeros(2), 1.0)(np.array([[0.5, 0.0]]))[0] == 0.5
