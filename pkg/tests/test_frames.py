"""Frames, perturbation radii, positivity margins, boundary-face balls."""

import numpy as np
import pytest

from conecert import errors
from conecert.cones import (
    boundary_points_near,
    lorentz,
    orthant,
    state_space,
    supporting_face,
)
from conecert.frames import (
    Frame,
    FunctionalBall,
    SimplicialCone,
    face_in_ball,
    face_in_ball_slack,
    perturbation_radius,
    positivity_margin,
    sample_perturbations,
    select_frame,
)


def same_rows(got, want, atol=1e-12):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    assert got.shape == want.shape
    np.testing.assert_allclose(got[np.lexsort(got.T[::-1])],
                               want[np.lexsort(want.T[::-1])], atol=atol)


def frame_of(cone, anchor=None, n=64):
    u = anchor if anchor is not None else 2.0 * cone.interior_point()
    s = state_space(cone, u)
    return s, select_frame(s, n)


# ---------------------------------------------------------------- selection

def test_select_frame_orthant_identity():
    s, f = frame_of(orthant(3), np.ones(3))
    same_rows(f.basis, np.eye(3))
    np.testing.assert_allclose(f.mean, [1 / 3, 1 / 3, 1 / 3])
    assert f.sigma_min == pytest.approx(1.0)


def test_select_frame_scaled_anchor_oracle():
    # anchor (2,1): vertices (1/2,0) and (0,1); mean (1/4,1/2)
    s, f = frame_of(orthant(2), np.array([2.0, 1.0]))
    same_rows(f.basis, [[0.5, 0.0], [0.0, 1.0]])
    np.testing.assert_allclose(f.mean, [0.25, 0.5], atol=1e-15)


def test_select_frame_lorentz_independent():
    s, f = frame_of(lorentz(3))
    assert f.basis.shape == (3, 3)
    assert f.sigma_min > 0.1
    # mean exactness: arithmetic average to machine precision
    np.testing.assert_array_equal(f.mean, f.basis.mean(axis=0))


def test_frame_witnesses_expose_their_functional():
    for cone in (orthant(3), lorentz(3)):
        s, f = frame_of(cone)
        for k in range(f.dim):
            face = supporting_face(s, f.witnesses[k])
            assert face.functionals.shape[0] == 1
            np.testing.assert_allclose(face.functionals[0], f.basis[k],
                                       atol=1e-9)
            # scale invariance of the face
            for lam in (0.5, 2.0):
                face2 = supporting_face(s, lam * f.witnesses[k])
                np.testing.assert_allclose(face2.functionals,
                                           face.functionals, atol=1e-9)


def test_frame_cone_contains_the_original_cone():
    # every generator is nonnegative against every frame functional
    c = orthant(3)
    s, f = frame_of(c)
    assert np.min(c.generators @ f.basis.T) >= -1e-12


# ---------------------------------------------------------------- margins

def test_positivity_margin_identity():
    k = SimplicialCone(np.eye(3))
    assert positivity_margin(k, [1 / 3, 1 / 3, 1 / 3]) == pytest.approx(1 / 3)


def test_positivity_margin_diag_oracle():
    assert positivity_margin(np.diag([1.0, 2.0]), [0.5, 0.5]) == pytest.approx(0.25)


def test_positivity_margin_boundary_case():
    # psi = (1,1) against rows (1,0),(1,1): coefficients (0,1), margin 0
    m = positivity_margin(np.array([[1.0, 0.0], [1.0, 1.0]]), [1.0, 1.0])
    assert m == pytest.approx(0.0, abs=1e-15)


def test_positivity_margin_oblique_oracle():
    # rows (1,0),(-1,1), psi=(1/2,1/2): coefficients (1, 1/2)
    m = positivity_margin(np.array([[1.0, 0.0], [-1.0, 1.0]]), [0.5, 0.5])
    assert m == pytest.approx(0.5)


def test_singular_frame_rejected():
    with pytest.raises(errors.SingularFrame):
        SimplicialCone(np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(errors.SingularFrame):
        positivity_margin(np.array([[1.0, 0.0], [2.0, 0.0]]), [1.0, 1.0])


# ---------------------------------------------------------------- radius

def test_perturbation_radius_orthant2_oracle():
    # identity frame: margin 1/2, sigma 1, ||mean|| = 1/sqrt(2) -> eps = 1/8
    s, f = frame_of(orthant(2), np.ones(2))
    eps = perturbation_radius(f)
    assert eps == pytest.approx(0.125)
    assert eps >= 0.1


def test_perturbation_radius_certifies_samples():
    rng = np.random.default_rng(101)
    for cone in (orthant(2), orthant(3), orthant(4), lorentz(3)):
        s, f = frame_of(cone)
        eps = perturbation_radius(f)
        assert eps > 0
        worst_s, worst_m = sample_perturbations(f, eps, 500, rng)
        assert worst_s > 0
        assert worst_m > 0


def test_nonpositive_margin_rejected():
    psis = np.array([[1.0, 0.0], [1.0, 1.0]])
    f = Frame(basis=psis, mean=np.array([1.0, 1.0]),
              sigma_min=float(np.linalg.svd(psis, compute_uv=False)[-1]),
              witnesses=np.eye(2))
    with pytest.raises(errors.NonpositiveBaseMargin):
        perturbation_radius(f)


# ---------------------------------------------------------------- face balls

def test_face_in_ball_orthant_cases():
    s = state_space(orthant(2), np.ones(2))
    ball = FunctionalBall(np.array([0.0, 1.0]), 0.5)
    assert face_in_ball(s, ball, [1.0, 0.0])
    s3 = state_space(orthant(3), np.ones(3))
    ball3 = FunctionalBall(np.array([0.0, 0.0, 1.0]), 0.5)
    # face of (1,0,0) contains e2* as well -> not inside the e3* ball
    assert not face_in_ball(s3, ball3, [1.0, 0.0, 0.0])


def test_face_in_ball_lorentz():
    s = state_space(lorentz(3), [1.0, 0.0, 0.0])
    ball = FunctionalBall(np.array([1.0, -1.0, 0.0]), 0.3)
    assert face_in_ball(s, ball, [1.0, 1.0, 0.0])
    assert not face_in_ball(s, ball, [1.0, -1.0, 0.0])


def test_face_in_ball_slack_certifies_openness():
    rng = np.random.default_rng(33)
    for cone in (orthant(2), orthant(3), lorentz(3)):
        s = state_space(cone, 2.0 * cone.interior_point())
        f = select_frame(s)
        eps = perturbation_radius(f)
        for k in range(f.dim):
            ball = FunctionalBall(f.basis[k], eps)
            x = f.witnesses[k]
            assert face_in_ball(s, ball, x)
            delta = face_in_ball_slack(s, ball, x)
            assert delta > 0
            for w in boundary_points_near(s, x, delta, 100, rng):
                assert face_in_ball(s, ball, w)


def test_face_in_ball_slack_requires_membership():
    s = state_space(orthant(3), np.ones(3))
    ball = FunctionalBall(np.array([0.0, 0.0, 1.0]), 0.5)
    with pytest.raises(errors.InvalidCone):
        face_in_ball_slack(s, ball, [1.0, 0.0, 0.0])
