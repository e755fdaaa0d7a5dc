"""Cone geometry: representations, duality, state spaces, faces, intervals.

Oracle values in this file were computed by hand from the defining
inequalities before the implementation existed; they are frozen.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conecert import errors
from conecert.cones import (
    GEOM_TOL,
    Location,
    Order,
    dual_cone,
    exposed_points,
    exposing_witness,
    extreme_rays,
    interval_contains,
    interval_radius,
    locate,
    lorentz,
    order_relation,
    orthant,
    polyhedral_cone,
    project_to_boundary,
    sample_cone,
    second_order_cone,
    state_space,
    support_margin,
    supporting_face,
)

RT2 = np.sqrt(2.0)


def same_rows(got, want, atol=1e-12):
    """Compare two row sets ignoring order."""
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    assert got.shape == want.shape
    key = np.lexsort(got.T[::-1])
    wkey = np.lexsort(want.T[::-1])
    np.testing.assert_allclose(got[key], want[wkey], atol=atol)


# ---------------------------------------------------------------- construction

def test_orthant_round_trip():
    c = orthant(3)
    assert c.dim == 3
    same_rows(c.generators, np.eye(3))
    same_rows(c.facets, np.eye(3))


def test_polyhedral_from_generators_enumerates_facets():
    # cone spanned by (1,0) and (1,1): facets are y >= 0 and x - y >= 0
    c = polyhedral_cone(generators=[[1.0, 0.0], [1.0, 1.0]])
    want = [[0.0, 1.0], [1.0 / RT2, -1.0 / RT2]]
    same_rows(c.facets, want)


def test_polyhedral_from_facets_enumerates_generators():
    facets = [[0.0, 1.0], [1.0, -1.0]]
    c = polyhedral_cone(facets=facets)
    want = [[1.0, 0.0], [1.0 / RT2, 1.0 / RT2]]
    same_rows(c.generators, want)


def test_redundant_generator_dropped():
    c = polyhedral_cone(generators=[[1, 0], [1, 1], [2, 1]])
    assert c.generators.shape == (2, 2)


def test_halfplane_rejected_not_pointed():
    # x >= 0 in R^2 admits the full y-axis: not pointed
    with pytest.raises(errors.InvalidCone):
        polyhedral_cone(facets=[[1.0, 0.0]])


def test_flat_cone_rejected_not_solid():
    with pytest.raises(errors.InvalidCone):
        polyhedral_cone(generators=[[1.0, 0.0], [2.0, 0.0]])


def test_enumeration_dimension_cap():
    with pytest.raises(errors.InvalidCone):
        orthant(7)


def test_second_order_axis_normalized():
    c = second_order_cone([3.0, 0.0, 0.0])
    np.testing.assert_allclose(c.axis, [1.0, 0.0, 0.0])


def test_second_order_needs_dim_two():
    with pytest.raises(errors.InvalidCone):
        second_order_cone([1.0])


# ---------------------------------------------------------------- membership

def test_locate_trichotomy_orthant():
    c = orthant(2)
    assert locate(c, [1.0, 2.0]) is Location.INTERIOR
    assert locate(c, [0.0, 2.0]) is Location.BOUNDARY
    assert locate(c, [-1e-3, 2.0]) is Location.OUTSIDE
    assert locate(c, [0.0, 0.0]) is Location.BOUNDARY


def test_locate_lorentz():
    c = lorentz(3)
    assert locate(c, [2.0, 1.0, 0.0]) is Location.INTERIOR
    assert locate(c, [1.0, 1.0, 0.0]) is Location.BOUNDARY
    assert locate(c, [1.0, 1.0, 1.0]) is Location.OUTSIDE


def test_order_relation_cases():
    c = orthant(2)
    assert order_relation(c, [0, 0], [0, 0]) is Order.EQ
    assert order_relation(c, [0, 0], [1, 1]) is Order.LL
    assert order_relation(c, [0, 0], [1, 0]) is Order.LEQ
    assert order_relation(c, [1, 1], [0, 0]) is Order.GG
    assert order_relation(c, [1, 0], [0, 0]) is Order.GEQ
    assert order_relation(c, [0, 0], [1, -1]) is Order.NONE


# ---------------------------------------------------------------- duality

def test_dual_of_orthant_is_orthant():
    c = orthant(3)
    d = dual_cone(c)
    same_rows(d.generators, np.eye(3))


def test_dual_involution_by_fresh_enumeration():
    # rebuild the double dual from scratch rather than trusting field swaps
    c = polyhedral_cone(generators=[[2, 1, 0], [0, 1, 0], [1, 0, 3], [1, 1, 1]])
    dual_facets = extreme_rays(c.generators)
    back = extreme_rays(dual_facets)
    np.testing.assert_allclose(back, c.generators, atol=1e-9)


def test_second_order_self_dual():
    c = lorentz(4)
    assert dual_cone(c) is c


# ---------------------------------------------------------------- state space

def test_state_space_vertices_oracle():
    # orthant in R^2 with anchor (2,1): vertices e1/2, e2
    s = state_space(orthant(2), [2.0, 1.0])
    same_rows(s.vertices, [[0.5, 0.0], [0.0, 1.0]])
    # anchor evaluates to exactly one, bitwise
    assert all(val == 1.0 for val in s.eval_vertices(s.anchor))


def test_state_space_anchor_must_be_interior():
    with pytest.raises(errors.AnchorNotInterior):
        state_space(orthant(2), [1.0, 0.0])


def test_second_order_anchor_must_be_axial():
    c = lorentz(3)
    with pytest.raises(errors.AnchorNotAxial):
        state_space(c, [2.0, 0.5, 0.0])
    s = state_space(c, [2.0, 0.0, 0.0])
    assert s.axis_scale == pytest.approx(2.0)


def test_support_margin_oracle():
    # h((4,1)) with anchor (2,1): min(4/2, 1/1) = 1
    s = state_space(orthant(2), [2.0, 1.0])
    assert support_margin(s, [4.0, 1.0]) == pytest.approx(1.0)
    assert support_margin(s, [0.0, 5.0]) == pytest.approx(0.0)
    assert support_margin(s, [-2.0, 5.0]) == pytest.approx(-1.0)


def test_support_margin_sign_matches_locate():
    cones = [orthant(3), lorentz(3),
             polyhedral_cone(generators=[[1, 0], [1, 1]])]
    rng = np.random.default_rng(7)
    for c in cones:
        u = 2.0 * c.interior_point()
        s = state_space(c, u)
        for x in sample_cone(c, rng, 8):
            m = support_margin(s, x)
            loc = locate(c, x)
            if loc is Location.INTERIOR:
                assert m > 0
            else:
                assert m >= -GEOM_TOL
        assert support_margin(s, -u) < 0


@settings(max_examples=60)
@given(t=st.floats(min_value=0.01, max_value=90.0),
       x0=st.floats(min_value=-4, max_value=4),
       x1=st.floats(min_value=-4, max_value=4),
       x2=st.floats(min_value=-4, max_value=4))
def test_support_margin_positively_homogeneous(t, x0, x1, x2):
    s = state_space(orthant(3), [1.0, 2.0, 0.5])
    x = np.array([x0, x1, x2])
    assert support_margin(s, t * x) == pytest.approx(t * support_margin(s, x),
                                                     rel=1e-9, abs=1e-12)


@settings(max_examples=60)
@given(x0=st.floats(min_value=-4, max_value=4),
       x1=st.floats(min_value=-4, max_value=4),
       t=st.floats(min_value=-3, max_value=3))
def test_support_margin_linear_along_anchor(x0, x1, t):
    # phi(u) = 1 for every state-space functional makes this exact
    s = state_space(orthant(2), [2.0, 1.0])
    x = np.array([x0, x1])
    lhs = support_margin(s, x + t * s.anchor)
    assert lhs == pytest.approx(support_margin(s, x) + t, rel=1e-9, abs=1e-12)


def test_project_to_boundary_lands_on_boundary():
    cones = [orthant(3), lorentz(3)]
    rng = np.random.default_rng(11)
    for c in cones:
        s = state_space(c, 2.0 * c.interior_point())
        for _ in range(6):
            x = rng.standard_normal(c.dim)
            w = project_to_boundary(s, x)
            assert abs(support_margin(s, w)) <= 1e-9
            assert locate(c, w) is Location.BOUNDARY


# ---------------------------------------------------------------- faces

def test_exposed_points_polytope_are_vertices():
    s = state_space(orthant(3), [1.0, 1.0, 1.0])
    pts = exposed_points(s)
    same_rows(pts, np.eye(3))


def test_exposed_points_disc_sample():
    s = state_space(lorentz(3), [1.0, 0.0, 0.0])
    pts = exposed_points(s, n=16)
    assert pts.shape == (16, 3)
    # all lie on the boundary circle of the disc: first coord 1, rest unit
    np.testing.assert_allclose(pts[:, 0], 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(pts[:, 1:], axis=1), 1.0,
                               atol=1e-12)


def test_supporting_face_orthant():
    s = state_space(orthant(3), [1.0, 1.0, 1.0])
    f = supporting_face(s, [0.0, 2.0, 3.0])
    assert f.functionals.shape == (1, 3)
    np.testing.assert_allclose(f.functionals[0], [1.0, 0.0, 0.0], atol=1e-12)
    f2 = supporting_face(s, [0.0, 0.0, 3.0])
    assert f2.functionals.shape == (2, 3)


def test_supporting_face_requires_boundary():
    s = state_space(orthant(2), [1.0, 1.0])
    with pytest.raises(errors.NotOnBoundary):
        supporting_face(s, [1.0, 1.0])
    with pytest.raises(errors.ApexDegenerate):
        supporting_face(s, [0.0, 0.0])


def test_supporting_face_lorentz_singleton():
    s = state_space(lorentz(3), [2.0, 0.0, 0.0])
    f = supporting_face(s, [1.0, 1.0, 0.0])
    assert f.functionals.shape == (1, 3)
    phi = f.functionals[0]
    # phi((1,1,0)) = 0 and phi(anchor) = 1
    assert abs(phi @ np.array([1.0, 1.0, 0.0])) <= 1e-12
    assert phi @ s.anchor == pytest.approx(1.0)


def test_exposing_witness_polyhedral():
    s = state_space(orthant(3), [1.0, 1.0, 1.0])
    for i in range(3):
        y = exposing_witness(s, s.vertices[i], vertex_index=i)
        f = supporting_face(s, y)
        assert f.functionals.shape == (1, 3)
        np.testing.assert_allclose(f.functionals[0], s.vertices[i], atol=1e-9)


def test_exposing_witness_lorentz():
    s = state_space(lorentz(3), [1.0, 0.0, 0.0])
    phi = np.array([1.0, 1.0, 0.0])   # boundary functional of the disc
    y = exposing_witness(s, phi)
    assert locate(s.cone, y) is Location.BOUNDARY
    assert abs(phi @ y) <= 1e-12


# ---------------------------------------------------------------- intervals

def test_interval_contains_basic():
    c = orthant(2)
    assert interval_contains(c, [0, 0], [2, 2], [1, 1])
    assert interval_contains(c, [0, 0], [2, 2], [0, 2])
    assert not interval_contains(c, [0, 0], [2, 2], [3, 1])
    assert interval_contains(c, [0, 0], [2, 2], [1, 1], strict=True)
    assert not interval_contains(c, [0, 0], [2, 2], [0, 1], strict=True)


def test_interval_contains_rejects_unordered():
    c = orthant(2)
    with pytest.raises(errors.EmptyInterval):
        interval_contains(c, [1, 0], [0, 1], [0, 0])
    with pytest.raises(errors.EmptyInterval):
        interval_contains(c, [0, 0], [1, 0], [0, 0], strict=True)


def test_interval_radius_bounds_the_interval():
    c = orthant(3)
    a = np.array([0.1, 0.2, 0.3])
    b = a + np.array([0.5, 1.0, 0.25])
    r = interval_radius(c, a, b)
    rng = np.random.default_rng(3)
    for _ in range(200):
        w = a + rng.random(3) * (b - a)
        assert np.linalg.norm(w - a) <= r + 1e-12
    # bound is within a dimension factor of the diameter
    assert r <= np.sqrt(3) * np.linalg.norm(b - a) * 3


def test_interval_radius_lorentz():
    c = lorentz(3)
    a = np.zeros(3)
    b = np.array([2.0, 0.5, 0.0])
    r = interval_radius(c, a, b)
    rng = np.random.default_rng(5)
    s = state_space(c, [1.0, 0.0, 0.0])
    hits = 0
    for _ in range(400):
        w = rng.standard_normal(3) * 2.0
        if (support_margin(s, w - a) >= 0
                and support_margin(s, b - w) >= 0):
            hits += 1
            assert np.linalg.norm(w - a) <= r + 1e-9
    assert hits > 0


# ---------------------------------------------------------------- sampling

def test_sample_cone_membership():
    rng = np.random.default_rng(13)
    for c in (orthant(3), lorentz(4),
              polyhedral_cone(generators=[[1, 0], [1, 1]])):
        pts = sample_cone(c, rng, 20)
        for p in pts:
            assert locate(c, p) in (Location.INTERIOR, Location.BOUNDARY)
        ints = sample_cone(c, rng, 20, interior=True)
        for p in ints:
            assert locate(c, p) is Location.INTERIOR
