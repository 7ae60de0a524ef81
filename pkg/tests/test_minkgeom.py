"""Tests for the projective circle-geometry layer."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circleweb.minkgeom import (
    ETA,
    GENERATOR_NAMES,
    CoincidentCircles,
    GeometryError,
    HomPoint,
    ImaginaryCircle,
    MoebiusMap,
    Plane,
    PlanarCircle,
    PlanarPoint,
    PoleError,
    SpherePoint,
    circle_circle_intersect,
    circle_from_polar,
    moebius_exp,
    moebius_generator,
    pair,
    plane_tangency_residual,
    random_moebius,
    stereo_lift,
    stereo_project,
    tangent_plane,
)

coords = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(coords, coords)
def test_stereo_round_trip(x, y):
    p = PlanarPoint(x, y)
    q = stereo_lift(p)
    assert abs(q.x ** 2 + q.y ** 2 + q.z ** 2 - 1.0) < 1e-12
    back = stereo_project(q)
    assert abs(back.x - x) < 1e-9 * (1.0 + abs(x))
    assert abs(back.y - y) < 1e-9 * (1.0 + abs(y))


def test_stereo_fixed_values():
    assert stereo_lift(PlanarPoint(0.0, 0.0)) == SpherePoint(0.0, 0.0, 1.0)
    q = stereo_lift(PlanarPoint(1.0, 0.0))
    assert abs(q.x - 1.0) < 1e-15 and abs(q.z) < 1e-15
    with pytest.raises(PoleError):
        stereo_project(SpherePoint(0.0, 0.0, -1.0))


def test_sphere_point_validation():
    with pytest.raises(GeometryError):
        SpherePoint(0.5, 0.5, 0.5)


def test_pair_signature():
    e = [HomPoint(tuple(1.0 if i == j else 0.0 for j in range(4))) for i in range(4)]
    assert pair(e[0], e[0]) == 1.0
    assert pair(e[1], e[1]) == 1.0
    assert pair(e[2], e[2]) == 1.0
    assert pair(e[3], e[3]) == -1.0
    assert pair(e[0], e[3]) == 0.0


def test_hom_point_validation():
    with pytest.raises(GeometryError):
        HomPoint((0.0, 0.0, 0.0, 0.0))
    with pytest.raises(GeometryError):
        HomPoint((1.0, 2.0))
    p = HomPoint((2.0, 0.0, -4.0, 0.0)).normalize()
    assert max(abs(v) for v in p.coords) == 1.0
    assert p.proportional_to(HomPoint((1.0, 0.0, -2.0, 0.0)))
    assert p.proportional_to(HomPoint((-1.0, 0.0, 2.0, 0.0)))


@settings(max_examples=100, deadline=None)
@given(coords, coords)
def test_tangent_plane_touches_sphere(x, y):
    q = stereo_lift(PlanarPoint(x, y))
    plane = tangent_plane(q)
    assert abs(plane.incidence(q.lift())) < 1e-12
    assert abs(plane_tangency_residual(plane)) < 1e-12


def test_tangency_residual_nonzero_off_sphere():
    # plane z = 0 cuts the sphere, it is not tangent
    assert plane_tangency_residual(Plane((0.0, 0.0, 1.0, 0.0))) == 1.0
    # plane z = 2 misses the sphere
    assert plane_tangency_residual(Plane((0.0, 0.0, 1.0, -2.0))) < 0.0


def test_circle_from_polar_unit_circle():
    # polar point of the equator plane z=0 is [0:0:1:0]
    circ = circle_from_polar(HomPoint((0.0, 0.0, 1.0, 0.0)))
    assert abs(circ.center.x) < 1e-15 and abs(circ.center.y) < 1e-15
    assert abs(circ.radius - 1.0) < 1e-12


def test_circle_from_polar_rejects_interior_point():
    with pytest.raises(ImaginaryCircle):
        circle_from_polar(HomPoint((0.0, 0.0, 0.0, 1.0)))
    with pytest.raises(ImaginaryCircle):
        circle_from_polar(HomPoint((1.0, 0.0, 0.0, 1.0)))  # on the sphere


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_circle_from_polar_lies_in_polar_plane(seed):
    """Dual route: points of the plane circle, lifted to the sphere, must lie
    in the polar plane of the defining point."""
    rng = np.random.default_rng(seed)
    v = rng.uniform(-1.0, 1.0, size=4)
    p = HomPoint(tuple(v)) if np.any(v != 0.0) else HomPoint((1.0, 0.0, 0.0, 0.0))
    if pair(p, p) <= 1e-6 * float(v @ v):
        return
    circ = circle_from_polar(p)
    polar = Plane(tuple(ETA @ p.normalize().vec))
    if circ.is_line:
        pts = []
        # two points on the line A*x+B*y+C=0
        if abs(circ.B) > abs(circ.A):
            pts = [PlanarPoint(t, -(circ.C + circ.A * t) / circ.B) for t in (0.0, 1.0)]
        else:
            pts = [PlanarPoint(-(circ.C + circ.B * t) / circ.A, t) for t in (0.0, 1.0)]
    else:
        ctr, r = circ.center, circ.radius
        pts = [PlanarPoint(ctr.x + r * math.cos(a), ctr.y + r * math.sin(a))
               for a in np.linspace(0.0, 2.0 * math.pi, 7)]
    for pt in pts:
        lifted = stereo_lift(pt).lift()
        scale = float(np.max(np.abs(polar.vec))) * float(np.max(np.abs(lifted.vec)))
        assert abs(polar.incidence(lifted)) < 1e-9 * scale


def test_generators_in_algebra():
    for name in GENERATOR_NAMES:
        G = moebius_generator(name)
        assert np.max(np.abs(G.T @ ETA + ETA @ G)) == 0.0
    with pytest.raises(GeometryError):
        moebius_generator("Qx")


def test_exp_rotation_closed_form():
    a = 0.7
    M = moebius_exp(moebius_generator("Rz"), a)
    expect = np.eye(4)
    expect[0, 0] = expect[1, 1] = math.cos(a)
    expect[0, 1] = math.sin(a)
    expect[1, 0] = -math.sin(a)
    assert np.max(np.abs(M.m - expect)) < 1e-15


def test_exp_boost_closed_form():
    a = -0.4
    M = moebius_exp(moebius_generator("Bz"), a)
    expect = np.eye(4)
    expect[2, 2] = expect[3, 3] = math.cosh(a)
    expect[2, 3] = expect[3, 2] = math.sinh(a)
    assert np.max(np.abs(M.m - expect)) < 1e-15


def test_exp_mixed_element_agrees_with_series():
    rng = np.random.default_rng(3)
    G = sum(c * moebius_generator(n)
            for c, n in zip(rng.uniform(-0.5, 0.5, 6), GENERATOR_NAMES))
    M = moebius_exp(G)
    # truncated power series as an independent oracle
    acc = np.eye(4)
    term = np.eye(4)
    for k in range(1, 30):
        term = term @ G / k
        acc = acc + term
    assert np.max(np.abs(M.m - acc)) < 1e-12


def test_moebius_preserves_pairing():
    rng = np.random.default_rng(11)
    M = random_moebius(rng)
    u = rng.uniform(-1.0, 1.0, 4)
    v = rng.uniform(-1.0, 1.0, 4)
    lhs = (M.m @ u) @ ETA @ (M.m @ v)
    rhs = M.lam * (u @ ETA @ v)
    assert abs(lhs - rhs) < 1e-10 * (1.0 + abs(rhs))


def test_moebius_map_validation_and_inverse():
    with pytest.raises(GeometryError):
        MoebiusMap(np.diag([1.0, 2.0, 3.0, 4.0]))
    M = moebius_exp(moebius_generator("Bx"), 0.3)
    MI = M.inverse()
    assert np.max(np.abs(M.compose(MI).m - np.eye(4))) < 1e-12


def test_random_moebius_is_seeded():
    a = random_moebius(np.random.default_rng(5)).m
    b = random_moebius(np.random.default_rng(5)).m
    assert np.array_equal(a, b)


def test_circle_intersection_two_points():
    c1 = PlanarCircle(1.0, 0.0, 0.0, -1.0)
    c2 = PlanarCircle(1.0, -2.0, 0.0, 0.0)  # center (1,0), radius 1
    res = circle_circle_intersect(c1, c2)
    assert len(res.points) == 2 and not res.tangent
    got = sorted((round(p.x, 9), round(p.y, 9)) for p in res.points)
    root3 = math.sqrt(3.0) / 2.0
    assert abs(got[0][0] - 0.5) < 1e-9 and abs(got[0][1] + root3) < 1e-9
    assert abs(got[1][0] - 0.5) < 1e-9 and abs(got[1][1] - root3) < 1e-9


def test_circle_intersection_tangent_and_empty():
    c1 = PlanarCircle(1.0, 0.0, 0.0, -1.0)
    tang = PlanarCircle(1.0, -4.0, 0.0, 3.0)  # center (2,0), radius 1
    res = circle_circle_intersect(c1, tang)
    assert res.tangent and len(res.points) == 1
    assert abs(res.points[0].x - 1.0) < 1e-9 and abs(res.points[0].y) < 1e-9
    far = PlanarCircle(1.0, -10.0, 0.0, 24.0)  # center (5,0), radius 1
    assert circle_circle_intersect(c1, far).points == ()
    with pytest.raises(CoincidentCircles):
        circle_circle_intersect(c1, PlanarCircle(2.0, 0.0, 0.0, -2.0))


def test_line_circle_intersection():
    unit = PlanarCircle(1.0, 0.0, 0.0, -1.0)
    line = PlanarCircle(0.0, 1.0, 0.0, 0.0)  # x = 0
    res = circle_circle_intersect(line, unit)
    ys = sorted(round(p.y, 9) for p in res.points)
    assert ys == [-1.0, 1.0]


def test_planar_circle_validation():
    with pytest.raises(ImaginaryCircle):
        PlanarCircle(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(GeometryError):
        PlanarCircle(0.0, 0.0, 0.0, 1.0)
    line = PlanarCircle(0.0, 1.0, 1.0, -1.0)
    assert line.is_line
    with pytest.raises(GeometryError):
        _ = line.radius
