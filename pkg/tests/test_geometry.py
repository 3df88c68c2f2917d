import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pldg.geometry import (
    CircularArc,
    CoincidentCirclesError,
    Disk,
    GeneralPositionError,
    Point,
    arc_in_disk_interior,
    arc_outside_disk,
    choose_z_prime,
    circle_circle_intersections,
    circumcenter,
    common_point,
    delaunay,
    in_circle,
    in_circle_many,
    in_minor_cap,
    orient,
    orient_many,
    segments_cross,
)

# -- independent exact oracles ---------------------------------------------


def orient_oracle(p, q, r):
    p, q, r = ([Fraction(c) for c in pt] for pt in (p, q, r))
    det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (det > 0) - (det < 0)


def circumcenter_oracle(a, b, c):
    (ax, ay), (bx, by), (cx, cy) = ([Fraction(v) for v in pt] for pt in (a, b, c))
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return ux, uy


def in_circle_oracle(a, b, c, d):
    """+1 inside, 0 on, -1 outside, by exact squared distances to the circumcenter."""
    ux, uy = circumcenter_oracle(a, b, c)
    r2 = (Fraction(a[0]) - ux) ** 2 + (Fraction(a[1]) - uy) ** 2
    d2 = (Fraction(d[0]) - ux) ** 2 + (Fraction(d[1]) - uy) ** 2
    return (d2 < r2) - (d2 > r2)


def delaunay_faces_oracle(points):
    faces = set()
    for t in itertools.combinations(range(len(points)), 3):
        tri = [points[i] for i in t]
        if orient_oracle(*tri) == 0:
            continue
        if all(in_circle_oracle(*tri, points[j]) < 0 for j in range(len(points)) if j not in t):
            faces.add(t)
    return faces


def sample_circle(disk, count=10_000):
    t = (np.arange(count) + 0.5) / count * 2 * math.pi
    return np.column_stack([disk.center[0] + disk.radius * np.cos(t),
                            disk.center[1] + disk.radius * np.sin(t)]), t


coord = st.floats(-4, 4, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


# -- orient / in_circle ------------------------------------------------------

@pytest.mark.parametrize("p,q,r,expected", [
    ((0, 0), (1, 0), (0, 1), 1),
    ((0, 0), (1, 0), (2, 0), 0),
    ((0, 0), (0, 1), (1, 0), -1),
])
def test_orient_examples(p, q, r, expected):
    assert orient(p, q, r) == expected


@pytest.mark.parametrize("d,expected", [((0.25, 0.25), 1), ((1, 1), 0), ((2, 2), -1)])
def test_in_circle_examples(d, expected):
    assert in_circle((0, 0), (1, 0), (0, 1), d) == expected


def test_in_circle_rejects_collinear_triple():
    with pytest.raises(GeneralPositionError):
        in_circle((0, 0), (1, 0), (2, 0), (5, 5))


def test_orient_exact_on_nearly_collinear_points():
    # Float evaluation of this determinant rounds to the wrong sign or zero.
    p, q = (0.5, 0.5), (12.0, 12.0)
    for k in range(-8, 9):
        r = (24.0, 24.0 + k * 2 ** -48)
        assert orient(p, q, r) == orient_oracle(p, q, r)
        assert orient(p, q, r) == (k > 0) - (k < 0)


def test_in_circle_exact_near_cocircular():
    a, b, c = (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)
    for k in range(-6, 7):
        d = (1.0, 1.0 + k * 2 ** -52)
        assert in_circle(a, b, c, d) == in_circle_oracle(a, b, c, d)


@settings(max_examples=300, deadline=None)
@given(point, point, point)
def test_orient_matches_rational_oracle(p, q, r):
    assert orient(p, q, r) == orient_oracle(p, q, r)


@settings(max_examples=300, deadline=None)
@given(point, point, point, point)
def test_in_circle_matches_rational_oracle(a, b, c, d):
    if orient_oracle(a, b, c) == 0:
        return
    assert in_circle(a, b, c, d) == in_circle_oracle(a, b, c, d)


@settings(max_examples=200, deadline=None)
@given(point, point, point, point)
def test_in_circle_permutation_invariant(a, b, c, d):
    if orient_oracle(a, b, c) == 0:
        return
    signs = {in_circle(*perm, d) for perm in itertools.permutations((a, b, c))}
    assert len(signs) == 1


def test_vectorized_predicates_match_scalar():
    rng = np.random.default_rng(3)
    # Snap to a coarse grid so many cases are exactly degenerate.
    pts = np.round(rng.uniform(-2, 2, size=(400, 4, 2)) * 4) / 4
    o = orient_many(pts[:, 0], pts[:, 1], pts[:, 2])
    assert o.tolist() == [orient_oracle(*row[:3]) for row in pts.tolist()]
    keep = o != 0
    s = in_circle_many(pts[keep, 0], pts[keep, 1], pts[keep, 2], pts[keep, 3])
    assert s.tolist() == [in_circle_oracle(*row) for row in pts[keep].tolist()]
    assert np.any(o == 0) and np.any(s == 0)


# -- constructions -----------------------------------------------------------

@pytest.mark.parametrize("a,b,c,expected", [
    ((0, 0), (1, 0), (0, 1), (0.5, 0.5)),
    ((0, 0), (2, 0), (1, 1), (1.0, 0.0)),
    ((0, 0), (1, 0), (0.5, math.sqrt(3) / 2), (0.5, math.sqrt(3) / 6)),
])
def test_circumcenter_examples(a, b, c, expected):
    got = circumcenter(a, b, c)
    assert got == pytest.approx(expected, abs=1e-12)
    radii = [math.dist(got, p) for p in (a, b, c)]
    assert max(radii) - min(radii) < 1e-12


def test_circumcenter_collinear_raises():
    with pytest.raises(GeneralPositionError):
        circumcenter((0, 0), (1, 1), (2, 2))


@pytest.mark.parametrize("a,b,c,d,expected", [
    ((0, 0), (1, 1), (0, 1), (1, 0), True),
    ((0, 0), (1, 0), (1, 0), (2, 1), False),
    ((0, 0), (2, 0), (1, 0), (1, 1), False),
    ((0, 0), (1, 0), (0, 1), (1, 1), False),
])
def test_segments_cross_examples(a, b, c, d, expected):
    assert segments_cross(a, b, c, d) is expected


@settings(max_examples=300, deadline=None)
@given(point, point, point, point)
def test_segments_cross_symmetric(a, b, c, d):
    x = segments_cross(a, b, c, d)
    assert x == segments_cross(c, d, a, b) == segments_cross(b, a, c, d) == segments_cross(a, b, d, c)


def test_circle_intersections_examples():
    got = sorted(circle_circle_intersections(Disk((0, 0), 1), Disk((1, 0), 1)), key=lambda p: p[1])
    assert got[0] == pytest.approx((0.5, -math.sqrt(3) / 2))
    assert got[1] == pytest.approx((0.5, math.sqrt(3) / 2))
    assert circle_circle_intersections(Disk((0, 0), 1), Disk((3, 0), 1)) == []
    assert circle_circle_intersections(Disk((0, 0), 1), Disk((0, 0), 0.5)) == []


def test_circle_intersections_tangent_and_coincident():
    (t,) = circle_circle_intersections(Disk((0, 0), 1), Disk((2, 0), 1))
    assert t == pytest.approx((1.0, 0.0))
    with pytest.raises(CoincidentCirclesError):
        circle_circle_intersections(Disk((0, 0), 1), Disk((0, 0), 1))


def test_disk_rejects_bad_radius():
    with pytest.raises(ValueError):
        Disk((0, 0), -0.5)


# -- Delaunay ----------------------------------------------------------------

def test_delaunay_single_triangle():
    ldt = delaunay([(0, 0), (1, 0), (0, 1)])
    assert [f.vertices for f in ldt.faces] == [(0, 1, 2)]
    assert set(ldt.edges) == {(0, 1), (0, 2), (1, 2)}


def test_delaunay_two_points():
    ldt = delaunay([(0, 0), (1, 0)])
    assert ldt.faces == () or list(ldt.faces) == []
    assert set(ldt.edges) == {(0, 1)}


def test_delaunay_four_points_matches_enumeration():
    pts = [(0, 0), (1, 0), (0, 1), (1.1, 1.1)]
    ldt = delaunay(pts)
    expected = delaunay_faces_oracle(pts)
    assert expected == {(0, 1, 2), (1, 2, 3)}
    assert {f.vertices for f in ldt.faces} == expected
    assert set(ldt.edges) == {(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)}


def test_delaunay_rejects_ambiguous_cocircular_input():
    with pytest.raises(GeneralPositionError):
        delaunay([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_delaunay_accepts_harmless_collinear_triple():
    # The collinear triple is not a face and the triangulation is unique.
    pts = [(0, 0), (1, 0), (2, 0), (1, 1), (1, -1)]
    assert {f.vertices for f in delaunay(pts).faces} == delaunay_faces_oracle(pts)


def test_delaunay_collinear_input_is_a_chain():
    ldt = delaunay([(1.8, 0), (0, 0), (0.9, 0)])
    assert not ldt.faces
    assert set(ldt.edges) == {(1, 2), (0, 2)}


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 60), st.integers(0, 60)), min_size=3, max_size=12,
                unique=True))
def test_delaunay_matches_enumeration(raw):
    # A coarse grid makes collinear and cocircular inputs common.
    pts = [(x / 7.0, y / 11.0) for x, y in raw]
    triples = [t for t in itertools.combinations(pts, 3)]
    degenerate = any(orient_oracle(*t) == 0 for t in triples) or any(
        in_circle_oracle(*t, q) == 0 for t in triples for q in pts if q not in t)
    if degenerate:
        try:
            ldt = delaunay(pts)
        except GeneralPositionError:
            return
        # Degeneracies away from the triangulation may pass; the result must still be empty-circle.
        for f in ldt.faces:
            tri = [pts[i] for i in f.vertices]
            assert all(in_circle_oracle(*tri, q) <= 0 for q in pts)
        return
    ldt = delaunay(pts)
    assert {f.vertices for f in ldt.faces} == delaunay_faces_oracle(pts)


# -- arcs ----------------------------------------------------------------------

def test_arc_outside_disk_matches_analytic_crossings():
    carrier, clip = Disk((0.9, 0.0), 0.3), Disk((0.0, 0.0), 1.0)
    arc = arc_outside_disk(carrier, clip)
    assert arc.kind == "partial"
    # Solving x^2+y^2=1 and (x-0.9)^2+y^2=0.09 gives x=43/45, y=±4√11/45.
    ends = sorted(arc.endpoints(), key=lambda p: p[1])
    y = 4 * math.sqrt(11) / 45
    assert ends[0] == pytest.approx((43 / 45, -y), abs=1e-12)
    assert ends[1] == pytest.approx((43 / 45, y), abs=1e-12)
    assert arc.contains_angle(carrier.angle_of((1.2, 0.0)))
    pts, angles = sample_circle(carrier)
    outside = np.hypot(pts[:, 0], pts[:, 1]) > 1.0
    on_arc = np.array([arc.contains_angle(t) for t in angles])
    assert np.array_equal(outside, on_arc)


def test_arc_outside_disk_empty_and_full():
    assert arc_outside_disk(Disk((0, 0), 0.5), Disk((0, 0), 1)).is_empty
    assert arc_outside_disk(Disk((5, 0), 1), Disk((0, 0), 1)).is_full


def test_arc_in_disk_interior_examples():
    lower = CircularArc.between(Disk((0, 0), 0.4), math.pi, 2 * math.pi)
    assert arc_in_disk_interior(lower, Disk((0, -0.1), 1.0))
    lower_unit = CircularArc.between(Disk((0, 0), 1.0), math.pi, 2 * math.pi)
    assert not arc_in_disk_interior(lower_unit, Disk((0, 0), 0.5))
    full = CircularArc.full(Disk((0, 0), 0.3))
    d = Disk((0.25, 0.0), 0.3)
    assert not arc_in_disk_interior(full, d)
    pts = full.sample(10_000)
    inside = np.hypot(pts[:, 0] - 0.25, pts[:, 1]) < 0.3
    assert inside.any() and not inside.all()


def test_arc_in_disk_interior_empty_arc_raises():
    with pytest.raises(ValueError):
        arc_in_disk_interior(CircularArc.empty(Disk((0, 0), 1)), Disk((0, 0), 2))


def test_arc_in_disk_interior_agrees_with_sampling():
    rng = random.Random(11)
    checked = 0
    while checked < 300:
        carrier = Disk((rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform(0.1, 1.5))
        start, span = rng.uniform(0, 2 * math.pi), rng.uniform(0.05, 2 * math.pi - 0.05)
        arc = CircularArc.between(carrier, start, start + span)
        d = Disk((rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform(0.2, 2.5))
        t = start + (np.arange(10_001) / 10_000) * span
        pts = np.column_stack([carrier.center[0] + carrier.radius * np.cos(t),
                               carrier.center[1] + carrier.radius * np.sin(t)])
        gap = d.radius - np.hypot(pts[:, 0] - d.center[0], pts[:, 1] - d.center[1])
        # Skip pairs whose clearance is below what the sampling step can resolve.
        step = carrier.radius * span / 10_000
        if np.min(np.abs(gap)) < 10 * step:
            continue
        assert arc_in_disk_interior(arc, d) == bool(np.all(gap > 0))
        checked += 1


def test_choose_z_prime_examples():
    empty = CircularArc.empty(Disk((0, 0), 0.3))
    assert choose_z_prime(empty, (0, 0), (1, 0)) is None
    full = CircularArc.full(Disk((0, 0), 0.3))
    assert choose_z_prime(full, (0, 0), (0.1, 0)) == pytest.approx((-0.3, 0.0), abs=1e-12)


def test_choose_z_prime_against_sampled_feasible_set():
    carrier = Disk((0.9, 0.0), 0.3)
    arc = arc_outside_disk(carrier, Disk((0, 0), 1))
    x, p = (0.9, 0.3), (0.9, -0.3)
    z = choose_z_prime(arc, x, p)
    t = arc.start_angle + (np.arange(10_000) + 0.5) / 10_000 * arc.span
    pts = np.column_stack([0.9 + 0.3 * np.cos(t), 0.3 * np.sin(t)])
    near_x = np.hypot(pts[:, 0] - x[0], pts[:, 1] - x[1]) <= 1
    assert near_x.all()
    # Feasible set near x is the whole arc, so the rule returns its angular midpoint.
    mid = t[len(t) // 2 - 1: len(t) // 2 + 1].mean()
    assert z == pytest.approx((0.9 + 0.3 * math.cos(mid), 0.3 * math.sin(mid)), abs=1e-9)
    assert z == pytest.approx((1.2, 0.0), abs=1e-12)
    assert math.hypot(*z) > 1 and min(math.dist(z, x), math.dist(z, p)) <= 1


def test_choose_z_prime_falls_back_to_p_then_none():
    carrier = Disk((0.0, 0.0), 0.4)
    arc = CircularArc.between(carrier, 0.0, math.pi)
    far, near = (10.0, 0.0), (0.0, 1.2)
    z = choose_z_prime(arc, far, near)
    assert z is not None and math.dist(z, near) <= 1 + 1e-12
    assert choose_z_prime(arc, far, (-10.0, 0.0)) is None


def test_choose_z_prime_random_mode_stays_feasible():
    arc = arc_outside_disk(Disk((0.9, 0.0), 0.3), Disk((0, 0), 1))
    rng = random.Random(5)
    for _ in range(200):
        z = choose_z_prime(arc, (0.9, 0.3), (0.9, -0.3), rng)
        assert arc.contains_angle(arc.circle.angle_of(z))
        assert min(math.dist(z, (0.9, 0.3)), math.dist(z, (0.9, -0.3))) <= 1 + 1e-12


# -- helpers for the four-point and cap properties -----------------------------

def test_common_point_on_crossing_pair():
    u, v, w, z = (0, 0), (0.9, 0.1), (0.5, -0.4), (0.4, 0.5)
    assert segments_cross(u, v, w, z)
    i = common_point([u, v, w, z])
    assert i is not None
    assert max(math.dist((u, v, w, z)[i], q) for q in (u, v, w, z)) <= 1


def test_in_minor_cap():
    p, q = (-0.5, 0.0), (0.5, 0.0)
    center = (0.0, 0.8)
    assert in_minor_cap(p, q, center, (0.0, -0.1))
    assert not in_minor_cap(p, q, center, (0.0, 0.1))
    assert not in_minor_cap(p, q, center, (0.0, -0.5))


def test_point_repr_is_plain_tuple():
    assert repr(Point(1.0, 2.0)) == "(1.0, 2.0)"


def test_delaunay_keeps_sliver_face_near_hull():
    # Point 2 sits just inside hull edge 1-3; the thin face (1, 2, 3) must survive.
    pts = [(0.0, 0.0), (12 / 7, 36 / 11), (24 / 7, 38 / 11), (54 / 7, 43 / 11)]
    expected = delaunay_faces_oracle(pts)
    assert len(expected) == 3
    assert {f.vertices for f in delaunay(pts).faces} == expected


def test_brute_force_fallback_matches_enumeration():
    from pldg.geometry import _brute_force_faces

    rng = np.random.default_rng(8)
    pts = rng.uniform(0, 1, size=(14, 2))
    assert set(_brute_force_faces(pts)) == delaunay_faces_oracle([tuple(p) for p in pts.tolist()])
