"""Planar geometry primitives.

``orient`` and ``in_circle`` are sign-exact: a floating-point filter settles
the easy cases and everything else is re-evaluated with exact rational
arithmetic (every double is a dyadic rational, so scaling to integers loses nothing).
All constructions (circumcenters, circle intersections, arcs) are plain
floating point with tolerance ``EPS``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

EPS = 1e-9
TWO_PI = 2.0 * math.pi

_MACH = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _MACH) * _MACH
_ICC_BOUND = (10.0 + 96.0 * _MACH) * _MACH


class GeneralPositionError(ValueError):
    """Input has collinear triples or cocircular quadruples where it matters."""


class CoincidentCirclesError(ValueError):
    pass


class Point(NamedTuple):
    x: float
    y: float

    # Plain tuple formatting: traces hash reprs of many points.
    __repr__ = tuple.__repr__


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius >= 0.0:
            raise ValueError(f"negative radius {self.radius}")

    def tolerance(self) -> float:
        return EPS * max(1.0, self.radius)

    def distance(self, p) -> float:
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1])

    def classify(self, p) -> int:
        """+1 interior, 0 on the boundary (within tolerance), -1 exterior."""
        d = self.distance(p) - self.radius
        tol = self.tolerance()
        if d < -tol:
            return 1
        if d > tol:
            return -1
        return 0

    def contains(self, p) -> bool:
        return self.classify(p) >= 0

    def point_at(self, angle: float) -> Point:
        return Point(self.center[0] + self.radius * math.cos(angle),
                     self.center[1] + self.radius * math.sin(angle))

    def angle_of(self, p) -> float:
        return math.atan2(p[1] - self.center[1], p[0] - self.center[0]) % TWO_PI


@dataclass(frozen=True)
class Triangle:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if len({self.a, self.b, self.c}) != 3:
            raise ValueError("triangle vertices must be distinct")

    @property
    def vertices(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def edges(self):
        a, b, c = sorted(self.vertices)
        return ((a, b), (a, c), (b, c))


@dataclass(frozen=True)
class CircularArc:
    """Open counterclockwise arc of ``circle`` from ``start_angle`` to ``end_angle``.

    ``kind`` is ``"partial"``, ``"full"`` or ``"empty"``; angles live in [0, 2pi).
    """

    circle: Disk
    start_angle: float = 0.0
    end_angle: float = 0.0
    kind: str = "partial"

    @classmethod
    def empty(cls, circle: Disk) -> CircularArc:
        return cls(circle, 0.0, 0.0, "empty")

    @classmethod
    def full(cls, circle: Disk) -> CircularArc:
        return cls(circle, 0.0, 0.0, "full")

    @classmethod
    def between(cls, circle: Disk, start: float, end: float) -> CircularArc:
        return cls(circle, start % TWO_PI, end % TWO_PI, "partial")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def is_full(self) -> bool:
        return self.kind == "full"

    @property
    def span(self) -> float:
        if self.kind == "empty":
            return 0.0
        if self.kind == "full":
            return TWO_PI
        return (self.end_angle - self.start_angle) % TWO_PI

    def angle_at(self, fraction: float) -> float:
        return (self.start_angle + fraction * self.span) % TWO_PI

    def point_at(self, angle: float) -> Point:
        return self.circle.point_at(angle)

    def midpoint(self) -> Point:
        if self.is_empty:
            raise ValueError("empty arc has no midpoint")
        return self.point_at(self.angle_at(0.5))

    def endpoints(self) -> tuple[Point, ...]:
        if self.kind != "partial":
            return ()
        return (self.point_at(self.start_angle), self.point_at(self.end_angle))

    def contains_angle(self, angle: float, margin: float = 0.0) -> bool:
        """True if ``angle`` lies on the open arc, at least ``margin`` radians from its ends."""
        if self.is_empty:
            return False
        if self.is_full:
            return True
        offset = (angle - self.start_angle) % TWO_PI
        return margin < offset < self.span - margin

    def sample(self, count: int) -> np.ndarray:
        """``count`` points at evenly spaced interior angles, as an array."""
        if self.is_empty:
            return np.empty((0, 2))
        t = (np.arange(count) + 0.5) / count
        ang = self.start_angle + t * self.span
        c = self.circle.center
        return np.column_stack([c[0] + self.circle.radius * np.cos(ang),
                                c[1] + self.circle.radius * np.sin(ang)])


@dataclass(frozen=True)
class LocalTriangulation:
    points: tuple[Point, ...]
    faces: frozenset[Triangle]
    edges: frozenset[tuple[int, int]]

    def incident_edges(self, v: int) -> list[tuple[int, int]]:
        return sorted(e for e in self.edges if v in e)

    def faces_with_edge(self, i: int, j: int) -> list[Triangle]:
        return sorted((f for f in self.faces if i in f.vertices and j in f.vertices),
                      key=lambda f: f.vertices)

    def faces_at(self, v: int) -> list[Triangle]:
        return sorted((f for f in self.faces if v in f.vertices), key=lambda f: f.vertices)


# -- exact predicates -------------------------------------------------------

def _sign(value) -> int:
    return int(value > 0) - int(value < 0)


def _as_integers(*coords) -> list[int]:
    # Common power-of-two scaling; predicate determinants are homogeneous so signs survive.
    ratios = [float(c).as_integer_ratio() for c in coords]
    den = max(d for _, d in ratios)
    return [n * (den // d) for n, d in ratios]


def _orient_exact(p, q, r) -> int:
    px, py, qx, qy, rx, ry = _as_integers(p[0], p[1], q[0], q[1], r[0], r[1])
    return _sign((px - rx) * (qy - ry) - (py - ry) * (qx - rx))


def orient(p, q, r) -> int:
    """+1 if ``r`` is left of the directed line ``pq``, -1 if right, 0 if collinear."""
    left = (p[0] - r[0]) * (q[1] - r[1])
    right = (p[1] - r[1]) * (q[0] - r[0])
    det = left - right
    if abs(det) > _CCW_BOUND * (abs(left) + abs(right)):
        return _sign(det)
    return _orient_exact(p, q, r)


def _incircle_exact(a, b, c, d) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = _as_integers(
        a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return _sign(det)


def _incircle_ccw(a, b, c, d) -> int:
    # Sign of the lifted determinant; positive means d inside when a, b, c are ccw.
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > _ICC_BOUND * permanent:
        return _sign(det)
    return _incircle_exact(a, b, c, d)


def in_circle(a, b, c, d) -> int:
    """+1 if ``d`` is inside the circle through ``a, b, c``, 0 on it, -1 outside.

    The answer does not depend on the orientation of ``a, b, c``.
    """
    o = orient(a, b, c)
    if o == 0:
        raise GeneralPositionError(f"collinear points {a}, {b}, {c}")
    return o * _incircle_ccw(a, b, c, d)


def orient_many(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Vectorised ``orient`` over broadcastable (..., 2) arrays."""
    p, q, r = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float), np.asarray(r, float))
    left = (p[..., 0] - r[..., 0]) * (q[..., 1] - r[..., 1])
    right = (p[..., 1] - r[..., 1]) * (q[..., 0] - r[..., 0])
    det = left - right
    out = np.sign(det).astype(np.int8)
    unsure = np.abs(det) <= _CCW_BOUND * (np.abs(left) + np.abs(right))
    for idx in zip(*np.nonzero(unsure)):
        out[idx] = _orient_exact(p[idx], q[idx], r[idx])
    return out


def in_circle_many(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray,
                   skip: np.ndarray | None = None) -> np.ndarray:
    """Vectorised ``in_circle``; collinear ``a, b, c`` rows raise.

    Entries flagged in ``skip`` are left unresolved (their value is meaningless).
    """
    a, b, c, d = np.broadcast_arrays(*(np.asarray(v, float) for v in (a, b, c, d)))
    o = orient_many(a, b, c)
    if np.any(o == 0):
        raise GeneralPositionError("collinear triple in in_circle_many")
    adx, ady = a[..., 0] - d[..., 0], a[..., 1] - d[..., 1]
    bdx, bdy = b[..., 0] - d[..., 0], b[..., 1] - d[..., 1]
    cdx, cdy = c[..., 0] - d[..., 0], c[..., 1] - d[..., 1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = ((np.abs(bdxcdy) + np.abs(cdxbdy)) * alift
                 + (np.abs(cdxady) + np.abs(adxcdy)) * blift
                 + (np.abs(adxbdy) + np.abs(bdxady)) * clift)
    out = np.sign(det).astype(np.int8)
    unsure = np.abs(det) <= _ICC_BOUND * permanent
    if skip is not None:
        unsure &= ~skip
    for idx in zip(*np.nonzero(unsure)):
        out[idx] = _incircle_exact(a[idx], b[idx], c[idx], d[idx])
    return out * o


# -- constructions ----------------------------------------------------------

def circumcenter(a, b, c) -> Point:
    if orient(a, b, c) == 0:
        raise GeneralPositionError(f"collinear points {a}, {b}, {c}")
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Point(a[0] + ux, a[1] + uy)


def circumdisk(a, b, c) -> Disk:
    center = circumcenter(a, b, c)
    return Disk(center, math.dist(center, a))


def segments_cross(a, b, c, d) -> bool:
    """Proper crossing: one common point interior to both segments, not collinear."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 * o4 < 0


def circle_circle_intersections(d1: Disk, d2: Disk) -> list[Point]:
    r1, r2 = d1.radius, d2.radius
    if r1 <= 0.0 or r2 <= 0.0:
        raise ValueError("circle intersection needs positive radii")
    (x1, y1), (x2, y2) = d1.center, d2.center
    dx, dy = x2 - x1, y2 - y1
    dist = math.hypot(dx, dy)
    tol = EPS * max(1.0, r1, r2)
    if dist <= tol:
        if abs(r1 - r2) <= tol:
            raise CoincidentCirclesError("circles coincide")
        return []
    if dist > r1 + r2 + tol or dist < abs(r1 - r2) - tol:
        return []
    a = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist)
    ux, uy = dx / dist, dy / dist
    bx, by = x1 + a * ux, y1 + a * uy
    if abs(dist - (r1 + r2)) <= tol or abs(dist - abs(r1 - r2)) <= tol:
        return [Point(bx, by)]
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    return [Point(bx - h * uy, by + h * ux), Point(bx + h * uy, by - h * ux)]


def _arc_inside(carrier: Disk, disk: Disk) -> CircularArc:
    """Part of the carrier circle lying in the closed ``disk`` (an arc, maybe empty or full)."""
    pts = circle_circle_intersections(carrier, disk)
    if len(pts) == 2:
        t1, t2 = carrier.angle_of(pts[0]), carrier.angle_of(pts[1])
        arc = CircularArc.between(carrier, t1, t2)
        if disk.distance(arc.midpoint()) <= disk.radius:
            return arc
        return CircularArc.between(carrier, t2, t1)
    if len(pts) == 1:
        probe = carrier.angle_of(pts[0]) + math.pi
    else:
        probe = 0.0
    if disk.distance(carrier.point_at(probe)) <= disk.radius:
        return CircularArc.full(carrier)
    return CircularArc.empty(carrier)


def arc_outside_disk(carrier: Disk, clip: Disk) -> CircularArc:
    """The open part of the carrier circle strictly outside the closed ``clip`` disk."""
    inside = _arc_inside(carrier, clip)
    if inside.is_full:
        return CircularArc.empty(carrier)
    if inside.is_empty:
        return CircularArc.full(carrier)
    return CircularArc.between(carrier, inside.end_angle, inside.start_angle)


def arc_in_disk_interior(arc: CircularArc, d: Disk) -> bool:
    if arc.is_empty:
        raise ValueError("arc_in_disk_interior needs a nonempty arc")
    try:
        crossings = circle_circle_intersections(arc.circle, d)
    except CoincidentCirclesError:
        return False
    margin = EPS / arc.circle.radius
    for pt in crossings:
        if arc.contains_angle(arc.circle.angle_of(pt), margin):
            return False
    if not d.distance(arc.midpoint()) < d.radius:
        return False
    tol = d.tolerance()
    return all(d.distance(e) <= d.radius + tol for e in arc.endpoints())


def intersect_arcs(first: CircularArc, second: CircularArc) -> list[CircularArc]:
    """Intersection of two open arcs on the same circle (zero, one or two arcs)."""
    if first.is_empty or second.is_empty:
        return []
    if first.is_full:
        return [second]
    if second.is_full:
        return [first]
    span1 = first.span
    offset = (second.start_angle - first.start_angle) % TWO_PI
    pieces = []
    for lo in (offset, offset - TWO_PI):
        hi = lo + second.span
        lo, hi = max(lo, 0.0), min(hi, span1)
        if hi > lo:
            pieces.append(CircularArc.between(first.circle, first.start_angle + lo,
                                              first.start_angle + hi))
    return pieces


def feasible_pieces(arc: CircularArc, anchor) -> list[CircularArc]:
    """Pieces of ``arc`` within unit distance of ``anchor``."""
    if arc.is_empty:
        return []
    return intersect_arcs(arc, _arc_inside(arc.circle, Disk(Point(*anchor), 1.0)))


def choose_z_prime(arc: CircularArc, x, p, rng=None) -> Point | None:
    """Pick a point z' on ``arc`` with |xz'| <= 1 or |pz'| <= 1, or None.

    Deterministic by default: midpoint of the longest piece near ``x``, falling
    back to ``p``. With ``rng`` (a ``random.Random``) a uniformly random
    feasible point is returned instead.
    """
    if arc.is_empty:
        return None
    if rng is not None:
        pieces = feasible_pieces(arc, x) + feasible_pieces(arc, p)
        if not pieces:
            return None
        weights = [piece.span for piece in pieces]
        piece = rng.choices(pieces, weights=weights)[0]
        return piece.point_at(piece.angle_at(rng.uniform(0.01, 0.99)))
    for anchor in (x, p):
        pieces = feasible_pieces(arc, anchor)
        if pieces:
            return max(pieces, key=lambda a: a.span).midpoint()
    return None


# -- Delaunay ---------------------------------------------------------------

def _empty_circle_violations(pts: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """For each face, the in_circle signs of every point (vertices masked to -1)."""
    n = len(pts)
    a = pts[faces[:, 0]][:, None, :]
    b = pts[faces[:, 1]][:, None, :]
    c = pts[faces[:, 2]][:, None, :]
    rows = np.arange(len(faces))[:, None]
    vertex = np.zeros((len(faces), n), dtype=bool)
    vertex[rows, faces] = True
    signs = in_circle_many(a, b, c, pts[None, :, :], skip=vertex)
    signs[vertex] = -1
    assert signs.shape == (len(faces), n)
    return signs


def _triangulation_from_faces(points, faces) -> LocalTriangulation:
    tris = frozenset(Triangle(*sorted(map(int, f))) for f in faces)
    edges = frozenset(e for t in tris for e in t.edges())
    return LocalTriangulation(tuple(points), tris, edges)


def _brute_force_faces(pts: np.ndarray) -> list[tuple[int, int, int]]:
    triples = np.array(list(itertools.combinations(range(len(pts)), 3)))
    # Collinear triples are never faces.
    triples = triples[orient_many(pts[triples[:, 0]], pts[triples[:, 1]], pts[triples[:, 2]]) != 0]
    signs = _empty_circle_violations(pts, triples)
    blocked = np.any(signs > 0, axis=1)
    if np.any(~blocked & np.any(signs == 0, axis=1)):
        raise GeneralPositionError("four cocircular points")
    return [tuple(map(int, t)) for t in triples[~blocked]]


def delaunay(points: Sequence) -> LocalTriangulation:
    """Delaunay triangulation of a small point set in general position.

    A fully collinear input yields the chain through its points and no faces.

    Built with Qhull, then certified with the exact empty-circle test; a failed
    certificate falls back to triple enumeration.
    """
    points = [Point(float(p[0]), float(p[1])) for p in points]
    n = len(points)
    if n < 2:
        raise ValueError("delaunay needs at least two points")
    if len(set(points)) != n:
        raise GeneralPositionError("duplicate points")
    if n == 2:
        return LocalTriangulation(tuple(points), frozenset(), frozenset({(0, 1)}))
    pts = np.array(points)
    if not np.any(orient_many(pts[0], pts[1], pts[2:])):
        return _collinear_chain(points)
    if n == 3:
        return _triangulation_from_faces(points, [(0, 1, 2)])

    from scipy.spatial import Delaunay, QhullError

    try:
        faces = np.sort(Delaunay(pts).simplices, axis=1)
    except QhullError as exc:
        raise GeneralPositionError(str(exc)) from exc
    if _certified(pts, faces):
        return _triangulation_from_faces(points, faces)
    return _triangulation_from_faces(points, _brute_force_faces(pts))


def _collinear_chain(points) -> LocalTriangulation:
    """All points on one line: the triangulation is the path through them in order."""
    order = sorted(range(len(points)), key=lambda i: points[i])
    edges = frozenset(tuple(sorted(e)) for e in zip(order, order[1:]))
    return LocalTriangulation(tuple(points), frozenset(), edges)


def _certified(pts: np.ndarray, faces: np.ndarray) -> bool:
    if len(faces) == 0:
        raise GeneralPositionError("all points collinear")
    o = orient_many(pts[faces[:, 0]], pts[faces[:, 1]], pts[faces[:, 2]])
    if np.any(o == 0):
        raise GeneralPositionError("degenerate face")
    signs = _empty_circle_violations(pts, faces)
    if np.any(signs == 0):
        raise GeneralPositionError("four cocircular points")
    if np.any(signs > 0):
        return False
    # Every empty-circle face is a Delaunay face; the count, against an
    # independently computed hull, confirms none are missing.
    return len(faces) == 2 * len(pts) - 2 - _hull_point_count(pts)


def _hull_point_count(pts: np.ndarray) -> int:
    """Number of points on the convex hull boundary, collinear ones included."""
    order = sorted(map(tuple, pts.tolist()))
    chain: list = []
    for part in (order, order[::-1]):
        start = len(chain)
        for p in part:
            while len(chain) - start >= 2 and orient(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        chain.pop()
    corners = chain
    count = 0
    for p in order:
        for a, b in zip(corners, corners[1:] + corners[:1]):
            if p == a or (orient(a, b, p) == 0 and min(a, b) < p < max(a, b)):
                count += 1
                break
    return count


def common_point(points: Sequence) -> int | None:
    """Index of a point within unit distance of every other point, if any."""
    for i, p in enumerate(points):
        if all(math.dist(p, q) <= 1.0 for q in points):
            return i
    return None


def in_minor_cap(p, q, center, pt) -> bool:
    """True if ``pt`` lies in the region cut from the disk through p, q (centered
    at ``center``) by the chord pq, on the minor-arc side."""
    r = math.dist(center, p)
    if math.dist(center, pt) > r:
        return False
    side_center = orient(p, q, center)
    side_pt = orient(p, q, pt)
    if side_pt == 0:
        return True
    return side_pt != side_center
