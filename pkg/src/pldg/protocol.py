"""Per-node logic of the two plane localized Delaunay graph algorithms.

Each node runs a broadcast phase (triangulate its 1-hop neighborhood, send the
circumcenters of the wide-angled faces at itself) and, after the single
communication round, a prune phase that drops local Delaunay edges which
would cross a triangle it can only partially see.

``Variant.PLDG`` tags every message with the sender's location (at most six
points per node); ``Variant.PLDG_PRIME`` sends only the centers (at most five)
and recovers the sender's circle from the nearest neighbor.
"""

from __future__ import annotations

import enum
import hashlib
import logging
import math
from dataclasses import dataclass, field

from .geometry import (
    EPS,
    Disk,
    GeneralPositionError,
    LocalTriangulation,
    Point,
    arc_in_disk_interior,
    arc_outside_disk,
    choose_z_prime,
    circumcenter,
    delaunay,
    orient,
    segments_cross,
)

log = logging.getLogger(__name__)

MAX_WIDE_FACES = 5
DEGENERACY_BAND = 10.0
HULL_OFFSET = 1.0


class Variant(enum.Enum):
    PLDG = "PLDG"
    PLDG_PRIME = "PLDG'"

    @property
    def message_bound(self) -> int:
        return MAX_WIDE_FACES + 1 if self is Variant.PLDG else MAX_WIDE_FACES

    @classmethod
    def parse(cls, name: str) -> Variant:
        key = name.strip().lower().replace("_", "-")
        aliases = {"pldg": cls.PLDG, "pldg'": cls.PLDG_PRIME, "pldg-prime": cls.PLDG_PRIME,
                   "pldgprime": cls.PLDG_PRIME, "prime": cls.PLDG_PRIME}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown variant {name!r}") from None


class DegenerateInstanceError(GeneralPositionError):
    """A tolerance-sensitive decision fell inside the clearance band."""


class ProtocolError(RuntimeError):
    pass


class WitnessError(ProtocolError):
    """A constructed empty-disk witness failed its own membership check."""


@dataclass(frozen=True)
class BroadcastMessage:
    variant: Variant
    centers: tuple[Point, ...]
    sender_location: Point | None = None

    @property
    def point_count(self) -> int:
        return len(self.centers) + (1 if self.variant is Variant.PLDG else 0)

    def key(self):
        if self.variant is Variant.PLDG:
            return (self.sender_location, self.centers)
        return (self.centers,)


@dataclass(frozen=True)
class RemovalCertificate:
    node: int
    removed_edge: tuple[int, int]
    node_location: Point
    y_location: Point
    triggering_center: Point
    boundary_pair: tuple[Point, Point]
    z_prime: Point
    witness_disk: Disk

    def replay(self) -> bool:
        """Re-evaluate the removal test from the recorded fields alone."""
        x, p = self.boundary_pair
        carrier = Disk(self.triggering_center, math.dist(self.triggering_center, x))
        arc = arc_outside_disk(carrier, Disk(self.node_location, 1.0))
        if arc.is_empty:
            return False
        v, y, z = self.node_location, self.y_location, self.z_prime
        crosses = segments_cross(v, y, x, z) or segments_cross(v, y, p, z)
        return crosses and arc_in_disk_interior(arc, self.witness_disk)

    def to_json(self) -> dict:
        return {
            "node": self.node,
            "removed_edge": list(self.removed_edge),
            "node_location": list(self.node_location),
            "y_location": list(self.y_location),
            "triggering_center": list(self.triggering_center),
            "boundary_pair": [list(self.boundary_pair[0]), list(self.boundary_pair[1])],
            "z_prime": list(self.z_prime),
            "witness_disk": {"center": list(self.witness_disk.center),
                             "radius": self.witness_disk.radius},
        }

    @classmethod
    def from_json(cls, d: dict) -> RemovalCertificate:
        w = d["witness_disk"]
        return cls(d["node"], tuple(d["removed_edge"]), Point(*d["node_location"]),
                   Point(*d["y_location"]), Point(*d["triggering_center"]),
                   (Point(*d["boundary_pair"][0]), Point(*d["boundary_pair"][1])),
                   Point(*d["z_prime"]), Disk(Point(*w["center"]), w["radius"]))


def digest(obj) -> str:
    return hashlib.sha256(repr(obj).encode()).hexdigest()[:16]


@dataclass
class NodeState:
    id: int
    location: Point
    variant: Variant
    neighborhood: dict[int, Point]
    ldt: LocalTriangulation
    local_ids: tuple[int, ...]
    edge_set: set[tuple[int, int]]
    initial_edges: frozenset[tuple[int, int]]
    trace: list[tuple[str, str, str]] = field(default_factory=list)
    certificates: list[RemovalCertificate] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    _witnesses: dict[int, Disk] = field(default_factory=dict, repr=False)

    def log(self, op: str, inputs, outputs) -> None:
        self.trace.append((op, digest(inputs), digest(outputs)))

    def local_index(self, vertex: int) -> int:
        return self.local_ids.index(vertex)

    def edge_coords(self, edges) -> tuple:
        return tuple(sorted(self.neighborhood[y] for e in edges for y in e if y != self.id))


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _empty_triangulation(point: Point) -> LocalTriangulation:
    return LocalTriangulation((point,), frozenset(), frozenset())


def _angle_exceeds_third_pi(v, u, w) -> bool:
    ax, ay = u[0] - v[0], u[1] - v[1]
    bx, by = w[0] - v[0], w[1] - v[1]
    return ax * bx + ay * by < 0.5 * math.hypot(ax, ay) * math.hypot(bx, by)


def broadcast_phase(v: int, n_v: dict[int, Point], variant: Variant):
    """Triangulate N_v, collect E(v), and build the outgoing message.

    Returns ``(state, message)``; ``message`` is None when no incident face has
    an angle above pi/3 at ``v``.
    """
    if v not in n_v:
        raise ValueError("node must belong to its own neighborhood")
    local_ids = tuple(sorted(n_v, key=lambda i: n_v[i]))
    pts = [n_v[i] for i in local_ids]
    location = n_v[v]
    ldt = delaunay(pts) if len(pts) >= 2 else _empty_triangulation(location)
    lv = local_ids.index(v)
    edges = frozenset(_edge(local_ids[a], local_ids[b]) for a, b in ldt.incident_edges(lv))
    state = NodeState(v, location, variant, dict(n_v), ldt, local_ids, set(edges), edges)
    state.log("neighborhood", location, tuple(sorted(pts)))
    faces_xy = tuple(sorted(tuple(sorted(pts[i] for i in f.vertices)) for f in ldt.faces))
    state.log("triangulate", tuple(sorted(pts)), faces_xy)
    state.log("incident_edges", faces_xy, state.edge_coords(edges))

    centers = []
    for face in ldt.faces_at(lv):
        u, w = (pts[i] for i in face.vertices if i != lv)
        if _angle_exceeds_third_pi(location, u, w):
            centers.append(circumcenter(*(pts[i] for i in face.vertices)))
    if len(centers) > MAX_WIDE_FACES:
        raise ProtocolError(f"node {v}: {len(centers)} faces wider than pi/3")
    centers.sort(key=lambda c: (math.atan2(c[1] - location[1], c[0] - location[0]) % (2 * math.pi), c))

    message = None
    if centers:
        sender = location if variant is Variant.PLDG else None
        message = BroadcastMessage(variant, tuple(centers), sender)
    state.log("broadcast", faces_xy, message.key() if message else None)
    return state, message


def candidate_empty_disk(state: NodeState, y: int) -> Disk:
    """A disk with exactly v and y of N_v on its boundary and none inside."""
    if y in state._witnesses:
        return state._witnesses[y]
    if _edge(state.id, y) not in state.initial_edges:
        raise ProtocolError(f"({state.id}, {y}) is not a local Delaunay edge")
    ldt = state.ldt
    pts = ldt.points
    lv, ly = state.local_index(state.id), state.local_index(y)
    v, w = pts[lv], pts[ly]
    faces = ldt.faces_with_edge(lv, ly)
    if len(faces) == 2:
        ca = circumcenter(*(pts[i] for i in faces[0].vertices))
        cb = circumcenter(*(pts[i] for i in faces[1].vertices))
        center = Point((ca[0] + cb[0]) / 2.0, (ca[1] + cb[1]) / 2.0)
    elif len(faces) == 1:
        (apex,) = (i for i in faces[0].vertices if i not in (lv, ly))
        c = circumcenter(*(pts[i] for i in faces[0].vertices))
        nx, ny = w[1] - v[1], v[0] - w[0]
        norm = math.hypot(nx, ny)
        nx, ny = nx / norm, ny / norm
        # Outward means away from the apex of the single adjacent face.
        if orient(v, w, pts[apex]) == orient(v, w, (v[0] + nx, v[1] + ny)):
            nx, ny = -nx, -ny
        center = Point(c[0] + HULL_OFFSET * nx, c[1] + HULL_OFFSET * ny)
    else:
        center = Point((v[0] + w[0]) / 2.0, (v[1] + w[1]) / 2.0)
    disk = Disk(center, math.dist(center, v))
    _check_witness(state, disk, y)
    state._witnesses[y] = disk
    return disk


def _check_witness(state: NodeState, disk: Disk, y: int) -> None:
    """Confirm that ``disk`` passes through v and y and excludes the rest of N_v.

    Every disk through v and y has its center at m + t*n on their bisector. A
    point q is outside exactly when t is beyond a threshold t_q computed from
    local coordinates, so the test stays well conditioned for huge disks.
    """
    v, w = state.location, state.neighborhood[y]
    if abs(disk.distance(w) - disk.radius) > disk.tolerance():
        raise WitnessError(f"witness for ({state.id}, {y}) misses endpoint {y}")
    mx, my = (v[0] + w[0]) / 2.0, (v[1] + w[1]) / 2.0
    nx, ny = w[1] - v[1], v[0] - w[0]
    norm = math.hypot(nx, ny)
    nx, ny = nx / norm, ny / norm
    t = (disk.center[0] - mx) * nx + (disk.center[1] - my) * ny
    half2 = (v[0] - mx) ** 2 + (v[1] - my) ** 2
    margin = EPS * max(1.0, abs(t))
    for u, q in state.neighborhood.items():
        if u in (state.id, y):
            continue
        h = (q[0] - mx) * nx + (q[1] - my) * ny
        a = (q[0] - mx) ** 2 + (q[1] - my) ** 2 - half2
        # q is outside iff a - 2*t*h > 0.
        if h == 0.0:
            slack = a
        else:
            slack = (t - a / (2.0 * h)) if h < 0 else (a / (2.0 * h) - t)
        if slack <= -margin:
            raise WitnessError(f"witness for ({state.id}, {y}) holds point {u}")
        if slack <= margin:
            raise DegenerateInstanceError(
                f"node {state.id}: point {u} within clearance of witness for ({state.id}, {y})")


def _resolve_carrier(state: NodeState, center: Point, sender: Point | None, ids, coords):
    """The carrier disk and boundary pair (x, p) for one received center.

    Raises ``DegenerateInstanceError`` when a neighborhood point sits inside the
    clearance band around the circle, where the boundary test is not trustworthy.
    """
    cx, cy = center
    dist = [math.hypot(px - cx, py - cy) for px, py in coords]
    if state.variant is Variant.PLDG:
        try:
            xi = coords.index(sender)
        except ValueError:
            return None, "sender outside neighborhood"
    else:
        others = [i for i, u in enumerate(ids) if u != state.id]
        if not others:
            return None, "no neighbors"
        xi = min(others, key=dist.__getitem__)
    radius = dist[xi]
    if radius <= EPS:
        return None, "center coincides with a neighborhood point"
    tol = EPS * max(1.0, radius)
    on_circle = []
    for i, d in enumerate(dist):
        gap = abs(d - radius)
        if gap <= tol:
            on_circle.append(i)
        elif gap <= DEGENERACY_BAND * tol:
            raise DegenerateInstanceError(
                f"node {state.id}: point within clearance of circle around {center}")
    if len(on_circle) != 2:
        return None, f"{len(on_circle)} points on circle"
    if state.variant is Variant.PLDG_PRIME:
        # Both boundary points are equally near; pick the lexicographically smaller as x'.
        candidates = [i for i in on_circle if ids[i] != state.id]
        xi = min(candidates, key=coords.__getitem__)
    (pi,) = (i for i in on_circle if i != xi)
    return (Disk(center, radius), ids[xi], ids[pi]), None


def prune_phase(state: NodeState, received, variant: Variant | None = None,
                shuffle=None, z_rng=None) -> NodeState:
    """Drop edges that cross a face this node can only partly see.

    ``received`` holds ``(sender, message)`` pairs; ``shuffle`` (a
    ``random.Random``) permutes the processing order, ``z_rng`` randomises the
    choice of z'. Both exist only to probe order and choice independence.
    """
    variant = variant or state.variant
    if variant is not state.variant:
        raise ValueError("variant mismatch between phases")
    messages = sorted((m for _, m in received), key=lambda m: m.key())
    work = [(m, i, c) for m in messages for i, c in enumerate(m.centers)]
    if shuffle is not None:
        shuffle.shuffle(work)

    ids = list(state.local_ids)
    coords = [state.neighborhood[u] for u in ids]
    v = state.location
    unit = Disk(v, 1.0)
    for message, index, center in work:
        inputs = (message.sender_location, center)
        if variant is Variant.PLDG and message.sender_location is None:
            raise ProtocolError("PLDG message without sender location")
        resolved, reason = _resolve_carrier(state, center, message.sender_location, ids, coords)
        if resolved is None:
            if reason.startswith(("sender", "center")):
                state.diagnostics.append(f"rejected center {center}: {reason}")
                log.debug("node %s rejected center %s: %s", state.id, center, reason)
            state.log("skip", inputs, reason)
            continue
        carrier, x, p = resolved
        px, pp = state.neighborhood[x], state.neighborhood[p]
        arc = arc_outside_disk(carrier, unit)
        z = choose_z_prime(arc, px, pp, z_rng)
        if arc.is_empty or z is None:
            if variant is Variant.PLDG:
                state.diagnostics.append(f"center {center}: empty arc or no z'")
            state.log("skip", inputs, "empty arc or feasible set")
            continue
        removed = []
        for edge in sorted(state.edge_set):
            (y,) = (u for u in edge if u != state.id)
            py = state.neighborhood[y]
            if not (segments_cross(v, py, px, z) or segments_cross(v, py, pp, z)):
                continue
            witness = candidate_empty_disk(state, y)
            if arc_in_disk_interior(arc, witness):
                state.edge_set.discard(edge)
                removed.append(py)
                state.certificates.append(RemovalCertificate(
                    state.id, edge, v, py, center, (px, pp), z, witness))
        state.log("prune", inputs,
                  (carrier.radius, tuple(sorted((px, pp))), z, tuple(sorted(removed))))
    state.log("final", state.edge_coords(state.initial_edges), state.edge_coords(state.edge_set))
    return state

