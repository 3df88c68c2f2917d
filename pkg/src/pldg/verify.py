"""Brute-force oracles and property checks for computed graphs."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .geometry import GeneralPositionError, in_circle_many, orient_many, segments_cross
from .protocol import Variant
from .sim import RunReport, count_messages
from .udg import Graph, PointSet, build_udg

STRETCH_BOUND = 4.0 * math.pi * math.sqrt(3.0) / 9.0
BRUTE_FORCE_LIMIT = 60


def brute_force_delaunay_faces(points) -> set[tuple[int, int, int]]:
    """Every triple whose circumdisk has no other input point inside."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 3:
        return set()
    triples = np.array(list(itertools.combinations(range(n), 3)))
    o = orient_many(pts[triples[:, 0]], pts[triples[:, 1]], pts[triples[:, 2]])
    if np.any(o == 0):
        raise GeneralPositionError("collinear triple")
    faces = set()
    for start in range(0, len(triples), 2048):
        chunk = triples[start:start + 2048]
        vertex = np.zeros((len(chunk), n), dtype=bool)
        vertex[np.arange(len(chunk))[:, None], chunk] = True
        signs = in_circle_many(pts[chunk[:, 0]][:, None], pts[chunk[:, 1]][:, None],
                               pts[chunk[:, 2]][:, None], pts[None, :, :], skip=vertex)
        signs[vertex] = -1
        if np.any(signs == 0):
            raise GeneralPositionError("four cocircular points")
        for t in chunk[~np.any(signs > 0, axis=1)]:
            faces.add(tuple(int(i) for i in t))
    return faces


def delaunay_edges(points) -> set[tuple[int, int]]:
    n = len(points)
    if n == 2:
        return {(0, 1)}
    if n <= BRUTE_FORCE_LIMIT:
        faces = brute_force_delaunay_faces(points)
    else:
        from scipy.spatial import Delaunay

        pts = np.asarray(points, dtype=float)
        faces = {tuple(sorted(map(int, f))) for f in Delaunay(pts).simplices}
        tri = np.array(sorted(faces))
        vertex = np.zeros((len(tri), n), dtype=bool)
        vertex[np.arange(len(tri))[:, None], tri] = True
        signs = in_circle_many(pts[tri[:, 0]][:, None], pts[tri[:, 1]][:, None],
                               pts[tri[:, 2]][:, None], pts[None, :, :], skip=vertex)
        signs[vertex] = -1
        if np.any(signs >= 0):
            raise GeneralPositionError("global triangulation failed the empty-circle check")
    return {e for a, b, c in faces for e in ((a, b), (a, c), (b, c))}


def udel_oracle(ps: PointSet) -> Graph:
    """Delaunay edges of the whole set that are no longer than one."""
    pts = ps.points
    return Graph(pts, (e for e in delaunay_edges(pts) if math.dist(pts[e[0]], pts[e[1]]) <= 1.0))


def is_plane(g: Graph, ps: PointSet | None = None):
    """``(True, None)`` or ``(False, (edge, edge))`` for the first proper crossing."""
    pts = np.asarray(g.points if ps is None else ps.points, dtype=float).reshape(-1, 2)
    edges = np.array(sorted(g.edges), dtype=int).reshape(-1, 2)
    m = len(edges)
    if m < 2:
        return True, None
    a, b = pts[edges[:, 0]], pts[edges[:, 1]]
    for i in range(m - 1):
        rest = slice(i + 1, m)
        o1 = orient_many(a[i], b[i], a[rest])
        o2 = orient_many(a[i], b[i], b[rest])
        cand = np.nonzero(o1 * o2 < 0)[0]
        if len(cand) == 0:
            continue
        o3 = orient_many(a[rest][cand], b[rest][cand], a[i])
        o4 = orient_many(a[rest][cand], b[rest][cand], b[i])
        hits = cand[o3 * o4 < 0]
        if len(hits):
            j = i + 1 + int(hits[0])
            return False, (tuple(map(int, edges[i])), tuple(map(int, edges[j])))
    return True, None


def is_consistent(edge_sets: dict[int, frozenset]):
    for u in sorted(edge_sets):
        for e in sorted(edge_sets[u]):
            if u not in e:
                raise ValueError(f"edge {e} stored at non-incident vertex {u}")
            (w,) = (x for x in e if x != u)
            if e not in edge_sets.get(w, ()):
                return False, e
    return True, None


def stretch_factor(g: Graph, udg: Graph, ps: PointSet | None = None):
    """Worst ratio of path length in ``g`` to edge length, over all UDG edges.

    Returns ``(stretch, worst_edge)``; ``math.inf`` if some UDG edge's endpoints
    are disconnected in ``g``.
    """
    if not udg.edges:
        return 1.0, None
    edges = np.array(sorted(udg.edges))
    sources = np.unique(edges[:, 0])
    dist = dijkstra(g.sparse(), directed=False, indices=sources)
    row = {s: i for i, s in enumerate(sources.tolist())}
    worst, worst_edge = 1.0, None
    for u, v in edges.tolist():
        ratio = dist[row[u], v] / udg.length(u, v)
        if ratio > worst:
            worst, worst_edge = float(ratio), (u, v)
    return worst, worst_edge


def is_supergraph(g: Graph, udel: Graph):
    missing = sorted(udel.edges - g.edges)
    return (not missing), (missing[0] if missing else None)


def graphs_equal(g1: Graph, g2: Graph):
    diff = sorted(g1.edges ^ g2.edges)
    return (not diff), (diff[0] if diff else None)


def check_certificates(report: RunReport) -> bool:
    return all(c.replay() for c in report.certificates)


@dataclass
class VerificationVerdict:
    variant: str
    plane: bool
    crossing: tuple | None
    consistent: bool
    asymmetric_edge: tuple | None
    supergraph_of_udel: bool
    missing_udel_edge: tuple | None
    stretch: float
    worst_edge: tuple | None
    messages_ok: bool
    max_messages: int
    one_round: bool
    certificates_replay: bool

    @property
    def stretch_ok(self) -> bool:
        return self.stretch <= STRETCH_BOUND + 1e-9

    @property
    def passed(self) -> bool:
        return (self.plane and self.consistent and self.supergraph_of_udel and self.stretch_ok
                and self.messages_ok and self.one_round and self.certificates_replay)

    def to_json(self) -> dict:
        d = asdict(self)
        d["stretch_ok"] = self.stretch_ok
        d["passed"] = self.passed
        if math.isinf(self.stretch):
            d["stretch"] = "inf"
        return d


def verify_report(ps: PointSet, report: RunReport, udg: Graph | None = None,
                  udel: Graph | None = None) -> VerificationVerdict:
    udg = udg if udg is not None else build_udg(ps)
    udel = udel if udel is not None else udel_oracle(ps)
    g = report.graph
    plane, crossing = is_plane(g, ps)
    consistent, asym = is_consistent(report.final_edge_sets)
    superset, missing = is_supergraph(g, udel)
    stretch, worst = stretch_factor(g, udg, ps)
    max_messages, _ = count_messages(report)
    variant = report.variant if isinstance(report.variant, Variant) else Variant.parse(report.variant)
    return VerificationVerdict(
        variant=variant.value,
        plane=plane, crossing=crossing,
        consistent=consistent, asymmetric_edge=asym,
        supergraph_of_udel=superset, missing_udel_edge=missing,
        stretch=stretch, worst_edge=worst,
        messages_ok=max_messages <= variant.message_bound,
        max_messages=max_messages,
        one_round=report.round_count == 1,
        certificates_replay=check_certificates(report),
    )


def crossing_pairs_bruteforce(g: Graph) -> list:
    """Scalar pairwise crossing scan, kept for cross-checking ``is_plane``."""
    out = []
    edges = sorted(g.edges)
    for (a, b), (c, d) in itertools.combinations(edges, 2):
        if segments_cross(g.points[a], g.points[b], g.points[c], g.points[d]):
            out.append(((a, b), (c, d)))
    return out
