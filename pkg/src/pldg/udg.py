"""Unit-disk graphs, weighted k-neighborhoods and shortest paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .geometry import Point


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point, ...]
    seed: int | None = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = tuple(Point(float(p[0]), float(p[1])) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not all(math.isfinite(c) for p in pts for c in p):
            raise ValueError("point coordinates must be finite")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i) -> Point:
        return self.points[i]

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)

    def subset(self, indices: Iterable[int]) -> PointSet:
        """Restriction to ``indices``; the new labels follow the sorted old labels."""
        keep = sorted(indices)
        return PointSet(tuple(self.points[i] for i in keep), self.seed,
                        dict(self.params, restricted_from=keep))


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected geometric graph on an indexed point list with Euclidean edge lengths."""

    def __init__(self, points, edges: Iterable[tuple[int, int]] = ()):
        self.points = tuple(points)
        self.edges = frozenset(_edge(int(u), int(v)) for u, v in edges)
        self.adjacency: list[set[int]] = [set() for _ in self.points]
        for u, v in self.edges:
            if u == v:
                raise ValueError("self loop")
            self.adjacency[u].add(v)
            self.adjacency[v].add(u)

    @property
    def vertex_count(self) -> int:
        return len(self.points)

    def length(self, u: int, v: int) -> float:
        return math.dist(self.points[u], self.points[v])

    def lengths(self) -> dict[tuple[int, int], float]:
        return {e: self.length(*e) for e in self.edges}

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def sparse(self) -> csr_matrix:
        n = self.vertex_count
        if not self.edges:
            return csr_matrix((n, n))
        e = np.array(sorted(self.edges))
        w = np.array([self.length(u, v) for u, v in e])
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return csr_matrix((np.concatenate([w, w]), (rows, cols)), shape=(n, n))

    def components(self) -> list[int]:
        _, labels = connected_components(self.sparse(), directed=False)
        return labels.tolist()

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(set(self.components())) == 1

    def __eq__(self, other):
        return isinstance(other, Graph) and self.points == other.points and self.edges == other.edges

    def __repr__(self):
        return f"Graph({self.vertex_count} vertices, {len(self.edges)} edges)"


def build_udg(ps: PointSet) -> Graph:
    pts = ps.array()
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    iu, ju = np.nonzero(np.triu(dist <= 1.0, k=1))
    return Graph(ps.points, zip(iu.tolist(), ju.tolist()))


def distances_from(g: Graph, u: int, limit: float = np.inf) -> np.ndarray:
    return dijkstra(g.sparse(), directed=False, indices=u, limit=limit)


def neighborhood(ps: PointSet, g: Graph, u: int, k: float) -> list[int]:
    """N_k(u): vertices whose weighted UDG distance from ``u`` is at most ``k``."""
    if k == 1:
        return sorted(g.adjacency[u] | {u})
    dist = distances_from(g, u, limit=k)
    return np.nonzero(dist <= k)[0].tolist()


def shortest_path_length(g: Graph, u: int, v: int) -> float:
    """Euclidean length of a shortest u-v path; ``math.inf`` when unreachable."""
    if u == v:
        return 0.0
    return float(distances_from(g, u)[v])
