"""Synchronous one-round execution of the per-node protocol over a point set."""

from __future__ import annotations

import random
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .protocol import (
    BroadcastMessage,
    NodeState,
    RemovalCertificate,
    Variant,
    broadcast_phase,
    prune_phase,
)
from .udg import Graph, PointSet, build_udg, neighborhood


@dataclass
class RunReport:
    variant: Variant
    points: tuple
    per_node_message_count: dict[int, int]
    round_count: int
    final_edge_sets: dict[int, frozenset[tuple[int, int]]]
    initial_edge_sets: dict[int, frozenset[tuple[int, int]]]
    certificates: list[RemovalCertificate]
    traces: dict[int, list[tuple[str, str, str]]]
    messages: dict[int, BroadcastMessage | None] = field(repr=False, default_factory=dict)
    diagnostics: dict[int, list[str]] = field(repr=False, default_factory=dict)

    @property
    def graph(self) -> Graph:
        return Graph(self.points, (e for edges in self.final_edge_sets.values() for e in edges))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self.graph.edges


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def run(ps: PointSet, variant: Variant | str, *, workers: int | None = None,
        shuffle_seed: int | None = None, z_seed: int | None = None,
        udg: Graph | None = None) -> RunReport:
    """Run every node's broadcast phase, deliver, then every node's prune phase.

    ``workers`` fans each phase out to a thread pool. ``shuffle_seed`` and
    ``z_seed`` randomise message-processing order and the z' choice per node.
    """
    if isinstance(variant, str):
        variant = Variant.parse(variant)
    g = udg if udg is not None else build_udg(ps)
    if not g.is_connected():
        warnings.warn("unit-disk graph is disconnected; checks apply per component",
                      stacklevel=2)
    nodes = range(len(ps))

    def broadcast(v):
        n_v = {u: ps[u] for u in neighborhood(ps, g, v, 1)}
        return broadcast_phase(v, n_v, variant)

    phase_one = _map(broadcast, nodes, workers)
    states: list[NodeState] = [s for s, _ in phase_one]
    outgoing = {v: m for v, (_, m) in zip(nodes, phase_one)}

    # Barrier: every message exists before anyone prunes.
    inbox: dict[int, list] = {v: [] for v in nodes}
    for sender, message in outgoing.items():
        if message is None:
            continue
        tag = sender if variant is Variant.PLDG else None
        for receiver in sorted(g.adjacency[sender]):
            inbox[receiver].append((tag, message))

    def prune(v):
        shuffle = random.Random(f"{shuffle_seed}:{v}") if shuffle_seed is not None else None
        z_rng = random.Random(f"{z_seed}:{v}") if z_seed is not None else None
        return prune_phase(states[v], inbox[v], variant, shuffle=shuffle, z_rng=z_rng)

    finished = _map(prune, nodes, workers)

    return RunReport(
        variant=variant,
        points=ps.points,
        per_node_message_count={v: (m.point_count if m else 0) for v, m in outgoing.items()},
        round_count=1,
        final_edge_sets={s.id: frozenset(s.edge_set) for s in finished},
        initial_edge_sets={s.id: s.initial_edges for s in finished},
        certificates=[c for s in finished for c in s.certificates],
        traces={s.id: list(s.trace) for s in finished},
        messages=outgoing,
        diagnostics={s.id: list(s.diagnostics) for s in finished if s.diagnostics},
    )


def _final_coords(report: RunReport, u: int) -> frozenset:
    pts = report.points
    return frozenset(frozenset((pts[a], pts[b])) for a, b in report.final_edge_sets[u])


def locality_check(ps: PointSet, variant: Variant | str, u: int, k: int = 2,
                   reference: RunReport | None = None, udg: Graph | None = None) -> bool:
    """Does ``u`` behave identically when the whole run is restricted to N_k(u)?"""
    if isinstance(variant, str):
        variant = Variant.parse(variant)
    g = udg if udg is not None else build_udg(ps)
    full = reference if reference is not None else run(ps, variant, udg=g)
    members = neighborhood(ps, g, u, k)
    sub = ps.subset(members)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        restricted = run(sub, variant)
    local_u = members.index(u)
    return (full.traces[u] == restricted.traces[local_u]
            and _final_coords(full, u) == _final_coords(restricted, local_u))


def count_messages(report: RunReport) -> tuple[int, dict[int, int]]:
    counts = report.per_node_message_count
    histogram = Counter(counts.values())
    return max(counts.values(), default=0), dict(sorted(histogram.items()))
