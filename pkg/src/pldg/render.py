"""Static SVG renders of computed graphs (matplotlib, SVG backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure
from matplotlib.lines import Line2D

STYLE = {
    "svg.hashsalt": "pldg",
    "svg.fonttype": "none",
    "font.size": 8,
}

KEPT = dict(color="#1f3b73", linewidth=1.1, solid_capstyle="round")
REMOVED = dict(color="#c0392b", linewidth=0.8, linestyle=(0, (3, 2)), alpha=0.8)


def render_graph(points, edges, path, removed=(), title: str | None = None) -> Path:
    """Draw nodes, kept edges (solid) and removed local Delaunay edges (dashed).

    Every drawn edge carries an SVG id ``edge-u-v`` or ``removed-u-v``.
    """
    path = Path(path)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(6, 6))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        ax.set_aspect("equal")
        for u, v in sorted(removed):
            line = Line2D([xs[u], xs[v]], [ys[u], ys[v]], **REMOVED)
            line.set_gid(f"removed-{u}-{v}")
            ax.add_line(line)
        for u, v in sorted(edges):
            line = Line2D([xs[u], xs[v]], [ys[u], ys[v]], **KEPT)
            line.set_gid(f"edge-{u}-{v}")
            ax.add_line(line)
        nodes = ax.scatter(xs, ys, s=9, color="black", zorder=3)
        nodes.set_gid("nodes")

        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        pad = 0.15 * max(x1 - x0, y1 - y0, 1.0)
        bar_y = y0 - 0.6 * pad
        bar = Line2D([x0, x0 + 1.0], [bar_y, bar_y], color="black", linewidth=2)
        bar.set_gid("scale-bar")
        ax.add_line(bar)
        ax.text(x0 + 0.5, bar_y - 0.25 * pad, "radio range = 1", ha="center", va="top")
        ax.set_xlim(x0 - pad, max(x1, x0 + 1.0) + pad)
        ax.set_ylim(y0 - 1.2 * pad, y1 + pad)
        ax.set_xticks([])
        ax.set_yticks([])
        if title:
            ax.set_title(title)
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def removed_edges(final_edges, certificates) -> set[tuple[int, int]]:
    """Edges some node removed that are absent from the final graph."""
    final = {tuple(e) for e in final_edges}
    out = set()
    for cert in certificates:
        e = tuple(cert["removed_edge"] if isinstance(cert, dict) else cert.removed_edge)
        if e not in final:
            out.add(e)
    return out


def render_record(record: dict, path, variant: str | None = None) -> Path:
    variants = list(record["pldg_edges"])
    variant = variant or variants[0]
    edges = [tuple(e) for e in record["pldg_edges"][variant]]
    removed = removed_edges(edges, record["certificates"].get(variant, []))
    title = (f"{variant}: n={len(record['points'])}, trial {record['trial']}, "
             f"{len(edges)} edges, {len(removed)} removed")
    return render_graph(record["points"], edges, path, removed, title)
