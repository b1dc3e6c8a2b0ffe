"""Matplotlib renderings of completion graphs and concept hierarchies."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .hierarchy import (
    ADDED_BY_REPAIR,
    ASSERTED,
    HierarchyEdge,
    INFERRED,
    MISSING_UNREPAIRED,
)
from .tableau import CLOSED, CompletionGraph, GraphNode, OPEN

_STATUS_COLORS = {OPEN: "#2a9d2a", CLOSED: "#c0392b", "interior": "#444444"}

_EDGE_STYLES = {
    ASSERTED: {"color": "#999999", "linestyle": "-"},
    INFERRED: {"color": "#bbbbbb", "linestyle": ":"},
    MISSING_UNREPAIRED: {"color": "#1f77b4", "linestyle": "--"},
    ADDED_BY_REPAIR: {"color": "#000000", "linestyle": "-"},
}


def _layout_tree(root: GraphNode) -> dict[str, tuple[float, float]]:
    """Leaves get consecutive x slots; parents sit centered above children."""

    positions: dict[str, tuple[float, float]] = {}
    next_x = [0.0]

    def place(node: GraphNode, depth: int) -> float:
        if not node.children:
            x = next_x[0]
            next_x[0] += 1.0
        else:
            xs = [place(child, depth + 1) for child in node.children]
            x = sum(xs) / len(xs)
        positions[node.node_id] = (x, -float(depth))
        return x

    place(root, 0)
    return positions


def render_completion_graph(g: CompletionGraph, path: str | Path, title: str = "") -> None:
    positions = _layout_tree(g.root)
    width = max(6.0, 1.2 * sum(1 for n in g.nodes if not n.children))
    depth = max(-y for _, y in positions.values()) + 1
    fig, ax = plt.subplots(figsize=(width, 1.6 * depth))
    for node in g.nodes:
        x, y = positions[node.node_id]
        for child in node.children:
            cx, cy = positions[child.node_id]
            ax.plot([x, cx], [y, cy], color="#888888", linewidth=0.8, zorder=1)
    for node in g.nodes:
        x, y = positions[node.node_id]
        color = _STATUS_COLORS.get(node.status, "#444444")
        ax.scatter([x], [y], s=260, color="white", edgecolors=color, linewidths=1.6, zorder=2)
        ax.annotate(
            node.node_id,
            (x, y),
            ha="center",
            va="center",
            fontsize=7,
            color=color,
            zorder=3,
        )
        if not node.children:
            ax.annotate(
                node.status.upper(),
                (x, y - 0.28),
                ha="center",
                va="top",
                fontsize=6,
                color=color,
            )
    ax.set_axis_off()
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_hierarchy(
    nodes: list[str],
    edges: list[HierarchyEdge],
    path: str | Path,
    highlight: set[str] | None = None,
    title: str = "",
) -> None:
    """Layered drawing of the subsumption DAG, styled by edge provenance."""

    children: dict[str, set[str]] = {n: set() for n in nodes}
    parents: dict[str, set[str]] = {n: set() for n in nodes}
    for e in edges:
        if e.provenance == MISSING_UNREPAIRED:
            continue
        if e.sub in children and e.sup in children:
            children[e.sup].add(e.sub)
            parents[e.sub].add(e.sup)

    # layer = longest chain of superconcepts above the node
    layer: dict[str, int] = {}

    def depth_of(n: str, seen: frozenset[str]) -> int:
        if n in layer:
            return layer[n]
        ups = [p for p in parents[n] if p not in seen]
        d = 0 if not ups else 1 + max(depth_of(p, seen | {n}) for p in ups)
        layer[n] = d
        return d

    for n in nodes:
        depth_of(n, frozenset())

    by_layer: dict[int, list[str]] = {}
    for n in sorted(nodes):
        by_layer.setdefault(layer[n], []).append(n)
    positions: dict[str, tuple[float, float]] = {}
    for d, row in sorted(by_layer.items()):
        for i, n in enumerate(row):
            positions[n] = (i - (len(row) - 1) / 2.0, -float(d))

    fig, ax = plt.subplots(figsize=(max(7.0, 1.8 * max(len(r) for r in by_layer.values())), 1.4 * (len(by_layer) + 1)))
    for e in edges:
        if e.sub not in positions or e.sup not in positions:
            continue
        style = _EDGE_STYLES.get(e.provenance, _EDGE_STYLES[INFERRED])
        if e.provenance == INFERRED:
            # keep the picture readable: skip inferred edges implied by a chain
            via = children[e.sup] & set(parents[e.sub])
            if via:
                continue
        (x1, y1), (x2, y2) = positions[e.sub], positions[e.sup]
        ax.annotate(
            "",
            xy=(x2, y2 - 0.12),
            xytext=(x1, y1 + 0.12),
            arrowprops={"arrowstyle": "-|>", "linewidth": 1.1, **style},
            zorder=1,
        )
    for n, (x, y) in positions.items():
        emphasized = highlight is not None and n in highlight
        ax.annotate(
            n,
            (x, y),
            ha="center",
            va="center",
            fontsize=8,
            color="#c0392b" if emphasized else "#222222",
            fontweight="bold" if emphasized else "normal",
            bbox={
                "boxstyle": "round,pad=0.25",
                "facecolor": "#fde8e6" if emphasized else "#f4f4f4",
                "edgecolor": "#c0392b" if emphasized else "#999999",
            },
            zorder=2,
        )
    ax.set_axis_off()
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
