"""DOT and SVG emitters for instances and solutions."""

from __future__ import annotations

from typing import Dict, List, Optional

from .errors import PlanarMCFError
from .instances import Instance

PALETTE = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
    "#a65628", "#f781bf", "#00bfc4", "#666666", "#b8860b",
]


class MissingCoordinatesError(PlanarMCFError):
    pass


def _demand_colors(inst: Instance) -> Dict[int, str]:
    return {d.id: PALETTE[i % len(PALETTE)]
            for i, d in enumerate(sorted(inst.demands, key=lambda d: d.id))}


def emit_dot(inst: Instance, solution: Optional[Dict[int, List[List[int]]]] = None) -> bytes:
    """Graphviz rendering: supply arcs solid, demands dashed and colored.

    With a solution, each use of an arc by a path is drawn as its own
    colored parallel edge.
    """
    colors = _demand_colors(inst)
    g = inst.graph
    lines = ["digraph instance {", "  rankdir=LR;", "  node [shape=circle];"]
    terminal = set()
    for d in inst.demands:
        terminal.add(d.tail)
        terminal.add(d.head)
    for v in g.vertices:
        shape = ' shape=doublecircle' if v in terminal else ""
        lines.append(f'  v{v} [label="{v}"{shape}];')
    for a in g.arcs:
        t, h = g.arc_ends(a)
        lines.append(f'  v{t} -> v{h} [label="a{a} c={inst.capacities[a]}" color=gray50];')
    for d in sorted(inst.demands, key=lambda d: d.id):
        lines.append(
            f'  v{d.tail} -> v{d.head} [style=dashed color="{colors[d.id]}" '
            f'label="d{d.id} r={d.request}"];')
    if solution:
        for did in sorted(solution):
            for pi, path in enumerate(solution[did]):
                for a in path:
                    t, h = g.arc_ends(a)
                    lines.append(
                        f'  v{t} -> v{h} [color="{colors[did]}" penwidth=2 '
                        f'tooltip="demand {did} path {pi}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_svg(inst: Instance, solution: Optional[Dict[int, List[List[int]]]] = None) -> bytes:
    """Straight-line SVG drawing from vertex coordinates."""
    g = inst.graph
    coords = inst.coords or {}
    missing = [v for v in g.vertices if v not in coords]
    if missing:
        raise MissingCoordinatesError(f"vertices without coordinates: {missing[:8]}")
    xs = [coords[v][0] for v in g.vertices]
    ys = [coords[v][1] for v in g.vertices]
    pad, scale = 40.0, 60.0

    def pt(v):
        x = pad + scale * (coords[v][0] - min(xs))
        y = pad + scale * (max(ys) - coords[v][1])  # flip: SVG y grows downward
        return x, y

    width = 2 * pad + scale * (max(xs) - min(xs))
    height = 2 * pad + scale * (max(ys) - min(ys))
    colors = _demand_colors(inst)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        '  <g stroke="#999" stroke-width="1">',
    ]
    for a in g.arcs:
        (x1, y1), (x2, y2) = pt(g.arc_tail[a]), pt(g.arc_head[a])
        parts.append(f'    <line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}"/>')
    parts.append("  </g>")
    if solution:
        for did in sorted(solution):
            for pi, path in enumerate(solution[did]):
                if not path:
                    continue
                off = 1.5 * (pi + 1)
                pts = [pt(g.arc_tail[path[0]])] + [pt(g.arc_head[a]) for a in path]
                d = " ".join(f"{x + off:.1f},{y + off:.1f}" for x, y in pts)
                parts.append(
                    f'  <polyline points="{d}" fill="none" '
                    f'stroke="{colors[did]}" stroke-width="2.5" opacity="0.8"/>')
    for v in g.vertices:
        x, y = pt(v)
        parts.append(f'  <circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="#222"/>')
        parts.append(f'  <text x="{x + 6:.1f}" y="{y - 6:.1f}" font-size="11">{v}</text>')
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
