"""Static SVG scenes: the boundary circle, pencil members, polygons and markers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .dynamics import default_start, trajectory
from .geometry import BoundaryCircle, ConfocalPencil, ConicKind, Line, confocal_conic, foci

__all__ = [
    "Polygon",
    "SceneSpec",
    "RenderReport",
    "render_svg",
    "polygon_for",
    "foci_on_circle_scene",
    "foci_symmetric_scene",
    "crossing_triangle_scene",
    "FIGURE_SCENES",
    "SAMPLES_PER_BRANCH",
]

SAMPLES_PER_BRANCH = 512

DEFAULT_STYLE = {
    "boundary": "#000000",
    "caustics": ("#1f77b4", "#d62728", "#2ca02c", "#9467bd"),
    "vertices": "#000000",
    "tangency": "#ff7f0e",
    "foci": "#555555",
}


@dataclass(frozen=True)
class Polygon:
    """Closed polygon about the member ``t``; ``source`` names what produced it."""

    vertices: np.ndarray
    t: object
    source: str
    tangency_points: np.ndarray | None = None


@dataclass(frozen=True)
class SceneSpec:
    circle: BoundaryCircle
    pencil: ConfocalPencil
    ts: tuple
    polygons: tuple = ()
    style: dict = field(default_factory=dict)
    title: str = ""

    def __post_init__(self):
        for t in self.ts:
            confocal_conic(self.pencil, t)  # raises on a degenerate member
        for p in self.polygons:
            if p.t not in self.ts:
                raise ValueError(f"polygon about t={p.t} but the scene draws {self.ts}")
            if not p.source:
                raise ValueError("polygons must name their source")


@dataclass(frozen=True)
class RenderReport:
    path: Path
    tangency_residuals: tuple
    viewbox: tuple

    @property
    def max_tangency_residual(self) -> float:
        return max(self.tangency_residuals, default=0.0)


def polygon_for(circle: BoundaryCircle, pencil: ConfocalPencil, t, k: int, start=None,
                source: str = "iterate") -> Polygon:
    """``k`` steps of the Poncelet map about ``C(t)`` drawn as a closed polygon."""
    caustic = confocal_conic(pencil, t)
    if start is None:
        start = default_start(caustic, circle)
    tr = trajectory(start, caustic, circle, k)
    return Polygon(vertices=tr.vertices[:k].copy(), t=t, source=source,
                   tangency_points=tr.tangency_points[:k].copy())


def _fmt(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(points: np.ndarray, closed: bool) -> str:
    cmds = [f"{'M' if i == 0 else 'L'}{_fmt(x)},{_fmt(-y)}" for i, (x, y) in enumerate(points)]
    return " ".join(cmds) + (" Z" if closed else "")


def _clip_runs(pts: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> list[np.ndarray]:
    inside = np.all((pts >= lo) & (pts <= hi), axis=1)
    runs, cur = [], []
    for p, ok in zip(pts, inside):
        if ok:
            cur.append(p)
        elif cur:
            runs.append(np.array(cur))
            cur = []
    if cur:
        runs.append(np.array(cur))
    return [r for r in runs if len(r) > 1]


def render_svg(scene: SceneSpec, path) -> RenderReport:
    """Write ``scene`` as a standalone SVG and report the tangency residual of every drawn side."""
    style = {**DEFAULT_STYLE, **scene.style}
    circle = scene.circle
    c = circle.center
    conics = [confocal_conic(scene.pencil, t) for t in scene.ts]

    pts = [c + np.array([dx, dy]) for dx in (-1.0, 1.0) for dy in (-1.0, 1.0)]
    for p in scene.polygons:
        pts.extend(p.vertices)
    branches = []
    for cc in conics:
        if cc.kind in (ConicKind.ELLIPSE, ConicKind.CIRCLE):
            (poly,) = cc.sample(SAMPLES_PER_BRANCH)
            pts.extend(poly)
    pts = np.array(pts)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = hi - lo
    lo, hi = lo - 0.1 * span, hi + 0.1 * span
    extent = float(np.max(np.abs(np.concatenate([lo, hi]))) * 2.0)
    for cc in conics:
        if cc.kind is ConicKind.HYPERBOLA:
            runs = []
            for br in cc.sample(SAMPLES_PER_BRANCH, extent=extent):
                runs.extend(_clip_runs(br, lo, hi))
            branches.append(runs)
        else:
            branches.append(cc.sample(SAMPLES_PER_BRANCH))

    w, h = hi - lo
    # y is flipped so the picture has the usual orientation
    vb = (lo[0], -hi[1], w, h)
    unit = max(w, h) / 400.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- generator: poncelet_lab {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{" ".join(_fmt(v) for v in vb)}" '
        f'width="600" height="{_fmt(600 * h / w)}">',
    ]
    if scene.title:
        out.append(f"<title>{scene.title}</title>")
    out.append(f'<g fill="none" stroke-width="{_fmt(unit)}">')
    th = np.linspace(0.0, 2.0 * math.pi, SAMPLES_PER_BRANCH)
    ring = c + np.stack([np.cos(th), np.sin(th)], axis=1)
    out.append(f'<path class="boundary" stroke="{style["boundary"]}" d="{_path(ring, True)}"/>')
    colors = style["caustics"]
    for i, runs in enumerate(branches):
        col = colors[i % len(colors)]
        for r in runs:
            out.append(f'<path class="caustic" stroke="{col}" d="{_path(r, False)}"/>')
    residuals = []
    for p in scene.polygons:
        i = scene.ts.index(p.t)
        cc = conics[i]
        n = len(p.vertices)
        for j in range(n):
            residuals.append(cc.tangency_residual(Line.through(p.vertices[j], p.vertices[(j + 1) % n])))
        col = colors[i % len(colors)]
        out.append(f'<path class="polygon" data-source="{p.source}" stroke="{col}" '
                   f'stroke-dasharray="{_fmt(3 * unit)}" d="{_path(p.vertices, True)}"/>')
    out.append("</g>")
    r = 2.5 * unit
    out.append(f'<g stroke="none">')
    if not scene.pencil.concentric:
        for f in foci(scene.pencil):
            out.append(f'<circle class="focus" cx="{_fmt(f[0])}" cy="{_fmt(-f[1])}" r="{_fmt(r)}" '
                       f'fill="{style["foci"]}"/>')
    for p in scene.polygons:
        for v in p.vertices:
            out.append(f'<circle class="vertex" cx="{_fmt(v[0])}" cy="{_fmt(-v[1])}" r="{_fmt(r)}" '
                       f'fill="{style["vertices"]}"/>')
        if p.tangency_points is not None:
            for q in p.tangency_points:
                if np.all(np.isfinite(q)):
                    out.append(f'<circle class="tangency" cx="{_fmt(q[0])}" cy="{_fmt(-q[1])}" '
                               f'r="{_fmt(0.8 * r)}" fill="{style["tangency"]}"/>')
    out.append("</g>")
    out.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return RenderReport(path=path, tangency_residuals=tuple(residuals), viewbox=vb)


def _scene(circle, pencil, ts, k, title, start=None) -> SceneSpec:
    polys = tuple(polygon_for(circle, pencil, t, k, start=start, source="render") for t in ts)
    return SceneSpec(circle=circle, pencil=pencil, ts=tuple(ts), polygons=polys, title=title)


def foci_on_circle_scene() -> SceneSpec:
    """Two members of a pencil whose foci lie on the circle, each with a quadrangle."""
    from fractions import Fraction as Q

    return _scene(BoundaryCircle(0, Q(3, 10)), ConfocalPencil(Q(3, 2), Q(59, 100)),
                  (Q(0), Q(301, 1000)), 4, "foci on the circle")


def foci_symmetric_scene() -> SceneSpec:
    """Two members of a pencil whose foci are mirror images in the circle."""
    from fractions import Fraction as Q

    return _scene(BoundaryCircle.from_squares(Q(3, 2), 0), ConfocalPencil(Q(3, 2), 1),
                  (Q(0), Q(1, 2)), 4, "foci symmetric in the circle")


def crossing_triangle_scene() -> SceneSpec:
    """A closed triangle about an ellipse that crosses the circle."""
    from fractions import Fraction as Q

    circle = BoundaryCircle(1, 1)
    return _scene(circle, ConfocalPencil(Q(9, 25), Q(4, 25)), (Q(0),), 3,
                  "triangle about a crossing ellipse", start=circle.point(0.25))


FIGURE_SCENES = {
    "foci-on-circle": foci_on_circle_scene,
    "foci-symmetric": foci_symmetric_scene,
    "crossing-triangle": crossing_triangle_scene,
}
