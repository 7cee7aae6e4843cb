"""SVG phase portraits of the model maps.

Spheres are drawn in the equirectangular projection (longitude across,
colatitude down), the projective plane as the upper hemisphere seen from
above (a disk whose boundary points are identified antipodally), the torus
as the unit square and plane models in the window ``[-2.5, 2.5]^2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .analysis import PLANE_WINDOW, find_periodic_points, saddle_frame, trace_branch
from .descriptor import SADDLE, SADDLE_ORDER, SINK, SOURCE
from .errors import MSLabError

ORBIT_STEPS = 6
COLORS = {SINK: "#1f5fbf", SOURCE: "#c0392b", SADDLE: "#2e8b57"}


@dataclass(frozen=True)
class RenderSpec:
    model: str
    out: str
    size: int = 512
    density: int = 16
    emphasize: bool = True

    def __post_init__(self):
        if self.size < 64:
            raise ValueError("image size must be at least 64")
        if self.density < 4:
            raise ValueError("seed density must be at least 4")


def _project(kind, pts):
    """Points to ``[0, 1]^2`` (y down)."""
    pts = np.atleast_2d(pts)
    if kind == "sphere":
        th = np.arccos(np.clip(pts[:, 2], -1.0, 1.0))
        ph = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
        # the poles are single points; draw them mid-row
        ph = np.where(np.hypot(pts[:, 0], pts[:, 1]) < 1e-12, np.pi, ph)
        return np.stack([ph / (2 * np.pi), th / np.pi], axis=-1)
    if kind == "rp2":
        return np.stack([(pts[:, 0] + 1) / 2, (1 - pts[:, 1]) / 2], axis=-1)
    if kind == "torus":
        return np.stack([pts[:, 0], 1 - pts[:, 1]], axis=-1)
    w = PLANE_WINDOW
    return np.stack([(pts[:, 0] + w) / (2 * w), (w - pts[:, 1]) / (2 * w)], axis=-1)


def _seeds(kind, density):
    c = (np.arange(density) + 0.5) / density
    u, v = np.meshgrid(c, c, indexing="ij")
    u, v = u.ravel(), v.ravel()
    if kind in ("sphere", "rp2"):
        th, ph = v * (np.pi / 2 if kind == "rp2" else np.pi), u * 2 * np.pi
        return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    if kind == "torus":
        return np.stack([u, v], axis=-1)
    return np.stack([(2 * u - 1) * PLANE_WINDOW, (2 * v - 1) * PLANE_WINDOW], axis=-1)


def _pieces(xy, jump=0.3):
    """Split a projected polyline where it jumps (seams, antipodal flips)."""
    if len(xy) < 2:
        return []
    cut = np.flatnonzero(np.linalg.norm(np.diff(xy, axis=0), axis=-1) > jump) + 1
    return [p for p in np.split(xy, cut) if len(p) >= 2]


def _path(xy, size):
    xy = xy * size
    keep = [0]
    for k in range(1, len(xy)):  # drop points closer than half a pixel
        if np.hypot(*(xy[k] - xy[keep[-1]])) >= 0.5 or k == len(xy) - 1:
            keep.append(k)
    pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in xy[keep])
    return f'<polyline points="{pts}"'


def _separatrices(model, recs):
    sinks = [k for k, r in enumerate(recs) if r.kind == SINK]
    sources = [k for k, r in enumerate(recs) if r.kind == SOURCE]
    out = []
    for i, r in enumerate(recs):
        if r.kind != SADDLE:
            continue
        try:
            frame, lu, ls = saddle_frame(model, r.point, r.period)
        except MSLabError:
            continue
        for b in SADDLE_ORDER:
            u = b[0] == "u"
            try:
                tb = trace_branch(model, recs, i, b, frame, lu if u else ls, sinks if u else sources,
                                  max_domains=30, max_points=3000,
                                  escape=2 * PLANE_WINDOW if model.surface.kind == "plane" else None)
            except (MSLabError, FloatingPointError, ValueError):
                continue
            out.append((b, tb.curve[np.all(np.isfinite(tb.curve), axis=-1)]))
    return out


def render(spec):
    """Write the portrait described by ``spec``; returns the number of
    periodic-point glyphs drawn."""
    from .models import get_model

    model = get_model(spec.model)
    kind = model.surface.kind
    if model.surface.dim != 2:
        raise ValueError(f"{spec.model} lives on a {kind}; only surfaces can be rendered")
    size = spec.size
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f"<title>{escape(spec.model)}</title>",
             f'<rect width="{size}" height="{size}" fill="white" stroke="#888"/>']
    if kind == "rp2":
        parts.append(f'<circle cx="{size / 2}" cy="{size / 2}" r="{size / 2}" fill="none" stroke="#888"/>')
    seeds = _seeds(kind, spec.density)
    orbit = [seeds]
    with np.errstate(all="ignore"):
        for _ in range(ORBIT_STEPS):
            orbit.append(model(orbit[-1]))
    orbit = np.stack(orbit, axis=1)
    parts.append('<g class="orbits" fill="none" stroke="#bbb" stroke-width="0.6">')
    for traj in orbit:
        traj = traj[np.all(np.isfinite(traj), axis=-1)]
        for piece in _pieces(_project(kind, traj)):
            parts.append(_path(piece, size) + "/>")
    parts.append("</g>")
    recs = find_periodic_points(model, max_period=2)
    width = 2.0 if spec.emphasize else 0.8
    parts.append(f'<g class="separatrices" fill="none" stroke-width="{width}">')
    for b, curve in _separatrices(model, recs):
        color = COLORS[SINK] if b[0] == "u" else COLORS[SOURCE]
        for piece in _pieces(_project(kind, curve)):
            parts.append(_path(piece, size) + f' stroke="{color}"/>')
    parts.append("</g>")
    glyphs = 0
    parts.append('<g class="points">')
    for r in recs:
        x, y = _project(kind, r.point)[0] * size
        if not (0 <= x <= size and 0 <= y <= size):
            continue
        glyphs += 1
        parts.append(f'<circle class="glyph {r.kind}" cx="{x:.2f}" cy="{y:.2f}" r="{max(3, size // 100)}" '
                     f'fill="{COLORS[r.kind]}"><title>{r.kind}, period {r.period}</title></circle>')
    parts.append("</g></svg>")
    with open(spec.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return glyphs
