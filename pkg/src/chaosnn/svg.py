"""Tiny hand-rolled SVG emission.

Just enough scatter/polyline plotting to eyeball trajectories, FTLE
scatters, and sub-step point sets without a plotting dependency.  CSV is
always the authoritative output; these files are a convenience.
"""
from __future__ import annotations

import numpy as np

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#d62728",
           "#8c564b", "#e377c2", "#7f7f7f")


def _viewport(groups, width, height, margin):
    pts = np.vstack([np.atleast_2d(g) for g in groups if len(g)])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)

    def to_px(p):
        p = np.atleast_2d(p)
        x = margin + (p[:, 0] - lo[0]) / span[0] * (width - 2 * margin)
        y = height - margin - (p[:, 1] - lo[1]) / span[1] * (height - 2 * margin)
        return np.column_stack([x, y])

    return to_px


def _document(body, width, height, title):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n'
            f'<rect width="100%" height="100%" fill="white"/>\n')
    if title:
        head += (f'<text x="{width / 2:.0f}" y="16" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{title}</text>\n')
    return head + body + "</svg>\n"


def write_scatter_svg(path, point_sets, labels=None, width=640, height=480,
                      radius=1.6, title=None) -> None:
    """Scatter of one or more (m, 2) point sets in palette colors."""
    point_sets = [np.atleast_2d(np.asarray(p, dtype=float)) for p in point_sets]
    to_px = _viewport(point_sets, width, height, margin=28)
    body = []
    for k, pts in enumerate(point_sets):
        color = PALETTE[k % len(PALETTE)]
        px = to_px(pts)
        body.append(f'<g fill="{color}" fill-opacity="0.55">')
        body.extend(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}"/>' for x, y in px)
        body.append("</g>")
        if labels:
            body.append(f'<text x="{width - 120}" y="{30 + 15 * k}" fill="{color}" '
                        f'font-family="sans-serif" font-size="12">{labels[k]}</text>')
    with open(str(path), "w") as fh:
        fh.write(_document("\n".join(body) + "\n", width, height, title))


def write_polyline_svg(path, lines, labels=None, width=640, height=480,
                       title=None) -> None:
    """Polylines for one or more (m, 2) vertex arrays."""
    lines = [np.atleast_2d(np.asarray(l, dtype=float)) for l in lines]
    to_px = _viewport(lines, width, height, margin=28)
    body = []
    for k, line in enumerate(lines):
        color = PALETTE[k % len(PALETTE)]
        px = to_px(line)
        points = " ".join(f"{x:.2f},{y:.2f}" for x, y in px)
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="0.8" '
                    f'points="{points}"/>')
        if labels:
            body.append(f'<text x="{width - 120}" y="{30 + 15 * k}" fill="{color}" '
                        f'font-family="sans-serif" font-size="12">{labels[k]}</text>')
    with open(str(path), "w") as fh:
        fh.write(_document("\n".join(body) + "\n", width, height, title))
