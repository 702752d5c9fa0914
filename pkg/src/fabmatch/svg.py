"""Minimal SVG emission for curves, geodesic panels and scatter plots.

Everything is drawn into an 800x800 viewBox; data coordinates are mapped
with a single scale factor (equal aspect) and the y axis pointing up.
"""
from xml.sax.saxutils import escape

import numpy as np

SIZE = 800
MARGIN = 40
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


class _Frame:
    """Affine map from a data box onto a square pixel box."""

    def __init__(self, points, x0=0.0, y0=0.0, size=SIZE, margin=MARGIN):
        pts = np.vstack(points) if len(points) else np.zeros((1, 2))
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = max(float(np.max(hi - lo)), 1e-12)
        self.scale = (size - 2 * margin) / span
        self.center = 0.5 * (lo + hi)
        self.origin = np.array([x0 + 0.5 * size, y0 + 0.5 * size])

    def __call__(self, pts):
        p = (np.asarray(pts, dtype=float) - self.center) * self.scale
        return np.column_stack([self.origin[0] + p[:, 0], self.origin[1] - p[:, 1]])


def _path(pix, closed, color, width=2.0, dash=None):
    d = " ".join(f"{'M' if k == 0 else 'L'}{x:.3f},{y:.3f}" for k, (x, y) in enumerate(pix))
    if closed:
        d += " Z"
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return f'<path d="{d}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>'


def _document(body, width=SIZE, height=SIZE):
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        '<rect width="100%" height="100%" fill="white"/>\n' + "\n".join(body) + "\n</svg>\n"
    )


def curves_svg(curves, colors=None, labels=None):
    """Overlay of several curves in one frame."""
    colors = colors or PALETTE
    frame = _Frame([c.vertices for c in curves])
    body = []
    for k, c in enumerate(curves):
        body.append(_path(frame(c.vertices), c.closed, colors[k % len(colors)]))
    if labels:
        for k, lab in enumerate(labels):
            body.append(
                f'<text x="12" y="{24 + 20 * k}" font-size="16" fill="{colors[k % len(colors)]}">'
                f"{escape(str(lab))}</text>"
            )
    return _document(body)


def panels_svg(panels, titles=None, reference=None):
    """Row of equally scaled panels; ``reference`` is drawn dashed in each."""
    cell = SIZE / max(len(panels), 1)
    everything = [c.vertices for c in panels] + ([reference.vertices] if reference else [])
    body = []
    for k, c in enumerate(panels):
        frame = _Frame(everything, x0=k * cell, y0=0.5 * (SIZE - cell), size=cell, margin=0.1 * cell)
        if reference is not None:
            body.append(_path(frame(reference.vertices), reference.closed, "#d62728", 1.0, "4,3"))
        body.append(_path(frame(c.vertices), c.closed, PALETTE[0], 1.5))
        if titles:
            body.append(
                f'<text x="{k * cell + 0.5 * cell:.1f}" y="{0.5 * (SIZE - cell) + 16:.1f}" '
                f'font-size="12" text-anchor="middle">{escape(str(titles[k]))}</text>'
            )
    return _document(body)


def scatter_svg(coords, labels, classes=None):
    """2D scatter of an embedding, one color per class."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape[1] == 1:
        coords = np.column_stack([coords[:, 0], np.zeros(len(coords))])
    frame = _Frame([coords[:, :2]])
    pix = frame(coords[:, :2])
    classes = list(classes) if classes is not None else ["" for _ in labels]
    names = sorted(set(classes), key=str)
    body = []
    for (x, y), lab, cls in zip(pix, labels, classes):
        color = PALETTE[names.index(cls) % len(PALETTE)]
        body.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="6" fill="{color}">'
            f"<title>{escape(str(lab))}</title></circle>"
        )
    for k, cls in enumerate(names):
        if cls != "":
            body.append(
                f'<text x="12" y="{24 + 20 * k}" font-size="16" fill="{PALETTE[k % len(PALETTE)]}">'
                f"{escape(str(cls))}</text>"
            )
    return _document(body)


def write_svg(path, text):
    with open(path, "w") as fh:
        fh.write(text)
