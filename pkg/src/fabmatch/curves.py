"""Piecewise-linear planar curves and their first-order geometry.

Curves are stored as an ``(N, 2)`` float array of vertices. A closed curve
keeps ``N`` distinct vertices; the edge from the last vertex back to the
first is implicit, so closed curves have ``N`` edges and open curves
``N - 1``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEdge, DimensionMismatch


def edge_vectors(points, closed):
    """Return the edge vectors of a vertex array (closing edge included)."""
    if closed:
        return np.roll(points, -1, axis=0) - points
    return points[1:] - points[:-1]


def _check_regular(points, closed):
    lengths = np.hypot(*edge_vectors(points, closed).T)
    bad = np.flatnonzero(lengths == 0.0)
    if bad.size:
        raise DegenerateEdge(int(bad[0]))


@dataclass(frozen=True, eq=False)
class DiscreteCurve:
    """Ordered planar vertices of a regular piecewise-linear curve."""

    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = np.array(self.vertices, dtype=float)
        if pts.ndim == 1 and np.iscomplexobj(self.vertices):
            pts = np.column_stack([np.real(self.vertices), np.imag(self.vertices)])
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DimensionMismatch(f"expected (N, 2) vertices, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise DimensionMismatch("a curve needs at least two vertices")
        if not np.all(np.isfinite(pts)):
            raise ValueError("vertices must be finite")
        _check_regular(pts, self.closed)
        pts.setflags(write=False)
        object.__setattr__(self, "vertices", pts)
        object.__setattr__(self, "closed", bool(self.closed))

    @classmethod
    def from_complex(cls, z, closed=False):
        z = np.asarray(z, dtype=complex)
        return cls(np.column_stack([z.real, z.imag]), closed)

    @property
    def z(self):
        """Vertices as complex numbers."""
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_edges(self):
        return self.n_vertices if self.closed else self.n_vertices - 1

    def __len__(self):
        return self.n_vertices

    def length(self):
        return float(np.sum(np.hypot(*edge_vectors(self.vertices, self.closed).T)))

    def translated(self, z):
        return DiscreteCurve(self.vertices + [np.real(z), np.imag(z)], self.closed)

    def rotated(self, alpha):
        return DiscreteCurve.from_complex(np.exp(1j * alpha) * self.z, self.closed)

    def reversed(self):
        return DiscreteCurve(self.vertices[::-1], self.closed)

    def shifted(self, k):
        """Closed curve with its starting vertex moved ``k`` places forward."""
        if not self.closed:
            raise ValueError("only closed curves have a movable seam")
        return DiscreteCurve(np.roll(self.vertices, -k, axis=0), True)

    def opened(self):
        """Open polyline tracing the same path; closed curves repeat vertex 0."""
        if not self.closed:
            return self
        return DiscreteCurve(np.vstack([self.vertices, self.vertices[:1]]), False)

    def bbox_diagonal(self):
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.hypot(*span))


@dataclass(frozen=True)
class EdgeFrame:
    lengths: np.ndarray
    midpoints: np.ndarray
    tangents: np.ndarray

    @property
    def normals(self):
        """Tangents rotated by +90 degrees."""
        return np.column_stack([-self.tangents[:, 1], self.tangents[:, 0]])


def edge_frame(curve):
    """Per-edge lengths, midpoints and unit tangents of ``curve``."""
    pts = curve.vertices
    e = edge_vectors(pts, curve.closed)
    lengths = np.hypot(e[:, 0], e[:, 1])
    bad = np.flatnonzero(lengths == 0.0)
    if bad.size:
        raise DegenerateEdge(int(bad[0]))
    nxt = np.roll(pts, -1, axis=0) if curve.closed else pts[1:]
    midpoints = 0.5 * (pts[: len(e)] + nxt)
    return EdgeFrame(lengths, midpoints, e / lengths[:, None])


def resample_uniform(curve, n):
    """Resample ``curve`` to ``n`` vertices equally spaced in arclength.

    Open curves keep both endpoints; closed curves keep their first vertex
    and spread the ``n`` vertices over the full loop.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    path = curve.opened().vertices
    seg = np.hypot(*np.diff(path, axis=0).T)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if curve.closed:
        targets = total * np.arange(n) / n
    else:
        targets = total * np.arange(n) / (n - 1)
        targets[-1] = total
    x = np.interp(targets, s, path[:, 0])
    y = np.interp(targets, s, path[:, 1])
    if not curve.closed:
        x[-1], y[-1] = path[-1]
    return DiscreteCurve(np.column_stack([x, y]), curve.closed)


def elastic_metric(curve, h, k, a, b):
    """Discrete elastic inner product ``G^{a,b}_c(h, k)``.

    ``h`` and ``k`` are vertex displacement fields of shape ``(N, 2)``. The
    arclength derivative is a forward difference per edge and the integral
    an edge-length weighted sum, so a weights the normal part of the
    derivative (bending) and b the tangential part (stretching).
    """
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    if h.shape != curve.vertices.shape or k.shape != curve.vertices.shape:
        raise DimensionMismatch(
            f"fields must have shape {curve.vertices.shape}, got {h.shape} and {k.shape}"
        )
    frame = edge_frame(curve)
    ell = frame.lengths[:, None]
    dh = edge_vectors(h, curve.closed) / ell
    dk = edge_vectors(k, curve.closed) / ell
    T, Nrm = frame.tangents, frame.normals
    normal = np.sum(dh * Nrm, axis=1) * np.sum(dk * Nrm, axis=1)
    tangential = np.sum(dh * T, axis=1) * np.sum(dk * T, axis=1)
    return float(np.sum(frame.lengths * (a**2 * normal + b**2 * tangential)))


def add_noise(curve, amplitude, seed):
    """Add i.i.d. Gaussian noise of std ``amplitude`` to every coordinate."""
    if amplitude < 0:
        raise ValueError("amplitude must be nonnegative")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, amplitude, size=curve.vertices.shape)
    return DiscreteCurve(curve.vertices + noise, curve.closed)
