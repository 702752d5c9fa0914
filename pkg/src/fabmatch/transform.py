"""The F_{a,b} transform of a curve, its inverse and the induced L2 geometry.

For a curve with derivative ``c'`` the transform is

    F_{a,b}(c) = 2 b |c'|^{1/2} (c' / |c'|)^{a / (2b)}

where the fractional power is evaluated on a continuous lift of the tangent
angle. On a polyline ``c'`` is constant on each edge, so the image is a
piecewise-constant complex function with one sample per edge, each edge
owning a parameter cell of width ``1 / n_edges``.

Each image carries its ``phase``: the lifted argument of its samples. The
samples only know the phase modulo 2*pi, and unless ``a == 2b`` that is not
enough to undo the fractional power, so the inverse reads the phase rather
than re-deriving it from the samples whenever it is available.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curves import DiscreteCurve, edge_vectors
from .errors import DegenerateEdge, ParamMismatch, ZeroCrossing, ZeroSample


def wrap_angle(x):
    """Map angles into (-pi, pi]."""
    x = np.asarray(x, dtype=float)
    return x - 2 * np.pi * np.ceil((x - np.pi) / (2 * np.pi))


def unwrap_angles(raw, reference=None):
    """Lift raw angles so consecutive differences lie in (-pi, pi].

    The first angle is kept as is, or moved by a multiple of 2*pi to lie
    within pi of ``reference`` when one is given.
    """
    raw = np.asarray(raw, dtype=float)
    if reference is None:
        seed = raw[0]
    else:
        seed = reference + wrap_angle(raw[0] - reference)
    steps = wrap_angle(np.diff(raw))
    return seed + np.concatenate([[0.0], np.cumsum(steps)])


@dataclass(frozen=True, eq=False)
class FabImage:
    samples: np.ndarray
    cell_widths: np.ndarray
    a: float
    b: float
    phase: Optional[np.ndarray] = None
    closed: bool = False

    def __post_init__(self):
        widths = np.asarray(self.cell_widths, dtype=float)
        samples = np.asarray(self.samples, dtype=complex)
        if widths.shape != samples.shape:
            raise ParamMismatch("one cell width per sample is required")
        if np.any(widths <= 0) or abs(widths.sum() - 1.0) > 1e-12:
            raise ValueError("cell widths must be positive and sum to 1")
        zero = np.flatnonzero(samples == 0)
        if zero.size:
            raise ZeroSample(int(zero[0]))
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "cell_widths", widths)

    @classmethod
    def uniform(cls, samples, a, b, phase=None, closed=False):
        samples = np.asarray(samples, dtype=complex)
        n = samples.shape[0]
        return cls(samples, np.full(n, 1.0 / n), a, b, phase, closed)

    @property
    def n_cells(self):
        return self.samples.shape[0]

    def lifted_phase(self):
        if self.phase is not None:
            return np.asarray(self.phase, dtype=float)
        return unwrap_angles(np.angle(self.samples))

    def norm(self):
        return float(np.sqrt(np.sum(self.cell_widths * np.abs(self.samples) ** 2)))


def tangent_angles(curve, reference=None):
    """Lifted tangent angle of every edge of ``curve``."""
    e = edge_vectors(curve.vertices, curve.closed)
    return unwrap_angles(np.arctan2(e[:, 1], e[:, 0]), reference)


def fab_forward(curve, a, b, reference_angle=None):
    """Transform ``curve`` into its piecewise-constant F_{a,b} image.

    ``reference_angle`` picks the 2*pi branch of the first tangent angle
    (nearest to the reference); by default the raw ``atan2`` value is used.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    e = edge_vectors(curve.vertices, curve.closed)
    n = e.shape[0]
    speed = np.hypot(e[:, 0], e[:, 1]) * n
    bad = np.flatnonzero(speed == 0)
    if bad.size:
        raise DegenerateEdge(int(bad[0]))
    theta = unwrap_angles(np.arctan2(e[:, 1], e[:, 0]), reference_angle)
    phase = (a / (2 * b)) * theta
    samples = 2 * b * np.sqrt(speed) * np.exp(1j * phase)
    return FabImage(samples, np.full(n, 1.0 / n), a, b, phase, curve.closed)


def fab_pair(c0, c1, a, b):
    """Images of two curves with the second lift anchored on the first."""
    q0 = fab_forward(c0, a, b)
    ref = q0.phase[0] * (2 * b / a)
    return q0, fab_forward(c1, a, b, reference_angle=ref)


def fab_inverse(image, basepoint=0j, closed=None):
    """Rebuild the curve whose image is ``image``, starting at ``basepoint``.

    The velocity on cell j is ``|q_j|^2 / (4 b^2)`` along the direction
    ``(2b / a) * phase_j``. With ``closed`` true (default: the image's own
    flag) the final vertex is dropped and the closing edge becomes implicit.
    """
    q = image.samples
    zero = np.flatnonzero(np.abs(q) == 0)
    if zero.size:
        raise ZeroSample(int(zero[0]))
    a, b = image.a, image.b
    psi = image.lifted_phase()
    velocity = np.abs(q) ** 2 / (4 * b * b) * np.exp(1j * (2 * b / a) * psi)
    z = complex(basepoint) + np.concatenate([[0j], np.cumsum(image.cell_widths * velocity)])
    closed = image.closed if closed is None else closed
    if closed:
        z = z[:-1]
    return DiscreteCurve.from_complex(z, closed)


def l2_distance(q0, q1):
    """L2 distance between two images sharing (a, b) and cell structure."""
    if q0.a != q1.a or q0.b != q1.b:
        raise ParamMismatch("images were built with different (a, b)")
    if q0.n_cells != q1.n_cells or not np.allclose(q0.cell_widths, q1.cell_widths, rtol=0, atol=1e-15):
        raise ParamMismatch("images have different cell structures")
    return float(np.sqrt(np.sum(q0.cell_widths * np.abs(q0.samples - q1.samples) ** 2)))


def interpolate(q0, q1, t):
    """The image ``(1 - t) q0 + t q1`` with a lifted phase.

    The phase is unwrapped along the cells, each increment taking the
    branch nearest to the interpolated increments of the two end lifts
    (and the first cell nearest to the interpolated first phase). For
    finely sampled curves this is plain unwrapping; at t = 0 and t = 1 it
    reproduces the end lifts exactly.
    """
    if q0.n_cells != q1.n_cells:
        raise ParamMismatch("images have different cell counts")
    qt = (1 - t) * q0.samples + t * q1.samples
    scale = np.maximum(np.abs(q0.samples), np.abs(q1.samples))
    small = np.flatnonzero(np.abs(qt) <= 1e-12 * scale)
    if small.size:
        raise ZeroCrossing(int(small[0]), t)
    ref = (1 - t) * q0.lifted_phase() + t * q1.lifted_phase()
    raw = np.angle(qt)
    ref_steps = np.diff(ref)
    steps = ref_steps + wrap_angle(np.diff(raw) - ref_steps)
    seed = ref[0] + wrap_angle(raw[0] - ref[0])
    phase = seed + np.concatenate([[0.0], np.cumsum(steps)])
    return FabImage(qt, q0.cell_widths, q0.a, q0.b, phase, q0.closed and q1.closed)


def geodesic(c0, c1, a, b, t_values):
    """Curves along the elastic geodesic from ``c0`` to ``c1`` at each t.

    Both curves need the same vertex count. Closed curves go through the
    open-curve formula, so intermediate curves need not close up exactly;
    their final vertex is dropped like in ``fab_inverse``.
    """
    if c0.n_vertices != c1.n_vertices or c0.closed != c1.closed:
        raise ParamMismatch("geodesic endpoints need matching vertex counts and closure")
    q0, q1 = fab_pair(c0, c1, a, b)
    z0, z1 = c0.z[0], c1.z[0]
    return [fab_inverse(interpolate(q0, q1, t), (1 - t) * z0 + t * z1) for t in t_values]
