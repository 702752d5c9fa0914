"""Parametric stand-ins for the shape families used in the experiments.

Every generator returns a closed curve whose vertices are spread evenly in
arclength, with the first vertex on the positive x side of the shape and the
boundary traversed counter-clockwise.
"""
import numpy as np

from .curves import DiscreteCurve, add_noise, resample_uniform
from .errors import DegenerateEdge

_DENSE = 4000


def _closed_from_parametric(x, y, n):
    dense = DiscreteCurve(np.column_stack([x, y]), closed=True)
    return resample_uniform(dense, n)


def circle(n=100, radius=1.0):
    t = 2 * np.pi * np.arange(n) / n
    return DiscreteCurve(radius * np.column_stack([np.cos(t), np.sin(t)]), closed=True)


def ellipse(n=100, e=0.8, major=1.0):
    """Ellipse of eccentricity ``e`` with semi-major axis along x."""
    if not 0 <= e < 1:
        raise ValueError("eccentricity must lie in [0, 1)")
    t = 2 * np.pi * np.arange(_DENSE) / _DENSE
    return _closed_from_parametric(major * np.cos(t), major * np.sqrt(1 - e * e) * np.sin(t), n)


def rounded_rectangle(n=100, w=2.0, h=1.0, r=0.25):
    r = min(r, 0.5 * min(w, h))
    hx, hy = 0.5 * w - r, 0.5 * h - r
    # corner arcs joined by straight sides, starting mid right side
    corners = [(hx, hy, 0.0), (-hx, hy, 0.5 * np.pi), (-hx, -hy, np.pi), (hx, -hy, 1.5 * np.pi)]
    pts = [(0.5 * w, 0.0)]
    for cx, cy, a0 in corners:
        a = a0 + np.linspace(0, 0.5 * np.pi, 64)
        pts.extend(zip(cx + r * np.cos(a), cy + r * np.sin(a)))
    pts = np.array(pts)
    keep = np.concatenate([[True], np.any(np.diff(pts, axis=0) != 0, axis=1)])
    return resample_uniform(DiscreteCurve(pts[keep], closed=True), n)


def dumbbell(n=100, neck=0.35, length=1.5, height=0.6):
    """Bone-like outline: two round lobes joined by a neck of relative width ``neck``."""
    t = 2 * np.pi * np.arange(_DENSE) / _DENSE
    x = length * np.cos(t)
    y = height * np.sin(t) * (neck + (1 - neck) * np.cos(t) ** 2)
    return _closed_from_parametric(x, y, n)


def star(n=100, k=5, amp=0.3):
    t = 2 * np.pi * np.arange(_DENSE) / _DENSE
    r = 1 + amp * np.cos(k * t)
    return _closed_from_parametric(r * np.cos(t), r * np.sin(t), n)


def appendage(base, eps=0.05, at=None, width=1e-4):
    """Insert a thin spike of length ``eps`` into a closed ``base`` curve.

    The spike leaves ``base`` at vertex ``at`` (default: the middle vertex)
    along the outward normal, turns at its tip, and comes back a distance
    ``width`` further along the curve, so two vertices are added and the
    length grows by about ``2 * eps``.
    """
    if not base.closed:
        raise ValueError("appendage expects a closed base curve")
    pts = base.vertices
    k = base.n_vertices // 2 if at is None else at
    p, nxt, prv = pts[k], pts[(k + 1) % len(pts)], pts[k - 1]
    tangent = nxt - prv
    tangent /= np.hypot(*tangent)
    outward = np.array([tangent[1], -tangent[0]])  # counter-clockwise boundary
    tip = p + eps * outward
    back = p + width * tangent
    new = np.vstack([pts[: k + 1], tip, back, pts[k + 1 :]])
    return DiscreteCurve(new, closed=True)


GENERATORS = {
    "circle": circle,
    "ellipse": ellipse,
    "rounded-rectangle": rounded_rectangle,
    "dumbbell": dumbbell,
    "star": star,
}

# relative jitter applies to these parameters of each generator
_JITTERED = {
    "circle": ("radius",),
    "ellipse": ("e", "major"),
    "rounded-rectangle": ("w", "h", "r"),
    "dumbbell": ("neck", "length", "height"),
    "star": ("amp",),
}

_DEFAULTS = {
    "circle": {"radius": 1.0},
    "ellipse": {"e": 0.8, "major": 1.0},
    "rounded-rectangle": {"w": 2.0, "h": 1.0, "r": 0.25},
    "dumbbell": {"neck": 0.35, "length": 1.5, "height": 0.6},
    "star": {"k": 5, "amp": 0.3},
}


def synthesize(name, n=100, rng=None, jitter=0.0, rotation_jitter=0.0, **params):
    """Build shape ``name`` with optionally jittered parameters.

    Each jittered parameter is scaled by ``1 + jitter * U(-1, 1)`` and the
    result rotated by ``rotation_jitter * U(-1, 1)`` radians.
    """
    if name not in GENERATORS:
        raise KeyError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}")
    kwargs = dict(_DEFAULTS[name])
    kwargs.update(params)
    if rng is None:
        rng = np.random.default_rng(0)
    if jitter:
        for key in _JITTERED[name]:
            kwargs[key] = kwargs[key] * (1 + jitter * rng.uniform(-1, 1))
    curve = GENERATORS[name](n=n, **kwargs)
    if rotation_jitter:
        curve = curve.rotated(rotation_jitter * rng.uniform(-1, 1))
    return curve


def noisy(curve, amplitude, seed, retries=10):
    """Gaussian-noise copy of ``curve``, retrying seeds that collapse an edge."""
    for k in range(retries):
        try:
            return add_noise(curve, amplitude, seed + 7919 * k)
        except DegenerateEdge:
            continue
    raise DegenerateEdge(-1, "noise kept collapsing an edge")


# four classes at comparable mutual elastic distances
CLUSTER_CLASSES = (
    ("ellipse", {}),
    ("rounded-rectangle", {}),
    ("dumbbell", {}),
    ("star", {"amp": 0.12}),
)


def clustering_collection(per_class=10, n=60, noise=0.03, jitter=0.1, rotation_jitter=0.3, seed=1):
    """Labelled curve set for the clustering experiment.

    Every other sample of each class gets Gaussian vertex noise of size
    ``noise``. Returns ``(curves, names, classes)``.
    """
    rng = np.random.default_rng(seed)
    curves, names, classes = [], [], []
    for ci, (name, params) in enumerate(CLUSTER_CLASSES):
        for k in range(per_class):
            c = synthesize(name, n=n, rng=rng, jitter=jitter, rotation_jitter=rotation_jitter, **params)
            tag = "clean"
            if k % 2:
                c = noisy(c, noise, seed=1000 * seed + 100 * ci + k)
                tag = "noisy"
            curves.append(c)
            names.append(f"{name}-{k:02d}-{tag}")
            classes.append(name)
    return curves, names, classes
