"""Pairwise elastic distance matrices and classical multidimensional scaling."""
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, is_dataclass

import numpy as np

from .curves import resample_uniform
from .exact import ExactMatchConfig, exact_distance
from .relaxed import RelaxedConfig, relaxed_match

log = logging.getLogger(__name__)


class NotEnoughPositiveEigenvalues(UserWarning):
    """The distance matrix is not Euclidean enough for the requested dimension."""


@dataclass
class DistanceMatrix:
    labels: list
    values: np.ndarray
    mode: str
    config: dict = field(default_factory=dict)
    # (i, j, termination) for every pair whose solver did not converge
    failures: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.labels)


def _config_snapshot(cfg):
    if not is_dataclass(cfg):
        return {}
    out = {}
    for key, value in asdict(cfg).items():
        if key == "init" and not isinstance(value, str):
            value = "custom"
        out[key] = value
    return out


def _pair_distance(ci, cj, mode, cfg):
    if mode == "exact":
        res = exact_distance(ci, cj, cfg)
    else:
        res = relaxed_match(ci, cj, cfg)
    return res.elastic_distance, res.termination


def pairwise_distances(curves, mode="relaxed", cfg=None, labels=None, n=None, threads=None):
    """Distance matrix over ``curves``, one solver run per unordered pair.

    Pair ``(i, j)`` with ``i < j`` matches curve i (source) to curve j
    (target), and the value fills both ``[i, j]`` and ``[j, i]``. Rotations
    are quotiented out: the exact solver searches its rotation grid and the
    relaxed solver optimizes the angle. With ``n`` every curve is first
    resampled to ``n`` vertices.
    """
    if len(curves) < 2:
        raise ValueError("need at least two curves")
    if mode not in ("exact", "relaxed"):
        raise ValueError(f"unknown mode {mode!r}")
    if cfg is None:
        cfg = ExactMatchConfig() if mode == "exact" else RelaxedConfig()
    if mode == "exact" and not cfg.rotation_search:
        cfg = ExactMatchConfig(**{**asdict(cfg), "rotation_search": True})
    if mode == "relaxed" and not cfg.optimize_rotation:
        cfg = RelaxedConfig(**{**_shallow(cfg), "optimize_rotation": True})
    if n is not None:
        curves = [resample_uniform(c, n) for c in curves]
    labels = list(labels) if labels is not None else [str(k) for k in range(len(curves))]

    pairs = [(i, j) for i in range(len(curves)) for j in range(i + 1, len(curves))]

    def run(pair):
        i, j = pair
        return _pair_distance(curves[i], curves[j], mode, cfg)

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, pairs))
    else:
        results = [run(p) for p in pairs]

    values = np.zeros((len(curves), len(curves)))
    failures = []
    for (i, j), (d, termination) in zip(pairs, results):
        values[i, j] = values[j, i] = d
        if termination not in ("gradient_tol", "exact"):
            failures.append((i, j, termination))
            log.warning("pair (%s, %s) ended with %s", labels[i], labels[j], termination)
    return DistanceMatrix(labels, values, mode, _config_snapshot(cfg), failures)


def _shallow(cfg):
    return {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all off-diagonal entries until the off-diagonal Frobenius
    norm drops below ``tol`` times the matrix norm. Returns eigenvalues and
    eigenvectors (as columns), unsorted.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    upper = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        # summed directly: the difference of total and diagonal norms cancels
        off = np.sqrt(2.0) * np.linalg.norm(a[upper])
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1))
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        warnings.warn("Jacobi iteration did not reach the requested tolerance", RuntimeWarning)
    return np.diag(a).copy(), v


def classical_mds(matrix, dim=2):
    """Classical (Torgerson) scaling of a distance matrix into ``dim`` dimensions.

    ``matrix`` is a :class:`DistanceMatrix` or a plain square array. Columns
    are ordered by decreasing eigenvalue and signed so that each column's
    largest-magnitude entry is positive. Directions with non-positive
    eigenvalues are returned as zero columns, with a warning.
    """
    d = np.asarray(matrix.values if isinstance(matrix, DistanceMatrix) else matrix, dtype=float)
    n = d.shape[0]
    if not 1 <= dim <= n - 1:
        raise ValueError("dim must lie between 1 and n - 1")
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (d**2) @ j
    evals, evecs = jacobi_eigh(b)
    order = np.argsort(-evals, kind="stable")
    evals, evecs = evals[order[:dim]], evecs[:, order[:dim]]
    positive = evals > 1e-12 * max(1.0, abs(evals[0]))
    if not np.all(positive):
        warnings.warn(
            f"only {int(positive.sum())} of {dim} eigenvalues are positive; padding with zeros",
            NotEnoughPositiveEigenvalues,
        )
    coords = evecs * np.sqrt(np.where(positive, evals, 0.0))
    for k in range(dim):
        col = coords[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            coords[:, k] = -col
    return coords


def kmeans_silhouette(embedding, k, seed=0, restarts=20):
    """Silhouette score of a k-means partition of ``embedding``.

    Returns ``(score, labels)``.
    """
    from sklearn.cluster import KMeans
    from sklearn.metrics import silhouette_score

    km = KMeans(n_clusters=k, n_init=restarts, random_state=seed).fit(embedding)
    return float(silhouette_score(embedding, km.labels_)), km.labels_
