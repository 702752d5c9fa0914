"""Exact elastic distance: optimal reparametrization by dynamic programming.

Both curves are transformed, then a monotone lattice path through the
(cell of c0) x (cell of c1) grid is found. A move of ``(di, dj)`` cells maps
``di`` cells of c0 linearly onto ``dj`` cells of c1, and the image of c1 is
pulled back by the isometric action ``q -> (q o phi) sqrt(phi')``. Images
are piecewise constant, so the cost of every move is an exact finite sum
over the overlaps of the two cell partitions.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numba
import numpy as np

from .curves import DiscreteCurve
from .errors import CurveTooSmall, DimensionMismatch, ParamMismatch
from .result import MatchResult
from .transform import fab_forward

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Reparametrization:
    """Monotone lattice path ``(i_k, j_k)`` from ``(0, 0)`` to ``(n, n)``."""

    pairs: np.ndarray

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=int)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or len(pairs) < 2:
            raise ValueError("pairs must be a (k, 2) array with k >= 2")
        if np.any(pairs[0] != 0) or pairs[-1, 0] != pairs[-1, 1]:
            raise ValueError("path must run from (0, 0) to (n, n)")
        if np.any(np.diff(pairs, axis=0) <= 0):
            raise ValueError("both coordinates must strictly increase")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n_cells(self):
        return int(self.pairs[-1, 0])

    def __call__(self, theta):
        """Evaluate the piecewise-linear map on parameters in [0, 1]."""
        n = self.n_cells
        return np.interp(theta, self.pairs[:, 0] / n, self.pairs[:, 1] / n)

    def inverse(self):
        return Reparametrization(self.pairs[:, ::-1])


@dataclass(frozen=True)
class ExactMatchConfig:
    a: float = 1.0
    b: float = 0.5
    max_slope_step: int = 4
    rotation_search: bool = False
    rotation_grid: int = 64
    seam_search: bool = False
    rotation_tol: float = 1e-6
    threads: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("a and b must be positive")
        if self.max_slope_step < 1:
            raise ValueError("max_slope_step must be >= 1")
        if self.rotation_grid < 1:
            raise ValueError("rotation_grid must be >= 1")


@lru_cache(maxsize=None)
def _move_tables(K):
    """Moves ordered for tie-breaking, plus their cell overlaps.

    Within move ``m = (di, dj)`` the local parameter runs over [0, 1]; cell
    k of c0 and cell l of c1 share a sub-interval of length ``w``. Nonzero
    overlaps of move m are the rows ``start[m]:start[m + 1]`` of ``kl``
    (cell offsets) and ``w``. ``ratio_of[m]`` indexes ``ratios``, the
    distinct values of ``sqrt(dj / di)``.
    """
    moves = sorted(
        ((di, dj) for di in range(1, K + 1) for dj in range(1, K + 1)),
        key=lambda m: (abs(m[0] - m[1]), m[0] + m[1], m[0]),
    )
    terms = []
    start = [0]
    for di, dj in moves:
        for k in range(di):
            for l in range(dj):
                w = min((k + 1) / di, (l + 1) / dj) - max(k / di, l / dj)
                if w > 1e-15:
                    terms.append((k, l, w))
        start.append(len(terms))
    terms = np.array(terms)
    fractions = sorted({Fraction(dj, di) for di, dj in moves})
    ratio_of = [fractions.index(Fraction(dj, di)) for di, dj in moves]
    return (
        np.array(moves, dtype=np.int64),
        np.array(start, dtype=np.int64),
        terms[:, :2].astype(np.int64),
        terms[:, 2].copy(),
        np.sqrt(np.array([float(f) for f in fractions])),
        np.array(ratio_of, dtype=np.int64),
    )


@numba.njit(cache=True, nogil=True)
def _dp_kernel(x0, y0, x1, y1, moves, start, kl, w, ratios, ratio_of):
    n = x0.shape[0]
    h = 1.0 / n
    n_moves = moves.shape[0]
    # squared differences |q0[a] - r q1[b]|^2 for every slope ratio r; summing
    # these (not an expanded inner product) keeps equal images at exactly 0
    sq = np.empty((ratios.shape[0], n, n))
    for r in range(ratios.shape[0]):
        rr = ratios[r]
        for a in range(n):
            for b in range(n):
                dx = x0[a] - rr * x1[b]
                dy = y0[a] - rr * y1[b]
                sq[r, a, b] = dx * dx + dy * dy
    energy = np.full((n + 1, n + 1), np.inf)
    back = np.full((n + 1, n + 1), -1, dtype=np.int64)
    energy[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            best = np.inf
            arg = -1
            for m in range(n_moves):
                pi = i - moves[m, 0]
                pj = j - moves[m, 1]
                if pi < 0 or pj < 0:
                    continue
                prev = energy[pi, pj]
                if prev == np.inf:
                    continue
                table = sq[ratio_of[m]]
                acc = 0.0
                for t in range(start[m], start[m + 1]):
                    acc += w[t] * table[pi + kl[t, 0], pj + kl[t, 1]]
                total = prev + h * moves[m, 0] * acc
                if total < best:
                    best = total
                    arg = m
            energy[i, j] = best
            back[i, j] = arg
    return energy, back


def _dp_images(q0, q1, K):
    n = q0.shape[0]
    if n + 1 < K + 2:
        raise CurveTooSmall(f"{n + 1} vertices is too few for max_slope_step={K}")
    moves, start, kl, w, ratios, ratio_of = _move_tables(K)
    energy, back = _dp_kernel(
        np.ascontiguousarray(q0.real), np.ascontiguousarray(q0.imag),
        np.ascontiguousarray(q1.real), np.ascontiguousarray(q1.imag),
        moves, start, kl, w, ratios, ratio_of,
    )
    path = [(n, n)]
    i = j = n
    while i > 0 or j > 0:
        m = back[i, j]
        i -= moves[m, 0]
        j -= moves[m, 1]
        path.append((i, j))
    return Reparametrization(np.array(path[::-1])), float(np.sqrt(energy[n, n]))


def _check_pair(c0, c1):
    if c0.closed != c1.closed:
        raise ParamMismatch("cannot match an open curve with a closed one")
    if c0.n_vertices != c1.n_vertices:
        raise DimensionMismatch("resample both curves to a common vertex count first")


def dp_match(c0, c1, cfg):
    """Optimal lattice reparametrization of ``c1`` onto ``c0`` and its distance.

    Closed curves are cut at their first vertex and treated as open.
    Returns ``(Reparametrization, distance)``.
    """
    _check_pair(c0, c1)
    q0 = fab_forward(c0.opened(), cfg.a, cfg.b)
    ref = q0.phase[0] * (2 * cfg.b / cfg.a)
    q1 = fab_forward(c1.opened(), cfg.a, cfg.b, reference_angle=ref)
    return _dp_images(q0.samples, q1.samples, cfg.max_slope_step)


def reparametrize(curve, phi):
    """Vertices of ``curve o phi`` on the uniform parameter grid."""
    path = curve.opened().z
    n = len(path) - 1
    u = phi(np.arange(n + 1) / n) * n
    idx = np.clip(np.floor(u).astype(int), 0, n - 1)
    frac = u - idx
    z = path[idx] * (1 - frac) + path[idx + 1] * frac
    if curve.closed:
        z = z[:-1]
    return DiscreteCurve.from_complex(z, curve.closed)


def _golden_section(f, lo, hi, tol):
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def exact_distance(c0, c1, cfg):
    """Elastic distance from ``c0`` to ``c1`` modulo reparametrization.

    Optionally also minimizes over rotations of ``c1`` (a grid of
    ``rotation_grid`` angles, then golden-section refinement around the
    best one) and, for closed curves, over the starting vertex of ``c1``.
    The reported rotation is the angle applied to ``c1``.
    """
    _check_pair(c0, c1)
    a, b, K = cfg.a, cfg.b, cfg.max_slope_step
    q0 = fab_forward(c0.opened(), a, b)
    ref = q0.phase[0] * (2 * b / a)
    z1 = c1.z

    def evaluate(shift, alpha):
        z = np.roll(z1, -shift) if shift else z1
        if alpha:
            z = np.exp(1j * alpha) * z
        cand = DiscreteCurve.from_complex(z, c1.closed)
        q1 = fab_forward(cand.opened(), a, b, reference_angle=ref)
        phi, d = _dp_images(q0.samples, q1.samples, K)
        return d, phi

    shifts = range(c1.n_vertices) if (c1.closed and cfg.seam_search) else [0]
    if cfg.rotation_search:
        alphas = [2 * np.pi * r / cfg.rotation_grid for r in range(cfg.rotation_grid)]
    else:
        alphas = [0.0]
    candidates = [(s, al) for s in shifts for al in alphas]
    threads = cfg.threads or 1
    if threads > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(threads) as pool:
            found = list(pool.map(lambda sa: evaluate(*sa), candidates))
    else:
        found = [evaluate(s, al) for s, al in candidates]
    best = min(range(len(found)), key=lambda k: found[k][0])
    shift, alpha = candidates[best]
    dist, phi = found[best]

    if cfg.rotation_search and dist > 0:
        step = 2 * np.pi / cfg.rotation_grid
        alpha_ref, d_ref = _golden_section(
            lambda al: evaluate(shift, al)[0], alpha - step, alpha + step, cfg.rotation_tol
        )
        if d_ref < dist:
            alpha = float(np.mod(alpha_ref, 2 * np.pi))
            dist, phi = evaluate(shift, alpha)

    target = DiscreteCurve.from_complex(np.exp(1j * alpha) * np.roll(z1, -shift), c1.closed)
    end = reparametrize(target, phi)
    return MatchResult(
        end_curve=end,
        elastic_distance=dist,
        fidelity=0.0,
        rotation=float(alpha),
        objective_value=dist**2,
        iterations=0,
        converged=True,
        termination="exact",
        reparametrization=phi,
        seam_shift=int(shift),
    )
