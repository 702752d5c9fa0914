"""Inexact elastic matching with a varifold fidelity penalty.

Minimizes, over the vertices of an end curve ``c`` (and optionally a
rotation angle ``alpha``),

    || F(c0) - F(c) ||^2  +  lam * D_var(exp(i alpha) c, c1)^2

so that ``c`` only has to resemble the target ``c1`` as a geometric set.
The elastic distance reported is the first term's square root: the length
of the geodesic from ``c0`` to ``c``.
"""
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .curves import DiscreteCurve, edge_vectors, resample_uniform
from .errors import DegenerateEdge, DimensionMismatch, ParamMismatch
from .lbfgs import lbfgs_minimize
from .result import MatchResult
from .transform import fab_forward, unwrap_angles
from .varifold import (
    VarifoldKernel,
    curve_to_varifold,
    varifold_inner,
    varifold_value_and_gradient,
)


@dataclass(frozen=True)
class RelaxedConfig:
    a: float = 1.0
    b: float = 0.5
    lam: float = 40.0
    kernel: VarifoldKernel = VarifoldKernel()
    optimize_rotation: bool = False
    init: Union[str, DiscreteCurve] = "source"
    max_iter: int = 500
    grad_tol: float = 1e-6
    history_size: int = 10
    continuation: bool = False
    # starting angle is the best of this many, scored on the fidelity alone
    rotation_init_grid: int = 8

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("a and b must be positive")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.max_iter < 1 or self.grad_tol <= 0 or self.history_size < 1:
            raise ValueError("max_iter, grad_tol and history_size must be positive")
        if isinstance(self.init, str) and self.init not in ("source", "target"):
            raise ValueError(f"unknown init {self.init!r}")


def _scatter_edges(dedge, closed, n_vertices):
    grad = np.zeros((n_vertices, 2))
    grad[: dedge.shape[0]] -= dedge
    if closed:
        grad += np.roll(dedge, 1, axis=0)
    else:
        grad[1:] += dedge
    return grad


class _Problem:
    """Precomputed pieces of the objective for one (c0, c1, config)."""

    def __init__(self, c0, c1, cfg):
        self.cfg = cfg
        self.closed = c0.closed
        self.n = c0.n_vertices
        self.kappa = cfg.a / (2 * cfg.b)
        q0 = fab_forward(c0, cfg.a, cfg.b)
        self.q0 = q0.samples
        self.width = q0.cell_widths
        self.ref_angle = q0.phase[0] / self.kappa
        self.kernel = cfg.kernel.resolved(c1)
        self.target = curve_to_varifold(c1)
        self.target_self = varifold_inner(self.kernel, self.target, self.target)

    def elastic(self, pts):
        """Squared L2 distance to F(c0) and its vertex gradient."""
        e = edge_vectors(pts, self.closed)
        ell = np.hypot(e[:, 0], e[:, 1])
        bad = np.flatnonzero(ell == 0.0)
        if bad.size:
            raise DegenerateEdge(int(bad[0]))
        u = e / ell[:, None]
        theta = unwrap_angles(np.arctan2(e[:, 1], e[:, 0]), self.ref_angle)
        q = 2 * self.cfg.b * np.sqrt(ell / self.width) * np.exp(1j * self.kappa * theta)
        diff = q - self.q0
        value = float(np.sum(self.width * np.abs(diff) ** 2))
        # dq = q * (<de,u>/(2l) + i kappa <de,n>/l), dE = Re(conj(2 w diff) dq)
        z = 2 * self.width * np.conj(diff) * q
        normal = np.column_stack([-u[:, 1], u[:, 0]])
        dedge = (z.real / (2 * ell))[:, None] * u - (self.kappa * z.imag / ell)[:, None] * normal
        return value, _scatter_edges(dedge, self.closed, pts.shape[0])

    def fidelity(self, pts, alpha):
        """Varifold term at the rotated curve, with vertex and angle gradients."""
        c, s = np.cos(alpha), np.sin(alpha)
        rot = np.array([[c, -s], [s, c]])
        moved = pts @ rot.T
        value, g = varifold_value_and_gradient(
            self.kernel, moved, self.closed, self.target, self.target_self
        )
        dalpha = float(np.sum(g[:, 1] * moved[:, 0] - g[:, 0] * moved[:, 1]))
        return value, g @ rot, dalpha

    def value_and_gradient(self, pts, alpha):
        e_val, e_grad = self.elastic(pts)
        f_val, f_grad, dalpha = self.fidelity(pts, alpha)
        lam = self.cfg.lam
        return e_val + lam * f_val, e_grad + lam * f_grad, lam * dalpha


def _check_source(c, c0):
    if c.n_vertices != c0.n_vertices:
        raise DimensionMismatch("end curve and source need the same vertex count")
    if c.closed != c0.closed:
        raise ParamMismatch("end curve and source must both be open or both closed")


def objective(c, alpha, c0, c1, cfg):
    """Relaxed matching energy of the candidate end curve ``c``."""
    _check_source(c, c0)
    value, _, _ = _Problem(c0, c1, cfg).value_and_gradient(c.vertices, alpha)
    return value


def objective_gradient(c, alpha, c0, c1, cfg):
    """Gradient of :func:`objective` in the vertices of ``c`` and in alpha.

    The angle derivative is reported as 0 unless ``cfg.optimize_rotation``.
    """
    _check_source(c, c0)
    _, grad, dalpha = _Problem(c0, c1, cfg).value_and_gradient(c.vertices, alpha)
    return grad, (dalpha if cfg.optimize_rotation else 0.0)


def _initial_curve(c0, c1, cfg):
    if isinstance(cfg.init, DiscreteCurve):
        _check_source(cfg.init, c0)
        return cfg.init
    if cfg.init == "source":
        return c0
    if c1.closed != c0.closed:
        raise ParamMismatch("target init needs source and target of the same closure")
    if c1.n_vertices == c0.n_vertices:
        return c1
    return resample_uniform(c1, c0.n_vertices)


def _initial_angle(problem, pts, cfg):
    if not cfg.optimize_rotation or cfg.rotation_init_grid <= 1:
        return 0.0
    grid = 2 * np.pi * np.arange(cfg.rotation_init_grid) / cfg.rotation_init_grid
    scores = [problem.fidelity(pts, al)[0] for al in grid]
    return float(grid[int(np.argmin(scores))])


def _solve(problem, pts, alpha, cfg):
    n = pts.size
    rotate = cfg.optimize_rotation

    def fun(x):
        p = x[:n].reshape(-1, 2)
        al = x[n] if rotate else alpha
        f, g, dal = problem.value_and_gradient(p, al)
        return f, (np.append(g.ravel(), dal) if rotate else g.ravel())

    x0 = np.append(pts.ravel(), alpha) if rotate else pts.ravel().copy()
    # the fidelity is a difference of kernel sums of size ~ target_self
    noise = 1e-14 * problem.cfg.lam * problem.target_self
    # first moves stay well below the edge scale so the curve cannot fold
    step = 0.5 * np.mean(np.hypot(*edge_vectors(pts, problem.closed).T))
    res = lbfgs_minimize(fun, x0, max_iter=cfg.max_iter, grad_tol=cfg.grad_tol,
                         history_size=cfg.history_size, relative_tol=True, f_noise=noise,
                         initial_step=step)
    pts = res.x[:n].reshape(-1, 2)
    return pts, (float(res.x[n]) if rotate else alpha), res


def relaxed_match(c0, c1, cfg):
    """Match ``c0`` to ``c1`` inexactly; see the module docstring.

    ``c1`` may have any vertex count. With ``cfg.continuation`` the problem
    is first solved at ``lam / 10`` and the solution used as a warm start.
    """
    start = _initial_curve(c0, c1, cfg)
    problem = _Problem(c0, c1, cfg)
    pts = np.array(start.vertices, dtype=float)
    alpha = _initial_angle(problem, pts, cfg)
    iterations = 0
    if cfg.continuation:
        warm = _Problem(c0, c1, replace(cfg, lam=cfg.lam / 10))
        pts, alpha, res = _solve(warm, pts, alpha, cfg)
        iterations += res.iterations
    pts, alpha, res = _solve(problem, pts, alpha, cfg)
    iterations += res.iterations

    end = DiscreteCurve(pts, c0.closed)
    e_val, _ = problem.elastic(pts)
    f_val, _, _ = problem.fidelity(pts, alpha)
    return MatchResult(
        end_curve=end,
        elastic_distance=float(np.sqrt(e_val)),
        fidelity=float(f_val),
        rotation=float(np.mod(alpha, 2 * np.pi)) if cfg.optimize_rotation else 0.0,
        objective_value=float(e_val + cfg.lam * f_val),
        iterations=iterations,
        converged=res.termination == "gradient_tol",
        termination=res.termination,
    )
