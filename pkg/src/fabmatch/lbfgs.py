"""Limited-memory BFGS with a strong Wolfe line search.

The inverse Hessian is applied by the two-loop recursion over the last
``history_size`` curvature pairs, and steps are chosen by the bracketing and
zoom procedure of Nocedal & Wright (Algorithms 3.5 and 3.6). Objective
evaluations that fail (non-finite value, or an exception listed in
``recoverable``) are treated as an infinitely high value, which makes the
line search shrink the step.
"""
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEdge


@dataclass
class LBFGSResult:
    x: np.ndarray
    value: float
    gradient: np.ndarray
    iterations: int
    termination: str
    n_evaluations: int


class _Counted:
    def __init__(self, fun, recoverable):
        self.fun = fun
        self.recoverable = recoverable
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        try:
            f, g = self.fun(x)
        except self.recoverable:
            return np.inf, None
        if not np.isfinite(f) or g is None or not np.all(np.isfinite(g)):
            return np.inf, None
        return float(f), np.asarray(g, dtype=float)


def _cubic_min(a, fa, ga, b, fb, gb):
    """Minimizer of the cubic interpolating (a, fa, ga) and (b, fb, gb)."""
    d1 = ga + gb - 3 * (fa - fb) / (a - b)
    disc = d1 * d1 - ga * gb
    if disc < 0:
        return None
    d2 = np.copysign(np.sqrt(disc), b - a)
    denom = gb - ga + 2 * d2
    if denom == 0:
        return None
    return b - (b - a) * (gb + d2 - d1) / denom


def _decrease_ok(f, g, alpha, f0, g0, c1, noise):
    """Armijo test, or its derivative form when f is within ``noise`` of f0."""
    if f <= f0 + c1 * alpha * g0:
        return True
    return g is not None and f <= f0 + noise and g <= (2 * c1 - 1) * g0


def _zoom(phi, lo, hi, f0, g0, c1, c2, noise, max_iter=30):
    a_lo, f_lo, g_lo = lo
    a_hi, f_hi, g_hi = hi
    for _ in range(max_iter):
        trial = None
        if np.isfinite(f_hi) and g_hi is not None:
            trial = _cubic_min(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi)
        span = a_hi - a_lo
        lo_edge, hi_edge = sorted((a_lo + 0.1 * span, a_hi - 0.1 * span))
        if trial is None or not np.isfinite(trial) or not lo_edge <= trial <= hi_edge:
            trial = 0.5 * (a_lo + a_hi)
        f, g, state = phi(trial)
        if not np.isfinite(f) or not _decrease_ok(f, g, trial, f0, g0, c1, noise) or f > f_lo + noise:
            a_hi, f_hi, g_hi = trial, f, g
        else:
            if abs(g) <= -c2 * g0:
                return trial, state
            if g * (a_hi - a_lo) >= 0:
                a_hi, f_hi, g_hi = a_lo, f_lo, g_lo
            a_lo, f_lo, g_lo = trial, f, g
        if abs(a_hi - a_lo) <= 1e-16 * max(1.0, abs(a_lo)):
            break
    return None, None


def strong_wolfe(fun, x, f0, grad0, direction, step=1.0, c1=1e-4, c2=0.9, max_step=1e10,
                 max_iter=25, noise=0.0):
    """Step length along ``direction`` satisfying the strong Wolfe conditions.

    Values within ``noise`` of ``f0`` cannot resolve the Armijo condition;
    for those the approximate Wolfe test of Hager & Zhang (a derivative
    bound) stands in for it. Returns ``(alpha, f, grad)`` or ``None`` when
    no acceptable step was found.
    """
    g0 = float(grad0 @ direction)
    if g0 >= 0:
        return None

    def phi(alpha):
        f, g = fun(x + alpha * direction)
        if g is None:
            return np.inf, None, None
        return f, float(g @ direction), (f, g)

    prev = (0.0, f0, g0)
    alpha = step
    for i in range(max_iter):
        f, g, state = phi(alpha)
        if not np.isfinite(f) or not _decrease_ok(f, g, alpha, f0, g0, c1, noise) or (
            i > 0 and f > prev[1] + noise
        ):
            a, st = _zoom(phi, prev, (alpha, f, g), f0, g0, c1, c2, noise)
            return None if a is None else (a, *st)
        if abs(g) <= -c2 * g0:
            return alpha, *state
        if g >= 0:
            a, st = _zoom(phi, (alpha, f, g), prev, f0, g0, c1, c2, noise)
            return None if a is None else (a, *st)
        prev = (alpha, f, g)
        alpha = min(2.0 * alpha, max_step)
    return None


def _two_loop(grad, pairs):
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    if pairs:
        s, y, _ = pairs[-1]
        q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def lbfgs_minimize(value_and_gradient, x0, max_iter=500, grad_tol=1e-6, history_size=10,
                   relative_tol=False, recoverable=(DegenerateEdge,), f_noise=0.0,
                   initial_step=1.0):
    """Minimize a smooth function given a callable returning ``(f, grad)``.

    Stops when ``max|grad| < grad_tol`` (times ``1 + |f|`` if
    ``relative_tol``), after ``max_iter`` iterations, or when the line
    search cannot make progress; ``termination`` is respectively
    ``"gradient_tol"``, ``"max_iter"`` or ``"line_search_failure"``. The
    best iterate is always returned. ``f_noise`` is the absolute accuracy
    of computed values (on top of a few ulps of ``f``), used by the line
    search to recognise when value comparisons stop being meaningful.
    Steepest-descent steps (the first one, and restarts) start with a
    largest coordinate change of ``initial_step``.
    """
    fun = _Counted(value_and_gradient, recoverable)
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    if g is None:
        raise ValueError("objective is not finite at the starting point")

    def converged(f, g):
        tol = grad_tol * (1 + abs(f)) if relative_tol else grad_tol
        return np.max(np.abs(g)) < tol

    pairs = deque(maxlen=history_size)
    termination = "max_iter"
    it = 0
    while it < max_iter:
        if converged(f, g):
            termination = "gradient_tol"
            break
        d = _two_loop(g, pairs)
        if g @ d >= 0:
            pairs.clear()
            d = -g
        step = 1.0 if pairs else initial_step / np.max(np.abs(g))
        noise = f_noise + 1e-15 * (1 + abs(f))
        found = strong_wolfe(fun, x, f, g, d, step=step, noise=noise)
        if found is None and pairs:
            # retry from steepest descent with a fresh memory
            pairs.clear()
            d = -g
            found = strong_wolfe(fun, x, f, g, d, step=initial_step / np.max(np.abs(g)), noise=noise)
        if found is None:
            termination = "line_search_failure"
            break
        alpha, f_new, g_new = found
        s = alpha * d
        y = g_new - g
        sy = s @ y
        if sy > 1e-12 * np.sqrt((s @ s) * (y @ y)):
            pairs.append((s, y, 1.0 / sy))
        x = x + s
        f, g = f_new, g_new
        it += 1
    else:
        if converged(f, g):
            termination = "gradient_tol"
    return LBFGSResult(x, f, g, it, termination, fun.calls)
