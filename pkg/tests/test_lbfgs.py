import numpy as np
import pytest

from fabmatch.errors import DegenerateEdge
from fabmatch.lbfgs import lbfgs_minimize, strong_wolfe


def quadratic(n=10, seed=0):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    a = q @ np.diag(np.linspace(1, 10, n)) @ q.T
    x_star = rng.normal(size=n)

    def f(x):
        d = x - x_star
        return 0.5 * d @ a @ d, a @ d

    return f, x_star


def rosenbrock(x):
    f = (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2
    g = np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2), 200 * (x[1] - x[0] ** 2)])
    return f, g


def test_convex_quadratic():
    f, x_star = quadratic()
    res = lbfgs_minimize(f, np.zeros(10), grad_tol=1e-10)
    assert res.termination == "gradient_tol"
    assert np.max(np.abs(res.x - x_star)) < 1e-8
    assert res.iterations <= 25


def test_rosenbrock():
    res = lbfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), grad_tol=1e-9)
    assert res.termination == "gradient_tol"
    assert np.max(np.abs(res.x - 1.0)) < 1e-6


@pytest.mark.parametrize("tol", [1e-3, 1e-6])
def test_gradient_tol_postcondition(tol):
    res = lbfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), grad_tol=tol)
    assert res.termination == "gradient_tol"
    assert np.max(np.abs(res.gradient)) < tol


def test_relative_tolerance_scales_with_value():
    f, _ = quadratic()
    shifted = lambda x: (f(x)[0] + 1e6, f(x)[1])
    res = lbfgs_minimize(shifted, np.zeros(10), grad_tol=1e-9, relative_tol=True)
    assert res.termination == "gradient_tol"
    assert np.max(np.abs(res.gradient)) < 1e-9 * (1 + abs(res.value))


def test_max_iter():
    res = lbfgs_minimize(rosenbrock, np.array([-1.2, 1.0]), max_iter=3)
    assert res.termination == "max_iter" and res.iterations == 3


def test_inconsistent_gradient_fails_line_search():
    # the reported gradient points uphill, so no step can decrease f
    res = lbfgs_minimize(lambda x: (float(x @ x), -2 * x), np.ones(3))
    assert res.termination == "line_search_failure"
    assert np.array_equal(res.x, np.ones(3))


def test_failed_evaluations_shrink_the_step():
    def f(x):
        if x[0] > 0.5:
            raise DegenerateEdge(0)
        return float((x[0] - 1) ** 2), np.array([2 * (x[0] - 1)])

    res = lbfgs_minimize(f, np.array([0.0]), max_iter=50)
    assert res.x[0] <= 0.5 and res.value < 1.0


def test_non_finite_start_is_rejected():
    with pytest.raises(ValueError):
        lbfgs_minimize(lambda x: (np.nan, x), np.zeros(2))


def test_strong_wolfe_conditions():
    f, _ = quadratic(5, seed=3)
    x = np.zeros(5)
    f0, g0 = f(x)
    d = -g0
    alpha, f1, g1 = strong_wolfe(f, x, f0, g0, d, step=10.0)
    assert f1 <= f0 + 1e-4 * alpha * (g0 @ d)
    assert abs(g1 @ d) <= 0.9 * abs(g0 @ d)


def test_strong_wolfe_rejects_ascent_direction():
    f, _ = quadratic(4)
    f0, g0 = f(np.zeros(4))
    assert strong_wolfe(f, np.zeros(4), f0, g0, g0) is None
