import itertools

import numpy as np
import pytest

from conftest import random_polyline, smooth_closed_curve, smooth_open_curve
from fabmatch.curves import DiscreteCurve
from fabmatch.errors import CurveTooSmall, DimensionMismatch, ParamMismatch
from fabmatch.exact import ExactMatchConfig, Reparametrization, dp_match, exact_distance
from fabmatch.transform import fab_forward, fab_pair, l2_distance


def all_paths(n, K):
    """Every monotone lattice path from (0, 0) to (n, n) with moves in {1..K}^2."""
    def extend(i, j):
        if (i, j) == (n, n):
            yield [(i, j)]
            return
        for di, dj in itertools.product(range(1, K + 1), repeat=2):
            if i + di <= n and j + dj <= n:
                for rest in extend(i + di, j + dj):
                    yield [(i, j)] + rest
    return list(extend(0, 0))


def path_energy(q0, q1, path):
    """Integral of |q0 - (q1 o phi) sqrt(phi')|^2 split at every breakpoint."""
    n = len(q0)
    total = 0.0
    for (i, j), (i2, j2) in zip(path[:-1], path[1:]):
        di, dj = i2 - i, j2 - j
        slope = dj / di
        cuts = {i + k for k in range(di + 1)} | {i + l / slope for l in range(dj + 1)}
        cuts = sorted(c / n for c in cuts)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi - lo <= 0:
                continue
            mid = 0.5 * (lo + hi)
            cell0 = int(np.floor(mid * n))
            cell1 = int(np.floor((j + (mid * n - i) * slope)))
            total += (hi - lo) * abs(q0[cell0] - q1[cell1] * np.sqrt(slope)) ** 2
    return total


@pytest.mark.parametrize("seed", range(6))
def test_dp_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    c0, c1 = random_polyline(rng, 6), random_polyline(rng, 6)
    cfg = ExactMatchConfig(a=1.0, b=0.7, max_slope_step=2)
    q0, q1 = fab_pair(c0, c1, cfg.a, cfg.b)
    best = min(path_energy(q0.samples, q1.samples, p) for p in all_paths(5, 2))
    phi, d = dp_match(c0, c1, cfg)
    assert abs(d - np.sqrt(best)) < 1e-12
    assert path_energy(q0.samples, q1.samples, [tuple(p) for p in phi.pairs]) == pytest.approx(d * d, abs=1e-12)


def test_self_match_is_identity(rng):
    c = smooth_open_curve(rng, 50)
    phi, d = dp_match(c, c, ExactMatchConfig())
    assert d < 1e-12
    assert np.array_equal(phi.pairs, np.column_stack([np.arange(50), np.arange(50)]))


def test_constructed_lattice_warp_is_recovered(rng):
    moves = [(2, 1), (1, 2), (2, 1), (1, 2), (1, 1), (2, 1), (1, 2), (1, 1), (1, 1)]
    n0 = sum(m[0] for m in moves)
    n1 = sum(m[1] for m in moves)
    assert n0 == n1 == 12
    # both curves trace the same polyline; c0 splits each piece into di equal
    # edges and c1 into dj, so c1 composed with the path is c0 exactly
    z0, z1 = [0j], [0j]
    for di, dj in moves:
        v = complex(*rng.normal(size=2))
        z0 += [z0[-1] + v * (k + 1) / di for k in range(di)]
        z1 += [z1[-1] + v * (k + 1) / dj for k in range(dj)]
    c0 = DiscreteCurve.from_complex(np.array(z0))
    c1 = DiscreteCurve.from_complex(np.array(z1))
    phi, d = dp_match(c0, c1, ExactMatchConfig(max_slope_step=2))
    expected = np.cumsum([(0, 0)] + moves, axis=0)
    assert d < 1e-8
    assert np.array_equal(phi.pairs, expected)
    assert np.array_equal(phi.inverse().pairs, expected[:, ::-1])


@pytest.mark.parametrize("seed", range(4))
def test_dp_never_worse_than_identity(seed):
    rng = np.random.default_rng(100 + seed)
    c0, c1 = smooth_open_curve(rng, 40), smooth_open_curve(rng, 40)
    cfg = ExactMatchConfig(a=1.0, b=0.8)
    _, d = dp_match(c0, c1, cfg)
    assert d <= l2_distance(*fab_pair(c0, c1, cfg.a, cfg.b)) + 1e-12


def test_symmetry_surrogate(rng):
    for _ in range(3):
        c0, c1 = smooth_open_curve(rng, 100), smooth_open_curve(rng, 100)
        _, d01 = dp_match(c0, c1, ExactMatchConfig())
        _, d10 = dp_match(c1, c0, ExactMatchConfig())
        assert abs(d01 - d10) / max(d01, 1e-8) < 0.05


def test_rotation_grid_hits_exact_angle(rng):
    c0 = smooth_closed_curve(rng, 60)
    c1 = c0.rotated(np.pi / 3)
    plain = exact_distance(c0, c1, ExactMatchConfig())
    for R in (12, 18):
        res = exact_distance(c0, c1, ExactMatchConfig(rotation_search=True, rotation_grid=R))
        assert res.elastic_distance < 1e-8
        assert res.elastic_distance < plain.elastic_distance
        assert np.exp(1j * res.rotation) == pytest.approx(np.exp(-1j * np.pi / 3), abs=1e-9)


def test_rotation_search_off_grid_improves(rng):
    c0 = smooth_closed_curve(rng, 60)
    c1 = c0.rotated(0.5)
    plain = exact_distance(c0, c1, ExactMatchConfig()).elastic_distance
    found = exact_distance(c0, c1, ExactMatchConfig(rotation_search=True, rotation_grid=16))
    assert found.elastic_distance < 0.05 * plain
    assert found.rotation == pytest.approx(2 * np.pi - 0.5, abs=1e-4)


def test_seam_search_finds_shift(rng):
    c0 = smooth_closed_curve(rng, 50)
    c1 = c0.shifted(10)
    res = exact_distance(c0, c1, ExactMatchConfig(seam_search=True))
    assert res.elastic_distance < 1e-8
    assert res.seam_shift == 40
    assert exact_distance(c0, c1, ExactMatchConfig()).elastic_distance > 1e-3


@pytest.mark.parametrize("seed", range(3))
def test_search_dominates_plain_dp(seed):
    rng = np.random.default_rng(seed)
    c0, c1 = smooth_closed_curve(rng, 40), smooth_closed_curve(rng, 40)
    _, plain = dp_match(c0, c1, ExactMatchConfig())
    cfg = ExactMatchConfig(rotation_search=True, rotation_grid=8, seam_search=True)
    assert exact_distance(c0, c1, cfg).elastic_distance <= plain + 1e-12


def test_joint_rotation_invariance(rng):
    c0, c1 = smooth_closed_curve(rng, 40), smooth_closed_curve(rng, 40)
    cfg = ExactMatchConfig(rotation_search=True, rotation_grid=8)
    base = exact_distance(c0, c1, cfg).elastic_distance
    for k in (1, 3):
        beta = 2 * np.pi * k / 8
        moved = exact_distance(c0.rotated(beta), c1.rotated(beta), cfg).elastic_distance
        assert abs(moved - base) < 1e-12


def test_threads_do_not_change_results(rng):
    c0, c1 = smooth_closed_curve(rng, 30), smooth_closed_curve(rng, 30)
    cfg = dict(rotation_search=True, rotation_grid=6, seam_search=True)
    one = exact_distance(c0, c1, ExactMatchConfig(threads=1, **cfg))
    four = exact_distance(c0, c1, ExactMatchConfig(threads=4, **cfg))
    assert one.elastic_distance == four.elastic_distance
    assert np.array_equal(one.end_curve.vertices, four.end_curve.vertices)


def test_result_fields(rng):
    c0, c1 = smooth_closed_curve(rng, 30), smooth_closed_curve(rng, 30)
    res = exact_distance(c0, c1, ExactMatchConfig(seam_search=True))
    assert res.termination == "exact" and res.converged
    assert res.objective_value == pytest.approx(res.elastic_distance**2)
    assert res.end_curve.closed and res.end_curve.n_vertices == 30
    assert 0 <= res.rotation < 2 * np.pi


def test_errors():
    small = DiscreteCurve(np.column_stack([np.arange(5.0), np.zeros(5)]))
    with pytest.raises(CurveTooSmall):
        dp_match(small, small, ExactMatchConfig(max_slope_step=4))
    dp_match(small, small, ExactMatchConfig(max_slope_step=3))
    rng = np.random.default_rng(0)
    with pytest.raises(ParamMismatch):
        dp_match(smooth_closed_curve(rng, 20), smooth_open_curve(rng, 20), ExactMatchConfig())
    with pytest.raises(DimensionMismatch):
        dp_match(smooth_open_curve(rng, 20), smooth_open_curve(rng, 21), ExactMatchConfig())
    with pytest.raises(ValueError):
        ExactMatchConfig(max_slope_step=0)
    with pytest.raises(ValueError):
        ExactMatchConfig(rotation_grid=0)


def test_reparametrization_validation_and_evaluation():
    phi = Reparametrization([[0, 0], [2, 1], [4, 4]])
    assert phi.n_cells == 4
    assert phi(np.array([0.0, 0.5, 1.0])) == pytest.approx([0.0, 0.25, 1.0])
    assert phi.inverse()(phi(np.array([0.3, 0.7]))) == pytest.approx([0.3, 0.7])
    for bad in ([[0, 0], [1, 1], [1, 2], [3, 3]], [[1, 0], [2, 2]], [[0, 0], [2, 3]]):
        with pytest.raises(ValueError):
            Reparametrization(bad)
