import numpy as np
import pytest

from conftest import random_polyline, smooth_closed_curve, smooth_open_curve
from fabmatch.curves import DiscreteCurve, elastic_metric
from fabmatch.errors import ParamMismatch, ZeroCrossing, ZeroSample
from fabmatch.transform import (
    FabImage,
    fab_forward,
    fab_inverse,
    geodesic,
    interpolate,
    l2_distance,
    unwrap_angles,
    wrap_angle,
)

AB = [(1.0, 0.5), (1.0, 1.0), (1.0, 0.8), (2.0, 0.3)]


def segment(angle, n=2, length=1.0):
    t = np.linspace(0, length, n)
    return DiscreteCurve.from_complex(t * np.exp(1j * angle))


def srvf(curve):
    """Square-root velocity samples c' / sqrt|c'| computed edge by edge."""
    v = np.diff(curve.z) * (curve.n_vertices - 1)
    return v / np.sqrt(np.abs(v))


def test_wrap_angle_range():
    x = np.array([-3 * np.pi, -np.pi, 0.0, np.pi, 3 * np.pi, 7.0])
    w = wrap_angle(x)
    assert np.all(w > -np.pi) and np.all(w <= np.pi)
    assert np.allclose(np.exp(1j * w), np.exp(1j * x))
    assert w[1] == pytest.approx(np.pi)


def test_unwrap_follows_reference():
    raw = np.array([3.0, -3.0, -2.5])
    assert np.allclose(np.diff(unwrap_angles(raw)), [2 * np.pi - 6.0, 0.5])
    assert unwrap_angles(raw, reference=3.0 + 4 * np.pi)[0] == pytest.approx(3.0 + 4 * np.pi)


@pytest.mark.parametrize("a,b", AB)
def test_horizontal_segment_is_constant_2b(a, b):
    q = fab_forward(segment(0.0, 11), a, b)
    assert np.allclose(q.samples, 2 * b, atol=1e-14)


def test_vertical_segment_srvf_is_i():
    q = fab_forward(segment(np.pi / 2, 5), 1.0, 0.5)
    assert np.allclose(q.samples, 1j, atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_srvf_special_case(seed):
    c = random_polyline(np.random.default_rng(seed), 30)
    q = fab_forward(c, 1.0, 0.5)
    assert np.max(np.abs(q.samples - srvf(c))) < 1e-12


def test_younes_special_case(rng):
    # keep every tangent angle inside (-pi, pi] so the principal root applies
    c = smooth_open_curve(rng, 60, wiggle=0.05)
    c = c.rotated(-np.angle(c.z[-1] - c.z[0]))
    v = np.diff(c.z) * (c.n_vertices - 1)
    assert np.all(np.abs(np.angle(v)) < 2.5)
    q = fab_forward(c, 1.0, 1.0)
    assert np.max(np.abs(q.samples - 2 * np.sqrt(v))) < 1e-12


@pytest.mark.parametrize("a,b", AB)
def test_inverse_of_forward_restores_curve(a, b, rng):
    for closed in (False, True):
        c = smooth_closed_curve(rng) if closed else smooth_open_curve(rng)
        back = fab_inverse(fab_forward(c, a, b), c.z[0])
        assert back.closed == closed
        assert np.max(np.abs(back.vertices - c.vertices)) < 1e-10


def test_inverse_of_constant_image():
    q = FabImage.uniform(np.full(4, 2 * 0.7), 1.3, 0.7)
    c = fab_inverse(q)
    assert np.allclose(c.vertices, np.column_stack([np.linspace(0, 1, 5), np.zeros(5)]), atol=1e-15)


@pytest.mark.parametrize("a,b", AB)
def test_forward_of_inverse_restores_image(a, b, rng):
    n = 40
    # images in the forward map's range: direction steps stay inside (-pi, pi)
    limit = 0.95 * np.pi * min(1.0, a / (2 * b))
    phase = np.cumsum(rng.uniform(-limit, limit, size=n))
    samples = rng.uniform(0.2, 2.0, size=n) * np.exp(1j * phase)
    for q in (FabImage.uniform(samples, a, b, phase), FabImage.uniform(samples, a, b)):
        c = fab_inverse(q)
        back = fab_forward(c, a, b, reference_angle=q.lifted_phase()[0] * 2 * b / a)
        assert np.max(np.abs(back.samples - q.samples)) < 1e-10


def test_zero_sample_rejected():
    with pytest.raises(ZeroSample):
        FabImage.uniform([1.0, 0.0, 1.0], 1, 0.5)


def test_cell_widths_must_sum_to_one():
    with pytest.raises(ValueError):
        FabImage([1.0, 1.0], [0.5, 0.6], 1, 0.5)


@pytest.mark.parametrize("a,b", AB)
def test_translation_invariance(a, b, rng):
    c = smooth_open_curve(rng)
    q = fab_forward(c, a, b).samples
    assert np.array_equal(q, fab_forward(c.translated(3.5 - 2j), a, b).samples) or np.max(
        np.abs(q - fab_forward(c.translated(3.5 - 2j), a, b).samples)
    ) < 1e-12


@pytest.mark.parametrize("alpha", [np.pi / 7, np.pi / 2])
@pytest.mark.parametrize("a,b", AB)
def test_rotation_equivariance(alpha, a, b, rng):
    c = smooth_open_curve(rng)
    # first edge pointing at angle 0 so the rotated seed needs no wrap
    c = c.rotated(-np.angle(c.z[1] - c.z[0]))
    q = fab_forward(c, a, b).samples
    qr = fab_forward(c.rotated(alpha), a, b).samples
    assert np.max(np.abs(qr - np.exp(1j * a / (2 * b) * alpha) * q)) < 1e-12


def test_l2_distance_between_segments():
    for a, b in AB:
        q0 = fab_forward(segment(0.0, 6), a, b)
        q1 = fab_forward(segment(np.pi / 2, 6), a, b)
        expect = np.sqrt(8 * b * b * (1 - np.cos(np.pi * a / (4 * b))))
        assert l2_distance(q0, q1) == pytest.approx(expect, abs=1e-13)
    q0 = fab_forward(segment(0.0, 6), 1, 0.5)
    assert l2_distance(q0, fab_forward(segment(np.pi / 2, 6), 1, 0.5)) == pytest.approx(np.sqrt(2))
    assert l2_distance(q0, q0) == 0.0


def test_l2_distance_resummation(rng):
    c0, c1 = smooth_open_curve(rng), smooth_open_curve(rng)
    q0, q1 = fab_forward(c0, 1.0, 0.8), fab_forward(c1, 1.0, 0.8)
    total = 0.0
    for k in range(q0.n_cells):
        d = q0.samples[k] - q1.samples[k]
        total += q0.cell_widths[k] * (d.real**2 + d.imag**2)
    assert l2_distance(q0, q1) == pytest.approx(np.sqrt(total), abs=1e-14)


def test_l2_distance_is_a_metric(rng):
    for _ in range(10):
        q = [fab_forward(random_polyline(rng, 20), 1.0, 0.7) for _ in range(3)]
        d01, d12, d02 = l2_distance(q[0], q[1]), l2_distance(q[1], q[2]), l2_distance(q[0], q[2])
        assert d01 == pytest.approx(l2_distance(q[1], q[0]), abs=1e-12)
        assert d02 <= d01 + d12 + 1e-12


def test_l2_distance_mismatches():
    q = fab_forward(segment(0.0, 5), 1, 0.5)
    with pytest.raises(ParamMismatch):
        l2_distance(q, fab_forward(segment(0.0, 5), 1, 0.6))
    with pytest.raises(ParamMismatch):
        l2_distance(q, fab_forward(segment(0.0, 6), 1, 0.5))


@pytest.mark.parametrize("a,b", AB)
def test_geodesic_endpoints(a, b, rng):
    c0, c1 = smooth_open_curve(rng), smooth_open_curve(rng)
    g0, g1 = geodesic(c0, c1, a, b, [0.0, 1.0])
    assert np.max(np.abs(g0.vertices - c0.vertices)) < 1e-10
    assert np.max(np.abs(g1.vertices - c1.vertices)) < 1e-10


def test_geodesic_constant_path(rng):
    c = smooth_closed_curve(rng)
    for g in geodesic(c, c, 1.0, 0.5, np.linspace(0, 1, 5)):
        assert np.max(np.abs(g.vertices - c.vertices)) < 1e-10


def test_geodesic_midpoint_of_two_segments():
    c0, c1 = segment(0.0), segment(np.pi / 2)
    (mid,) = geodesic(c0, c1, 1.0, 0.5, [0.5])
    step = mid.z[1] - mid.z[0]
    assert np.angle(step) == pytest.approx(np.pi / 4, abs=1e-14)
    assert abs(step) == pytest.approx(0.5, abs=1e-14)


def test_geodesic_reports_zero_crossing():
    c0, c1 = segment(0.0), segment(np.pi)
    with pytest.raises(ZeroCrossing) as err:
        geodesic(c0, c1, 1.0, 0.5, [0.25, 0.5])
    assert err.value.t == 0.5 and err.value.cell == 0


def test_interpolate_phase_at_ends_and_between():
    phase0 = np.array([0.0, 2.0, 4.0])
    phase1 = np.array([1.0, 3.5, 7.5])
    q0 = FabImage.uniform(np.exp(1j * phase0), 1, 0.2, phase=phase0)
    q1 = FabImage.uniform(2 * np.exp(1j * phase1), 1, 0.2, phase=phase1)
    assert np.allclose(interpolate(q0, q1, 0.0).lifted_phase(), phase0, atol=1e-14)
    assert np.allclose(interpolate(q0, q1, 1.0).lifted_phase(), phase1, atol=1e-14)
    mid = interpolate(q0, q1, 0.5)
    assert np.allclose(np.exp(1j * mid.lifted_phase()), mid.samples / np.abs(mid.samples))
    assert np.all(np.abs(mid.lifted_phase() - 0.5 * (phase0 + phase1)) < np.pi)


@pytest.mark.parametrize("a,b", AB)
def test_isometry_small(a, b, rng):
    c = smooth_open_curve(rng, 40)
    h, k = rng.normal(size=(2, 40, 2))
    eps = 1e-5
    ref = np.angle(c.z[1] - c.z[0])

    def dF(v):
        plus = fab_forward(DiscreteCurve(c.vertices + eps * v), a, b, ref).samples
        minus = fab_forward(DiscreteCurve(c.vertices - eps * v), a, b, ref).samples
        return (plus - minus) / (2 * eps)

    pulled = np.sum(np.real(dF(h) * np.conj(dF(k)))) / 39
    exact = elastic_metric(c, h, k, a, b)
    assert abs(pulled - exact) / max(1.0, abs(exact)) < 1e-3
