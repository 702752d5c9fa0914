import numpy as np
import pytest

from fabmatch.curves import DiscreteCurve


def smooth_open_curve(rng, n=100, wiggle=0.2):
    """Random smooth open curve: a tilted unit segment plus a few sine modes."""
    t = np.linspace(0.0, 1.0, n)
    z = t * np.exp(1j * rng.uniform(-np.pi, np.pi))
    for k in range(1, 4):
        coef = complex(*rng.normal(size=2)) * wiggle / k**2
        z = z + coef * np.sin(k * np.pi * t)
    return DiscreteCurve.from_complex(z + complex(*rng.normal(size=2)), closed=False)


def smooth_closed_curve(rng, n=100, wiggle=0.15):
    """Random star-shaped closed curve with a smooth radius."""
    s = 2 * np.pi * np.arange(n) / n
    r = 1.0 + sum(wiggle / k * np.cos(k * s + rng.uniform(0, 2 * np.pi)) for k in range(2, 5))
    return DiscreteCurve.from_complex(r * np.exp(1j * s), closed=True)


def random_polyline(rng, n, closed=False):
    return DiscreteCurve(rng.normal(size=(n, 2)), closed=closed)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
