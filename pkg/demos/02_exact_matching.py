"""
Exact matching by dynamic programming
=====================================

The quotient distance minimizes the L2 distance over reparametrizations of
the second curve. The solver searches monotone lattice paths; with rotation
search and seam search it also removes rotations and the choice of starting
point on closed curves.
"""
import numpy as np

from fabmatch import DiscreteCurve, ExactMatchConfig, dp_match, exact_distance, l2_distance
from fabmatch.curves import resample_uniform
from fabmatch.shapes import circle, ellipse, star
from fabmatch.transform import fab_pair

# %% a reparametrized copy is recognized as the same curve
# the same star, sampled densely and read off at warped parameter values
c = resample_uniform(star(400, amp=0.2).opened(), 80)
dense = star(400, amp=0.2).opened()
s = np.linspace(0, 1, dense.n_vertices)
t = np.linspace(0, 1, 80) ** 1.5
warped = DiscreteCurve.from_complex(np.interp(t, s, dense.z.real) + 1j * np.interp(t, s, dense.z.imag))
cfg = ExactMatchConfig(a=1.0, b=0.5)
phi, d = dp_match(c, warped, cfg)
# not zero: the lattice only has slopes dj/di with di, dj <= 4, and the two
# polylines cut the star at different points
print(f"unaligned {l2_distance(*fab_pair(c, warped, 1.0, 0.5)):.4f}, after DP {d:.4f}")

# %% rotations and seams
c0 = circle(100)
c1 = ellipse(100).rotated(1.0)
c1 = DiscreteCurve(np.roll(c1.vertices, 17, axis=0), True)
plain = exact_distance(c0, c1, ExactMatchConfig())
full = exact_distance(c0, c1, ExactMatchConfig(rotation_search=True, rotation_grid=32, seam_search=True))
print(f"no quotient {plain.elastic_distance:.4f}")
print(f"rotation + seam search {full.elastic_distance:.4f} at rotation {full.rotation:.3f}, seam {full.seam_shift}")
