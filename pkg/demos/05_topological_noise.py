"""
Topological noise
=================

A thin spike that doubles back on itself changes the curve very little as a
set, but the exact distance has to grow the spike. With the orientation-free
binet kernel, the two sides of the spike look like a short doubled segment
that the relaxed matching can leave out.
"""
from fabmatch import ExactMatchConfig, RelaxedConfig, VarifoldKernel, exact_distance, relaxed_match
from fabmatch.shapes import appendage, circle

c0 = circle(100)
target = appendage(circle(98), eps=0.05)
exact = exact_distance(c0, target, ExactMatchConfig(seam_search=True)).elastic_distance
print(f"exact {exact:.4f}")
for lam in (1.0, 5.0, 10.0, 40.0):
    res = relaxed_match(c0, target, RelaxedConfig(lam=lam, kernel=VarifoldKernel(direction="binet")))
    print(f"lambda {lam:5.1f}: relaxed {res.elastic_distance:.4f} ({res.elastic_distance / exact:.2f} of exact)")
