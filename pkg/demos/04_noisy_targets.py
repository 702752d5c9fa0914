"""
Noisy targets
=============

Vertex noise adds many small wiggles. The exact distance has to pay for all
of them; the relaxed distance with the current kernel largely ignores them,
because back-and-forth wiggles cancel in the oriented varifold.
"""
from fabmatch import ExactMatchConfig, RelaxedConfig, exact_distance, relaxed_match
from fabmatch.shapes import circle, ellipse, noisy

source, clean = circle(100), ellipse(100)
exact_cfg = ExactMatchConfig(a=1.0, b=0.5, seam_search=True)
relaxed_cfg = RelaxedConfig(a=1.0, b=0.5, lam=40.0)

reference = exact_distance(source, clean, exact_cfg).elastic_distance
print(f"exact distance to the clean target {reference:.4f}")
for seed in range(5):
    target = noisy(clean, 0.05, seed)
    exact = exact_distance(source, target, exact_cfg).elastic_distance
    relaxed = relaxed_match(source, target, relaxed_cfg).elastic_distance
    print(f"seed {seed}: exact {exact:.4f}, relaxed {relaxed:.4f}")
