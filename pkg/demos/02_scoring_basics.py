"""
How the outlier score reads a window
====================================

The detector scores every point in a window by comparing its local density
to its neighbors' densities.  A score near 1 means "as dense as the
neighborhood", noticeably above 1 means "isolated".  This walks the small
set {0, 1, 2, 10} where the arithmetic is easy to follow by hand.
"""

from hpcwatch.lof import k_nearest, lof, lof_all, lrd, top_n_outliers

POINTS = [0.0, 1.0, 2.0, 10.0]
K = 2

# Neighborhoods first.  Point 10 is far from the cluster, so its 2-nearest
# neighbors are the cluster's edge.
for i, p in enumerate(POINTS):
    hood = k_nearest(POINTS, i, K)
    members = sorted(POINTS[j] for j in hood.members)
    print(f"point {p:4}: k-distance {hood.k_distance:4}, neighbors {members}")

# Densities: the cluster points reach each other over short distances, the
# stray point only over long ones.
print()
for i, p in enumerate(POINTS):
    print(f"lrd({p:4}) = {lrd(POINTS, i, K):.6f}")

# Scores.  The cluster scores near 1, the stray point near 5: its neighbors
# are several times denser than it is.
print()
for i, p in enumerate(POINTS):
    print(f"lof({p:4}) = {lof(POINTS, i, K):.6f}")

assert abs(lof(POINTS, 3, K) - 4.958333) < 1e-5
assert abs(lof(POINTS, 1, K) - 1.333333) < 1e-5

# Duplicates are the degenerate extreme: a window of identical values has
# no structure to be an outlier against, and everything scores exactly 1.
flat = [7.0] * 8
assert all(r.lof == 1.0 for r in lof_all(flat, K))
print("\nconstant window: every score is exactly 1.0")

# Ranking a noisy window surfaces the two planted spikes first.
window = [50.0, 51.0, 49.0, 52.0, 50.0, 400.0, 51.0, 48.0, 390.0, 50.0]
results = lof_all(window, 3)
top = top_n_outliers(results, 2)
print(f"top outliers at indices {top}: values {[window[i] for i in top]}")
