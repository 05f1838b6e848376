"""Random hierarchical partitions turn any metric into a distribution over trees.

Every sampled tree dominates the original distances. On average pairs are
stretched by only a logarithmic factor. The table shows this for cycles and
tori of growing size.
"""

import math

from transcost import cycle_graph, geodesic_metric, torus_graph
from transcost.frt import estimate_expected_stretch

print(f"{'space':>10} {'points':>6} {'max mean':>9} {'avg mean':>9} {'worst sample':>13}")
for name, g in [("C_8", cycle_graph(8)), ("C_32", cycle_graph(32)), ("torus 4", torus_graph(4)), ("torus 8", torus_graph(8))]:
    M = geodesic_metric(g)
    est = estimate_expected_stretch(M, 200, seed=1, threads=4)
    n = M.n
    avg = est["mean"].sum() / (n * (n - 1))
    print(f"{name:>10} {n:>6} {est['max_mean']:>9.2f} {avg:>9.2f} {est['max_sample']:>13.1f}   (log n = {math.log(n):.2f})")
