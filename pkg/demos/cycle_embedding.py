"""Embedding the cycle into random paths, and a general space into l1.

Cutting one random edge of C_n gives a path. Each edge of the cycle is then
stretched by 2(n-1)/n on average. For an arbitrary graph the sampled trees
are restricted to the original points and stacked into a single linear map
into l1. Its distortion on random measures stays below the edge stretch.
"""

import numpy as np

from transcost import cycle_graph, geodesic_metric, torus_graph
from transcost.calculus import edge_stretch_constant
from transcost.embedding import bijective_embedding, build_l1_map, cycle_path_embedding, measure_distortion
from transcost.transport import random_measure

for n in (3, 4, 8, 16):
    emb = cycle_path_embedding(n)
    print(f"C_{n}: edge stretch {emb.stretch()[0, 1]:.4f}  (2(n-1)/n = {2 * (n - 1) / n:.4f})")

rng = np.random.default_rng(3)
for name, g in [("C_8", cycle_graph(8)), ("torus 4", torus_graph(4))]:
    M = geodesic_metric(g)
    emb = bijective_embedding(M, 200, seed=3)
    phi = build_l1_map(emb)
    report, _ = measure_distortion(phi, [random_measure(M, rng) for _ in range(100)])
    print(
        f"{name}: {phi.matrix.shape[0]} coordinates, ratio l1/tc in "
        f"[{report['min']:.3f}, {report['max']:.3f}], edge stretch {edge_stretch_constant(emb, g):.3f}"
    )
