"""On a tree the transport norm needs no optimisation.

Each edge contributes its weight times the absolute net mass hanging below
it. This script compares that sum with the flow solver on random trees and
times both.
"""

import time

import numpy as np

from transcost import RootedWeightedTree, geodesic_metric, random_tree, tc_norm, tree_tc_norm
from transcost.transport import random_measure

rng = np.random.default_rng(0)
worst = 0.0
t_closed = t_flow = 0.0
for s in range(100):
    g = random_tree(40, seed=s)
    tree = RootedWeightedTree.from_graph(g)
    mu = random_measure(geodesic_metric(g), rng, support=40)
    t0 = time.perf_counter()
    a = tree_tc_norm(tree, mu)
    t1 = time.perf_counter()
    b = tc_norm(mu)[0]
    t2 = time.perf_counter()
    t_closed += t1 - t0
    t_flow += t2 - t1
    worst = max(worst, abs(a - b) / b)

print(f"100 trees on 40 vertices: worst relative gap {worst:.1e}")
print(f"closed form {1e3 * t_closed:.1f} ms, flow solver {1e3 * t_flow:.1f} ms")
