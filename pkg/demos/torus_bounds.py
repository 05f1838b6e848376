"""Isoperimetry, Sobolev inequalities and the Fourier profile of the torus.

The isoperimetric constant is found by checking every vertex subset. It then
bounds a Sobolev inequality. The characters of (Z/n)^2 form an orthogonal
family whose Lipschitz constants grow like the frequency, and the count of
low-frequency members drives a distortion lower bound.
"""

import math

import numpy as np

from transcost import cycle_graph, geodesic_metric, torus_graph
from transcost.spectral import (
    EdgeMeasure,
    isoperimetric_constant,
    lower_bound_estimate,
    sobolev_check,
    torus_spectral_profile,
)

for name, g in [("C_6", cycle_graph(6)), ("torus 4", torus_graph(4))]:
    for delta in (1.0, 2.0):
        print(f"{name} delta={delta:g}: C = {isoperimetric_constant(g, delta=delta):.4f}")

g = torus_graph(4)
M = geodesic_metric(g)
nu = EdgeMeasure.uniform(g)
C = isoperimetric_constant(g, nu, M, 2.0)
rng = np.random.default_rng(0)
worst = max(lhs / rhs for lhs, rhs, _ in (sobolev_check(rng.normal(size=16), nu, M, 2.0, C) for _ in range(500)))
print(f"Sobolev on torus 4: worst lhs/rhs over 500 functions {worst:.3f}")

prof = torus_spectral_profile(8)
print(f"\ntorus 8 profile: {len(prof.functions)} characters, beta = {prof.beta:.3f}, C = {prof.C:.3f}")
for s in (1.0, 1.5, 2.0, prof.beta):
    print(f"  #{{Lip <= {s:.2f}}} = {prof.count(s):2d} >= s^2 / C = {s**2 / prof.C:.2f}")
print("estimate(2, 2, e^4, 1) =", lower_bound_estimate(2, 2, math.e**4, 1))
