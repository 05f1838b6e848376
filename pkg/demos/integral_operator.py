"""Integrating vector fields on a graph.

A gradient field integrates back to its potential. A field with circulation
has no potential. Averaging path integrals over random spanning trees still
produces a function, and its Lipschitz constant is controlled by the edge
stretch of the tree distribution.
"""

import numpy as np

from transcost import cycle_graph, geodesic_metric
from transcost.calculus import (
    VectorField,
    edge_stretch_constant,
    extend_integral_operator,
    gradient,
    integral_operator,
    is_conservative,
    vertex_lip,
)
from transcost.embedding import bijective_embedding

g = cycle_graph(8)
M = geodesic_metric(g)
rng = np.random.default_rng(7)

F = rng.normal(size=8)
F -= F[0]
f = gradient(F, g, M)
print("gradient field conservative:", is_conservative(f))
print("potential recovered:", np.allclose(integral_operator(f), F))

swirl = VectorField(g, M, np.ones(8))
print("constant circulation conservative:", is_conservative(swirl))

emb = bijective_embedding(M, 200, seed=7)
D = edge_stretch_constant(emb, g)
ext = extend_integral_operator(swirl, emb)
print("extension:", np.round(ext, 3).tolist())
print(f"Lip = {vertex_lip(ext, g, M):.3f} <= D * |f| = {D * swirl.sup_norm():.3f}")
print("agrees with the potential on the gradient field:", np.allclose(extend_integral_operator(f, emb), F))
