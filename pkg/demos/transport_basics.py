"""Optimal transport of a signed measure on a small graph.

Builds the 4-cycle, puts +1 on opposite corners and -1 on the other two,
solves for the cheapest plan and prints a 1-Lipschitz potential that proves
the plan cannot be improved.
"""

from transcost import ZeroSumMeasure, dual_potential, geodesic_metric, cycle_graph, tc_norm
from transcost.transport import make_disjoint, transport_cost, verify_optimality, MolecularRepresentation

M = geodesic_metric(cycle_graph(4))
mu = ZeroSumMeasure(M, {0: 1, 2: 1, 1: -1, 3: -1})

value, plan = tc_norm(mu)
print(f"norm = {value}")
for x, y, m in plan.entries():
    print(f"  move {m:g} from {x} to {y} (distance {M.d(x, y):g})")

f = dual_potential(mu)
print("potential:", f.values.tolist(), "Lip =", f.lip_norm())
print("pairing <f, mu> =", f.pair(mu))
print("plan certified:", verify_optimality(plan.as_representation(M), f))

# a wasteful representation that routes mass through vertex 1 and back out
detour = MolecularRepresentation(M, ((1, 0, 1), (1, 1, 2), (1, 2, 3), (1, 2, 1)))
print("\ndetour cost", transport_cost(detour), "represents", detour.reconstruct().coeffs)
tidy = make_disjoint(detour)
print("after rerouting:", tidy.terms, "cost", transport_cost(tidy))
