"""Doubly stochastic matrices and optimal matchings.

A doubly stochastic matrix splits into few permutations. Transport between
two uniform distributions on equal-size point sets is therefore attained by
a perfect matching.
"""

import numpy as np

from transcost.birkhoff import birkhoff_decompose, random_doubly_stochastic, reconstruct
from transcost.metric import validate_metric
from transcost.transport import optimal_bijection, wasserstein

rng = np.random.default_rng(1)
A = random_doubly_stochastic(5, rng, terms=30)
terms = birkhoff_decompose(A)
print(f"5x5 matrix from 30 permutations rewritten with {len(terms)} (limit {(5 - 1) ** 2 + 1})")
for w, p in terms[:4]:
    print(f"  {w:.4f} x {p.tolist()}")
print("reconstruction error", np.abs(reconstruct(terms, 5) - A).max())

P = rng.normal(size=(12, 2))
M = validate_metric(np.abs(P[:, None] - P[None]).sum(-1))
red, blue = [0, 1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11]
mapping, cost = optimal_bijection(M, red, blue)
sigma = np.zeros(12)
tau = np.zeros(12)
sigma[red] = tau[blue] = 1 / 6
print("\nmatching", mapping)
print(f"cost / 6 = {cost / 6:.6f}, Wasserstein = {wasserstein(M, sigma, tau):.6f}")
