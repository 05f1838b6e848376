"""Independent reference computations used only by the tests.

None of these reuse the package's solvers: they are brute force or go
through a generic LP solver, so agreement is real evidence.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog


def random_points_metric(rng, n, dim=3, kind="l1"):
    """Distance matrix of random points (l1 or l2), always a metric."""
    P = rng.normal(size=(n, dim))
    diff = P[:, None, :] - P[None, :, :]
    if kind == "l2":
        return np.sqrt((diff**2).sum(-1))
    return np.abs(diff).sum(-1)


def floyd_warshall(n, edges):
    """All-pairs shortest paths by the textbook triple loop."""
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    for u, v, w in edges:
        D[u, v] = min(D[u, v], w)
        D[v, u] = min(D[v, u], w)
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return D


def lp_transport(D, mu):
    """Primal optimum over all couplings on M x M with marginals mu+ and mu-."""
    n = len(mu)
    pos = np.clip(mu, 0, None)
    neg = np.clip(-mu, 0, None)
    A = np.vstack([np.kron(np.eye(n), np.ones(n)), np.kron(np.ones(n), np.eye(n))])
    res = linprog(D.ravel(), A_eq=A, b_eq=np.r_[pos, neg], bounds=(0, None), method="highs")
    assert res.status == 0
    return float(res.fun)


def lp_dual(D, mu, base=0):
    """max <f, mu> over f with f(x) - f(y) <= d(x, y) and f(base) = 0."""
    n = len(mu)
    rows = []
    rhs = []
    for x in range(n):
        for y in range(n):
            if x != y:
                r = np.zeros(n)
                r[x], r[y] = 1.0, -1.0
                rows.append(r)
                rhs.append(D[x, y])
    bounds = [(None, None)] * n
    bounds[base] = (0, 0)
    res = linprog(-np.asarray(mu), A_ub=np.array(rows), b_ub=rhs, bounds=bounds, method="highs")
    assert res.status == 0
    return float(-res.fun)


def brute_force_assignment(C):
    n = C.shape[0]
    return min(sum(C[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def brute_force_extreme_pairs(D, tol=1e-9):
    n = len(D)
    out = []
    for x in range(n):
        for y in range(x + 1, n):
            if not any(abs(D[x, z] + D[z, y] - D[x, y]) <= tol * D[x, y] for z in range(n) if z not in (x, y)):
                out.append((x, y))
    return out


def subtree_sets(parent, root):
    """For every non-root vertex c, the set of vertices whose root path passes c."""
    n = len(parent)
    out = {}
    for c in range(n):
        if c == root:
            continue
        members = set()
        for v in range(n):
            u = v
            while u != -1:
                if u == c:
                    members.add(v)
                    break
                u = parent[u]
        out[c] = members
    return out


def brute_force_isoperimetric(n, edges, nu, delta):
    """max over proper subsets of min(mu(A), mu(A^c))^((delta-1)/delta) / Per(A)."""
    mu = np.zeros(n)
    for (u, v, _), m in zip(edges, nu):
        mu[u] += m / 2
        mu[v] += m / 2
    D = floyd_warshall(n, edges)
    best = 0.0
    for r in range(1, n):
        for A in itertools.combinations(range(n), r):
            A = set(A)
            mA = sum(mu[a] for a in A)
            per = sum(m / D[u, v] for (u, v, _), m in zip(edges, nu) if (u in A) != (v in A))
            lhs = 1.0 if delta == 1 else min(mA, 1 - mA) ** ((delta - 1) / delta)
            best = max(best, lhs / per)
    return best


def all_simple_paths(adj, x, y):
    """Every simple path from x to y (small graphs only)."""
    out = []
    stack = [(x, [x])]
    while stack:
        u, path = stack.pop()
        if u == y:
            out.append(path)
            continue
        for v in adj[u]:
            if v not in path:
                stack.append((v, path + [v]))
    return out
