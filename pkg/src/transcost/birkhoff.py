"""Decomposition of doubly stochastic matrices into permutation matrices."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NotDoublyStochastic

__all__ = ["birkhoff_decompose", "is_doubly_stochastic", "random_doubly_stochastic", "reconstruct"]


def is_doubly_stochastic(A, tol: float = 1e-9) -> bool:
    A = np.asarray(A, dtype=float)
    return (
        A.ndim == 2
        and A.shape[0] == A.shape[1]
        and A.size > 0
        and bool(np.all(A >= -tol) and np.all(A <= 1 + tol))
        and np.allclose(A.sum(0), 1, atol=tol, rtol=0)
        and np.allclose(A.sum(1), 1, atol=tol, rtol=0)
    )


def random_doubly_stochastic(n: int, rng, terms: int | None = None) -> np.ndarray:
    """Random convex combination of ``terms`` permutation matrices."""
    k = terms if terms is not None else int(rng.integers(1, 2 * n + 1))
    w = rng.dirichlet(np.ones(k))
    A = np.zeros((n, n))
    for wk in w:
        A[np.arange(n), rng.permutation(n)] += wk
    return A


def reconstruct(terms, n: int) -> np.ndarray:
    A = np.zeros((n, n))
    for w, perm in terms:
        A[np.arange(n), perm] += w
    return A


def _caratheodory(terms, n):
    # drop terms along null-space directions of [vec(P); 1] until the
    # permutation matrices are affinely independent
    weights = np.array([w for w, _ in terms])
    perms = [p for _, p in terms]
    while len(perms) > (n - 1) ** 2 + 1:
        V = np.zeros((n * n + 1, len(perms)))
        for k, p in enumerate(perms):
            V[np.arange(n) * n + p, k] = 1.0
        V[-1] = 1.0
        z = np.linalg.svd(V)[2][-1]
        if not np.any(z > 1e-12):
            z = -z
        pos = z > 1e-12
        ratio = np.where(pos, weights / np.where(pos, z, 1.0), np.inf)
        drop = int(np.argmin(ratio))
        weights = weights - ratio[drop] * z
        weights[drop] = 0.0
        keep = weights > 1e-15
        perms = [p for p, k in zip(perms, keep) if k]
        weights = weights[keep]
    return [(float(w), p) for w, p in zip(weights, perms)]


def birkhoff_decompose(A, tol: float = 1e-9) -> list[tuple[float, np.ndarray]]:
    """Write ``A`` as a convex combination of permutation matrices.

    Each round finds a permutation inside the current support, removes it
    with the largest feasible weight and so zeroes at least one entry.

    Returns
    -------
    list of (weight, perm)
        ``perm[i]`` is the column hit by row ``i``. Weights are positive and
        sum to 1; there are at most ``(n - 1)**2 + 1`` terms.

    Raises
    ------
    NotDoublyStochastic
        Rows or columns fail to sum to 1 within ``tol``, or an entry leaves
        ``[0, 1]``.

    Examples
    --------
    >>> [(w, p.tolist()) for w, p in birkhoff_decompose([[0.5, 0.5], [0.5, 0.5]])]
    [(0.5, [0, 1]), (0.5, [1, 0])]
    """
    A = np.array(A, dtype=float)
    if not is_doubly_stochastic(A, tol):
        raise NotDoublyStochastic("input must be square with entries in [0, 1] and unit row/column sums")
    n = A.shape[0]
    R = np.clip(A, 0.0, None)
    remaining = 1.0
    found: dict[tuple, float] = {}
    zero = 1e-12
    while remaining > zero:
        support = R > zero * max(remaining, 1e-300) + 1e-15
        r, c = linear_sum_assignment(np.where(support, 0.0, 1.0))
        if np.any(~support[r, c]):
            # rounding left no perfect matching; take the heaviest permutation
            r, c = linear_sum_assignment(-R)
        lam = float(min(R[r, c].min(), remaining))
        if lam <= 0:
            break
        key = tuple(int(x) for x in c)
        found[key] = found.get(key, 0.0) + lam
        R[r, c] -= lam
        R[R < 0] = 0.0
        remaining -= lam
    total = sum(found.values())
    terms = [(w / total, np.array(k)) for k, w in found.items()]
    if len(terms) > (n - 1) ** 2 + 1:
        terms = _caratheodory(terms, n)
    terms.sort(key=lambda t: (-t[0], tuple(t[1])))
    return terms
